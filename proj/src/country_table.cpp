#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "mnlcs/model.hpp"

namespace mnlcs {

namespace {

// Affiliation-country spellings seen in bibliographic exports, lower case.
// Sorted by name for binary search.
constexpr std::array<std::pair<std::string_view, std::string_view>, 95> kCountryNames{{
    {"algeria", "DZ"},
    {"argentina", "AR"},
    {"australia", "AU"},
    {"austria", "AT"},
    {"bangladesh", "BD"},
    {"belarus", "BY"},
    {"belgium", "BE"},
    {"brazil", "BR"},
    {"bulgaria", "BG"},
    {"canada", "CA"},
    {"chile", "CL"},
    {"china", "CN"},
    {"colombia", "CO"},
    {"croatia", "HR"},
    {"cuba", "CU"},
    {"cyprus", "CY"},
    {"czech republic", "CZ"},
    {"czechia", "CZ"},
    {"denmark", "DK"},
    {"egypt", "EG"},
    {"england", "GB"},
    {"estonia", "EE"},
    {"ethiopia", "ET"},
    {"finland", "FI"},
    {"france", "FR"},
    {"germany", "DE"},
    {"greece", "GR"},
    {"hong kong", "HK"},
    {"hungary", "HU"},
    {"iceland", "IS"},
    {"india", "IN"},
    {"indonesia", "ID"},
    {"iran", "IR"},
    {"iraq", "IQ"},
    {"ireland", "IE"},
    {"israel", "IL"},
    {"italy", "IT"},
    {"japan", "JP"},
    {"jordan", "JO"},
    {"kazakhstan", "KZ"},
    {"kenya", "KE"},
    {"korea", "KR"},
    {"kuwait", "KW"},
    {"latvia", "LV"},
    {"lebanon", "LB"},
    {"lithuania", "LT"},
    {"luxembourg", "LU"},
    {"malaysia", "MY"},
    {"mexico", "MX"},
    {"morocco", "MA"},
    {"nepal", "NP"},
    {"netherlands", "NL"},
    {"new zealand", "NZ"},
    {"nigeria", "NG"},
    {"northern ireland", "GB"},
    {"norway", "NO"},
    {"oman", "OM"},
    {"pakistan", "PK"},
    {"peru", "PE"},
    {"philippines", "PH"},
    {"poland", "PL"},
    {"portugal", "PT"},
    {"qatar", "QA"},
    {"republic of korea", "KR"},
    {"romania", "RO"},
    {"russia", "RU"},
    {"russian federation", "RU"},
    {"saudi arabia", "SA"},
    {"scotland", "GB"},
    {"serbia", "RS"},
    {"singapore", "SG"},
    {"slovakia", "SK"},
    {"slovenia", "SI"},
    {"south africa", "ZA"},
    {"south korea", "KR"},
    {"spain", "ES"},
    {"sri lanka", "LK"},
    {"sweden", "SE"},
    {"switzerland", "CH"},
    {"taiwan", "TW"},
    {"tanzania", "TZ"},
    {"thailand", "TH"},
    {"the netherlands", "NL"},
    {"tunisia", "TN"},
    {"turkey", "TR"},
    {"ukraine", "UA"},
    {"united arab emirates", "AE"},
    {"united kingdom", "GB"},
    {"united states", "US"},
    {"united states of america", "US"},
    {"uruguay", "UY"},
    {"usa", "US"},
    {"venezuela", "VE"},
    {"viet nam", "VN"},
    {"wales", "GB"},
}};

}  // namespace

std::optional<std::string> lookup_country_code(std::string_view name) {
  std::string key;
  key.reserve(name.size());
  for (char ch : name) key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  auto it = std::lower_bound(kCountryNames.begin(), kCountryNames.end(), key,
                             [](const auto& entry, const std::string& k) { return entry.first < k; });
  if (it != kCountryNames.end() && it->first == key) return std::string(it->second);
  return std::nullopt;
}

}  // namespace mnlcs
