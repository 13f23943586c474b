#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mnlcs {

enum class ErrorCode {
  NegativeCitations,
  UnparseableYear,
  UnparseableCitations,
  MalformedCountry,
  YearOutOfRange,
  InconsistentCohort,
  InsufficientData,
  DegenerateField,
  DomainError,
  NoValidReplicates,
  MissingColumns,
  MalformedRows,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library. `context` carries coordinates such as
// a file line or a (journal, year, country) cell so callers can report where a
// failure happened without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

  Error with_context(const std::string& ctx) const {
    return Error(code_, what(), context_.empty() ? ctx : ctx + "; " + context_);
  }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace mnlcs
