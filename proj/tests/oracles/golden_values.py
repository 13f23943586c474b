"""Straight-line reference computations for the golden values frozen in the C++ tests.

Run with: python3 tests/oracles/golden_values.py
Uses mpmath at 50 digits; independent of the C++ code paths.
"""
import mpmath as mp

mp.mp.dps = 50


def t_upper(df, alpha):
    df = mp.mpf(df)
    # P(T > t) = alpha  <=>  regularized incomplete beta relation
    f = lambda t: mp.mpf(1) / 2 * mp.betainc(df / 2, mp.mpf(1) / 2, 0, df / (df + t * t), regularized=True) - alpha
    return mp.findroot(f, 2.0)


def log_stats(counts):
    xs = [mp.log(1 + c) for c in counts]
    n = len(xs)
    mean = mp.fsum(xs) / n
    if n < 2:
        return n, mean, None
    var = mp.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return n, mean, mp.sqrt(var) / mp.sqrt(n)


def fieller(group, field, alpha=mp.mpf("0.025")):
    ng, ms, ses = log_stats(group)
    nf, mj, sej = log_stats(field)
    t = t_upper(ng + nf - 2, alpha)
    value = ms / mj
    h = t * t * (sej / mj) ** 2
    se = value / (1 - h) * mp.sqrt((1 - h) * ses ** 2 / ms ** 2 + sej ** 2 / mj ** 2)
    center = value / (1 - h)
    return dict(t=t, value=value, h=h, se=se, low=center - t * se, high=center + t * se)


def discretised_log_mean(mu, sigma):
    # E[ln(1 + c)] for c = max(0, round(e^y) - 1), y ~ N(mu, sigma^2):
    # ln(1 + c) = ln k on the event round(e^y) = k >= 2, else 0.
    mu, sigma = mp.mpf(mu), mp.mpf(sigma)
    cdf = lambda x: mp.ncdf((x - mu) / sigma)
    total = mp.mpf(0)
    cutoff = 5000
    for k in range(2, cutoff + 1):
        p = cdf(mp.log(k + mp.mpf(1) / 2)) - cdf(mp.log(k - mp.mpf(1) / 2))
        total += p * mp.log(k)
    # Past the cutoff ln(round(e^y)) = y + O(e^-2y) on average; integrate y.
    a = (mp.log(cutoff + mp.mpf(1) / 2) - mu) / sigma
    total += mu * (1 - mp.ncdf(a)) + sigma * mp.npdf(a)
    return total


if __name__ == "__main__":
    print("t(df=1, 0.025)    =", mp.nstr(t_upper(1, mp.mpf("0.025")), 20))
    print("t(df=8, 0.025)    =", mp.nstr(t_upper(8, mp.mpf("0.025")), 20))
    print("t(df=30, 0.05)    =", mp.nstr(t_upper(30, mp.mpf("0.05")), 20))
    print("t(df=1e6, 0.025)  =", mp.nstr(t_upper(10**6, mp.mpf("0.025")), 20))
    print("t(df=2.5, 0.01)   =", mp.nstr(t_upper(mp.mpf("2.5"), mp.mpf("0.01")), 20))
    print("log_stats([1,7])  =", [mp.nstr(v, 20) for v in log_stats([1, 7])])
    print("mnlcs 4/3 check   =", mp.nstr(log_stats([1, 7])[1] / log_stats([0, 1, 3, 7])[1], 20))
    g = fieller([1, 7], [0, 1, 3, 7, 2, 2, 5, 1])
    for k, v in g.items():
        print("golden", k, "=", mp.nstr(v, 20))
    # probability that round(exp(y)) <= 1 for y ~ N(-5, 1)
    print("P(zero | mu=-5)   =", mp.nstr(mp.ncdf((mp.log(mp.mpf("1.5")) + 5)), 20))
    for mu, sigma in [(1, 1), (0.5, "0.3"), ("1.5", "0.8"), (2, 1), (3, "1.3")]:
        print("E ln(1+c) mu=%s sigma=%s =" % (mu, sigma), mp.nstr(discretised_log_mean(mu, sigma), 20))
