#include "haarblocks/special.hpp"

#include "haarblocks/core.hpp"

#include <cmath>

namespace haarblocks {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

namespace detail {

// Five Bernoulli terms; for y >= 16 the truncation error is below 1e-17.
double lgamma_stirling_tail(double y) {
  const double r = 1.0 / y;
  const double r2 = r * r;
  return r * (1.0 / 12.0 +
              r2 * (-1.0 / 360.0 +
                    r2 * (1.0 / 1260.0 + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0)))));
}

}  // namespace detail

namespace {

using detail::lgamma_stirling_tail;

constexpr double kStirlingCutoff = 16.0;

}  // namespace

double lgamma_diff(double x, double h) {
  if (!(x > 0.0) || !(x + h > 0.0))
    throw DomainError("lgamma_diff: arguments must stay right of the pole");
  if (h == 0.0) return 0.0;
  if (h < 0.0) return -lgamma_diff(x + h, -h);

  if (x < kStirlingCutoff) {
    // log Gamma(x) is of moderate size here, so direct subtraction is safe as
    // long as the larger argument is also moderate; otherwise walk x up with
    // the recurrence lgamma(x+1) = lgamma(x) + log x until Stirling applies.
    if (x + h < 2.0 * kStirlingCutoff) return log_gamma(x + h) - log_gamma(x);
    double shift = 0.0;
    double xx = x;
    while (xx < kStirlingCutoff) {
      shift += std::log(xx);
      xx += 1.0;
    }
    return shift + lgamma_diff(xx, x + h - xx);
  }

  // Both arguments >= 16: Stirling difference. The leading part
  //   (x+h-1/2) log(x+h) - (x-1/2) log x - h
  // is regrouped through log1p so no two large terms are subtracted.
  const double lead = (x - 0.5) * std::log1p(h / x) + h * std::log(x + h) - h;
  return lead + lgamma_stirling_tail(x + h) - lgamma_stirling_tail(x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  // Bisection bracket, then Newton polish against the CDF.
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf < 1e-300) break;
    x -= (normal_cdf(x) - p) / pdf;
  }
  return x;
}

}  // namespace haarblocks
