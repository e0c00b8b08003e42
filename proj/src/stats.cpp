#include "haarblocks/stats.hpp"

#include "haarblocks/core.hpp"

#include <algorithm>
#include <cmath>

namespace haarblocks {

double ks_statistic(std::span<const double> sorted_values,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw DomainError("ks_statistic: empty sample");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = cdf(sorted_values[i]);
    worst = std::max(worst, std::abs(F - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return worst;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic_two_sample: empty sample");
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() -
                                     static_cast<double>(j) / b.size()));
  }
  return worst;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double statistic, std::size_t n) {
  return kolmogorov_tail(statistic * std::sqrt(static_cast<double>(n)));
}

double ks_pvalue_two_sample(double statistic, std::size_t n, std::size_t m) {
  const double eff = static_cast<double>(n) * m / static_cast<double>(n + m);
  return kolmogorov_tail(statistic * std::sqrt(eff));
}

}  // namespace haarblocks
