#pragma once

#include <functional>
#include <span>

// Kolmogorov-Smirnov helpers shared by the verification experiments and the
// acceptance suite.

namespace haarblocks {

/// sup_x |F_n(x) - F(x)| for a sorted sample against a reference CDF.
double ks_statistic(std::span<const double> sorted_values,
                    const std::function<double(double)>& cdf);

/// Two-sample KS statistic for two sorted samples.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

/// Asymptotic p-value of a one-sample statistic at sample size n.
double ks_pvalue(double statistic, std::size_t n);

/// Asymptotic p-value of a two-sample statistic at sizes n and m.
double ks_pvalue_two_sample(double statistic, std::size_t n, std::size_t m);

}  // namespace haarblocks
