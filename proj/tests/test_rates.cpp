#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "haarblocks/rates.hpp"
#include "haarblocks/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace haarblocks;

namespace {

Histogram gaussian_exact_histogram(const std::vector<double>& edges) {
  Histogram h;
  h.edges = edges;
  h.masses.resize(edges.size() + 1);
  h.masses.front() = normal_cdf(edges.front());
  for (std::size_t i = 1; i < edges.size(); ++i)
    h.masses[i] = normal_cdf(edges[i]) - normal_cdf(edges[i - 1]);
  h.masses.back() = normal_sf(edges.back());
  return h;
}

EmpiricalSample sample_of(std::vector<double> values) {
  EmpiricalSample s;
  std::sort(values.begin(), values.end());
  s.values = std::move(values);
  s.m = 1;
  s.k = static_cast<int>(s.values.size());
  return s;
}

}  // namespace

TEST_CASE("kl_histogram anchors") {
  // exact Gaussian bin masses -> KL 0
  const Histogram exact = gaussian_exact_histogram({-3, -1, 0, 1, 3});
  CHECK(kl_histogram(exact) == doctest::Approx(0.0).epsilon(1e-12));

  // two bins split at 0, all mass left: 1 * log(1/0.5) = log 2
  Histogram point;
  point.edges = {0.0};
  point.masses = {1.0, 0.0};
  CHECK(kl_histogram(point) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // malformed histograms are rejected
  Histogram bad = point;
  bad.masses = {0.6, 0.6};
  CHECK_THROWS_AS(kl_histogram(bad), DomainError);
  bad.masses = {1.0};
  CHECK_THROWS_AS(kl_histogram(bad), DomainError);
  bad = point;
  bad.edges = {1.0, 1.0};
  bad.masses = {0.5, 0.2, 0.3};
  CHECK_THROWS_AS(kl_histogram(bad), DomainError);
}

TEST_CASE("kl_histogram refinement never decreases the value") {
  std::mt19937_64 engine(5);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> bin_count(2, 8);
  for (int trial = 0; trial < 200; ++trial) {
    // random sample and coarse histogram
    std::vector<double> xs(200);
    for (double& v : xs) v = normal(engine) * 1.3 + 0.2;
    const EmpiricalSample sample = sample_of(xs);
    const int bins = bin_count(engine);
    const Histogram coarse = build_histogram(sample, 3.0, bins);

    // refine by splitting every interior bin in two
    const Histogram fine = build_histogram(sample, 3.0, 2 * bins);
    CHECK(kl_histogram(fine) >= kl_histogram(coarse) - 1e-12);
  }
}

TEST_CASE("kl_gaussian closed forms") {
  GaussianSpec std1{{0.0}, {1.0}};
  CHECK(kl_gaussian(std1) == doctest::Approx(0.0).epsilon(1e-15));

  GaussianSpec shifted{{1.0}, {1.0}};
  CHECK(kl_gaussian(shifted) == doctest::Approx(0.5).epsilon(1e-12));

  GaussianSpec wide{{0.0}, {4.0}};
  CHECK(kl_gaussian(wide) == doctest::Approx(0.8068528194400547).epsilon(1e-12));

  GaussianSpec singular{{0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
  CHECK(std::isinf(kl_gaussian(singular)));

  // KL(N(mu, Id) || N(0, Id)) = ||mu||^2/2 exactly
  GaussianSpec vec{{0.3, -1.2, 2.0}, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
  CHECK(kl_gaussian(vec) ==
        doctest::Approx(0.5 * (0.09 + 1.44 + 4.0)).epsilon(1e-12));

  GaussianSpec asym{{0.0, 0.0}, {1.0, 0.5, -0.5, 1.0}};
  CHECK_THROWS_AS(kl_gaussian(asym), DomainError);
}

TEST_CASE("stiefel_ldp_rate branches") {
  // standard Gaussian: C = Id, boundary PSD, rate 0
  CHECK(stiefel_ldp_rate(GaussianSpec{{0.0}, {1.0}}) == doctest::Approx(0.0).epsilon(1e-12));

  // variance 4: the formula's literal value is KL + (1-4)/2 = -log 2
  const double literal = stiefel_ldp_rate(GaussianSpec{{0.0}, {4.0}});
  CHECK(literal == doctest::Approx(0.8068528194400547 - 1.5).epsilon(1e-12));
  CHECK(literal == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  // variance 1/2: C - Id not PSD -> +inf
  CHECK(std::isinf(stiefel_ldp_rate(GaussianSpec{{0.0}, {0.5}})));

  // mean contributes through C = Sigma + mu mu^T
  CHECK(stiefel_ldp_rate(GaussianSpec{{1.0}, {1.0}}) ==
        doctest::Approx(0.5 + 0.5 * (1.0 - 2.0)).epsilon(1e-12));
}

TEST_CASE("orthogonal_ldp_rate values and invariances") {
  CHECK(orthogonal_ldp_rate(MatrixBlock::zero(3, 2)) == 0.0);
  CHECK(orthogonal_ldp_rate(MatrixBlock(1, 1, {0.6})) ==
        doctest::Approx(0.2231435513142098).epsilon(1e-13));
  CHECK(std::isinf(orthogonal_ldp_rate(MatrixBlock(2, 2, {1.0, 0, 0, 0.3}))));

  std::mt19937_64 engine(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    MatrixBlock T = MatrixBlock::zero(3, 4);
    for (double& v : T.entries) v = 0.2 * normal(engine);
    const double rate = orthogonal_ldp_rate(T);

    // spectral cross-check: -1/2 sum log(1 - s_i^2) over singular values
    const SpectralSummary s = gram_spectrum(T);
    double spectral = 0.0;
    for (double lambda : s.eigenvalues) spectral -= 0.5 * std::log1p(-lambda);
    CHECK(rate == doctest::Approx(spectral).epsilon(1e-10));

    // padding with zero rows/columns leaves the value unchanged
    MatrixBlock padded = MatrixBlock::zero(5, 6);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) padded(i, j) = T(i, j);
    CHECK(orthogonal_ldp_rate(padded) == doctest::Approx(rate).epsilon(1e-12));
  }
}

TEST_CASE("mdp_rate is the half squared Frobenius norm and convex") {
  CHECK(mdp_rate(MatrixBlock::zero(2, 2)) == 0.0);
  CHECK(mdp_rate(MatrixBlock(1, 2, {3, 4})) == 12.5);

  // invariance under zero-column padding
  MatrixBlock padded = MatrixBlock::zero(1, 5);
  padded(0, 0) = 3;
  padded(0, 1) = 4;
  CHECK(mdp_rate(padded) == 12.5);

  std::mt19937_64 engine(13);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    MatrixBlock A = MatrixBlock::zero(2, 3), B = MatrixBlock::zero(2, 3);
    for (double& v : A.entries) v = normal(engine);
    for (double& v : B.entries) v = normal(engine);
    const double t = uni(engine);
    MatrixBlock mix = MatrixBlock::zero(2, 3);
    for (std::size_t i = 0; i < mix.entries.size(); ++i)
      mix.entries[i] = t * A.entries[i] + (1 - t) * B.entries[i];
    CHECK(mdp_rate(mix) <= t * mdp_rate(A) + (1 - t) * mdp_rate(B) + 1e-12);
  }
}

TEST_CASE("levy_distance anchors") {
  // single observation at 0: the admissibility condition reduces to
  // Phi(eps) + eps = 1; Newton oracle gives 0.3595804520520645.
  double eps = 0.36;
  for (int i = 0; i < 60; ++i) {
    const double pdf = std::exp(-0.5 * eps * eps) / std::sqrt(2.0 * M_PI);
    eps -= (normal_cdf(eps) + eps - 1.0) / (pdf + 1.0);
  }
  CHECK(eps == doctest::Approx(0.3595804520520645).epsilon(1e-12));

  const double single = levy_distance(sample_of({0.0}));
  CHECK(single > 0.3);
  CHECK(single < 0.4);
  CHECK(single == doctest::Approx(0.3595804520520645).epsilon(1e-9));

  // duplicating every point leaves the empirical CDF unchanged
  const double dup = levy_distance(sample_of({0.0, 0.0, 0.0}));
  CHECK(dup == doctest::Approx(single).epsilon(1e-10));

  CHECK_THROWS_AS(levy_distance(std::span<const double>()), DomainError);
}

TEST_CASE("levy_distance of Gaussian quantiles shrinks like 1/n") {
  const int n = 10000;
  std::vector<double> quantiles(n);
  for (int i = 0; i < n; ++i)
    quantiles[static_cast<std::size_t>(i)] = normal_quantile((i + 0.5) / n);
  CHECK(levy_distance(sample_of(quantiles)) <= 2.0 / n);
}

TEST_CASE("levy_distance obeys a DKW-scale envelope on iid normals") {
  std::normal_distribution<double> normal;
  const int seeds = 100;
  for (int n : {100, 400, 1600}) {
    int ok = 0;
    for (int s = 0; s < seeds; ++s) {
      std::mt19937_64 engine(static_cast<std::uint64_t>(1000 * n + s));
      std::vector<double> xs(static_cast<std::size_t>(n));
      for (double& v : xs) v = normal(engine);
      if (levy_distance(sample_of(xs)) <= 3.0 / std::sqrt(static_cast<double>(n))) ++ok;
    }
    CHECK(ok >= 95);
  }
}

TEST_CASE("build_histogram frequencies") {
  const EmpiricalSample constant = sample_of({0.25, 0.25, 0.25});
  const Histogram h = build_histogram(constant, 1.0, 4);
  CHECK(h.edges.size() == 5);
  CHECK(h.masses.size() == 6);
  // all mass in the interior bin containing 0.25 = [0, 0.5)
  CHECK(h.masses[3] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::accumulate(h.masses.begin(), h.masses.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // tails land in the unbounded end bins
  const Histogram t = build_histogram(sample_of({-9.0, 0.0, 9.0}), 1.0, 2);
  CHECK(t.masses.front() == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(t.masses.back() == doctest::Approx(1.0 / 3).epsilon(1e-12));

  CHECK_THROWS_AS(build_histogram(constant, -1.0, 4), DomainError);
  CHECK_THROWS_AS(build_histogram(constant, 1.0, 1), DomainError);
}

TEST_CASE("discretized KL of a large normal sample is chi-square small") {
  std::mt19937_64 engine(321);
  std::normal_distribution<double> normal;
  const int n = 1000000;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& v : xs) v = normal(engine);
  const Histogram h = build_histogram(sample_of(std::move(xs)), 6.0, 100);
  CHECK(kl_histogram(h) <= 1e-4 + 100.0 / (2.0 * n));
}
