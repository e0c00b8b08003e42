// Exercises the shared-library surface the way an external client would:
// includes only the public C header and links libhaarblocks.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <haarblocks.h>

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using nlohmann::json;

TEST_CASE("version and error text plumbing") {
  CHECK(std::string(hb_version()) == "1.0.0");
  double out = 0.0;
  CHECK(hb_log_multigamma(2, 0.5, &out) == HB_ERROR_DOMAIN);
  CHECK(std::string(hb_last_error()).find("pole") != std::string::npos);
}

TEST_CASE("core and density round trips") {
  const double B[2] = {3.0, 4.0};
  double eig[1], trace, trace_sq, op;
  REQUIRE(hb_gram_spectrum(B, 1, 2, eig, &trace, &trace_sq, &op) == HB_OK);
  CHECK(eig[0] == doctest::Approx(25.0));
  CHECK(op == doctest::Approx(25.0));

  double fro = 0.0;
  REQUIRE(hb_frobenius_sq(B, 1, 2, &fro) == HB_OK);
  CHECK(fro == 25.0);

  double lg = 0.0;
  REQUIRE(hb_log_multigamma(1, 0.5, &lg) == HB_OK);
  CHECK(lg == doctest::Approx(0.5723649429247001).epsilon(1e-13));

  const double zero = 0.0;
  double log_value = 0.0;
  int in_support = 0;
  REQUIRE(hb_log_block_density(&zero, 1, 1, 3, &log_value, &in_support) == HB_OK);
  CHECK(in_support == 1);
  CHECK(log_value == doctest::Approx(std::log(0.5)).epsilon(1e-12));

  REQUIRE(hb_log_scaled_density(&zero, 1, 1, 3, &log_value, &in_support) == HB_OK);
  CHECK(log_value == doctest::Approx(std::log(0.5) - 0.5 * std::log(3.0)).epsilon(1e-12));

  double ratio = 0.0;
  REQUIRE(hb_log_density_ratio(&zero, 1, 1, 3, &ratio) == HB_OK);
  CHECK(ratio == doctest::Approx(-0.3235147916893274).epsilon(1e-12));

  double tail = 0.0;
  REQUIRE(hb_marginal_tail(0.5, HB_SCALING_UNSCALED, 0.0, 3, &tail) == HB_OK);
  CHECK(tail == doctest::Approx(std::log(0.25)).epsilon(1e-12));

  // invalid dims surface as argument errors
  CHECK(hb_log_block_density(&zero, 1, 1, 1, &log_value, &in_support) ==
        HB_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("sampling determinism through the C surface") {
  std::vector<double> a(6), b(6);
  REQUIRE(hb_sample_gaussian_block(2, 3, 7, 0, a.data()) == HB_OK);
  REQUIRE(hb_sample_gaussian_block(2, 3, 7, 0, b.data()) == HB_OK);
  CHECK(a == b);

  std::vector<double> frame(2 * 50);
  REQUIRE(hb_sample_stiefel(2, 50, 7, 0, frame.data()) == HB_OK);
  double defect = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double dot = 0.0;
      for (int c = 0; c < 50; ++c) dot += frame[i * 50 + c] * frame[j * 50 + c];
      defect = std::max(defect, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  CHECK(defect <= 1e-10);

  std::vector<double> block(4);
  REQUIRE(hb_sample_scaled_block(2, 50, 2, 2, 7, 0, block.data()) == HB_OK);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(block[i * 2 + j] == doctest::Approx(std::sqrt(50.0) * frame[i * 50 + j]));

  uint64_t dv = 0, ds = 0;
  REQUIRE(hb_derive_replica_seed(1, 0, 5, &dv, &ds) == HB_OK);
  CHECK(ds == 5);
  uint64_t dv2 = 0, ds2 = 0;
  REQUIRE(hb_derive_replica_seed(1, 0, 6, &dv2, &ds2) == HB_OK);
  CHECK(dv != dv2);
}

TEST_CASE("asymptotics and rates through the C surface") {
  const double one = 1.0;
  double expansion[5];
  REQUIRE(hb_logdet_expansion(&one, 1, 1, 100, expansion) == HB_OK);
  CHECK(expansion[3] == doctest::Approx(48.5 * std::log(0.99)).epsilon(1e-13));

  double bound = 0.0;
  REQUIRE(hb_remainder_bound(2.0, 2, 2, 100, 1.0, &bound) == HB_OK);
  CHECK(bound == doctest::Approx(0.0128).epsilon(1e-13));

  double residual = 0.0;
  REQUIRE(hb_gamma_quotient_residual(1, 1, 1000000, &residual) == HB_OK);
  CHECK(std::abs(residual) <= 1e-5);

  double terms[3];
  REQUIRE(hb_local_limit_bound(0.0, 1, 1, 10, terms) == HB_OK);
  CHECK(terms[1] == doctest::Approx(0.2));

  double observed = 0.0, implied = 0.0;
  REQUIRE(hb_audit_local_limit(2, 2, 10000, 2.0, 8, 3, 0, 2, &observed, terms, &implied) ==
          HB_OK);
  CHECK(observed > 0.0);
  CHECK(implied == doctest::Approx(observed / (terms[0] + terms[1] + terms[2])));

  const double T = 0.6;
  double rate = 0.0;
  REQUIRE(hb_orthogonal_ldp_rate(&T, 1, 1, &rate) == HB_OK);
  CHECK(rate == doctest::Approx(0.2231435513142098).epsilon(1e-13));

  const double A[2] = {3.0, 4.0};
  REQUIRE(hb_mdp_rate(A, 1, 2, &rate) == HB_OK);
  CHECK(rate == 12.5);

  const double mean = 1.0, cov = 1.0;
  REQUIRE(hb_kl_gaussian(&mean, &cov, 1, &rate) == HB_OK);
  CHECK(rate == doctest::Approx(0.5).epsilon(1e-13));
  REQUIRE(hb_stiefel_ldp_rate(&mean, &cov, 1, &rate) == HB_OK);
  CHECK(rate == doctest::Approx(0.0).epsilon(1e-12));

  const double edges[1] = {0.0};
  const double masses[2] = {1.0, 0.0};
  REQUIRE(hb_kl_histogram(edges, 1, masses, 2, &rate) == HB_OK);
  CHECK(rate == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  const double values[3] = {0.5, -0.5, 0.0};
  REQUIRE(hb_levy_distance(values, 3, &rate) == HB_OK);
  CHECK(rate > 0.0);
  CHECK(rate < 1.0);

  std::vector<double> hedges(5), hmasses(6);
  REQUIRE(hb_build_histogram(values, 3, 1.0, 4, hedges.data(), hmasses.data()) == HB_OK);
  double total = 0.0;
  for (double m : hmasses) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("experiment handle lifecycle and artifact shape") {
  const json config{
      {"experiment", "mdp-entry"},
      {"schedule",
       {{"N_values", {1000, 100000}}, {"alpha", 0.5}, {"b", 0.25}, {"replicas", 1},
        {"seed", {{"value", 4}, {"stream", 0}}}}},
      {"t", 1.0}};

  hb_report* report = nullptr;
  REQUIRE(hb_experiment_run(config.dump().c_str(), 1, &report) == HB_OK);
  REQUIRE(report != nullptr);

  const json artifact = json::parse(hb_report_json(report));
  CHECK(artifact["schema_version"] == 1);
  CHECK(artifact["experiment"] == "mdp-entry");
  CHECK(artifact["config"]["schedule"]["seed"]["value"] == 4);
  CHECK(artifact["rows"].size() == 2);

  const std::string csv = hb_report_csv(report);
  CHECK(csv.rfind("N,scale,speed", 0) == 0);
  CHECK(hb_report_wall_seconds(report) >= 0.0);
  hb_report_free(report);

  // same config twice: byte-identical serialized artifacts
  hb_report* again = nullptr;
  REQUIRE(hb_experiment_run(config.dump().c_str(), 2, &again) == HB_OK);
  CHECK(std::string(hb_report_json(again)) == artifact.dump(2) + "\n");
  hb_report_free(again);

  hb_report* bad = nullptr;
  CHECK(hb_experiment_run("{ not json", 1, &bad) == HB_ERROR_DOMAIN);
  CHECK(bad == nullptr);
}
