#include "haarblocks.h"

#include "haarblocks/asymptotics.hpp"
#include "haarblocks/core.hpp"
#include "haarblocks/density.hpp"
#include "haarblocks/experiments.hpp"
#include "haarblocks/io.hpp"
#include "haarblocks/rates.hpp"
#include "haarblocks/sampling.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Translates C++ failures into status codes and stores the message.
template <typename Fn>
hb_status wrap(Fn&& fn) {
  try {
    fn();
    return HB_OK;
  } catch (const haarblocks::DimensionError& e) {
    set_error(e.what());
    return HB_ERROR_INVALID_ARGUMENT;
  } catch (const haarblocks::DomainError& e) {
    set_error(e.what());
    return HB_ERROR_DOMAIN;
  } catch (const haarblocks::NumericError& e) {
    set_error(e.what());
    return HB_ERROR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return HB_ERROR_UNKNOWN;
  } catch (...) {
    set_error("unknown error");
    return HB_ERROR_UNKNOWN;
  }
}

haarblocks::MatrixBlock make_block(const double* data, int m, int k) {
  if (data == nullptr) throw haarblocks::DimensionError("null matrix buffer");
  return haarblocks::MatrixBlock(
      m, k, std::vector<double>(data, data + static_cast<std::size_t>(m) * k));
}

void require(bool ok, const char* what) {
  if (!ok) throw haarblocks::DimensionError(what);
}

}  // namespace

struct hb_report {
  haarblocks::ExperimentReport report;
  std::string json_text;
  std::string csv_text;
};

extern "C" {

const char* hb_version(void) { return "1.0.0"; }

const char* hb_last_error(void) { return g_last_error.c_str(); }

hb_status hb_derive_replica_seed(uint64_t value, uint64_t stream, uint64_t replica,
                                 uint64_t* out_value, uint64_t* out_stream) {
  return wrap([&] {
    require(out_value != nullptr && out_stream != nullptr, "null output");
    const haarblocks::Seed derived =
        haarblocks::derive_replica_seed(haarblocks::Seed{value, stream}, replica);
    *out_value = derived.value;
    *out_stream = derived.stream;
  });
}

hb_status hb_gram_spectrum(const double* B, int m, int k, double* eigenvalues, double* trace,
                           double* trace_of_square, double* op_norm) {
  return wrap([&] {
    require(eigenvalues != nullptr, "null eigenvalue buffer");
    const haarblocks::SpectralSummary s = haarblocks::gram_spectrum(make_block(B, m, k));
    std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), eigenvalues);
    if (trace != nullptr) *trace = s.trace;
    if (trace_of_square != nullptr) *trace_of_square = s.trace_of_square;
    if (op_norm != nullptr) *op_norm = s.op_norm;
  });
}

hb_status hb_frobenius_sq(const double* B, int m, int k, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::frobenius_sq(make_block(B, m, k));
  });
}

hb_status hb_sample_gaussian_block(int m, int k, uint64_t seed_value, uint64_t seed_stream,
                                   double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    const haarblocks::MatrixBlock B =
        haarblocks::sample_gaussian_block(m, k, haarblocks::Seed{seed_value, seed_stream});
    std::copy(B.entries.begin(), B.entries.end(), out);
  });
}

hb_status hb_sample_stiefel(int m, int64_t N, uint64_t seed_value, uint64_t seed_stream,
                            double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    const haarblocks::StiefelFrame V =
        haarblocks::sample_stiefel(m, N, haarblocks::Seed{seed_value, seed_stream});
    std::copy(V.entries.begin(), V.entries.end(), out);
  });
}

hb_status hb_sample_scaled_block(int frame_m, int64_t N, int m, int k, uint64_t seed_value,
                                 uint64_t seed_stream, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    const haarblocks::StiefelFrame V =
        haarblocks::sample_stiefel(frame_m, N, haarblocks::Seed{seed_value, seed_stream});
    const haarblocks::MatrixBlock B = haarblocks::scaled_block(V, m, k);
    std::copy(B.entries.begin(), B.entries.end(), out);
  });
}

hb_status hb_log_multigamma(int m, double x, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::log_multigamma(m, x);
  });
}

hb_status hb_log_block_density(const double* A, int m, int k, int64_t N, double* log_value,
                               int* in_support) {
  return wrap([&] {
    require(log_value != nullptr && in_support != nullptr, "null output");
    const haarblocks::LogDensityValue v =
        haarblocks::log_block_density(make_block(A, m, k), haarblocks::BlockDims(N, m, k));
    *log_value = v.log_value;
    *in_support = v.in_support ? 1 : 0;
  });
}

hb_status hb_log_scaled_density(const double* B, int m, int k, int64_t N, double* log_value,
                                int* in_support) {
  return wrap([&] {
    require(log_value != nullptr && in_support != nullptr, "null output");
    const haarblocks::LogDensityValue v =
        haarblocks::log_scaled_density(make_block(B, m, k), haarblocks::BlockDims(N, m, k));
    *log_value = v.log_value;
    *in_support = v.in_support ? 1 : 0;
  });
}

hb_status hb_log_gaussian_density(const double* B, int m, int k, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::log_gaussian_density(make_block(B, m, k));
  });
}

hb_status hb_log_density_ratio(const double* B, int m, int k, int64_t N, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::log_density_ratio(make_block(B, m, k), haarblocks::BlockDims(N, m, k));
  });
}

hb_status hb_marginal_tail(double t, hb_tail_scaling scaling, double b, int64_t N, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    haarblocks::TailQuery q;
    q.t = t;
    q.beta_exponent = b;
    switch (scaling) {
      case HB_SCALING_UNSCALED:
        q.scaling = haarblocks::TailScaling::unscaled;
        break;
      case HB_SCALING_SQRT_N:
        q.scaling = haarblocks::TailScaling::sqrtN;
        break;
      case HB_SCALING_BETA_N:
        q.scaling = haarblocks::TailScaling::betaN;
        break;
      default:
        throw haarblocks::DomainError("unknown tail scaling");
    }
    *out = haarblocks::marginal_tail(q, N);
  });
}

hb_status hb_logdet_expansion(const double* B, int m, int k, int64_t N, double out[5]) {
  return wrap([&] {
    require(out != nullptr, "null output");
    const haarblocks::ExpansionBreakdown e =
        haarblocks::logdet_expansion(make_block(B, m, k), haarblocks::BlockDims(N, m, k));
    out[0] = e.leading;
    out[1] = e.correction_frobenius;
    out[2] = e.correction_trace;
    out[3] = e.exact;
    out[4] = e.remainder;
  });
}

hb_status hb_remainder_bound(double R, int m, int k, int64_t N, double C, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::remainder_bound(R, haarblocks::BlockDims(N, m, k), C);
  });
}

hb_status hb_gamma_quotient_residual(int m, int k, int64_t N, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::gamma_quotient_residual(haarblocks::BlockDims(N, m, k));
  });
}

hb_status hb_local_limit_bound(double R, int m, int k, int64_t N, double terms[3]) {
  return wrap([&] {
    require(terms != nullptr, "null output");
    const haarblocks::BoundReport r =
        haarblocks::local_limit_bound(R, haarblocks::BlockDims(N, m, k), 1.0);
    terms[0] = r.bound_terms.r4_over_n;
    terms[1] = r.bound_terms.entries_over_n;
    terms[2] = r.bound_terms.r2_over_n;
  });
}

hb_status hb_audit_local_limit(int m, int k, int64_t N, double R, int n_probe,
                               uint64_t seed_value, uint64_t seed_stream, int threads,
                               double* observed, double terms[3], double* implied_constant) {
  return wrap([&] {
    require(observed != nullptr && terms != nullptr && implied_constant != nullptr,
            "null output");
    require(threads >= 0, "threads must be >= 0");
    const haarblocks::BoundReport r = haarblocks::audit_local_limit(
        haarblocks::BlockDims(N, m, k), R, n_probe, haarblocks::Seed{seed_value, seed_stream},
        static_cast<unsigned>(threads));
    *observed = r.observed;
    terms[0] = r.bound_terms.r4_over_n;
    terms[1] = r.bound_terms.entries_over_n;
    terms[2] = r.bound_terms.r2_over_n;
    *implied_constant = r.implied_constant;
  });
}

hb_status hb_kl_histogram(const double* edges, int n_edges, const double* masses, int n_masses,
                          double* out) {
  return wrap([&] {
    require(out != nullptr && edges != nullptr && masses != nullptr, "null buffer");
    require(n_edges >= 1 && n_masses >= 2, "need at least one edge and two masses");
    haarblocks::Histogram h;
    h.edges.assign(edges, edges + n_edges);
    h.masses.assign(masses, masses + n_masses);
    *out = haarblocks::kl_histogram(h);
  });
}

hb_status hb_kl_gaussian(const double* mean, const double* cov, int m, double* out) {
  return wrap([&] {
    require(out != nullptr && mean != nullptr && cov != nullptr, "null buffer");
    require(m >= 1, "m must be >= 1");
    haarblocks::GaussianSpec spec;
    spec.mean.assign(mean, mean + m);
    spec.covariance.assign(cov, cov + static_cast<std::size_t>(m) * m);
    *out = haarblocks::kl_gaussian(spec);
  });
}

hb_status hb_stiefel_ldp_rate(const double* mean, const double* cov, int m, double* out) {
  return wrap([&] {
    require(out != nullptr && mean != nullptr && cov != nullptr, "null buffer");
    require(m >= 1, "m must be >= 1");
    haarblocks::GaussianSpec spec;
    spec.mean.assign(mean, mean + m);
    spec.covariance.assign(cov, cov + static_cast<std::size_t>(m) * m);
    *out = haarblocks::stiefel_ldp_rate(spec);
  });
}

hb_status hb_orthogonal_ldp_rate(const double* T, int rows, int cols, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::orthogonal_ldp_rate(make_block(T, rows, cols));
  });
}

hb_status hb_mdp_rate(const double* A, int m, int k, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = haarblocks::mdp_rate(make_block(A, m, k));
  });
}

hb_status hb_levy_distance(const double* values, int64_t n, double* out) {
  return wrap([&] {
    require(out != nullptr && values != nullptr, "null buffer");
    require(n >= 1, "empty sample");
    std::vector<double> sorted(values, values + n);
    std::sort(sorted.begin(), sorted.end());
    *out = haarblocks::levy_distance(std::span<const double>(sorted));
  });
}

hb_status hb_build_histogram(const double* values, int64_t n, double L, int bins, double* edges,
                             double* masses) {
  return wrap([&] {
    require(values != nullptr && edges != nullptr && masses != nullptr, "null buffer");
    require(n >= 1, "empty sample");
    haarblocks::EmpiricalSample sample;
    sample.values.assign(values, values + n);
    std::sort(sample.values.begin(), sample.values.end());
    const haarblocks::Histogram h = haarblocks::build_histogram(sample, L, bins);
    std::copy(h.edges.begin(), h.edges.end(), edges);
    std::copy(h.masses.begin(), h.masses.end(), masses);
  });
}

hb_status hb_experiment_run(const char* config_json, int threads, hb_report** out) {
  return wrap([&] {
    require(out != nullptr && config_json != nullptr, "null buffer");
    require(threads >= 0, "threads must be >= 0");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw haarblocks::DomainError(std::string("experiment config is not valid JSON: ") +
                                    e.what());
    }
    haarblocks::DispatchResult result =
        haarblocks::run_experiment_config(config, static_cast<unsigned>(threads));
    auto handle = std::make_unique<hb_report>();
    handle->json_text =
        haarblocks::report_to_json(result.report, result.resolved_config).dump(2) + "\n";
    handle->csv_text = haarblocks::report_to_csv(result.report);
    handle->report = std::move(result.report);
    *out = handle.release();
  });
}

const char* hb_report_json(const hb_report* report) {
  return report != nullptr ? report->json_text.c_str() : "";
}

const char* hb_report_csv(const hb_report* report) {
  return report != nullptr ? report->csv_text.c_str() : "";
}

double hb_report_wall_seconds(const hb_report* report) {
  return report != nullptr ? report->report.wall_seconds : 0.0;
}

void hb_report_free(hb_report* report) { delete report; }

}  // extern "C"
