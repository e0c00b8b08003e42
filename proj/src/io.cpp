#include "haarblocks/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace haarblocks {

namespace {

using nlohmann::json;

json double_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json schedule_to_json(const Schedule& s) {
  json j;
  j["N_values"] = s.N_values;
  j["alpha"] = s.alpha;
  if (s.beta_exponent)
    j["b"] = *s.beta_exponent;
  else
    j["b"] = nullptr;
  j["replicas"] = s.replicas;
  j["seed"] = {{"value", s.root_seed.value}, {"stream", s.root_seed.stream}};
  return j;
}

Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  if (!j.contains("N_values") || !j["N_values"].is_array() || j["N_values"].empty())
    throw DomainError("schedule: N_values (non-empty array) is required");
  for (const auto& v : j["N_values"]) s.N_values.push_back(v.get<std::int64_t>());
  s.alpha = j.value("alpha", 0.5);
  if (j.contains("b") && !j["b"].is_null()) s.beta_exponent = j["b"].get<double>();
  s.replicas = j.value("replicas", 1000);
  if (j.contains("seed")) {
    s.root_seed.value = j["seed"].value("value", std::uint64_t{1});
    s.root_seed.stream = j["seed"].value("stream", std::uint64_t{0});
  }
  return s;
}

nlohmann::json rows_to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    json row;
    row["N"] = r.N;
    row["scale"] = r.scale;
    row["speed"] = r.speed;
    row["estimate"] = double_or_null(r.estimate);
    row["reference"] = double_or_null(r.reference);
    row["abs_error"] = double_or_null(r.abs_error);
    row["mc_stderr"] = r.mc_stderr;
    if (r.hits >= 0) row["hits"] = r.hits;
    row["censored"] = r.censored;
    row["low_confidence"] = r.low_confidence;
    row["out_of_support"] = r.out_of_support;
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json report_to_json(const ExperimentReport& report,
                              const nlohmann::json& resolved_config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = report.name;
  j["config"] = resolved_config;
  j["rows"] = rows_to_json(report);
  if (!report.extra.empty()) {
    json extra;
    for (const auto& [key, value] : report.extra) extra[key] = double_or_null(value);
    j["extra"] = std::move(extra);
  }
  return j;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "N,scale,speed,estimate,reference,abs_error,mc_stderr,hits,censored,"
         "low_confidence,out_of_support\n";
  for (const ReportRow& r : report.rows) {
    out << r.N << ',' << format_double(r.scale) << ',' << format_double(r.speed) << ','
        << format_double(r.estimate) << ',' << format_double(r.reference) << ','
        << format_double(r.abs_error) << ',' << format_double(r.mc_stderr) << ','
        << (r.hits >= 0 ? std::to_string(r.hits) : std::string()) << ',' << (r.censored ? 1 : 0)
        << ',' << (r.low_confidence ? 1 : 0) << ',' << (r.out_of_support ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

TestFunction test_function_from_json(const json& j) {
  TestFunction f;
  if (j.is_null()) return f;  // default scaled_tanh(0.5)
  const std::string kind = j.value("kind", "scaled_tanh");
  if (kind == "scaled_tanh")
    f.kind = TestFunction::Kind::scaled_tanh;
  else if (kind == "scaled_sin")
    f.kind = TestFunction::Kind::scaled_sin;
  else if (kind == "clamped_quadratic")
    f.kind = TestFunction::Kind::clamped_quadratic;
  else
    throw DomainError("experiment config: unknown test function kind '" + kind + "'");
  f.a = j.value("a", 0.5);
  f.c = j.value("c", 1.0);
  return f;
}

json test_function_to_json(const TestFunction& f) {
  json j;
  j["kind"] = f.name();
  j["a"] = f.a;
  if (f.kind == TestFunction::Kind::clamped_quadratic) j["c"] = f.c;
  return j;
}

void enforce_sampling_cap(const Schedule& s, const std::string& experiment) {
  for (std::int64_t N : s.N_values)
    if (N > kMaxSamplingN)
      throw DomainError("experiment '" + experiment + "' samples matrices and rejects N=" +
                        std::to_string(N) + " > " + std::to_string(kMaxSamplingN) +
                        "; only the quadrature-based mdp-entry supports larger N");
}

}  // namespace

DispatchResult run_experiment_config(const nlohmann::json& config, unsigned threads) {
  if (!config.contains("experiment"))
    throw DomainError("experiment config: missing 'experiment' field");
  const std::string name = config["experiment"].get<std::string>();
  if (!config.contains("schedule"))
    throw DomainError("experiment config: missing 'schedule' object");
  const Schedule schedule = schedule_from_json(config["schedule"]);

  DispatchResult result;
  json resolved;
  resolved["experiment"] = name;
  resolved["schedule"] = schedule_to_json(schedule);

  if (name == "logmgf") {
    enforce_sampling_cap(schedule, name);
    const TestFunction f =
        test_function_from_json(config.contains("f") ? config["f"] : json(nullptr));
    resolved["f"] = test_function_to_json(f);
    result.report = run_logmgf(f, schedule, threads);
  } else if (name == "ldp-decay") {
    enforce_sampling_cap(schedule, name);
    const double epsilon = config.value("epsilon", 0.05);
    resolved["epsilon"] = epsilon;
    result.report = run_empirical_decay(epsilon, schedule, threads);
  } else if (name == "as-trace") {
    enforce_sampling_cap(schedule, name);
    result.report = run_as_trace(schedule, threads);
  } else if (name == "mdp-entry") {
    const double t = config.value("t", 1.0);
    resolved["t"] = t;
    result.report = run_mdp_entry(t, schedule);
  } else if (name == "mdp-block") {
    enforce_sampling_cap(schedule, name);
    const double t = config.value("t", 1.0);
    const int m = config.value("m", 2);
    const int k = config.value("k", 2);
    resolved["t"] = t;
    resolved["m"] = m;
    resolved["k"] = k;
    result.report = run_mdp_block(t, m, k, schedule, threads);
  } else if (name == "concentration") {
    enforce_sampling_cap(schedule, name);
    const double r_exponent = config.value("R_exponent", 0.15);
    resolved["R_exponent"] = r_exponent;
    result.report = run_concentration(schedule, r_exponent, threads);
  } else {
    throw DomainError("experiment config: unknown experiment '" + name + "'");
  }

  result.resolved_config = std::move(resolved);
  return result;
}

}  // namespace haarblocks
