// haarblocks command-line front end.
//
// Subcommands: sample, density, expand, audit-lll, rate, and
// experiment {logmgf|ldp-decay|as-trace|mdp-entry|mdp-block|concentration}.
//
// Every artifact embeds its fully resolved configuration (defaults and seed
// included), so a run can be repeated from its own output. Exit codes:
// 0 success, 1 numerical or I/O failure, 2 usage error.

#include <haarblocks.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int64_t kMaxSamplingN = 100000;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raises RunError (numeric/domain problems keep exit code 1; argument
// validation surfaced by the library becomes a usage error).
void check(hb_status status) {
  if (status == HB_OK) return;
  if (status == HB_ERROR_INVALID_ARGUMENT) throw UsageError(hb_last_error());
  throw RunError(hb_last_error());
}

std::vector<int64_t> parse_n_list(const std::string& text) {
  std::vector<int64_t> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw UsageError("--N: empty entry in list '" + text + "'");
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == nullptr || *end != '\0' || !(v >= 1.0) || v > 9.3e18)
      throw UsageError("--N: cannot parse '" + item + "' as a positive dimension");
    const auto n = static_cast<int64_t>(std::llround(v));
    if (std::abs(v - static_cast<double>(n)) > 1e-6 * std::max(1.0, v))
      throw UsageError("--N: '" + item + "' is not an integer");
    values.push_back(n);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return values;
}

// Values resolve flag > config file > built-in default; see README.
struct Options {
  std::string N_text;
  int m = 0, k = 0;
  double R = std::nan("");
  double t = std::nan("");
  double b = std::nan("");
  double alpha = std::nan("");
  double epsilon = std::nan("");
  int replicas = 0;
  std::string seed_text;
  int threads = 0;
  std::string out;
  std::string format;
  std::string config_path;
  std::string scaling;
  std::string f_kind;
  double f_a = std::nan("");
  double f_c = std::nan("");
  double R_exponent = std::nan("");

  CLI::App* cmd = nullptr;
  json config;  // parsed --config file (empty object when absent)

  bool given(const std::string& flag) const { return cmd->count(flag) > 0; }

  template <typename T>
  std::optional<T> from_config(const std::string& key) const {
    if (config.contains(key) && !config[key].is_null()) return config[key].get<T>();
    return std::nullopt;
  }

  std::string resolve_N(const std::string& fallback = "") const {
    if (given("--N")) return N_text;
    if (config.contains("N")) {
      if (config["N"].is_string()) return config["N"].get<std::string>();
      if (config["N"].is_number()) return std::to_string(config["N"].get<int64_t>());
      if (config["N"].is_array()) {
        std::string joined;
        for (const auto& v : config["N"])
          joined += (joined.empty() ? "" : ",") + std::to_string(v.get<int64_t>());
        return joined;
      }
    }
    if (fallback.empty()) throw UsageError("--N is required");
    return fallback;
  }

  int resolve_int(const std::string& flag, const std::string& key, int flag_value,
                  std::optional<int> fallback = std::nullopt) const {
    if (given(flag)) return flag_value;
    if (auto v = from_config<int>(key)) return *v;
    if (fallback) return *fallback;
    throw UsageError(flag + " is required");
  }

  double resolve_double(const std::string& flag, const std::string& key, double flag_value,
                        std::optional<double> fallback = std::nullopt) const {
    if (given(flag)) return flag_value;
    if (auto v = from_config<double>(key)) return *v;
    if (fallback) return *fallback;
    throw UsageError(flag + " is required");
  }

  std::string resolve_string(const std::string& flag, const std::string& key,
                             const std::string& flag_value, const std::string& fallback) const {
    if (given(flag)) return flag_value;
    if (auto v = from_config<std::string>(key)) return *v;
    return fallback;
  }

  // Seed precedence: --seed, config "seed", HAARBLOCKS_SEED, then {1, 0}.
  std::pair<uint64_t, uint64_t> resolve_seed() const {
    auto parse_u64 = [](const std::string& text, const char* where) -> uint64_t {
      try {
        std::size_t used = 0;
        const uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      } catch (const std::exception&) {
        throw UsageError(std::string(where) + ": cannot parse '" + text + "' as a seed");
      }
    };
    if (given("--seed")) return {parse_u64(seed_text, "--seed"), 0};
    if (config.contains("seed")) {
      const json& s = config["seed"];
      if (s.is_number()) return {s.get<uint64_t>(), 0};
      if (s.is_object()) return {s.value("value", uint64_t{1}), s.value("stream", uint64_t{0})};
    }
    if (const char* env = std::getenv("HAARBLOCKS_SEED"))
      return {parse_u64(env, "HAARBLOCKS_SEED"), 0};
    return {1, 0};
  }
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--N", opt.N_text, "Ambient dimension(s); lists and 1e6 notation accepted");
  cmd->add_option("--m", opt.m, "Block rows");
  cmd->add_option("--k", opt.k, "Block columns");
  cmd->add_option("--R", opt.R, "Frobenius radius");
  cmd->add_option("--t", opt.t, "Tail threshold");
  cmd->add_option("--b", opt.b, "Moderate-deviation exponent, beta_N = N^b, b in (0, 1/2)");
  cmd->add_option("--alpha", opt.alpha, "Block growth exponent, p_N = round(N^alpha)");
  cmd->add_option("--epsilon", opt.epsilon, "Levy ball radius");
  cmd->add_option("--replicas", opt.replicas, "Monte Carlo replicas / audit probes");
  cmd->add_option("--seed", opt.seed_text, "Root seed (integer)");
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", opt.out, "Output path (default: stdout)");
  cmd->add_option("--format", opt.format, "json or csv");
  cmd->add_option("--config", opt.config_path, "JSON config file; flags take precedence");
  opt.cmd = cmd;
}

json seed_json(std::pair<uint64_t, uint64_t> seed) {
  return json{{"value", seed.first}, {"stream", seed.second}};
}

// Reads "entries" ([[...], ...] or flat with m,k) from the config file.
std::optional<std::vector<double>> entries_from_config(const Options& opt, int& m, int& k) {
  if (!opt.config.contains("entries")) return std::nullopt;
  const json& e = opt.config["entries"];
  if (!e.is_array() || e.empty()) throw UsageError("config entries must be a non-empty array");
  std::vector<double> flat;
  if (e.front().is_array()) {
    const int rows = static_cast<int>(e.size());
    const int cols = static_cast<int>(e.front().size());
    for (const auto& row : e) {
      if (static_cast<int>(row.size()) != cols)
        throw UsageError("config entries rows have unequal lengths");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    if ((m != 0 && m != rows) || (k != 0 && k != cols))
      throw UsageError("config entries shape disagrees with --m/--k");
    m = rows;
    k = cols;
  } else {
    for (const auto& v : e) flat.push_back(v.get<double>());
    if (m == 0 || k == 0) throw UsageError("flat entries need --m and --k");
    if (flat.size() != static_cast<std::size_t>(m) * k)
      throw UsageError("flat entries length does not match m*k");
  }
  return flat;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RunError("cannot open output path '" + path + "' for writing");
  out << text;
  if (!out.good()) throw RunError("short write to '" + path + "'");
}

void emit(const Options& opt, const json& artifact, const std::string& csv,
          const std::string& summary) {
  const std::string format = opt.resolve_string("--format", "format", opt.format, "json");
  std::string text;
  if (format == "json")
    text = artifact.dump(2) + "\n";
  else if (format == "csv")
    text = csv;
  else
    throw UsageError("--format must be json or csv");
  write_text(opt.out, text);
  std::ostream& log = (opt.out.empty() || opt.out == "-") ? std::cerr : std::cout;
  log << summary << "\n";
}

std::string scalar_csv(const json& result) {
  std::string header, row;
  for (auto it = result.begin(); it != result.end(); ++it) {
    if (!it.value().is_number() && !it.value().is_boolean() && !it.value().is_null()) continue;
    header += (header.empty() ? "" : ",") + it.key();
    row += (row.empty() ? "" : ",") + it.value().dump();
  }
  return header + "\n" + row + "\n";
}

// --------------------------------------------------------------------- sample

int cmd_sample(Options& opt) {
  const auto N_list = parse_n_list(opt.resolve_N());
  if (N_list.size() != 1) throw UsageError("sample expects a single --N");
  const int64_t N = N_list[0];
  if (N > kMaxSamplingN)
    throw UsageError("sample rejects N > " + std::to_string(kMaxSamplingN) +
                     "; sampling cost grows with N (quadrature commands accept larger N)");
  const int m = opt.resolve_int("--m", "m", opt.m);
  const int k = opt.resolve_int("--k", "k", opt.k);
  const auto seed = opt.resolve_seed();

  std::vector<double> block(static_cast<std::size_t>(m) * k);
  check(hb_sample_scaled_block(m, N, m, k, seed.first, seed.second, block.data()));

  json rows = json::array();
  for (int i = 0; i < m; ++i) {
    json row = json::array();
    for (int j = 0; j < k; ++j) row.push_back(block[static_cast<std::size_t>(i) * k + j]);
    rows.push_back(std::move(row));
  }
  json artifact{{"schema_version", 1},
                {"command", "sample"},
                {"config",
                 {{"N", N}, {"m", m}, {"k", k}, {"seed", seed_json(seed)}, {"scaled", true}}},
                {"result", {{"entries", rows}}}};

  std::string csv;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j)
      csv += (j ? "," : "") + json(block[static_cast<std::size_t>(i) * k + j]).dump();
    csv += "\n";
  }
  emit(opt, artifact, csv,
       "sample: " + std::to_string(m) + "x" + std::to_string(k) + " scaled block at N=" +
           std::to_string(N));
  return kExitOk;
}

// -------------------------------------------------------------------- density

int cmd_density(Options& opt) {
  const auto N_list = parse_n_list(opt.resolve_N());
  if (N_list.size() != 1) throw UsageError("density expects a single --N");
  const int64_t N = N_list[0];

  const bool tail_mode = opt.given("--t") || opt.config.contains("t");
  if (tail_mode) {
    const double t = opt.resolve_double("--t", "t", opt.t);
    const std::string scaling =
        opt.resolve_string("--scaling", "scaling", opt.scaling, "unscaled");
    hb_tail_scaling sc;
    double b = 0.0;
    if (scaling == "unscaled")
      sc = HB_SCALING_UNSCALED;
    else if (scaling == "sqrtN")
      sc = HB_SCALING_SQRT_N;
    else if (scaling == "betaN") {
      sc = HB_SCALING_BETA_N;
      b = opt.resolve_double("--b", "b", opt.b);
    } else
      throw UsageError("--scaling must be unscaled, sqrtN or betaN");

    double log_tail = 0.0;
    check(hb_marginal_tail(t, sc, b, N, &log_tail));
    json config{{"N", N}, {"t", t}, {"scaling", scaling}};
    if (sc == HB_SCALING_BETA_N) config["b"] = b;
    json result{{"log_tail", std::isinf(log_tail) ? json(nullptr) : json(log_tail)},
                {"tail_probability", std::exp(log_tail)}};
    json artifact{
        {"schema_version", 1}, {"command", "density"}, {"config", config}, {"result", result}};
    emit(opt, artifact, scalar_csv(result),
         "density tail: log P = " + json(log_tail).dump() + " at t=" + json(t).dump());
    return kExitOk;
  }

  int m = opt.given("--m") || opt.config.contains("m") ? opt.resolve_int("--m", "m", opt.m) : 0;
  int k = opt.given("--k") || opt.config.contains("k") ? opt.resolve_int("--k", "k", opt.k) : 0;
  auto entries = entries_from_config(opt, m, k);
  if (!entries) {
    if (m == 0 || k == 0) throw UsageError("density needs --m/--k (point defaults to zeros)");
    entries = std::vector<double>(static_cast<std::size_t>(m) * k, 0.0);
  }
  if (N < static_cast<int64_t>(m) + k)
    throw UsageError("density requires N >= m + k (got N=" + std::to_string(N) + ", m+k=" +
                     std::to_string(m + k) + ")");

  double log_f = 0.0, log_g = 0.0, log_phi = 0.0;
  int support_f = 0, support_g = 0;
  check(hb_log_scaled_density(entries->data(), m, k, N, &log_g, &support_g));
  check(hb_log_gaussian_density(entries->data(), m, k, &log_phi));
  // Point value of the unscaled density at B/sqrt(N) for reference.
  std::vector<double> unscaled(*entries);
  for (double& v : unscaled) v /= std::sqrt(static_cast<double>(N));
  check(hb_log_block_density(unscaled.data(), m, k, N, &log_f, &support_f));

  json result{{"log_value", support_g ? json(log_g) : json(nullptr)},
              {"in_support", support_g != 0},
              {"log_block_density_at_B_over_sqrtN", support_f ? json(log_f) : json(nullptr)},
              {"log_gaussian_density", log_phi}};
  if (support_g) result["log_ratio_vs_gaussian"] = log_g - log_phi;
  json artifact{{"schema_version", 1},
                {"command", "density"},
                {"config", {{"N", N}, {"m", m}, {"k", k}, {"entries", *entries}}},
                {"result", result}};
  emit(opt, artifact, scalar_csv(result),
       std::string("density: log g_N = ") + (support_g ? json(log_g).dump() : "out-of-support"));
  return kExitOk;
}

// --------------------------------------------------------------------- expand

int cmd_expand(Options& opt) {
  const auto N_list = parse_n_list(opt.resolve_N());
  if (N_list.size() != 1) throw UsageError("expand expects a single --N");
  const int64_t N = N_list[0];
  int m = opt.given("--m") || opt.config.contains("m") ? opt.resolve_int("--m", "m", opt.m) : 0;
  int k = opt.given("--k") || opt.config.contains("k") ? opt.resolve_int("--k", "k", opt.k) : 0;
  auto entries = entries_from_config(opt, m, k);
  if (!entries) {
    // A deterministic single-entry block of radius R is a useful default.
    const double R = opt.resolve_double("--R", "R", opt.R);
    if (m == 0 || k == 0) throw UsageError("expand needs --m/--k with --R or config entries");
    entries = std::vector<double>(static_cast<std::size_t>(m) * k, 0.0);
    (*entries)[0] = R;
  }

  double out[5] = {0, 0, 0, 0, 0};
  check(hb_logdet_expansion(entries->data(), m, k, N, out));
  json result{{"leading", out[0]},
              {"correction_frobenius", out[1]},
              {"correction_trace", out[2]},
              {"exact", out[3]},
              {"remainder", out[4]}};
  json artifact{{"schema_version", 1},
                {"command", "expand"},
                {"config", {{"N", N}, {"m", m}, {"k", k}, {"entries", *entries}}},
                {"result", result}};
  emit(opt, artifact, scalar_csv(result),
       "expand: remainder = " + json(out[4]).dump() + " at N=" + std::to_string(N));
  return kExitOk;
}

// ------------------------------------------------------------------ audit-lll

int cmd_audit(Options& opt) {
  const auto N_list = parse_n_list(opt.resolve_N());
  if (N_list.size() != 1) throw UsageError("audit-lll expects a single --N");
  const int64_t N = N_list[0];
  const int m = opt.resolve_int("--m", "m", opt.m, 2);
  const int k = opt.resolve_int("--k", "k", opt.k, 2);
  const double R =
      opt.resolve_double("--R", "R", opt.R, std::pow(static_cast<double>(N), 0.2));
  const int probes = opt.resolve_int("--replicas", "replicas", opt.replicas, 1000);
  const auto seed = opt.resolve_seed();

  double observed = 0.0, implied = 0.0, terms[3] = {0, 0, 0};
  check(hb_audit_local_limit(m, k, N, R, probes, seed.first, seed.second, opt.threads,
                             &observed, terms, &implied));
  json result{{"observed", observed},
              {"bound_terms",
               {{"r4_over_n", terms[0]}, {"entries_over_n", terms[1]}, {"r2_over_n", terms[2]}}},
              {"implied_constant", implied}};
  json artifact{{"schema_version", 1},
                {"command", "audit-lll"},
                {"config",
                 {{"N", N},
                  {"m", m},
                  {"k", k},
                  {"R", R},
                  {"replicas", probes},
                  {"seed", seed_json(seed)}}},
                {"result", result}};
  json flat = result;
  flat.erase("bound_terms");
  flat["r4_over_n"] = terms[0];
  flat["entries_over_n"] = terms[1];
  flat["r2_over_n"] = terms[2];
  emit(opt, artifact, scalar_csv(flat),
       "audit-lll: observed sup = " + json(observed).dump() +
           ", implied constant = " + json(implied).dump());
  return kExitOk;
}

// ----------------------------------------------------------------------- rate

int cmd_rate(Options& opt) {
  const json& cfg = opt.config;
  if (!cfg.contains("function"))
    throw UsageError("rate needs a --config file with a 'function' field");
  const std::string fn = cfg["function"].get<std::string>();
  double value = 0.0;
  json config{{"function", fn}};

  auto matrix_arg = [&](int& m, int& k) {
    m = cfg.value("m", 0);
    k = cfg.value("k", 0);
    auto entries = entries_from_config(opt, m, k);
    if (!entries) throw UsageError("rate '" + fn + "' needs 'entries' in the config");
    config["entries"] = cfg["entries"];
    return *entries;
  };
  auto gaussian_arg = [&](std::vector<double>& mean, std::vector<double>& cov) {
    if (!cfg.contains("mean") || !cfg.contains("covariance"))
      throw UsageError("rate '" + fn + "' needs 'mean' and 'covariance'");
    mean = cfg["mean"].get<std::vector<double>>();
    const json& cj = cfg["covariance"];
    if (cj.is_array() && !cj.empty() && cj.front().is_array())
      for (const auto& row : cj)
        for (const auto& v : row) cov.push_back(v.get<double>());
    else
      cov = cj.get<std::vector<double>>();
    config["mean"] = cfg["mean"];
    config["covariance"] = cfg["covariance"];
  };

  if (fn == "kl_gaussian" || fn == "stiefel_ldp_rate") {
    std::vector<double> mean, cov;
    gaussian_arg(mean, cov);
    const int m = static_cast<int>(mean.size());
    check(fn == "kl_gaussian" ? hb_kl_gaussian(mean.data(), cov.data(), m, &value)
                              : hb_stiefel_ldp_rate(mean.data(), cov.data(), m, &value));
    if (fn == "stiefel_ldp_rate" && value < 0.0)
      std::cerr << "warning: stiefel_ldp_rate is negative (" << value
                << "); the trace term dominates the relative entropy here\n";
  } else if (fn == "orthogonal_ldp_rate" || fn == "mdp_rate") {
    int m = 0, k = 0;
    const std::vector<double> entries = matrix_arg(m, k);
    check(fn == "orthogonal_ldp_rate" ? hb_orthogonal_ldp_rate(entries.data(), m, k, &value)
                                      : hb_mdp_rate(entries.data(), m, k, &value));
  } else if (fn == "kl_histogram") {
    if (!cfg.contains("edges") || !cfg.contains("masses"))
      throw UsageError("rate 'kl_histogram' needs 'edges' and 'masses'");
    const auto edges = cfg["edges"].get<std::vector<double>>();
    const auto masses = cfg["masses"].get<std::vector<double>>();
    config["edges"] = cfg["edges"];
    config["masses"] = cfg["masses"];
    check(hb_kl_histogram(edges.data(), static_cast<int>(edges.size()), masses.data(),
                          static_cast<int>(masses.size()), &value));
  } else if (fn == "levy_distance") {
    if (!cfg.contains("values")) throw UsageError("rate 'levy_distance' needs 'values'");
    const auto values = cfg["values"].get<std::vector<double>>();
    config["values"] = cfg["values"];
    check(hb_levy_distance(values.data(), static_cast<int64_t>(values.size()), &value));
  } else {
    throw UsageError("rate: unknown function '" + fn + "'");
  }

  json result{{"value", std::isinf(value) ? json("inf") : json(value)}};
  json artifact{
      {"schema_version", 1}, {"command", "rate"}, {"config", config}, {"result", result}};
  emit(opt, artifact, scalar_csv(json{{"value", value}}),
       "rate " + fn + " = " + result["value"].dump());
  return kExitOk;
}

// ----------------------------------------------------------------- experiment

int cmd_experiment(const std::string& name, Options& opt) {
  json schedule;
  schedule["N_values"] = parse_n_list(opt.resolve_N());
  schedule["alpha"] = opt.resolve_double("--alpha", "alpha", opt.alpha, 0.5);
  if (opt.given("--b") || opt.config.contains("b"))
    schedule["b"] = opt.resolve_double("--b", "b", opt.b);
  schedule["replicas"] = opt.resolve_int("--replicas", "replicas", opt.replicas, 1000);
  const auto seed = opt.resolve_seed();
  schedule["seed"] = seed_json(seed);

  json config{{"experiment", name}, {"schedule", schedule}};
  if (name == "logmgf") {
    json f;
    f["kind"] = opt.resolve_string("--f-kind", "f_kind", opt.f_kind, "scaled_tanh");
    f["a"] = opt.resolve_double("--f-a", "f_a", opt.f_a, 0.5);
    f["c"] = opt.resolve_double("--f-c", "f_c", opt.f_c, 1.0);
    if (opt.config.contains("f")) f.update(opt.config["f"]);
    config["f"] = f;
  } else if (name == "ldp-decay") {
    config["epsilon"] = opt.resolve_double("--epsilon", "epsilon", opt.epsilon, 0.05);
  } else if (name == "mdp-entry" || name == "mdp-block") {
    config["t"] = opt.resolve_double("--t", "t", opt.t, 1.0);
    if (name == "mdp-block") {
      config["m"] = opt.resolve_int("--m", "m", opt.m, 2);
      config["k"] = opt.resolve_int("--k", "k", opt.k, 2);
    }
  } else if (name == "concentration") {
    config["R_exponent"] =
        opt.resolve_double("--R-exponent", "R_exponent", opt.R_exponent, 0.15);
  }

  hb_report* report = nullptr;
  check(hb_experiment_run(config.dump().c_str(), opt.threads, &report));
  const std::string json_text = hb_report_json(report);
  const std::string csv_text = hb_report_csv(report);
  const double wall = hb_report_wall_seconds(report);
  hb_report_free(report);

  const json artifact = json::parse(json_text);
  emit(opt, artifact, csv_text,
       "experiment " + name + ": " + std::to_string(artifact["rows"].size()) + " rows in " +
           std::to_string(wall) + " s");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"haarblocks: block densities, deviation rates and Monte Carlo audits for "
               "Haar orthogonal and Stiefel matrices"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* sample = app.add_subcommand("sample", "Sample a scaled Haar block");
  CLI::App* density = app.add_subcommand("density", "Evaluate densities or marginal tails");
  CLI::App* expand = app.add_subcommand("expand", "Log-determinant expansion breakdown");
  CLI::App* audit = app.add_subcommand("audit-lll", "Audit the uniform local-limit bound");
  CLI::App* rate = app.add_subcommand("rate", "Evaluate a rate function on JSON inputs");
  CLI::App* experiment = app.add_subcommand("experiment", "Run a scheduled experiment");
  experiment->require_subcommand(1);
  std::vector<CLI::App*> exp_subs;
  for (const char* name :
       {"logmgf", "ldp-decay", "as-trace", "mdp-entry", "mdp-block", "concentration"})
    exp_subs.push_back(experiment->add_subcommand(name));

  // The same flag set everywhere; each command validates what it needs.
  for (CLI::App* cmd : {sample, density, expand, audit, rate}) add_common_flags(cmd, opt);
  for (CLI::App* cmd : exp_subs) add_common_flags(cmd, opt);
  for (CLI::App* cmd : {density}) cmd->add_option("--scaling", opt.scaling);
  for (CLI::App* cmd : exp_subs) {
    cmd->add_option("--f-kind", opt.f_kind, "logmgf test function kind");
    cmd->add_option("--f-a", opt.f_a, "logmgf test function bound");
    cmd->add_option("--f-c", opt.f_c, "clamped_quadratic curvature");
    cmd->add_option("--R-exponent", opt.R_exponent, "concentration radius exponent");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    opt.cmd = active;
    if (active == experiment) opt.cmd = experiment->get_subcommands().front();

    if (!opt.config_path.empty()) {
      std::ifstream in(opt.config_path);
      if (!in) throw RunError("cannot read config file '" + opt.config_path + "'");
      try {
        in >> opt.config;
      } catch (const json::parse_error& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
      }
    } else {
      opt.config = json::object();
    }

    if (active == sample) return cmd_sample(opt);
    if (active == density) return cmd_density(opt);
    if (active == expand) return cmd_expand(opt);
    if (active == audit) return cmd_audit(opt);
    if (active == rate) return cmd_rate(opt);
    if (active == experiment)
      return cmd_experiment(experiment->get_subcommands().front()->get_name(), opt);
    throw UsageError("no command selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
