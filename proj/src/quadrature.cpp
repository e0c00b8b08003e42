#include "haarblocks/quadrature.hpp"

#include "haarblocks/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace haarblocks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kronrod-15 node/weight table with the embedded Gauss-7 weights
// (zero Gauss weight marks Kronrod-only nodes).
struct NodeRow {
  double x, gauss_w, kronrod_w;
};
constexpr NodeRow kGK15[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

double logsumexp2(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// ---------------------------------------------------------------------------
// Linear domain

struct Panel {
  double a, b;
  double value;  // K15 estimate
  double err;    // |K15 - G7| based estimate
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double g7 = kGK15[0].gauss_w * f(mid);
  double k15 = kGK15[0].kronrod_w * f(mid);
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i].x;
    const double y = f(mid + dx) + f(mid - dx);
    g7 += kGK15[i].gauss_w * y;
    k15 += kGK15[i].kronrod_w * y;
  }
  g7 *= half;
  k15 *= half;
  const double err = std::max(std::abs(k15 - g7), std::abs(k15) * 1e-16);
  return Panel{a, b, k15, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    throw DomainError("integrate: need a <= b");
  }

  auto worse = [](const Panel& p, const Panel& q) {
    if (p.err != q.err) return p.err < q.err;
    return p.a > q.a;  // deterministic tie-break
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> active(worse);
  std::vector<Panel> done;

  active.push(evaluate_panel(f, a, b));
  int panels = 1;
  double total = active.top().value;
  double total_err = active.top().err;

  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (panels >= opts.max_panels) {
      const Panel worst = active.top();
      std::ostringstream msg;
      msg << "integrate: panel budget " << opts.max_panels
          << " exhausted; worst interval [" << worst.a << ", " << worst.b
          << "] err=" << worst.err << " total=" << total << " total_err=" << total_err;
      throw NumericError(msg.str());
    }
    Panel worst = active.top();
    active.pop();
    const double w = worst.b - worst.a;
    if (w <= std::abs(worst.a) * 1e-15 + 1e-300) {  // cannot split further
      total_err -= worst.err;
      worst.err = 0.0;
      done.push_back(worst);
      if (active.empty()) break;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
    ++panels;
  }

  // Deterministic final accumulation, left to right.
  while (!active.empty()) {
    done.push_back(active.top());
    active.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  double value = 0.0, err = 0.0;
  for (const Panel& p : done) {
    value += p.value;
    err += p.err;
  }
  return {value, err, panels};
}

// ---------------------------------------------------------------------------
// Log domain

namespace {

struct LogPanel {
  double a, b;
  double log_k15;  // log of the K15 estimate of the panel mass
  double err;      // |log K15 - log G7|, the panel's relative error
  double bound;    // upper bound on log(panel mass): max h seen + log(len)
};

LogPanel evaluate_log_panel(const std::function<double(double)>& h, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double hmax = std::max(h(a), h(b));

  double log_g7 = -kInf, log_k15 = -kInf;
  {
    const double v = h(mid);
    hmax = std::max(hmax, v);
    log_g7 = logsumexp2(log_g7, std::log(kGK15[0].gauss_w) + v);
    log_k15 = logsumexp2(log_k15, std::log(kGK15[0].kronrod_w) + v);
  }
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i].x;
    for (const double x : {mid + dx, mid - dx}) {
      const double v = h(x);
      hmax = std::max(hmax, v);
      if (kGK15[i].gauss_w > 0.0) log_g7 = logsumexp2(log_g7, std::log(kGK15[i].gauss_w) + v);
      log_k15 = logsumexp2(log_k15, std::log(kGK15[i].kronrod_w) + v);
    }
  }
  const double log_half = std::log(half);
  log_g7 += log_half;
  log_k15 += log_half;
  double err;
  if (log_k15 == -kInf && log_g7 == -kInf)
    err = 0.0;
  else if (log_k15 == -kInf || log_g7 == -kInf)
    err = 1.0;
  else
    err = std::abs(log_k15 - log_g7);
  return LogPanel{a, b, log_k15, err, hmax + std::log(b - a)};
}

}  // namespace

LogQuadratureResult integrate_log(const std::function<double(double)>& h, double a, double b,
                                  const QuadratureOptions& opts) {
  if (!(a < b)) {
    if (a == b) return {-kInf, 0.0, 0};
    throw DomainError("integrate_log: need a <= b");
  }

  std::vector<LogPanel> panels;
  panels.push_back(evaluate_log_panel(h, a, b));
  int evaluated = 1;

  auto total_log = [&panels]() {
    double m = -kInf;
    for (const LogPanel& p : panels) m = std::max(m, p.log_k15);
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (const LogPanel& p : panels) s += std::exp(p.log_k15 - m);
    return m + std::log(s);
  };

  for (;;) {
    const double logI = total_log();
    // Weighted relative error and the worst offender in one sweep. Panels
    // whose upper mass bound sits 46 log-units below the total are provably
    // negligible; panels that quadrature sees as empty but whose bound is
    // still plausible contribute their bound pessimistically.
    double err = 0.0;
    int worst = -1;
    double worst_key = -kInf;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const LogPanel& p = panels[i];
      if (logI != -kInf && p.bound < logI - 46.0) continue;
      double contribution, key;
      if (p.log_k15 == -kInf) {
        if (p.bound == -kInf) continue;  // truly dead interval
        contribution = (logI == -kInf) ? 1.0 : std::exp(p.bound - logI);
        key = p.bound;
      } else {
        contribution = (logI == -kInf) ? p.err : std::exp(p.log_k15 - logI) * p.err;
        key = p.log_k15 + std::log(p.err + 1e-300);
      }
      err += contribution;
      if (key > worst_key) {
        worst_key = key;
        worst = static_cast<int>(i);
      }
    }
    if (err <= opts.rel_tol || worst < 0) return {logI, err, evaluated};

    if (evaluated >= opts.max_panels) {
      const LogPanel& p = panels[static_cast<std::size_t>(worst)];
      std::ostringstream msg;
      msg << "integrate_log: panel budget " << opts.max_panels
          << " exhausted; worst interval [" << p.a << ", " << p.b << "] err=" << p.err
          << " log_total=" << logI;
      throw NumericError(msg.str());
    }

    LogPanel split = panels[static_cast<std::size_t>(worst)];
    const double w = split.b - split.a;
    if (w <= std::abs(split.a) * 1e-15 + 1e-300) {
      panels[static_cast<std::size_t>(worst)].err = 0.0;  // width exhausted, accept
      continue;
    }
    const double mid = 0.5 * (split.a + split.b);
    LogPanel left = evaluate_log_panel(h, split.a, mid);
    LogPanel right = evaluate_log_panel(h, mid, split.b);
    panels[static_cast<std::size_t>(worst)] = left;
    panels.push_back(right);
    ++evaluated;
  }
}

}  // namespace haarblocks
