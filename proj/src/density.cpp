#include "haarblocks/density.hpp"

#include "haarblocks/quadrature.hpp"
#include "haarblocks/special.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace haarblocks {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LogDensityValue LogDensityValue::out_of_support() { return LogDensityValue{-kInf, false}; }

double log_multigamma(int m, double x) {
  if (m < 1) throw DimensionError("log_multigamma: m must be >= 1");
  if (!(x > 0.5 * (m - 1))) {
    std::ostringstream msg;
    msg << "log_multigamma: x=" << x << " is in the pole region (need x > " << 0.5 * (m - 1)
        << " for m=" << m << ")";
    throw DomainError(msg.str());
  }
  double sum = 0.25 * m * (m - 1) * std::log(M_PI);
  for (int i = 0; i < m; ++i) sum += log_gamma(x - 0.5 * i);
  return sum;
}

double log_det_gap(const MatrixBlock& B, std::int64_t N) {
  const SpectralSummary s = gram_spectrum(B);
  const double Nd = static_cast<double>(N);
  if (!(s.op_norm < Nd)) {
    std::ostringstream msg;
    msg << "log_det_gap: ||BB^T||_op = " << s.op_norm << " >= N = " << N
        << " (outside the support)";
    throw DomainError(msg.str());
  }
  double sum = 0.0;
  for (double lambda : s.eigenvalues) sum += std::log1p(-lambda / Nd);
  return sum;
}

namespace detail {

double gamma_quotient_residual(const BlockDims& dims) {
  const double N = static_cast<double>(dims.N);
  const double h = 0.5 * dims.k;
  double sum = 0.0;
  for (int i = 1; i <= dims.m; ++i) {
    const double x = 0.5 * (N - dims.k - (i - 1));
    if (x >= 16.0) {
      // lgamma(x+h) - lgamma(x) - h log(N/2), with the h log(x+h) and
      // h log(N/2) pieces folded together: x + h = (N - i + 1)/2, so their
      // difference is h log1p((1-i)/N).
      sum += (x - 0.5) * std::log1p(h / x) - h + h * std::log1p((1.0 - i) / N) +
             lgamma_stirling_tail(x + h) - lgamma_stirling_tail(x);
    } else {
      // x is small, so the residual term is O(1) and direct evaluation is safe.
      sum += lgamma_diff(x, h) - h * std::log(0.5 * N);
    }
  }
  return sum;
}

double logdet_minus_gaussian(const SpectralSummary& spectrum, const BlockDims& dims) {
  const double N = static_cast<double>(dims.N);
  const double C_N = 0.5 * (N - dims.k - dims.m - 1);
  double sum = 0.0;
  for (double lambda : spectrum.eigenvalues)
    sum += C_N * std::log1p(-lambda / N) + 0.5 * lambda;
  return sum;
}

}  // namespace detail

namespace {

void check_shape(const MatrixBlock& A, const BlockDims& dims, const char* who) {
  if (A.rows != dims.m || A.cols != dims.k) {
    std::ostringstream msg;
    msg << who << ": block is " << A.rows << "x" << A.cols << " but dims say " << dims.m << "x"
        << dims.k;
    throw DimensionError(msg.str());
  }
}

}  // namespace

LogDensityValue log_block_density(const MatrixBlock& A, const BlockDims& dims) {
  check_shape(A, dims, "log_block_density");
  const SpectralSummary s = gram_spectrum(A);
  if (!(s.op_norm < 1.0)) return LogDensityValue::out_of_support();

  const double N = static_cast<double>(dims.N);
  const double mk = static_cast<double>(dims.p());
  const double C_N = 0.5 * (N - dims.k - dims.m - 1);
  double log_det = 0.0;
  for (double sigma : s.eigenvalues) log_det += std::log1p(-sigma);

  // log Gamma_m(N/2) - log Gamma_m((N-k)/2) - (mk/2) log pi
  //   = (mk/2) log(N/(2 pi)) + residual, evaluated cancellation-free.
  const double log_value = 0.5 * mk * std::log(N / (2.0 * M_PI)) +
                           detail::gamma_quotient_residual(dims) + C_N * log_det;
  return LogDensityValue{log_value, true};
}

LogDensityValue log_scaled_density(const MatrixBlock& B, const BlockDims& dims) {
  check_shape(B, dims, "log_scaled_density");
  const SpectralSummary s = gram_spectrum(B);
  const double N = static_cast<double>(dims.N);
  if (!(s.op_norm < N)) return LogDensityValue::out_of_support();

  // -(mk/2) log N + log f_N(B / sqrt(N)); the (mk/2) log N pieces cancel
  // symbolically, leaving -(mk/2) log(2 pi) plus residual and log-det parts.
  const double mk = static_cast<double>(dims.p());
  const double C_N = 0.5 * (N - dims.k - dims.m - 1);
  double log_det = 0.0;
  for (double lambda : s.eigenvalues) log_det += std::log1p(-lambda / N);

  const double log_value = -0.5 * mk * std::log(2.0 * M_PI) +
                           detail::gamma_quotient_residual(dims) + C_N * log_det;
  return LogDensityValue{log_value, true};
}

double log_gaussian_density(const MatrixBlock& B) {
  B.validate();
  const double mk = static_cast<double>(B.rows) * B.cols;
  return -0.5 * mk * std::log(2.0 * M_PI) - 0.5 * frobenius_sq(B);
}

double log_density_ratio(const MatrixBlock& B, const BlockDims& dims) {
  check_shape(B, dims, "log_density_ratio");
  const SpectralSummary s = gram_spectrum(B);
  const double N = static_cast<double>(dims.N);
  if (!(s.op_norm < N)) {
    std::ostringstream msg;
    msg << "log_density_ratio: B outside the support of g_N, ||BB^T||_op = " << s.op_norm
        << " >= N = " << dims.N;
    throw DomainError(msg.str());
  }
  return detail::gamma_quotient_residual(dims) + detail::logdet_minus_gaussian(s, dims);
}

// ---------------------------------------------------------------------------
// Marginal tail by quadrature

namespace {

// log P(entry > x0) for the unscaled (1,1) entry with density
// c_N (1-x^2)^((N-3)/2) on (-1, 1), for x0 in (0, 1).
double log_tail_positive(double x0, std::int64_t N) {
  const double Nd = static_cast<double>(N);
  const double kappa = 0.5 * (Nd - 3.0);
  // log c_N = lgamma(N/2) - lgamma((N-1)/2) - log(pi)/2
  const double log_c = lgamma_diff(0.5 * (Nd - 1.0), 0.5) - 0.5 * std::log(M_PI);

  if (kappa == 0.0) return log_c + std::log1p(-x0);  // N = 3: uniform density

  QuadratureOptions opts;
  opts.rel_tol = 1e-9;
  opts.max_panels = 20000;

  // kappa log(1 - x^2) must be evaluated with small ABSOLUTE error near the
  // peak: log1p(-x*x) keeps the error at kappa * eps * x^2/(1-x^2), while the
  // split log(1-x) + log1p(x) form is the accurate one approaching the
  // boundary (1-x is exact there by Sterbenz).
  auto h_x = [kappa](double x) {
    if (x >= 1.0) return -kInf;
    if (x <= 0.5) return kappa * std::log1p(-x * x);
    return kappa * (std::log(1.0 - x) + std::log1p(x));
  };
  // Boundary substitution x = 1 - u^2/N: 1 - x^2 = (u^2/N)(2 - u^2/N) and
  // dx = (2u/N) du. Resolves the (1-x^2)^kappa spike against the endpoint.
  auto h_u = [kappa, Nd](double u) {
    if (!(u > 0.0)) return -kInf;
    const double s = u * u / Nd;
    if (!(s < 2.0)) return -kInf;
    return kappa * (std::log(s) + std::log(2.0 - s)) + std::log(2.0 * u / Nd);
  };

  double log_integral;
  if (kappa * (1.0 - x0) <= 200.0) {
    // The whole range sits in the boundary zone.
    const double u_hi = std::sqrt(Nd * (1.0 - x0));
    log_integral = integrate_log(h_u, 0.0, u_hi, opts).log_value;
  } else {
    const double xb = 1.0 - 200.0 / kappa;
    const double main = integrate_log(h_x, x0, xb, opts).log_value;
    const double edge = integrate_log(h_u, 0.0, std::sqrt(Nd * (1.0 - xb)), opts).log_value;
    const double m = std::max(main, edge);
    log_integral = (m == -kInf) ? -kInf : m + std::log(std::exp(main - m) + std::exp(edge - m));
  }
  return log_c + log_integral;
}

}  // namespace

double marginal_tail(const TailQuery& q, std::int64_t N) {
  if (N < 3) throw DimensionError("marginal_tail: need N >= 3");
  if (!std::isfinite(q.t)) throw DomainError("marginal_tail: threshold must be finite");

  double x0;
  switch (q.scaling) {
    case TailScaling::unscaled:
      x0 = q.t;
      break;
    case TailScaling::sqrtN:
      x0 = q.t / std::sqrt(static_cast<double>(N));
      break;
    case TailScaling::betaN: {
      if (!(q.beta_exponent > 0.0 && q.beta_exponent < 0.5))
        throw DomainError("marginal_tail: betaN exponent must lie in (0, 1/2)");
      x0 = q.t * std::pow(static_cast<double>(N), -q.beta_exponent);
      break;
    }
    default:
      throw DomainError("marginal_tail: unknown scaling");
  }

  if (x0 >= 1.0) return -kInf;      // P = 0
  if (x0 <= -1.0) return 0.0;       // P = 1
  if (x0 == 0.0) return -std::log(2.0);  // exact by symmetry
  if (x0 > 0.0) return log_tail_positive(x0, N);
  // P(x > x0) = 1 - P(x > -x0) by symmetry of the density.
  return std::log1p(-std::exp(log_tail_positive(-x0, N)));
}

}  // namespace haarblocks
