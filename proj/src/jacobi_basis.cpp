#include "rfj/jacobi_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rfj {

namespace {

void require_point(const Interval& domain, double x, const char* what) {
  if (!(x >= domain.lo && x <= domain.hi)) {
    throw std::domain_error(std::string(what) + ": point " + std::to_string(x) +
                            " outside [" + std::to_string(domain.lo) + ", " +
                            std::to_string(domain.hi) + "]");
  }
}

// (1-y)^a (1+y)^b style products; a zero base with a negative exponent is a
// singular endpoint and is rejected.
double endpoint_power(double base, double exponent, const char* what) {
  if (base == 0.0 && exponent < 0.0) {
    throw std::domain_error(std::string(what) + ": singular endpoint with negative exponent");
  }
  return std::pow(base, exponent);
}

// log h_n for the classical polynomials.
double log_norm(double a, double b, int n) {
  const double ab = a + b;
  if (n == 0) {
    return (ab + 1.0) * std::numbers::ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) -
           log_gamma(ab + 2.0);
  }
  const double k = n;
  return (ab + 1.0) * std::numbers::ln2 + log_gamma(k + a + 1.0) + log_gamma(k + b + 1.0) -
         std::log(2.0 * k + ab + 1.0) - log_gamma(k + ab + 1.0) - log_gamma(k + 1.0);
}

}  // namespace

JacobiParams::JacobiParams(double gamma, double delta) : gamma_(gamma), delta_(delta) {
  if (!(gamma > -1.0) || !(delta > -1.0) || !std::isfinite(gamma) || !std::isfinite(delta)) {
    throw std::invalid_argument("JacobiParams: need gamma > -1 and delta > -1, got (" +
                                std::to_string(gamma) + ", " + std::to_string(delta) + ")");
  }
}

WeightParams::WeightParams(double eta, double tau) : eta_(eta), tau_(tau) {
  if (!(eta >= 0.0) || !(tau >= 0.0) || !std::isfinite(eta) || !std::isfinite(tau)) {
    throw std::invalid_argument("WeightParams: need eta >= 0 and tau >= 0, got (" +
                                std::to_string(eta) + ", " + std::to_string(tau) + ")");
  }
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::orthonormal_p: return "orthonormal_p";
    case BasisKind::weighted_u: return "weighted_u";
    case BasisKind::modified_q: return "modified_q";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(std::string_view name) {
  if (name == "orthonormal_p") return BasisKind::orthonormal_p;
  if (name == "weighted_u") return BasisKind::weighted_u;
  if (name == "modified_q") return BasisKind::modified_q;
  throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

Interval basis_domain(BasisKind kind) {
  return kind == BasisKind::modified_q ? kUnitInterval : kSymmetricInterval;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  int sign = 1;
  const double value = ::lgamma_r(x, &sign);
  if (sign < 0) throw std::domain_error("log_gamma: negative gamma value");
  return value;
}

RecurrenceTable::RecurrenceTable(JacobiParams params, int n_max) : params_(params) {
  if (n_max < 0) throw std::invalid_argument("RecurrenceTable: n_max must be >= 0");
  const double a = params.gamma();
  const double b = params.delta();
  const double ab = a + b;

  lead_ = Eigen::ArrayXd::Zero(n_max + 1);
  shift_ = Eigen::ArrayXd::Zero(n_max + 1);
  lag_ = Eigen::ArrayXd::Zero(n_max + 1);
  norms_.resize(n_max + 1);

  if (n_max >= 1) {
    lead_(1) = 0.5 * (ab + 2.0);
    shift_(1) = 0.5 * (a - b);
  }
  for (int n = 2; n <= n_max; ++n) {
    const double k = n;
    const double s = 2.0 * k + ab;
    const double den = 2.0 * k * (k + ab) * (s - 2.0);
    lead_(n) = (s - 1.0) * s * (s - 2.0) / den;
    shift_(n) = (s - 1.0) * (a * a - b * b) / den;
    lag_(n) = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s / den;
  }
  for (int n = 0; n <= n_max; ++n) {
    norms_(n) = std::exp(log_norm(a, b, n));
    if (!(norms_(n) > 0.0) || !std::isfinite(norms_(n))) {
      throw std::overflow_error("RecurrenceTable: squared norm out of range at degree " +
                                std::to_string(n));
    }
  }
  inv_sqrt_norms_ = norms_.rsqrt();
}

void RecurrenceTable::check_degree(int n) const {
  if (n < 0 || n > n_max()) {
    throw std::out_of_range("degree " + std::to_string(n) + " outside table range [0, " +
                            std::to_string(n_max()) + "]");
  }
}

// Orthonormal recurrence x p_{n-1} = β_n p_n + α_{n-1} p_{n-1} + β_{n-1} p_{n-2}
// read off the classical one: α_{n-1} = -shift_n / lead_n and
// β_n = sqrt(h_n / h_{n-1}) / lead_n.
Eigen::VectorXd RecurrenceTable::jacobi_diagonal(int N) const {
  check_degree(N);
  Eigen::VectorXd diag(N);
  for (int n = 1; n <= N; ++n) diag(n - 1) = -shift_(n) / lead_(n);
  return diag;
}

Eigen::VectorXd RecurrenceTable::jacobi_offdiagonal(int N) const {
  check_degree(N);
  Eigen::VectorXd off(std::max(N - 1, 0));
  for (int n = 1; n < N; ++n) off(n - 1) = std::sqrt(norms_(n) / norms_(n - 1)) / lead_(n);
  return off;
}

double RecurrenceTable::classical(int n, double x) const {
  check_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = lead_(1) * x + shift_(1);
  for (int k = 2; k <= n; ++k) {
    const double next = (lead_(k) * x + shift_(k)) * curr - lag_(k) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

double RecurrenceTable::orthonormal(int n, double x) const {
  return classical(n, x) * inv_sqrt_norms_(n);
}

RecurrenceTable recurrence_table(JacobiParams params, int n_max) {
  return RecurrenceTable(params, n_max);
}

double weighted_u_prefactor(int n) {
  if (n < 0) throw std::invalid_argument("weighted_u_prefactor: negative degree");
  const double k = n;
  const double log_sq = std::log(2.0 * k + 1.0) + 2.0 * log_gamma(k + 1.0) - std::numbers::ln2 -
                        log_gamma(k + 1.5) - log_gamma(k + 0.5);
  return std::exp(0.5 * log_sq);
}

double eval_p(JacobiParams params, int n, double y) {
  require_point(kSymmetricInterval, y, "eval_p");
  return RecurrenceTable(params, n).orthonormal(n, y);
}

double eval_u(int n, double y) {
  require_point(kSymmetricInterval, y, "eval_u");
  return weighted_u_prefactor(n) * RecurrenceTable(JacobiParams::chebyshev_fourth(), n).classical(n, y);
}

double eval_q(JacobiParams params, int n, double t) {
  require_point(kUnitInterval, t, "eval_q");
  const double scale = std::exp(0.5 * (params.gamma() + params.delta() + 1.0) * std::numbers::ln2);
  return scale * RecurrenceTable(params, n).orthonormal(n, 2.0 * t - 1.0);
}

double weight_rho(JacobiParams params, double y) {
  require_point(kSymmetricInterval, y, "weight_rho");
  return endpoint_power(1.0 - y, params.gamma(), "weight_rho") *
         endpoint_power(1.0 + y, params.delta(), "weight_rho");
}

double weight_sigma(JacobiParams params, double t) {
  require_point(kUnitInterval, t, "weight_sigma");
  return endpoint_power(1.0 - t, params.gamma(), "weight_sigma") *
         endpoint_power(t, params.delta(), "weight_sigma");
}

double path_weight(const WeightParams& weight, const Interval& domain, double t) {
  if (domain == kSymmetricInterval) return weight_rho(weight.as_jacobi(), t);
  if (domain == kUnitInterval) return weight_sigma(weight.as_jacobi(), t);
  throw std::invalid_argument("path_weight: paths live on [-1, 1] or [0, 1]");
}

JacobiBasis::JacobiBasis(BasisKind kind, JacobiParams params, int n_max)
    : kind_(kind), table_(params, n_max) {
  scale_.resize(n_max + 1);
  switch (kind) {
    case BasisKind::orthonormal_p:
      scale_ = table_.norms().rsqrt();
      break;
    case BasisKind::weighted_u:
      if (!(params == JacobiParams::chebyshev_fourth())) {
        throw std::invalid_argument("weighted_u basis requires (gamma, delta) = (1/2, -1/2)");
      }
      for (int n = 0; n <= n_max; ++n) scale_(n) = weighted_u_prefactor(n);
      break;
    case BasisKind::modified_q: {
      const double lift =
          std::exp(0.5 * (params.gamma() + params.delta() + 1.0) * std::numbers::ln2);
      scale_ = lift * table_.norms().rsqrt();
      break;
    }
  }
}

double JacobiBasis::operator()(int n, double x) const {
  require_point(domain(), x, "JacobiBasis");
  const double y = kind_ == BasisKind::modified_q ? 2.0 * x - 1.0 : x;
  return scale_(n) * table_.classical(n, y);
}

Eigen::MatrixXd JacobiBasis::values(const Eigen::Ref<const Eigen::VectorXd>& x, int n) const {
  const Interval dom = domain();
  if (x.size() > 0 && (x.minCoeff() < dom.lo || x.maxCoeff() > dom.hi)) {
    throw std::domain_error("JacobiBasis::values: point outside the basis domain");
  }
  Eigen::ArrayXd y = x.array();
  if (kind_ == BasisKind::modified_q) y = 2.0 * y - 1.0;
  Eigen::ArrayXXd out = table_.classical(y, n);
  out.rowwise() *= scale_.head(n + 1).transpose();
  return out.matrix();
}

double JacobiBasis::coefficient_weight(double x) const {
  return kind_ == BasisKind::modified_q ? weight_sigma(params(), x) : weight_rho(params(), x);
}

}  // namespace rfj
