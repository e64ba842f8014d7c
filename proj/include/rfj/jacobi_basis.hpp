// Jacobi polynomial families and their weights.
//
// Three bases are provided, all built from one classical three-term
// recurrence table:
//   orthonormal_p  p_n^{(γ,δ)}(y)      on [-1, 1], orthonormal w.r.t. ρ^{(γ,δ)}
//   weighted_u     u_n^{(1/2,-1/2)}(y) on [-1, 1], gamma-prefactor times the
//                  classical P_n^{(1/2,-1/2)}
//   modified_q     q_n^{(γ,δ)}(t)      on [0, 1], orthonormal w.r.t. σ^{(γ,δ)}
//
// ρ^{(γ,δ)}(y) = (1-y)^γ (1+y)^δ and σ^{(γ,δ)}(t) = (1-t)^γ t^δ.

#ifndef RFJ_JACOBI_BASIS_HPP
#define RFJ_JACOBI_BASIS_HPP

#include <string_view>

#include <Eigen/Dense>

namespace rfj {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr Interval kSymmetricInterval{-1.0, 1.0};
inline constexpr Interval kUnitInterval{0.0, 1.0};

/// Exponent pair (γ, δ) of a Jacobi family. Both must exceed -1.
class JacobiParams {
 public:
  JacobiParams(double gamma, double delta);

  static JacobiParams legendre() { return {0.0, 0.0}; }
  static JacobiParams chebyshev_fourth() { return {0.5, -0.5}; }

  double gamma() const { return gamma_; }
  double delta() const { return delta_; }

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;

 private:
  double gamma_;
  double delta_;
};

/// Exponent pair (η, τ) of an integral weight. Both must be nonnegative so
/// the weight stays bounded on the closed interval.
class WeightParams {
 public:
  WeightParams(double eta, double tau);

  static WeightParams unit() { return {0.0, 0.0}; }

  double eta() const { return eta_; }
  double tau() const { return tau_; }
  JacobiParams as_jacobi() const { return {eta_, tau_}; }

  friend bool operator==(const WeightParams&, const WeightParams&) = default;

 private:
  double eta_;
  double tau_;
};

enum class BasisKind { orthonormal_p, weighted_u, modified_q };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

/// Domain of evaluation for a basis kind.
Interval basis_domain(BasisKind kind);

/// Natural log of Γ(x) for x > 0.
double log_gamma(double x);

/// Classical Jacobi recurrence
///   P_0 = 1,  P_n(x) = (lead_n x + shift_n) P_{n-1}(x) - lag_n P_{n-2}(x),
/// together with the squared norms h_n = ∫ P_n² ρ over [-1, 1].
class RecurrenceTable {
 public:
  RecurrenceTable(JacobiParams params, int n_max);

  const JacobiParams& params() const { return params_; }
  int n_max() const { return static_cast<int>(norms_.size()) - 1; }

  const Eigen::ArrayXd& lead() const { return lead_; }
  const Eigen::ArrayXd& shift() const { return shift_; }
  const Eigen::ArrayXd& lag() const { return lag_; }
  const Eigen::ArrayXd& norms() const { return norms_; }

  /// Diagonal (size N) and off-diagonal (size N-1) of the symmetric Jacobi
  /// matrix of the orthonormal recurrence. Requires N <= n_max().
  Eigen::VectorXd jacobi_diagonal(int N) const;
  Eigen::VectorXd jacobi_offdiagonal(int N) const;

  /// Classical values P_0..P_n at each point; rows are points, columns degrees.
  template <typename Derived>
  Eigen::ArrayXXd classical(const Eigen::ArrayBase<Derived>& x, int n) const;

  /// Orthonormal values p_k = P_k / sqrt(h_k), k = 0..n.
  template <typename Derived>
  Eigen::ArrayXXd orthonormal(const Eigen::ArrayBase<Derived>& x, int n) const;

  double classical(int n, double x) const;
  double orthonormal(int n, double x) const;

 private:
  void check_degree(int n) const;

  JacobiParams params_;
  Eigen::ArrayXd lead_;
  Eigen::ArrayXd shift_;
  Eigen::ArrayXd lag_;
  Eigen::ArrayXd norms_;
  Eigen::ArrayXd inv_sqrt_norms_;
};

RecurrenceTable recurrence_table(JacobiParams params, int n_max);

/// Prefactor [(2n+1) Γ(n+1)² / (2 Γ(n+3/2) Γ(n+1/2))]^{1/2} of u_n.
double weighted_u_prefactor(int n);

double eval_p(JacobiParams params, int n, double y);
double eval_u(int n, double y);
double eval_q(JacobiParams params, int n, double t);

double weight_rho(JacobiParams params, double y);
double weight_sigma(JacobiParams params, double t);

/// Pointwise weight on a path interval: ρ on [-1, 1], σ on [0, 1].
double path_weight(const WeightParams& weight, const Interval& domain, double t);

/// A basis of one kind, tabulated up to a fixed degree.
class JacobiBasis {
 public:
  JacobiBasis(BasisKind kind, JacobiParams params, int n_max);

  BasisKind kind() const { return kind_; }
  const JacobiParams& params() const { return table_.params(); }
  int n_max() const { return table_.n_max(); }
  Interval domain() const { return basis_domain(kind_); }
  const RecurrenceTable& table() const { return table_; }

  double operator()(int n, double x) const;

  /// Values of degrees 0..n at each point; rows points, columns degrees.
  Eigen::MatrixXd values(const Eigen::Ref<const Eigen::VectorXd>& x, int n) const;
  Eigen::MatrixXd values(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return values(x, n_max());
  }

  /// Weight the coefficients of this basis are computed against.
  double coefficient_weight(double x) const;

 private:
  BasisKind kind_;
  RecurrenceTable table_;
  Eigen::ArrayXd scale_;
};

// ---------------------------------------------------------------------------

template <typename Derived>
Eigen::ArrayXXd RecurrenceTable::classical(const Eigen::ArrayBase<Derived>& x,
                                           int n) const {
  check_degree(n);
  const Eigen::ArrayXd xs = x;
  Eigen::ArrayXXd out(xs.size(), n + 1);
  out.col(0).setOnes();
  if (n >= 1) out.col(1) = lead_(1) * xs + shift_(1);
  for (int k = 2; k <= n; ++k) {
    out.col(k) = (lead_(k) * xs + shift_(k)) * out.col(k - 1) - lag_(k) * out.col(k - 2);
  }
  return out;
}

template <typename Derived>
Eigen::ArrayXXd RecurrenceTable::orthonormal(const Eigen::ArrayBase<Derived>& x,
                                             int n) const {
  Eigen::ArrayXXd out = classical(x, n);
  out.rowwise() *= inv_sqrt_norms_.head(n + 1).transpose();
  return out;
}

}  // namespace rfj

#endif  // RFJ_JACOBI_BASIS_HPP
