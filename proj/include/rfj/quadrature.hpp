// Gauss–Jacobi rules and deterministic Fourier–Jacobi coefficients.

#ifndef RFJ_QUADRATURE_HPP
#define RFJ_QUADRATURE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "rfj/function_lab.hpp"
#include "rfj/jacobi_basis.hpp"

namespace rfj {

/// Raised when the tridiagonal eigensolver does not converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N-point Gauss rule for ∫ g ρ^{(γ,δ)} on [-1, 1], or, after
/// to_unit_interval(), for ∫ g σ^{(γ,δ)} on [0, 1].
struct GaussJacobiRule {
  JacobiParams params;
  Interval domain;
  Eigen::VectorXd nodes;    // strictly increasing, interior
  Eigen::VectorXd weights;  // positive

  int size() const { return static_cast<int>(nodes.size()); }
};

enum class RuleWeights {
  automatic,    // eigenvector for small N, christoffel above
  eigenvector,  // squared first components of the Jacobi-matrix eigenvectors
  christoffel,  // 1 / Σ_{k<N} p_k(x_i)²
};

GaussJacobiRule build_rule(JacobiParams params, int N,
                           RuleWeights method = RuleWeights::automatic);

/// Affine pullback x ↦ (x+1)/2 with weights scaled by 2^{-(γ+δ+1)}.
GaussJacobiRule to_unit_interval(const GaussJacobiRule& rule);

/// Σ w_i g(x_i); the Jacobi weight is implicit in the rule.
template <typename F>
double integrate(const GaussJacobiRule& rule, F&& g) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double value = g(rule.nodes(i));
    if (!std::isfinite(value)) {
      throw std::domain_error("integrate: integrand not finite at node " +
                              std::to_string(rule.nodes(i)));
    }
    sum += rule.weights(i) * value;
  }
  return sum;
}

/// Rule for ∫ g ρ^{(γ,δ)} on [-1, 1] split at interior breakpoints, with
/// `nodes` points per piece: Gauss–Jacobi (γ, 0) on the piece ending at 1,
/// (0, δ) on the piece starting at -1, Legendre times ρ in between. Accurate
/// for g that is smooth on each piece.
GaussJacobiRule composite_rule(JacobiParams params, std::span<const double> breakpoints, int nodes);

/// Gauss–Legendre rule mapped onto an arbitrary interval (plain dt measure).
GaussJacobiRule legendre_rule(const Interval& domain, int N);

/// Deterministic Fourier–Jacobi coefficients of a test function.
struct SeriesExpansion {
  BasisKind basis;
  JacobiParams params;
  Eigen::VectorXd coefficients;
  std::string source_function;

  int n_max() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Default node count for non-polynomial integrands: max(4 n_max, 200).
int default_node_count(int n_max);

/// a_n (orthonormal_p), b_n (weighted_u) or c_n (modified_q) for n = 0..n_max.
/// nodes == 0 selects default_node_count(n_max). Functions with breakpoints
/// use composite_rule with that many nodes per piece.
SeriesExpansion expand(const TestFunction& f, BasisKind basis, JacobiParams params, int n_max,
                       int nodes = 0);

/// Sup-norm change of the coefficient vector when the node count doubles.
double expansion_refinement_gap(const TestFunction& f, BasisKind basis, JacobiParams params,
                                int n_max, int nodes = 0);

/// Σ_{k<=n} coefficients_k φ_k(x) at each point.
Eigen::VectorXd reconstruct(const SeriesExpansion& expansion, int n,
                            const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace rfj

#endif  // RFJ_QUADRATURE_HPP
