// Left-endpoint stochastic integrals ∫ g(t) w(t) dX(t, ω) and the random
// Fourier–Jacobi coefficients A_n, B_n, C_n of a sample path.

#ifndef RFJ_STOCHASTIC_INTEGRAL_HPP
#define RFJ_STOCHASTIC_INTEGRAL_HPP

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <type_traits>

#include <Eigen/Dense>

#include "rfj/function_lab.hpp"
#include "rfj/jacobi_basis.hpp"
#include "rfj/stochastic_paths.hpp"

namespace rfj {

/// Σ_i g(t_i) w(t_i) (X(t_{i+1}) - X(t_i)) with w = ρ^{(η,τ)} on [-1, 1]
/// paths and σ^{(η,τ)} on [0, 1] paths. Itô convention for Wiener paths.
template <typename F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, TestFunction>)
double integrate_path(F&& g, const WeightParams& weight, const SamplePath& path) {
  const PathGrid& grid = path.grid;
  double sum = 0.0;
  for (int i = 0; i < grid.increments(); ++i) {
    const double t = grid.point(i);
    const double value = g(t) * path_weight(weight, grid.interval(), t);
    if (!std::isfinite(value)) throw std::domain_error("integrate_path: integrand not finite");
    sum += value * path.increments(i);
  }
  return sum;
}

/// Checked overload: the function's domain must be the path interval.
double integrate_path(const TestFunction& g, const WeightParams& weight, const SamplePath& path);

/// Design matrix D with D(i, k) = φ_k(t_i) w(t_i) on the left endpoints, so a
/// whole coefficient vector is Dᵀ ΔX and a replica block is Dᵀ [ΔX_1 ... ΔX_R].
class PathIntegrator {
 public:
  PathIntegrator(const JacobiBasis& basis, const WeightParams& weight, const PathGrid& grid);

  const Eigen::MatrixXd& design() const { return design_; }
  const PathGrid& grid() const { return grid_; }
  const WeightParams& weight() const { return weight_; }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& increments) const;
  Eigen::MatrixXd apply_block(const Eigen::Ref<const Eigen::MatrixXd>& increments) const;

 private:
  PathGrid grid_;
  WeightParams weight_;
  Eigen::MatrixXd design_;
};

enum class CoefficientKind { A, B, C };

std::string_view to_string(CoefficientKind kind);
BasisKind basis_for(CoefficientKind kind);

struct PathProvenance {
  StreamKey stream;
  PathGrid grid;
  ProcessKind process;
  double alpha;
};

struct RandomCoefficients {
  CoefficientKind kind;
  JacobiParams params;
  WeightParams weight;
  Eigen::VectorXd values;
  PathProvenance path;

  int n_max() const { return static_cast<int>(values.size()) - 1; }
};

/// A_n = ∫ p_n^{(γ,δ)} ρ^{(η,τ)} dX on a [-1, 1] path.
RandomCoefficients coeff_A(JacobiParams params, const WeightParams& weight, int n_max,
                           const SamplePath& path);

/// B_n = ∫ u_n ρ^{(η,τ)} dX on a [-1, 1] path.
RandomCoefficients coeff_B(const WeightParams& weight, int n_max, const SamplePath& path);

/// C_n = ∫ q_n^{(γ,δ)} σ^{(η,τ)} dW on a [0, 1] Wiener path.
RandomCoefficients coeff_C(JacobiParams params, const WeightParams& weight, int n_max,
                           const SamplePath& path);

}  // namespace rfj

#endif  // RFJ_STOCHASTIC_INTEGRAL_HPP
