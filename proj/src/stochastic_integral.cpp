#include "rfj/stochastic_integral.hpp"

#include <string>

namespace rfj {

double integrate_path(const TestFunction& g, const WeightParams& weight, const SamplePath& path) {
  if (!(g.domain == path.grid.interval())) {
    throw std::invalid_argument("integrate_path: '" + g.id +
                                "' is not defined on the path interval");
  }
  return integrate_path(g.evaluator, weight, path);
}

PathIntegrator::PathIntegrator(const JacobiBasis& basis, const WeightParams& weight,
                               const PathGrid& grid)
    : grid_(grid), weight_(weight) {
  if (!(basis.domain() == grid.interval())) {
    throw std::invalid_argument("PathIntegrator: basis domain differs from the path interval");
  }
  const Eigen::VectorXd t = grid.left_points();
  design_ = basis.values(t);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    design_.row(i) *= path_weight(weight, grid.interval(), t(i));
  }
}

Eigen::VectorXd PathIntegrator::apply(const Eigen::Ref<const Eigen::VectorXd>& increments) const {
  if (increments.size() != design_.rows()) {
    throw std::invalid_argument("PathIntegrator: increment count does not match the grid");
  }
  return design_.transpose() * increments;
}

Eigen::MatrixXd PathIntegrator::apply_block(
    const Eigen::Ref<const Eigen::MatrixXd>& increments) const {
  if (increments.rows() != design_.rows()) {
    throw std::invalid_argument("PathIntegrator: increment count does not match the grid");
  }
  return design_.transpose() * increments;
}

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::A: return "A";
    case CoefficientKind::B: return "B";
    case CoefficientKind::C: return "C";
  }
  return "?";
}

BasisKind basis_for(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::A: return BasisKind::orthonormal_p;
    case CoefficientKind::B: return BasisKind::weighted_u;
    case CoefficientKind::C: return BasisKind::modified_q;
  }
  throw std::invalid_argument("basis_for: unknown coefficient kind");
}

namespace {

RandomCoefficients random_coefficients(CoefficientKind kind, JacobiParams params,
                                       const WeightParams& weight, int n_max,
                                       const SamplePath& path) {
  if (n_max < 0) throw std::invalid_argument("random coefficients: n_max must be >= 0");
  const JacobiBasis basis(basis_for(kind), params, n_max);
  if (!(basis.domain() == path.grid.interval())) {
    throw std::invalid_argument(std::string("coeff_") + std::string(to_string(kind)) +
                                ": path lives on the wrong interval");
  }
  const PathIntegrator integrator(basis, weight, path.grid);
  return {kind, params, weight, integrator.apply(path.increments),
          {path.stream, path.grid, path.process, path.alpha}};
}

}  // namespace

RandomCoefficients coeff_A(JacobiParams params, const WeightParams& weight, int n_max,
                           const SamplePath& path) {
  return random_coefficients(CoefficientKind::A, params, weight, n_max, path);
}

RandomCoefficients coeff_B(const WeightParams& weight, int n_max, const SamplePath& path) {
  return random_coefficients(CoefficientKind::B, JacobiParams::chebyshev_fourth(), weight, n_max,
                             path);
}

RandomCoefficients coeff_C(JacobiParams params, const WeightParams& weight, int n_max,
                           const SamplePath& path) {
  if (path.process != ProcessKind::wiener) {
    throw std::invalid_argument("coeff_C: defined for Wiener paths only");
  }
  return random_coefficients(CoefficientKind::C, params, weight, n_max, path);
}

}  // namespace rfj
