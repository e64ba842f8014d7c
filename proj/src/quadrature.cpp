#include "rfj/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

namespace rfj {

namespace {

constexpr int kEigenvectorWeightLimit = 128;

}  // namespace

GaussJacobiRule build_rule(JacobiParams params, int N, RuleWeights method) {
  if (N < 1) throw std::invalid_argument("build_rule: need at least one node");
  const RecurrenceTable table(params, N);
  const Eigen::VectorXd diag = table.jacobi_diagonal(N);
  const Eigen::VectorXd off = table.jacobi_offdiagonal(N);
  const double mass = table.norms()(0);

  if (method == RuleWeights::automatic) {
    method = N <= kEigenvectorWeightLimit ? RuleWeights::eigenvector : RuleWeights::christoffel;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off,
                                method == RuleWeights::eigenvector ? Eigen::ComputeEigenvectors
                                                                   : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("build_rule: tridiagonal eigensolver did not converge (N = " +
                       std::to_string(N) + ")");
  }

  GaussJacobiRule rule{params, kSymmetricInterval, solver.eigenvalues(), Eigen::VectorXd(N)};
  if (method == RuleWeights::eigenvector) {
    rule.weights = mass * solver.eigenvectors().row(0).transpose().array().square();
  } else {
    const Eigen::ArrayXXd p = table.orthonormal(rule.nodes.array(), N - 1);
    rule.weights = p.square().rowwise().sum().inverse().matrix();
  }

  for (int i = 0; i < N; ++i) {
    const bool inside = rule.nodes(i) > -1.0 && rule.nodes(i) < 1.0;
    const bool ordered = i == 0 || rule.nodes(i) > rule.nodes(i - 1);
    if (!inside || !ordered || !(rule.weights(i) > 0.0)) {
      throw NumericError("build_rule: degenerate rule at N = " + std::to_string(N));
    }
  }
  return rule;
}

GaussJacobiRule to_unit_interval(const GaussJacobiRule& rule) {
  if (rule.domain != kSymmetricInterval) {
    throw std::invalid_argument("to_unit_interval: rule is not on [-1, 1]");
  }
  const double scale =
      std::exp(-(rule.params.gamma() + rule.params.delta() + 1.0) * std::numbers::ln2);
  GaussJacobiRule out = rule;
  out.domain = kUnitInterval;
  out.nodes = 0.5 * (rule.nodes.array() + 1.0);
  out.weights = scale * rule.weights;
  return out;
}

GaussJacobiRule composite_rule(JacobiParams params, std::span<const double> breakpoints,
                               int nodes) {
  std::vector<double> cuts{-1.0};
  for (const double b : breakpoints) {
    if (!(b > -1.0 && b < 1.0)) throw std::invalid_argument("composite_rule: breakpoint outside (-1, 1)");
    cuts.push_back(b);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(1.0);
  if (cuts.size() == 2) return build_rule(params, nodes);

  const double g = params.gamma();
  const double d = params.delta();
  std::vector<double> x;
  std::vector<double> w;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double a = cuts[piece];
    const double b = cuts[piece + 1];
    const double half = 0.5 * (b - a);
    const bool left = piece == 0;
    const bool right = piece + 2 == cuts.size();
    // Base rule carries the singular factor of ρ at an outer endpoint.
    const GaussJacobiRule base = build_rule(right ? JacobiParams(g, 0.0)
                                            : left ? JacobiParams(0.0, d)
                                                   : JacobiParams::legendre(),
                                            nodes);
    const double scale = right ? std::pow(half, g + 1.0) : left ? std::pow(half, d + 1.0) : half;
    for (int i = 0; i < nodes; ++i) {
      const double y = a + half * (base.nodes(i) + 1.0);
      double rest = 1.0;
      if (!right) rest *= std::pow(1.0 - y, g);
      if (!left) rest *= std::pow(1.0 + y, d);
      x.push_back(y);
      w.push_back(scale * base.weights(i) * rest);
    }
  }
  GaussJacobiRule rule{params, kSymmetricInterval, Eigen::Map<Eigen::VectorXd>(x.data(), x.size()),
                       Eigen::Map<Eigen::VectorXd>(w.data(), w.size())};
  return rule;
}

GaussJacobiRule legendre_rule(const Interval& domain, int N) {
  GaussJacobiRule rule = build_rule(JacobiParams::legendre(), N);
  const double half = 0.5 * domain.length();
  rule.domain = domain;
  rule.nodes = (domain.lo + half * (rule.nodes.array() + 1.0)).matrix();
  rule.weights *= half;
  return rule;
}

int default_node_count(int n_max) { return std::max(4 * n_max, 200); }

SeriesExpansion expand(const TestFunction& f, BasisKind basis, JacobiParams params, int n_max,
                       int nodes) {
  if (n_max < 0) throw std::invalid_argument("expand: n_max must be >= 0");
  if (nodes == 0) nodes = default_node_count(n_max);
  if (nodes < n_max + 1) throw std::invalid_argument("expand: need at least n_max + 1 nodes");
  const JacobiBasis phi(basis, params, n_max);
  if (!(f.domain == phi.domain())) {
    throw std::invalid_argument("expand: function '" + f.id + "' is not defined on the " +
                                std::string(to_string(basis)) + " domain");
  }

  std::vector<double> cuts;
  for (const double b : f.breakpoints) {
    const double y = basis == BasisKind::modified_q ? 2.0 * b - 1.0 : b;
    if (y > -1.0 && y < 1.0) cuts.push_back(y);
  }
  GaussJacobiRule rule = composite_rule(params, cuts, nodes);
  if (basis == BasisKind::modified_q) rule = to_unit_interval(rule);
  nodes = rule.size();

  Eigen::VectorXd weighted_f(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double value = f(rule.nodes(i));
    if (!std::isfinite(value)) throw std::domain_error("expand: non-finite function value");
    weighted_f(i) = rule.weights(i) * value;
  }
  SeriesExpansion out{basis, params, phi.values(rule.nodes).transpose() * weighted_f, f.id};
  return out;
}

double expansion_refinement_gap(const TestFunction& f, BasisKind basis, JacobiParams params,
                                int n_max, int nodes) {
  if (nodes == 0) nodes = default_node_count(n_max);
  const SeriesExpansion coarse = expand(f, basis, params, n_max, nodes);
  const SeriesExpansion fine = expand(f, basis, params, n_max, 2 * nodes);
  return (coarse.coefficients - fine.coefficients).cwiseAbs().maxCoeff();
}

Eigen::VectorXd reconstruct(const SeriesExpansion& expansion, int n,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (n < 0 || n > expansion.n_max()) throw std::out_of_range("reconstruct: degree out of range");
  const JacobiBasis phi(expansion.basis, expansion.params, n);
  return phi.values(x) * expansion.coefficients.head(n + 1);
}

}  // namespace rfj
