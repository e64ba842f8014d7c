#include "rfj/convergence_diag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rfj/parallel.hpp"

namespace rfj {

int default_thread_count() {
  if (const char* env = std::getenv("RFJ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr int kReplicaBlock = 64;

int max_degree(std::span<const int> n_values) {
  if (n_values.empty()) throw std::invalid_argument("n_values must not be empty");
  for (const int n : n_values) {
    if (n < 0) throw std::invalid_argument("n_values must be nonnegative");
  }
  return *std::max_element(n_values.begin(), n_values.end());
}

void check_reference(const SeriesSetup& setup, std::span<const int> n_values) {
  const int top = max_degree(n_values);
  if (setup.n_ref <= top) {
    throw std::invalid_argument("N_ref = " + std::to_string(setup.n_ref) +
                                " must exceed the largest tested degree " + std::to_string(top));
  }
}

struct Moments {
  double mean;
  double se;
};

Moments mean_and_se(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  const double var = x.size() > 1 ? (x - mean).square().sum() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double exceed_fraction(const Eigen::Ref<const Eigen::ArrayXd>& x, double epsilon) {
  return static_cast<double>((x.abs() > epsilon).count()) / static_cast<double>(x.size());
}

// Row vector of S_n - I (up to sign) across replicas.
Eigen::ArrayXd tail_errors(const Eigen::VectorXd& g, const Eigen::MatrixXd& coeffs, int n) {
  const int top = static_cast<int>(g.size()) - 1;
  const int count = top - n;
  if (count <= 0) return Eigen::ArrayXd::Zero(coeffs.cols());
  return (g.tail(count).transpose() * coeffs.bottomRows(count)).transpose().array();
}

Eigen::VectorXd tail_of(const Eigen::VectorXd& g, int n) {
  Eigen::VectorXd out = g;
  out.head(std::min<Eigen::Index>(n + 1, g.size())).setZero();
  return out;
}

}  // namespace

CoupledEnsemble::CoupledEnsemble(const SeriesSetup& setup)
    : setup_(setup),
      expansion_(expand(setup.function, setup.basis, setup.params, setup.n_ref)),
      basis_(setup.basis, setup.params, setup.n_ref),
      integrator_(basis_, setup.weight, PathGrid(basis_domain(setup.basis), setup.grid_M)),
      norm_rule_(legendre_rule(basis_domain(setup.basis), std::max(4 * setup.n_ref, 512))) {
  if (setup.process == ProcessKind::stable && !(setup.alpha >= 1.0 && setup.alpha <= 2.0)) {
    throw std::invalid_argument("stable index alpha must lie in [1, 2]");
  }
  if (!domain().contains(setup.y)) {
    throw std::domain_error("evaluation point y lies outside the basis domain");
  }
  norm_design_ = basis_.values(norm_rule_.nodes);
  for (Eigen::Index j = 0; j < norm_rule_.nodes.size(); ++j) {
    norm_design_.row(j) *= path_weight(setup.weight, domain(), norm_rule_.nodes(j));
  }
}

Eigen::MatrixXd CoupledEnsemble::random_coefficients(int replicas) const {
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  Eigen::MatrixXd out(setup_.n_ref + 1, replicas);
  const int blocks = (replicas + kReplicaBlock - 1) / kReplicaBlock;
  const int threads = setup_.threads > 0 ? setup_.threads : default_thread_count();
  parallel_for(blocks, threads, [&](int b) {
    const int first = b * kReplicaBlock;
    const int width = std::min(kReplicaBlock, replicas - first);
    Eigen::MatrixXd increments(setup_.grid_M, width);
    sample_increments(setup_.process, grid(), setup_.alpha, setup_.seed,
                      static_cast<std::uint64_t>(first), increments);
    out.middleCols(first, width) = integrator_.apply_block(increments);
  });
  return out;
}

Eigen::VectorXd CoupledEnsemble::weighted_basis_at(double y) const {
  if (!domain().contains(y)) throw std::domain_error("evaluation point outside the basis domain");
  Eigen::VectorXd point(1);
  point(0) = y;
  return expansion_.coefficients.cwiseProduct(basis_.values(point).row(0).transpose());
}

double CoupledEnsemble::weighted_norm_power(const Eigen::Ref<const Eigen::VectorXd>& g,
                                            double p) const {
  const Eigen::ArrayXd values = (norm_design_ * g).array().abs();
  return (norm_rule_.weights.array() * values.pow(p)).sum();
}

ConvergenceReport tail_probability(const SeriesSetup& setup, std::span<const int> n_values,
                                   double epsilon, int replicas) {
  if (replicas < 100) throw std::invalid_argument("tail_probability: need at least 100 replicas");
  if (!(epsilon > 0.0)) throw std::invalid_argument("tail_probability: epsilon must be positive");
  if (setup.basis == BasisKind::modified_q) {
    throw std::invalid_argument("tail_probability: paths live on [-1, 1]; use orthonormal_p or "
                                "weighted_u");
  }
  check_reference(setup, n_values);

  const CoupledEnsemble ensemble(setup);
  const Eigen::MatrixXd coeffs = ensemble.random_coefficients(replicas);
  const Eigen::VectorXd g = ensemble.weighted_basis_at(setup.y);
  const double alpha = setup.process == ProcessKind::wiener ? 2.0 : setup.alpha;

  ConvergenceReport report;
  report.variant = variant_for(setup.basis);
  report.n_values.assign(n_values.begin(), n_values.end());
  report.epsilon = epsilon;
  report.replicas = replicas;
  report.seed = setup.seed;
  report.grid_M = setup.grid_M;
  report.n_ref = setup.n_ref;
  for (const int n : n_values) {
    const double p = exceed_fraction(tail_errors(g, coeffs, n), epsilon);
    report.tail_probs.push_back(p);
    report.tail_se.push_back(binomial_se(p, replicas));
    report.bound_integrals.push_back(ensemble.weighted_norm_power(tail_of(g, n), alpha));
  }
  return report;
}

ConvergenceReport qm_error(const SeriesSetup& setup, std::span<const int> n_values, int replicas) {
  if (setup.process != ProcessKind::wiener) {
    throw std::invalid_argument("qm_error: quadratic mean is defined here for Wiener paths only");
  }
  if (setup.basis != BasisKind::modified_q) {
    throw std::invalid_argument("qm_error: requires the modified_q basis on [0, 1]");
  }
  if (replicas < 2) throw std::invalid_argument("qm_error: need at least 2 replicas");
  check_reference(setup, n_values);

  const CoupledEnsemble ensemble(setup);
  const Eigen::MatrixXd coeffs = ensemble.random_coefficients(replicas);
  const Eigen::VectorXd g = ensemble.weighted_basis_at(setup.y);

  ConvergenceReport report;
  report.variant = SeriesVariant::T;
  report.n_values.assign(n_values.begin(), n_values.end());
  report.replicas = replicas;
  report.seed = setup.seed;
  report.grid_M = setup.grid_M;
  report.n_ref = setup.n_ref;
  for (const int n : n_values) {
    const Moments m = mean_and_se(tail_errors(g, coeffs, n).square());
    report.qm_errors_mc.push_back(m.mean);
    report.qm_se.push_back(m.se);
    report.qm_errors_exact.push_back(ensemble.weighted_norm_power(tail_of(g, n), 2.0));
  }
  return report;
}

double lemma_prefactor(double alpha, double eps_prime) {
  return std::pow(2.0, alpha + 1.0) / ((alpha + 1.0) * std::pow(eps_prime, alpha));
}

LemmaReport lemma1_bound_check(const SeriesSetup& setup, std::span<const int> n_values,
                               double epsilon, double eps_prime, int replicas) {
  if (eps_prime <= 0.0) eps_prime = 0.9 * epsilon;
  if (!(eps_prime < epsilon)) {
    throw std::invalid_argument("lemma1_bound_check: eps_prime must be smaller than epsilon");
  }
  const ConvergenceReport tail = tail_probability(setup, n_values, epsilon, replicas);
  const double alpha = setup.process == ProcessKind::wiener ? 2.0 : setup.alpha;
  const double prefactor = lemma_prefactor(alpha, eps_prime);

  LemmaReport report;
  std::vector<double> bounds;
  for (std::size_t i = 0; i < tail.n_values.size(); ++i) {
    const double bound = prefactor * tail.bound_integrals[i];
    const double ratio = bound > 0.0 ? tail.tail_probs[i] / bound : 0.0;
    report.rows.push_back({tail.n_values[i], tail.tail_probs[i], tail.bound_integrals[i], bound,
                           ratio});
    report.fitted_constant = std::max(report.fitted_constant, ratio);
    bounds.push_back(bound);
  }
  report.bound_nonincreasing = nonincreasing(bounds, 1e-12, 1e-20);
  report.tail_nonincreasing = nonincreasing_within_noise(tail.tail_probs, tail.tail_se);
  return report;
}

RateReport ph_rate_check(const TestFunction& f, std::span<const int> n_values, int y_points) {
  if (!(f.domain == kSymmetricInterval)) {
    throw std::invalid_argument("ph_rate_check: function must live on [-1, 1]");
  }
  double exponent = 0.0;
  switch (f.declared_class) {
    case FunctionClass::lipschitz:
      if (f.smoothness() < 1.5) {
        throw std::invalid_argument("ph_rate_check: '" + f.id +
                                    "' needs p + mu >= 3/2 for the pointwise rate");
      }
      exponent = f.smoothness() - 1.5;
      break;
    case FunctionClass::polynomial:
    case FunctionClass::smooth:
      exponent = std::max(0.0, f.smoothness() - 1.5);
      break;
    case FunctionClass::generic:
      throw std::invalid_argument("ph_rate_check: '" + f.id + "' declares no smoothness");
  }
  const int top = max_degree(n_values);
  for (const int n : n_values) {
    if (n < 8 || n > 256) throw std::invalid_argument("ph_rate_check: degrees must lie in [8, 256]");
  }
  if (y_points < 2) throw std::invalid_argument("ph_rate_check: need at least 2 grid points");

  const SeriesExpansion expansion =
      expand(f, BasisKind::weighted_u, JacobiParams::chebyshev_fourth(), top);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(y_points, -1.0, 1.0);
  Eigen::VectorXd fy(y_points);
  for (int i = 0; i < y_points; ++i) fy(i) = f(y(i));
  const Eigen::MatrixXd u = JacobiBasis(BasisKind::weighted_u, expansion.params, top).values(y);

  RateReport report;
  report.exponent = exponent;
  std::vector<double> ns;
  std::vector<double> normalized;
  bool positive = true;
  for (const int n : n_values) {
    const double err =
        (fy - u.leftCols(n + 1) * expansion.coefficients.head(n + 1)).cwiseAbs().maxCoeff();
    const double norm = err * std::pow(n, exponent) / std::log(static_cast<double>(n));
    report.rows.push_back({n, err, norm});
    report.fitted_constant = std::max(report.fitted_constant, norm);
    ns.push_back(n);
    normalized.push_back(norm);
    positive = positive && norm > 0.0;
  }
  report.normalized_slope = positive && ns.size() >= 2 ? loglog_slope(ns, normalized) : 0.0;
  return report;
}

std::string_view to_string(ContinuityMode mode) {
  return mode == ContinuityMode::weak_probability ? "weak_probability" : "quadratic_mean";
}

ContinuityMode continuity_mode_from_string(std::string_view name) {
  if (name == "weak_probability") return ContinuityMode::weak_probability;
  if (name == "quadratic_mean") return ContinuityMode::quadratic_mean;
  throw std::invalid_argument("unknown continuity mode '" + std::string(name) + "'");
}

std::vector<ContinuityRow> continuity_probe(const SeriesSetup& setup, double y_center,
                                            std::span<const double> h_values, int replicas,
                                            ContinuityMode mode, double epsilon) {
  if (h_values.empty()) throw std::invalid_argument("continuity_probe: no h values");
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] >= 0.0)) throw std::invalid_argument("continuity_probe: h must be >= 0");
    if (i > 0 && h_values[i] > h_values[i - 1]) {
      throw std::invalid_argument("continuity_probe: h values must be decreasing");
    }
  }
  if (mode == ContinuityMode::quadratic_mean && setup.process != ProcessKind::wiener) {
    throw std::invalid_argument("continuity_probe: quadratic-mean mode needs Wiener paths");
  }
  if (mode == ContinuityMode::weak_probability && !(epsilon > 0.0)) {
    throw std::invalid_argument("continuity_probe: epsilon must be positive");
  }
  if (replicas < 2) throw std::invalid_argument("continuity_probe: need at least 2 replicas");
  const Interval dom = basis_domain(setup.basis);
  for (const double h : h_values) {
    if (!dom.contains(y_center) || !dom.contains(y_center + h)) {
      throw std::domain_error("continuity_probe: y + h = " + std::to_string(y_center + h) +
                              " outside the domain");
    }
  }

  SeriesSetup centred = setup;
  centred.y = y_center;
  const CoupledEnsemble ensemble(centred);
  const Eigen::MatrixXd coeffs = ensemble.random_coefficients(replicas);
  const Eigen::VectorXd g0 = ensemble.weighted_basis_at(y_center);

  std::vector<ContinuityRow> rows;
  for (const double h : h_values) {
    const Eigen::VectorXd dg = ensemble.weighted_basis_at(y_center + h) - g0;
    const Eigen::ArrayXd diff = (dg.transpose() * coeffs).transpose().array();
    ContinuityRow row{h};
    if (mode == ContinuityMode::weak_probability) {
      row.probability = exceed_fraction(diff, epsilon);
      row.probability_se = binomial_se(row.probability, replicas);
    } else {
      const Moments m = mean_and_se(diff.square());
      row.mc = m.mean;
      row.mc_se = m.se;
      row.exact = ensemble.weighted_norm_power(dg, 2.0);
    }
    rows.push_back(row);
  }
  return rows;
}

bool nonincreasing_within_noise(std::span<const double> probs, std::span<const double> se,
                                double z) {
  if (probs.size() != se.size()) throw std::invalid_argument("size mismatch");
  for (std::size_t i = 1; i < probs.size(); ++i) {
    const double slack = z * std::hypot(se[i - 1], se[i]);
    if (probs[i] > probs[i - 1] + slack) return false;
  }
  return true;
}

bool strictly_decreasing(std::span<const double> values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

bool nonincreasing(std::span<const double> values, double rel_slack, double abs_slack) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] * (1.0 + rel_slack) + abs_slack) return false;
  }
  return true;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need two or more paired points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_slope: nonpositive value");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double binomial_se(double p, int n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace rfj
