// Monte Carlo and quadrature checks of convergence in probability,
// convergence in quadratic mean, the stable tail bound, the pointwise rate
// of the weighted series, and continuity of the sum functions.
//
// Every experiment couples partial sums and the reference limit on the same
// path: with random coefficients R_k of one replica,
//   S_n(y) - I(y) = -Σ_{n<k<=N_ref} d_k φ_k(y) R_k,
// so one (N_ref + 1)-vector per replica serves every n.

#ifndef RFJ_CONVERGENCE_DIAG_HPP
#define RFJ_CONVERGENCE_DIAG_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rfj/function_lab.hpp"
#include "rfj/quadrature.hpp"
#include "rfj/random_series.hpp"
#include "rfj/stochastic_integral.hpp"

namespace rfj {

struct SeriesSetup {
  TestFunction function;  // defined on the basis domain
  BasisKind basis = BasisKind::orthonormal_p;
  JacobiParams params = JacobiParams::legendre();
  WeightParams weight = WeightParams::unit();
  ProcessKind process = ProcessKind::stable;
  double alpha = 2.0;
  int grid_M = 4096;
  int n_ref = 128;
  double y = 0.5;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: default_thread_count()
};

/// Expansion to N_ref, design matrix, and replica sampling of one setup.
class CoupledEnsemble {
 public:
  explicit CoupledEnsemble(const SeriesSetup& setup);

  const SeriesSetup& setup() const { return setup_; }
  const SeriesExpansion& expansion() const { return expansion_; }
  const PathGrid& grid() const { return integrator_.grid(); }
  Interval domain() const { return basis_domain(setup_.basis); }

  /// Random coefficients of replicas 0..replicas-1, one column each.
  /// Bit-identical for every thread count.
  Eigen::MatrixXd random_coefficients(int replicas) const;

  /// d_k φ_k(y) for k = 0..N_ref.
  Eigen::VectorXd weighted_basis_at(double y) const;

  /// Coefficients of the t-polynomial Σ_k g_k φ_k(t) whose weighted L^p
  /// norm is requested: ∫ |Σ_k g_k φ_k(t) w(t)|^p dt.
  double weighted_norm_power(const Eigen::Ref<const Eigen::VectorXd>& g, double p) const;

 private:
  SeriesSetup setup_;
  SeriesExpansion expansion_;
  JacobiBasis basis_;
  PathIntegrator integrator_;
  GaussJacobiRule norm_rule_;
  Eigen::MatrixXd norm_design_;  // φ_k(t_j) w(t_j) at norm_rule_ nodes
};

struct ConvergenceReport {
  SeriesVariant variant;
  std::vector<int> n_values;
  double epsilon = 0.0;
  std::vector<double> tail_probs;
  std::vector<double> tail_se;
  std::vector<double> qm_errors_mc;
  std::vector<double> qm_se;
  std::vector<double> qm_errors_exact;
  std::vector<double> bound_integrals;  // ∫ |(f_ref - s_n) w|^α dt
  int replicas = 0;
  std::uint64_t seed = 0;
  int grid_M = 0;
  int n_ref = 0;
};

/// Empirical P(|S_n - I| > ε) per n over coupled replicas, with the tail
/// bound integrals. Paths on [-1, 1].
ConvergenceReport tail_probability(const SeriesSetup& setup, std::span<const int> n_values,
                                   double epsilon, int replicas);

/// Monte Carlo E|T_n - I|² and its exact isometry value per n. Wiener paths
/// on [0, 1], modified_q basis.
ConvergenceReport qm_error(const SeriesSetup& setup, std::span<const int> n_values, int replicas);

struct LemmaRow {
  int n;
  double tail;            // empirical P(|S_n - I| > ε)
  double bound_integral;  // ∫ |(f_ref - s_n) w|^α dt
  double bound;           // 2^{α+1} / ((α+1) ε'^α) · bound_integral
  double ratio;           // tail / bound, 0 when both vanish
};

struct LemmaReport {
  std::vector<LemmaRow> rows;
  double fitted_constant = 0.0;  // smallest C with tail <= C · bound on every row
  bool bound_nonincreasing = false;
  bool tail_nonincreasing = false;
};

/// eps_prime <= 0 selects the default 0.9 ε.
LemmaReport lemma1_bound_check(const SeriesSetup& setup, std::span<const int> n_values,
                               double epsilon, double eps_prime, int replicas);

/// 2^{α+1} / ((α+1) ε'^α).
double lemma_prefactor(double alpha, double eps_prime);

struct RateRow {
  int n;
  double sup_error;
  double normalized;  // sup_error · n^{p+μ-3/2} / ln n
};

struct RateReport {
  std::vector<RateRow> rows;
  double exponent = 0.0;          // p + μ - 3/2
  double fitted_constant = 0.0;   // C₁*: max normalized ratio
  double normalized_slope = 0.0;  // log-log slope of the normalized ratio
};

/// sup over a y grid of |f(y) - v_n(f, y)| in the weighted_u basis.
RateReport ph_rate_check(const TestFunction& f, std::span<const int> n_values,
                         int y_points = 201);

enum class ContinuityMode { weak_probability, quadratic_mean };

std::string_view to_string(ContinuityMode mode);
ContinuityMode continuity_mode_from_string(std::string_view name);

struct ContinuityRow {
  double h;
  double probability = 0.0;  // weak mode: P(|I(y+h) - I(y)| > ε)
  double probability_se = 0.0;
  double mc = 0.0;           // quadratic mode: E|I(y+h) - I(y)|²
  double mc_se = 0.0;
  double exact = 0.0;        // quadratic mode: ∫ |(f_ref(y+h,·) - f_ref(y,·)) w|² dt
};

std::vector<ContinuityRow> continuity_probe(const SeriesSetup& setup, double y_center,
                                            std::span<const double> h_values, int replicas,
                                            ContinuityMode mode, double epsilon);

// Trend helpers shared by the runner and the acceptance suite.

/// p_{j+1} <= p_j + z · sqrt(se_j² + se_{j+1}²) for consecutive entries.
bool nonincreasing_within_noise(std::span<const double> probs, std::span<const double> se,
                                double z = 2.0);
bool strictly_decreasing(std::span<const double> values);
bool nonincreasing(std::span<const double> values, double rel_slack = 0.0,
                   double abs_slack = 0.0);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Binomial standard error sqrt(p (1 - p) / n).
double binomial_se(double p, int n);

}  // namespace rfj

#endif  // RFJ_CONVERGENCE_DIAG_HPP
