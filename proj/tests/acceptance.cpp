// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rfj/convergence_diag.hpp"
#include "rfj/experiment.hpp"

using namespace rfj;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const JacobiParams kGrid[] = {{0.0, 0.0}, {0.5, -0.5}, {1.0, 2.0}, {-0.3, 0.7}};

// ∫_{-1}^{1} x^k (1-x)^a (1+x)^b dx via x = 2u - 1 and Beta integrals.
double moment_oracle(double a, double b, int k) {
  using boost::math::tgamma;
  const Big A(a), B(b);
  Big sum = 0;
  Big binom = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    const Big sign = (k - j) % 2 == 0 ? 1 : -1;
    sum += sign * binom * pow(Big(2), j) * tgamma(B + j + 1) * tgamma(A + 1) / tgamma(A + B + j + 2);
  }
  return static_cast<double>(pow(Big(2), A + B + 1) * sum);
}

double gk(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-13);
}

Outcome orthonormality() {
  double worst = 0.0;
  for (const JacobiParams& p : kGrid) {
    const GaussJacobiRule rule = build_rule(p, 24);
    const Eigen::MatrixXd phi = JacobiBasis(BasisKind::orthonormal_p, p, 20).values(rule.nodes);
    const GaussJacobiRule unit = to_unit_interval(rule);
    const Eigen::MatrixXd q = JacobiBasis(BasisKind::modified_q, p, 20).values(unit.nodes);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(21, 21);
    worst = std::max(worst, (phi.transpose() * rule.weights.asDiagonal() * phi - id).cwiseAbs().maxCoeff());
    worst = std::max(worst, (q.transpose() * unit.weights.asDiagonal() * q - id).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "max |<phi_m, phi_n> - delta_mn| = " + num(worst) + " (p and q, 4 parameter pairs)"};
}

Outcome quadrature_exactness() {
  double worst = 0.0;
  for (const JacobiParams& p : kGrid) {
    for (const int N : {2, 5, 20}) {
      const GaussJacobiRule rule = build_rule(p, N);
      for (int k = 0; k <= 2 * N - 1; ++k) {
        const double want = moment_oracle(p.gamma(), p.delta(), k);
        const double got = integrate(rule, [k](double x) { return std::pow(x, k); });
        // Odd moments can vanish; measure against ∫|x|^k ρ.
        const double scale =
            std::max(std::abs(want), integrate(rule, [k](double x) { return std::pow(std::abs(x), k); }));
        worst = std::max(worst, std::abs(got - want) / scale);
      }
    }
  }
  const GaussJacobiRule two = build_rule(JacobiParams::legendre(), 2);
  const double node_err = std::max(std::abs(two.nodes(0) + 1.0 / std::sqrt(3.0)),
                                   std::abs(two.nodes(1) - 1.0 / std::sqrt(3.0)));
  return {worst < 1e-10 && node_err < 1e-12,
          "max relative moment error " + num(worst) + ", 2-point node error " + num(node_err)};
}

Outcome partial_sum_identity() {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::vector<TestFunction>& cat = catalog();
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto basis = static_cast<BasisKind>(rng() % 3);
    JacobiParams params = basis == BasisKind::weighted_u
                              ? JacobiParams::chebyshev_fourth()
                              : JacobiParams(-0.9 + 2.9 * u01(rng), -0.9 + 2.9 * u01(rng));
    const WeightParams weight(1.5 * u01(rng), 1.5 * u01(rng));
    const TestFunction& base = cat[rng() % cat.size()];
    const TestFunction f = basis == BasisKind::modified_q ? on_unit_interval(base) : base;
    const int n = static_cast<int>(rng() % 33);
    const Interval dom = basis_domain(basis);
    const PathGrid grid(dom, 4096);
    const bool wiener = basis == BasisKind::modified_q || rng() % 2 == 0;
    const double alpha = 1.0 + u01(rng);
    const StreamKey stream{rng(), static_cast<std::uint64_t>(trial)};
    const SamplePath path = wiener ? sample_wiener(grid, stream) : sample_stable(grid, alpha, stream);
    const double y = dom.lo + dom.length() * u01(rng);

    const SeriesExpansion e = expand(f, basis, params, n);
    RandomCoefficients r = basis == BasisKind::orthonormal_p ? coeff_A(params, weight, n, path)
                           : basis == BasisKind::weighted_u  ? coeff_B(weight, n, path)
                                                             : coeff_C(params, weight, n, path);
    const double s = partial_sum(e, r, n, y);
    const double k = kernel_path_integral(e, weight, n, y, path);
    // Natural scale Σ |d_k R_k φ_k(y)| guards against cancellation to zero.
    const JacobiBasis phi(basis, params, n);
    double scale = 0.0;
    for (int j = 0; j <= n; ++j) scale += std::abs(e.coefficients(j) * r.values(j) * phi(j, y));
    if (scale > 0.0) worst = std::max(worst, std::abs(s - k) / std::max(std::abs(s), scale));
  }
  return {worst < 1e-10, "50 random configurations, max relative gap " + num(worst)};
}

Outcome ito_isometry() {
  struct Case {
    const char* id;
    double eta, tau;
  };
  const Case cases[] = {{"constant", 0.0, 0.0}, {"linear", 1.0, 1.0}, {"sqrt_abs", 0.0, 0.0},
                        {"abs_pow_3_2", 0.5, 0.0}, {"bump", 0.0, 0.5}};
  const int replicas = 10000;
  const PathGrid grid(kUnitInterval, 4096);
  bool ok = true;
  std::string detail = "z:";
  std::uint64_t seed = 400;
  for (const Case& c : cases) {
    const TestFunction g = on_unit_interval(catalog_entry(c.id));
    const WeightParams w(c.eta, c.tau);
    Eigen::VectorXd v(grid.increments());
    for (int i = 0; i < grid.increments(); ++i) v(i) = g(grid.point(i)) * path_weight(w, kUnitInterval, grid.point(i));
    Eigen::MatrixXd dx(grid.increments(), replicas);
    sample_increments(ProcessKind::wiener, grid, 2.0, ++seed, 0, dx);
    const Eigen::ArrayXd sq = (dx.transpose() * v).array().square();
    const double mc = sq.mean();
    const double se = std::sqrt((sq - mc).square().sum() / (replicas - 1.0) / replicas);
    auto integrand = [&](double t) {
      const double gw = g(t) * path_weight(w, kUnitInterval, t);
      return gw * gw;
    };
    // Split at the breakpoint of the pulled-back catalog entries.
    const double exact = gk(integrand, 0.0, 0.5) + gk(integrand, 0.5, 1.0);
    const double z = (mc - exact) / se;
    ok = ok && std::abs(z) <= 3.0;
    detail += std::string(" ") + c.id + "=" + num(z);
  }
  return {ok, detail};
}

Outcome quadratic_mean() {
  bool ok = true;
  std::string detail;
  for (const auto& [eta, tau] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
    SeriesSetup s;
    s.function = on_unit_interval(catalog_entry("abs_pow_3_2"));
    s.basis = BasisKind::modified_q;
    s.weight = WeightParams(eta, tau);
    s.process = ProcessKind::wiener;
    s.grid_M = 32768;
    s.n_ref = 128;
    s.y = 0.5;
    s.seed = 1;
    const int n[] = {4, 8, 16, 32};
    const ConvergenceReport r = qm_error(s, n, 5000);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double z = std::abs(r.qm_errors_mc[i] - r.qm_errors_exact[i]) / r.qm_se[i];
      worst_z = std::max(worst_z, z);
    }
    const bool dec = strictly_decreasing(r.qm_errors_exact);
    ok = ok && worst_z <= 3.0 && dec;
    detail += "(eta,tau)=(" + num(eta) + "," + num(tau) + "): max |z| " + num(worst_z) +
              (dec ? ", exact strictly decreasing; " : ", exact NOT strictly decreasing; ");
  }
  return {ok, detail};
}

Outcome tail_trend() {
  struct Case {
    const char* id;
    BasisKind basis;
  };
  const Case cases[] = {{"abs_pow_3_2", BasisKind::orthonormal_p}, {"sq_abs_pow_1_2", BasisKind::weighted_u}};
  const int replicas = 2000;
  const double threshold = 0.05;
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    for (const double alpha : {1.0, 1.5, 2.0}) {
      SeriesSetup s;
      s.function = catalog_entry(c.id);
      s.basis = c.basis;
      s.params = c.basis == BasisKind::weighted_u ? JacobiParams::chebyshev_fourth() : JacobiParams::legendre();
      s.process = ProcessKind::stable;
      s.alpha = alpha;
      s.grid_M = 4096;
      s.n_ref = 128;
      s.y = 0.5;
      s.seed = 1;
      const int n[] = {4, 8, 16, 32};
      const ConvergenceReport r = tail_probability(s, n, 0.1, replicas);
      // Independent restatement of the 2-SE rule.
      bool trend = true;
      for (std::size_t i = 1; i < 4; ++i) {
        const double se_prev = std::sqrt(r.tail_probs[i - 1] * (1 - r.tail_probs[i - 1]) / replicas);
        const double se_here = std::sqrt(r.tail_probs[i] * (1 - r.tail_probs[i]) / replicas);
        trend = trend && r.tail_probs[i] <= r.tail_probs[i - 1] + 2.0 * std::hypot(se_prev, se_here);
      }
      const bool final_ok = alpha < 2.0 || r.tail_probs.back() < threshold;
      ok = ok && trend && final_ok;
      detail += std::string(c.id) + " a=" + num(alpha) + ": P(4)=" + num(r.tail_probs.front()) +
                " P(32)=" + num(r.tail_probs.back()) +
                (trend ? "" : " TREND FAIL") + (final_ok ? "" : " FINAL FAIL") + "; ";
    }
  }
  return {ok, detail};
}

Outcome stable_sampler() {
  auto draws = [](double alpha, std::uint64_t seed) {
    std::vector<double> z(100000);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const UniformPair u = uniform_pair({seed, 0}, i);
      z[i] = stable_variate(alpha, u.first, u.second);
    }
    return z;
  };
  const std::vector<double> two = draws(2.0, 701);
  double m = 0.0, v = 0.0;
  for (const double x : two) m += x / two.size();
  for (const double x : two) v += (x - m) * (x - m) / (two.size() - 1);

  const std::vector<double> one = draws(1.0, 702);
  const double tail = std::count_if(one.begin(), one.end(), [](double x) { return std::abs(x) > 1.0; }) /
                      static_cast<double>(one.size());

  const std::vector<double> mid = draws(1.5, 703);
  double worst_z = 0.0;
  for (const double u : {0.5, 1.0, 2.0}) {
    double cm = 0.0, cv = 0.0;
    for (const double x : mid) cm += std::cos(u * x) / mid.size();
    for (const double x : mid) cv += (std::cos(u * x) - cm) * (std::cos(u * x) - cm) / (mid.size() - 1);
    worst_z = std::max(worst_z, std::abs(cm - std::exp(-std::pow(u, 1.5))) / std::sqrt(cv / mid.size()));
  }
  const bool ok = std::abs(v - 2.0) <= 0.05 && std::abs(tail - 0.5) <= 0.01 && worst_z <= 3.0;
  return {ok, "var(alpha=2) " + num(v) + ", P(|Z|>1)(alpha=1) " + num(tail) + ", cf max |z| " + num(worst_z)};
}

Outcome rate() {
  const int n[] = {8, 16, 32, 64, 128, 256};
  const RateReport r = ph_rate_check(catalog_entry("sq_abs_pow_1_2"), n);
  std::vector<double> x, y;
  for (const RateRow& row : r.rows) {
    x.push_back(row.n);
    y.push_back(row.sup_error * std::pow(row.n, 1.0) / std::log(row.n));
  }
  const double slope = loglog_slope(x, y);
  return {slope <= 0.05, "normalized log-log slope " + num(slope) + ", C1* " + num(r.fitted_constant)};
}

Outcome continuity() {
  const double h[] = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  SeriesSetup s;
  s.function = on_unit_interval(catalog_entry("abs_pow_3_2"));
  s.basis = BasisKind::modified_q;
  s.process = ProcessKind::wiener;
  s.grid_M = 4096;
  s.n_ref = 128;
  s.seed = 1;
  const std::vector<ContinuityRow> q = continuity_probe(s, 0.5, h, 5000, ContinuityMode::quadratic_mean, 0.1);
  bool matched = true;
  for (const ContinuityRow& row : q) matched = matched && std::abs(row.mc - row.exact) <= 3.0 * row.mc_se + 1e-24;
  const double exact_ratio = q.back().exact / q.front().exact;
  const double mc_ratio = q.back().mc / q.front().mc;

  // Generic centre, reported only.
  const std::vector<ContinuityRow> off = continuity_probe(s, 0.3, std::span<const double>(h + 1, 5), 5000,
                                                          ContinuityMode::quadratic_mean, 0.1);
  const double off_ratio = off.back().exact / off.front().exact;

  SeriesSetup w;
  w.function = catalog_entry("abs_pow_3_2");
  w.process = ProcessKind::stable;
  w.alpha = 1.5;
  w.grid_M = 4096;
  w.n_ref = 128;
  w.seed = 2;
  const std::vector<ContinuityRow> weak = continuity_probe(w, 0.0, h, 5000, ContinuityMode::weak_probability, 0.1);
  std::vector<double> p, se;
  for (const ContinuityRow& row : weak) {
    p.push_back(row.probability);
    se.push_back(row.probability_se);
  }
  const bool weak_ok = nonincreasing_within_noise(p, se);

  const bool ok = matched && exact_ratio < 1e-3 && mc_ratio < 1e-3 && weak_ok;
  return {ok, std::string("y=0.5: MC ") + (matched ? "within" : "OUTSIDE") + " 3 SE, exact ratio " +
                  num(exact_ratio) + ", mc ratio " + num(mc_ratio) + "; weak trend " +
                  (weak_ok ? "ok" : "FAIL") + "; info: exact ratio at y=0.3 (h 0.25 to 1/64) " + num(off_ratio)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "rfj_acceptance_repro";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::vector<nlohmann::json> configs = {
      {{"experiment", "expand"}, {"function_id", "sqrt_abs"}, {"n_values", {8, 16}}},
      {{"experiment", "orthonormality"}, {"gamma", 1.0}, {"delta", 2.0}, {"n_values", {10}}},
      {{"experiment", "sample-paths"}, {"process", "stable"}, {"alpha", 1.2}, {"replicas", 3}, {"grid_M", 64}},
      {{"experiment", "isometry"}, {"function_id", "bump"}, {"replicas", 1000}, {"grid_M", 512}},
      {{"experiment", "tail"}, {"function_id", "sqrt_abs"}, {"alpha", 1.5}, {"replicas", 500}, {"grid_M", 1024}},
      {{"experiment", "qm"}, {"replicas", 500}, {"grid_M", 2048}, {"n_values", {4, 8}}},
      {{"experiment", "rate"}},
      {{"experiment", "continuity"}, {"replicas", 500}, {"grid_M", 1024}, {"n_values", {8}}},
  };
  bool ok = true;
  std::string detail;
  int index = 0;
  for (nlohmann::json c : configs) {
    const std::string name = c.at("experiment").get<std::string>();
    std::vector<std::string> csvs;
    for (const int threads : {1, 4, 4}) {
      const std::filesystem::path out = dir / (name + "_" + std::to_string(index++));
      c["output_path"] = out.string();
      const std::filesystem::path cfg = dir / (out.filename().string() + ".json");
      std::ofstream(cfg) << c.dump(2);
      std::ostringstream log;
      const int code = run_config_file(cfg, log, threads);
      if (code != exit_ok && code != exit_property) {
        ok = false;
        detail += name + " exited " + std::to_string(code) + "; ";
      }
      csvs.push_back(slurp(out.string() + ".csv"));
    }
    const bool same = !csvs[0].empty() && csvs[0] == csvs[1] && csvs[1] == csvs[2];
    ok = ok && same;
    if (!same) detail += name + " differs; ";
  }
  std::filesystem::remove_all(dir);
  return {ok, detail.empty() ? "8 experiments, threads 1/4/4 rerun, CSV byte-identical" : detail};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "orthonormality", orthonormality},
      {2, "quadrature exactness", quadrature_exactness},
      {3, "partial-sum / kernel-integral identity", partial_sum_identity},
      {4, "Ito isometry", ito_isometry},
      {5, "quadratic-mean convergence", quadratic_mean},
      {6, "tail probability trend", tail_trend},
      {7, "stable sampler", stable_sampler},
      {8, "weighted-series pointwise rate", rate},
      {9, "continuity probes", continuity},
      {10, "reproducibility", reproducibility},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  #%d  %s  [%.1fs]  %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
