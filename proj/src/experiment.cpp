#include "rfj/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rfj/parallel.hpp"

namespace rfj {

namespace {

using nlohmann::json;

constexpr int kReplicaBlock = 64;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "function_id", "basis",      "gamma",          "delta",
      "eta",        "tau",         "process",    "alpha",          "n_values",
      "epsilon",    "eps_prime",   "replicas",   "grid_M",         "N_ref",
      "seed",       "y",           "y_center",   "h_values",       "mode",
      "tail_threshold", "slope_max", "continuity_ratio", "tolerance", "quadrature_nodes",
      "output_path"};
  return keys;
}

class Reader {
 public:
  Reader(const json& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

  bool has(const char* key) const { return raw_.contains(key); }

  std::optional<double> number(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_number()) return fail<double>(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) return fail<double>(key, "must be finite");
    return x;
  }

  std::optional<int> integer(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_number_integer()) return fail<int>(key, "must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -1'000'000'000 || x > 1'000'000'000) return fail<int>(key, "is out of range");
    return static_cast<int>(x);
  }

  std::optional<std::string> string(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_string()) return fail<std::string>(key, "must be a string");
    return v.get<std::string>();
  }

  std::optional<std::uint64_t> seed(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_number_unsigned()) return fail<std::uint64_t>(key, "must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::optional<std::vector<int>> integers(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_array() || v.empty()) return fail<std::vector<int>>(key, "must be a nonempty array");
    std::vector<int> out;
    for (const json& e : v) {
      if (!e.is_number_integer()) return fail<std::vector<int>>(key, "entries must be integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::optional<std::vector<double>> numbers(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw_.at(key);
    if (!v.is_array() || v.empty()) {
      return fail<std::vector<double>>(key, "must be a nonempty array");
    }
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) return fail<std::vector<double>>(key, "entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  template <typename T, typename Parse>
  std::optional<T> named(const char* key, Parse parse) {
    const auto name = string(key);
    if (!name) return std::nullopt;
    try {
      return parse(*name);
    } catch (const std::exception& e) {
      return fail<T>(key, e.what());
    }
  }

  void error(const std::string& key, const std::string& message) {
    errors_.push_back(key + ": " + message);
  }

 private:
  template <typename T>
  std::optional<T> fail(const char* key, const std::string& message) {
    error(key, message);
    return std::nullopt;
  }

  const json& raw_;
  std::vector<std::string>& errors_;
};

bool on_unit_domain(const ExperimentConfig& c) { return c.basis == BasisKind::modified_q; }

// Catalog function on the experiment's domain.
TestFunction resolve_function(const ExperimentConfig& c) {
  const TestFunction& f = catalog_entry(c.function_id);
  return on_unit_domain(c) ? on_unit_interval(f) : f;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

SeriesSetup setup_from(const ExperimentConfig& c, int threads) {
  SeriesSetup s;
  s.function = resolve_function(c);
  s.basis = c.basis;
  s.params = JacobiParams(c.gamma, c.delta);
  s.weight = WeightParams(c.eta, c.tau);
  s.process = c.process;
  s.alpha = c.alpha;
  s.grid_M = c.grid_M;
  s.n_ref = c.N_ref;
  s.y = c.y;
  s.seed = c.seed;
  s.threads = threads;
  return s;
}

PropertyResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? PropertyStatus::pass : PropertyStatus::fail, std::move(detail)};
}

PropertyResult info(std::string name, std::string detail) {
  return {std::move(name), PropertyStatus::info, std::move(detail)};
}

// |mc - exact| <= 3 se, with an absolute floor for tracks that vanish.
bool within_three_se(double mc, double exact, double se) {
  return std::abs(mc - exact) <= 3.0 * se + 1e-24;
}

ExperimentResult run_expand(const ExperimentConfig& c) {
  const TestFunction f = resolve_function(c);
  const JacobiParams params(c.gamma, c.delta);
  const int top = max_of(c.n_values);
  const SeriesExpansion e = expand(f, c.basis, params, top, c.quadrature_nodes);
  const SeriesExpansion fine = expand(
      f, c.basis, params, top, 2 * (c.quadrature_nodes > 0 ? c.quadrature_nodes : default_node_count(top)));

  ExperimentResult r;
  std::ostringstream csv;
  csv << "n,coefficient,refined_coefficient,refinement_gap\n";
  double gap = 0.0;
  for (int n = 0; n <= top; ++n) {
    const double d = std::abs(e.coefficients(n) - fine.coefficients(n));
    gap = std::max(gap, d);
    csv << n << ',' << fmt(e.coefficients(n)) << ',' << fmt(fine.coefficients(n)) << ',' << fmt(d)
        << '\n';
  }
  r.csv = csv.str();
  r.properties.push_back(check("refinement_gap", gap <= c.tolerance,
                               "max coefficient change under node doubling " + fmt_short(gap) +
                                   " (tolerance " + fmt_short(c.tolerance) + ")"));
  return r;
}

ExperimentResult run_orthonormality(const ExperimentConfig& c) {
  const JacobiParams params(c.gamma, c.delta);
  const int top = max_of(c.n_values);
  GaussJacobiRule rule = build_rule(params, top + 2);
  if (on_unit_domain(c)) rule = to_unit_interval(rule);
  const Eigen::MatrixXd phi = JacobiBasis(c.basis, params, top).values(rule.nodes);
  const Eigen::MatrixXd gram = phi.transpose() * rule.weights.asDiagonal() * phi;

  ExperimentResult r;
  std::ostringstream csv;
  csv << "m,n,inner_product,deviation\n";
  double worst = 0.0;
  for (int m = 0; m <= top; ++m) {
    for (int n = m; n <= top; ++n) {
      const double dev = std::abs(gram(m, n) - (m == n ? 1.0 : 0.0));
      worst = std::max(worst, dev);
      csv << m << ',' << n << ',' << fmt(gram(m, n)) << ',' << fmt(dev) << '\n';
    }
  }
  r.csv = csv.str();
  r.properties.push_back(check("orthonormality", worst < c.tolerance,
                               "max |<phi_m, phi_n> - delta_mn| = " + fmt_short(worst)));
  return r;
}

ExperimentResult run_sample_paths(const ExperimentConfig& c) {
  const PathGrid grid(basis_domain(c.basis), c.grid_M);
  ExperimentResult r;
  std::ostringstream csv;
  csv << "replica,t,x\n";
  bool finite = true;
  for (int rep = 0; rep < c.replicas; ++rep) {
    const SamplePath path =
        sample_path(c.process, grid, c.alpha, StreamKey{c.seed, static_cast<std::uint64_t>(rep)});
    const Eigen::VectorXd x = path.values();
    finite = finite && x.allFinite();
    for (int i = 0; i <= grid.increments(); ++i) {
      csv << rep << ',' << fmt(grid.point(i)) << ',' << fmt(x(i)) << '\n';
    }
  }
  r.csv = csv.str();
  r.properties.push_back(check("finite_paths", finite, "all path values finite"));
  return r;
}

ExperimentResult run_isometry(const ExperimentConfig& c, int threads) {
  const TestFunction g = resolve_function(c);
  const WeightParams weight(c.eta, c.tau);
  const Interval dom = basis_domain(c.basis);
  const PathGrid grid(dom, c.grid_M);

  Eigen::VectorXd v(grid.increments());
  for (int i = 0; i < grid.increments(); ++i) {
    const double t = grid.point(i);
    v(i) = g(t) * path_weight(weight, dom, t);
  }
  Eigen::VectorXd integrals(c.replicas);
  const int blocks = (c.replicas + kReplicaBlock - 1) / kReplicaBlock;
  parallel_for(blocks, threads > 0 ? threads : default_thread_count(), [&](int b) {
    const int first = b * kReplicaBlock;
    const int width = std::min(kReplicaBlock, c.replicas - first);
    Eigen::MatrixXd inc(grid.increments(), width);
    sample_increments(c.process, grid, c.alpha, c.seed, static_cast<std::uint64_t>(first), inc);
    integrals.segment(first, width) = inc.transpose() * v;
  });

  const double scale = c.process == ProcessKind::wiener ? 1.0 : 2.0;  // β² of the increments
  const GaussJacobiRule rule = legendre_rule(dom, 2048);
  const double exact =
      scale * integrate(rule, [&](double t) {
        const double gw = g(t) * path_weight(weight, dom, t);
        return gw * gw;
      });
  const Eigen::ArrayXd sq = integrals.array().square();
  const double n = static_cast<double>(c.replicas);
  const double mean = integrals.mean();
  const double mc_var = sq.mean();
  const double mc_se = std::sqrt((sq - mc_var).square().sum() / (n - 1.0) / n);
  const double z = mc_se > 0.0 ? (mc_var - exact) / mc_se : 0.0;

  ExperimentResult r;
  r.csv = "function_id,replicas,mc_mean,mc_var,mc_var_se,exact,z_score\n" + c.function_id + ',' +
          std::to_string(c.replicas) + ',' + fmt(mean) + ',' + fmt(mc_var) + ',' + fmt(mc_se) + ',' +
          fmt(exact) + ',' + fmt(z) + '\n';
  r.properties.push_back(check("isometry", within_three_se(mc_var, exact, mc_se),
                               "MC second moment " + fmt_short(mc_var) + " vs exact " +
                                   fmt_short(exact) + ", z = " + fmt_short(z)));
  return r;
}

ExperimentResult run_tail(const ExperimentConfig& c, int threads) {
  const SeriesSetup setup = setup_from(c, threads);
  const LemmaReport lemma = lemma1_bound_check(setup, c.n_values, c.epsilon, c.eps_prime, c.replicas);

  ExperimentResult r;
  std::ostringstream csv;
  csv << "n,tail_prob,tail_se,bound_integral,bound,ratio\n";
  std::vector<double> probs, se;
  for (const LemmaRow& row : lemma.rows) {
    const double s = binomial_se(row.tail, c.replicas);
    probs.push_back(row.tail);
    se.push_back(s);
    csv << row.n << ',' << fmt(row.tail) << ',' << fmt(s) << ',' << fmt(row.bound_integral) << ','
        << fmt(row.bound) << ',' << fmt(row.ratio) << '\n';
  }
  r.csv = csv.str();

  const bool all_zero = std::all_of(probs.begin(), probs.end(), [](double p) { return p == 0.0; });
  r.properties.push_back(check("tail_trend", nonincreasing_within_noise(probs, se),
                               all_zero ? "all tails zero"
                                        : "tail probabilities nonincreasing within 2 binomial SE"));
  const bool gaussian = c.process == ProcessKind::wiener || c.alpha == 2.0;
  if (gaussian) {
    r.properties.push_back(check("final_tail", probs.back() < c.tail_threshold,
                                 "P at n = " + std::to_string(c.n_values.back()) + " is " +
                                     fmt_short(probs.back()) + " (threshold " +
                                     fmt_short(c.tail_threshold) + ")"));
    r.properties.push_back(check("bound_trend", lemma.bound_nonincreasing,
                                 "bound column nonincreasing in n"));
  } else {
    r.properties.push_back(info("final_tail", "P at n = " + std::to_string(c.n_values.back()) +
                                                  " is " + fmt_short(probs.back()) +
                                                  " (alpha < 2: trend only)"));
    r.properties.push_back(info("bound_trend", lemma.bound_nonincreasing
                                                   ? "bound column nonincreasing in n"
                                                   : "bound column not monotone in n"));
  }
  r.properties.push_back(info("fitted_constant", "max tail / bound = " + fmt_short(lemma.fitted_constant)));
  return r;
}

ExperimentResult run_qm(const ExperimentConfig& c, int threads) {
  const ConvergenceReport rep = qm_error(setup_from(c, threads), c.n_values, c.replicas);

  ExperimentResult r;
  std::ostringstream csv;
  csv << "n,qm_mc,qm_se,qm_exact,z_score\n";
  bool matched = true;
  bool decreasing = true;
  for (std::size_t i = 0; i < rep.n_values.size(); ++i) {
    const double mc = rep.qm_errors_mc[i];
    const double se = rep.qm_se[i];
    const double ex = rep.qm_errors_exact[i];
    const double z = se > 0.0 ? (mc - ex) / se : 0.0;
    matched = matched && within_three_se(mc, ex, se);
    if (i > 0) {
      const double prev = rep.qm_errors_exact[i - 1];
      decreasing = decreasing && (ex < prev || ex <= 1e-24);
    }
    csv << rep.n_values[i] << ',' << fmt(mc) << ',' << fmt(se) << ',' << fmt(ex) << ',' << fmt(z)
        << '\n';
  }
  r.csv = csv.str();
  r.properties.push_back(check("mc_matches_exact", matched, "MC track within 3 SE of exact track"));
  r.properties.push_back(check("exact_decreasing", decreasing, "exact track strictly decreasing"));
  return r;
}

ExperimentResult run_rate(const ExperimentConfig& c) {
  const RateReport rep = ph_rate_check(catalog_entry(c.function_id), c.n_values);

  ExperimentResult r;
  std::ostringstream csv;
  csv << "n,sup_error,normalized\n";
  double worst = 0.0;
  for (const RateRow& row : rep.rows) {
    worst = std::max(worst, row.sup_error);
    csv << row.n << ',' << fmt(row.sup_error) << ',' << fmt(row.normalized) << '\n';
  }
  r.csv = csv.str();
  if (worst < 1e-12) {
    r.properties.push_back(check("rate_bounded", true, "sup error vanishes"));
  } else {
    r.properties.push_back(check("rate_bounded", rep.normalized_slope <= c.slope_max,
                                 "normalized log-log slope " + fmt_short(rep.normalized_slope) +
                                     " (max " + fmt_short(c.slope_max) + ")"));
  }
  r.properties.push_back(info("fitted_constant", "C1* = " + fmt_short(rep.fitted_constant)));
  return r;
}

ExperimentResult run_continuity(const ExperimentConfig& c, int threads) {
  const std::vector<ContinuityRow> rows = continuity_probe(setup_from(c, threads), c.y_center,
                                                           c.h_values, c.replicas, c.mode, c.epsilon);
  ExperimentResult r;
  std::ostringstream csv;
  csv << "h,probability,probability_se,mc,mc_se,exact\n";
  for (const ContinuityRow& row : rows) {
    csv << fmt(row.h) << ',' << fmt(row.probability) << ',' << fmt(row.probability_se) << ','
        << fmt(row.mc) << ',' << fmt(row.mc_se) << ',' << fmt(row.exact) << '\n';
  }
  r.csv = csv.str();

  if (c.mode == ContinuityMode::weak_probability) {
    std::vector<double> p, se;
    for (const ContinuityRow& row : rows) {
      p.push_back(row.probability);
      se.push_back(row.probability_se);
    }
    r.properties.push_back(check("weak_trend", nonincreasing_within_noise(p, se),
                                 "probabilities nonincreasing as h shrinks, within 2 binomial SE"));
    return r;
  }
  bool matched = true;
  for (const ContinuityRow& row : rows) matched = matched && within_three_se(row.mc, row.exact, row.mc_se);
  r.properties.push_back(check("mc_matches_exact", matched, "MC track within 3 SE of exact track"));
  const ContinuityRow& first = rows.front();
  const ContinuityRow& last = rows.back();
  const bool exact_small = last.exact <= c.continuity_ratio * first.exact;
  const bool mc_small = last.mc <= c.continuity_ratio * first.mc;
  r.properties.push_back(check(
      "exact_decay", exact_small,
      "exact(h_last) / exact(h_first) = " + fmt_short(first.exact > 0 ? last.exact / first.exact : 0.0)));
  r.properties.push_back(check(
      "mc_decay", mc_small,
      "mc(h_last) / mc(h_first) = " + fmt_short(first.mc > 0 ? last.mc / first.mc : 0.0)));
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::expand: return "expand";
    case ExperimentKind::orthonormality: return "orthonormality";
    case ExperimentKind::sample_paths: return "sample-paths";
    case ExperimentKind::isometry: return "isometry";
    case ExperimentKind::tail: return "tail";
    case ExperimentKind::qm: return "qm";
    case ExperimentKind::rate: return "rate";
    case ExperimentKind::continuity: return "continuity";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (const auto k : {ExperimentKind::expand, ExperimentKind::orthonormality,
                       ExperimentKind::sample_paths, ExperimentKind::isometry, ExperimentKind::tail,
                       ExperimentKind::qm, ExperimentKind::rate, ExperimentKind::continuity}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) +
                              "' (expected expand, orthonormality, sample-paths, isometry, tail, "
                              "qm, rate or continuity)");
}

ValidationResult validate(const json& raw) {
  ValidationResult result;
  auto& errors = result.errors;
  ExperimentConfig& c = result.config;
  if (!raw.is_object()) {
    errors.push_back("config: must be a JSON object");
    return result;
  }
  for (const auto& [key, value] : raw.items()) {
    if (!known_keys().contains(key)) errors.push_back(key + ": unknown key");
  }
  Reader in(raw, errors);

  if (const auto e = in.named<ExperimentKind>("experiment", experiment_kind_from_string)) {
    c.experiment = *e;
  } else if (!in.has("experiment")) {
    in.error("experiment", "is required");
  }
  const ExperimentKind kind = c.experiment;
  const bool unit_experiment = kind == ExperimentKind::qm || kind == ExperimentKind::isometry ||
                               kind == ExperimentKind::continuity;

  // Experiment-dependent defaults, overridden by explicit keys below.
  if (unit_experiment) {
    c.basis = BasisKind::modified_q;
    c.process = ProcessKind::wiener;
  }
  if (kind == ExperimentKind::rate) {
    c.basis = BasisKind::weighted_u;
    c.function_id = "sq_abs_pow_1_2";
    c.n_values = {8, 16, 32, 64, 128, 256};
  }
  if (kind == ExperimentKind::sample_paths) c.replicas = 1;
  if (kind == ExperimentKind::qm || kind == ExperimentKind::continuity) c.replicas = 5000;
  if (kind == ExperimentKind::qm) c.grid_M = 32768;
  if (kind == ExperimentKind::isometry) c.replicas = 10000;
  if (kind == ExperimentKind::expand) c.tolerance = 1e-6;

  if (const auto v = in.string("function_id")) c.function_id = *v;
  if (const auto v = in.named<BasisKind>("basis", basis_kind_from_string)) c.basis = *v;
  if (c.basis == BasisKind::weighted_u) {
    c.gamma = 0.5;
    c.delta = -0.5;
  }
  if (const auto v = in.number("gamma")) c.gamma = *v;
  if (const auto v = in.number("delta")) c.delta = *v;
  if (const auto v = in.number("eta")) c.eta = *v;
  if (const auto v = in.number("tau")) c.tau = *v;
  if (const auto v = in.named<ProcessKind>("process", process_kind_from_string)) c.process = *v;
  if (const auto v = in.number("alpha")) c.alpha = *v;
  if (const auto v = in.integers("n_values")) c.n_values = *v;
  if (const auto v = in.number("epsilon")) c.epsilon = *v;
  c.eps_prime = 0.9 * c.epsilon;
  if (const auto v = in.number("eps_prime")) c.eps_prime = *v;
  if (const auto v = in.integer("replicas")) c.replicas = *v;
  if (const auto v = in.integer("grid_M")) c.grid_M = *v;
  if (!c.n_values.empty()) c.N_ref = std::max(4 * max_of(c.n_values), max_of(c.n_values) + 1);
  if (const auto v = in.integer("N_ref")) c.N_ref = *v;
  if (const auto v = in.seed("seed")) c.seed = *v;
  if (const auto v = in.number("y")) c.y = *v;
  if (const auto v = in.number("y_center")) c.y_center = *v;
  if (const auto v = in.numbers("h_values")) c.h_values = *v;
  if (const auto v = in.named<ContinuityMode>("mode", continuity_mode_from_string)) c.mode = *v;
  if (const auto v = in.number("tail_threshold")) c.tail_threshold = *v;
  if (const auto v = in.number("slope_max")) c.slope_max = *v;
  if (const auto v = in.number("continuity_ratio")) c.continuity_ratio = *v;
  if (const auto v = in.number("tolerance")) c.tolerance = *v;
  if (const auto v = in.integer("quadrature_nodes")) c.quadrature_nodes = *v;
  if (const auto v = in.string("output_path")) {
    c.output_path = *v;
    if (v->empty()) in.error("output_path", "must not be empty");
  } else if (!in.has("output_path")) {
    in.error("output_path", "is required");
  }

  // Range checks.
  if (!(c.gamma > -1.0)) in.error("gamma", "must be > -1, got " + fmt_short(c.gamma));
  if (!(c.delta > -1.0)) in.error("delta", "must be > -1, got " + fmt_short(c.delta));
  if (!(c.eta >= 0.0)) in.error("eta", "must be >= 0, got " + fmt_short(c.eta));
  if (!(c.tau >= 0.0)) in.error("tau", "must be >= 0, got " + fmt_short(c.tau));
  if (!(c.alpha >= 1.0 && c.alpha <= 2.0)) {
    in.error("alpha", "must lie in [1, 2], got " + fmt_short(c.alpha));
  }
  if (c.replicas < 1) in.error("replicas", "must be >= 1");
  if (c.grid_M < 1) in.error("grid_M", "must be >= 1");
  if (c.quadrature_nodes < 0) in.error("quadrature_nodes", "must be >= 0");
  if (!(c.epsilon > 0.0)) in.error("epsilon", "must be > 0");
  if (!(c.eps_prime > 0.0 && c.eps_prime < c.epsilon)) {
    in.error("eps_prime", "must satisfy 0 < eps_prime < epsilon");
  }
  if (!(c.tolerance > 0.0)) in.error("tolerance", "must be > 0");
  for (const int n : c.n_values) {
    if (n < 0) {
      in.error("n_values", "degrees must be >= 0");
      break;
    }
  }
  try {
    catalog_entry(c.function_id);
  } catch (const std::exception&) {
    in.error("function_id", "unknown catalog function '" + c.function_id + "'");
  }
  if (c.basis == BasisKind::weighted_u && !(c.gamma == 0.5 && c.delta == -0.5)) {
    in.error("basis", "weighted_u requires gamma = 0.5 and delta = -0.5");
  }

  // Per-experiment rules.
  const int top = c.n_values.empty() ? 0 : max_of(c.n_values);
  const bool uses_reference = kind == ExperimentKind::tail || kind == ExperimentKind::qm;
  if (uses_reference && c.N_ref <= top) {
    in.error("N_ref", "reference truncation N_ref = " + std::to_string(c.N_ref) +
                          " must exceed max(n_values) = " + std::to_string(top));
  }
  if ((kind == ExperimentKind::tail || kind == ExperimentKind::continuity) && c.N_ref < 1) {
    in.error("N_ref", "must be >= 1");
  }
  if (kind == ExperimentKind::qm) {
    if (c.process != ProcessKind::wiener) in.error("process", "qm requires wiener paths");
    if (c.basis != BasisKind::modified_q) in.error("basis", "qm requires the modified_q basis");
    if (c.replicas < 2) in.error("replicas", "qm needs at least 2 replicas");
  }
  if (kind == ExperimentKind::tail) {
    if (c.basis == BasisKind::modified_q) {
      in.error("basis", "tail runs on [-1, 1]: use orthonormal_p or weighted_u");
    }
    if (c.replicas < 100) in.error("replicas", "tail needs at least 100 replicas");
  }
  if (kind == ExperimentKind::isometry && c.replicas < 2) {
    in.error("replicas", "isometry needs at least 2 replicas");
  }
  if (kind == ExperimentKind::rate) {
    if (c.basis != BasisKind::weighted_u) in.error("basis", "rate requires the weighted_u basis");
    for (const int n : c.n_values) {
      if (n < 8 || n > 256) {
        in.error("n_values", "rate degrees must lie in [8, 256]");
        break;
      }
    }
  }
  if (kind == ExperimentKind::continuity) {
    const Interval dom = basis_domain(c.basis);
    if (c.mode == ContinuityMode::quadratic_mean && c.process != ProcessKind::wiener) {
      in.error("mode", "quadratic_mean requires wiener paths");
    }
    if (c.replicas < 2) in.error("replicas", "continuity needs at least 2 replicas");
    if (!dom.contains(c.y_center)) in.error("y_center", "outside the basis domain");
    for (std::size_t i = 0; i < c.h_values.size(); ++i) {
      const double h = c.h_values[i];
      if (!(h >= 0.0) || (i > 0 && h > c.h_values[i - 1])) {
        in.error("h_values", "must be nonnegative and decreasing");
        break;
      }
      if (!dom.contains(c.y_center + h)) {
        in.error("h_values", "y_center + " + fmt_short(h) + " lies outside the basis domain");
        break;
      }
    }
  }
  if ((kind == ExperimentKind::tail || kind == ExperimentKind::qm) &&
      !basis_domain(c.basis).contains(c.y)) {
    in.error("y", "outside the basis domain");
  }
  return result;
}

ValidationResult validate_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ValidationResult r;
    r.errors.push_back("config: cannot read " + path.string());
    return r;
  }
  const json raw = json::parse(in, nullptr, false);
  if (raw.is_discarded()) {
    ValidationResult r;
    r.errors.push_back("config: " + path.string() + " is not valid JSON");
    return r;
  }
  return validate(raw);
}

json to_json(const ExperimentConfig& c) {
  return json{{"experiment", to_string(c.experiment)},
              {"function_id", c.function_id},
              {"basis", to_string(c.basis)},
              {"gamma", c.gamma},
              {"delta", c.delta},
              {"eta", c.eta},
              {"tau", c.tau},
              {"process", to_string(c.process)},
              {"alpha", c.alpha},
              {"n_values", c.n_values},
              {"epsilon", c.epsilon},
              {"eps_prime", c.eps_prime},
              {"replicas", c.replicas},
              {"grid_M", c.grid_M},
              {"N_ref", c.N_ref},
              {"seed", c.seed},
              {"y", c.y},
              {"y_center", c.y_center},
              {"h_values", c.h_values},
              {"mode", to_string(c.mode)},
              {"tail_threshold", c.tail_threshold},
              {"slope_max", c.slope_max},
              {"continuity_ratio", c.continuity_ratio},
              {"tolerance", c.tolerance},
              {"quadrature_nodes", c.quadrature_nodes},
              {"output_path", c.output_path}};
}

bool ExperimentResult::passed() const {
  return std::none_of(properties.begin(), properties.end(),
                      [](const PropertyResult& p) { return p.status == PropertyStatus::fail; });
}

std::string ExperimentResult::summary(const ExperimentConfig& config) const {
  std::ostringstream out;
  out << "experiment: " << to_string(config.experiment) << '\n'
      << "function: " << config.function_id << '\n'
      << "basis: " << to_string(config.basis) << " (gamma " << fmt_short(config.gamma)
      << ", delta " << fmt_short(config.delta) << ")\n"
      << "weight: eta " << fmt_short(config.eta) << ", tau " << fmt_short(config.tau) << '\n'
      << "process: " << to_string(config.process) << " (alpha " << fmt_short(config.alpha) << ")\n"
      << "seed: " << config.seed << '\n';
  for (const PropertyResult& p : properties) {
    const char* tag = p.status == PropertyStatus::pass   ? "PASS"
                      : p.status == PropertyStatus::fail ? "FAIL"
                                                         : "INFO";
    out << tag << "  " << p.name << "  " << p.detail << '\n';
  }
  out << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

ExperimentResult execute(const ExperimentConfig& c, int threads) {
  switch (c.experiment) {
    case ExperimentKind::expand: return run_expand(c);
    case ExperimentKind::orthonormality: return run_orthonormality(c);
    case ExperimentKind::sample_paths: return run_sample_paths(c);
    case ExperimentKind::isometry: return run_isometry(c, threads);
    case ExperimentKind::tail: return run_tail(c, threads);
    case ExperimentKind::qm: return run_qm(c, threads);
    case ExperimentKind::rate: return run_rate(c);
    case ExperimentKind::continuity: return run_continuity(c, threads);
  }
  throw std::logic_error("unhandled experiment");
}

int run_config_file(const std::filesystem::path& path, std::ostream& log, int threads) {
  const ValidationResult v = validate_file(path);
  if (!v.ok()) {
    for (const std::string& e : v.errors) log << "error: " << e << '\n';
    return exit_config;
  }
  const ExperimentConfig& c = v.config;
  const std::filesystem::path out(c.output_path);
  const std::filesystem::path parent = out.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    log << "error: output_path: directory " << parent.string() << " does not exist\n";
    return exit_config;
  }

  ExperimentResult result;
  try {
    result = execute(c, threads);
  } catch (const NumericError& e) {
    log << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    log << "run failed: " << e.what() << '\n';
    return exit_numeric;
  }

  const std::string summary = result.summary(c);
  try {
    write_file(c.output_path + ".csv", result.csv);
    write_file(c.output_path + ".summary.txt", summary);
    write_file(c.output_path + ".config.json", to_json(c).dump(2) + '\n');
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_config;
  }
  log << summary;
  return result.passed() ? exit_ok : exit_property;
}

std::string catalog_listing() {
  std::ostringstream out;
  for (const TestFunction& f : catalog()) {
    out << f.id << "  " << to_string(f.declared_class);
    if (f.declared_class == FunctionClass::lipschitz || f.declared_class == FunctionClass::polynomial) {
      out << " (p " << f.declared_p << ", mu " << fmt_short(f.declared_mu) << ')';
    }
    out << "  " << f.description << '\n';
  }
  return out.str();
}

}  // namespace rfj
