#include "rfj/function_lab.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace rfj {

namespace {

TestFunction polynomial(std::string id, int degree, std::function<double(double)> f,
                        std::string description) {
  return {std::move(id), kSymmetricInterval, std::move(f), FunctionClass::polynomial,
          degree,        0.0,                true,         std::move(description),
          {}};
}

TestFunction lipschitz(std::string id, int p, double mu, std::function<double(double)> f,
                       std::string description) {
  return {std::move(id), kSymmetricInterval, std::move(f), FunctionClass::lipschitz,
          p,             mu,                 true,         std::move(description),
          {0.0}};
}

std::vector<TestFunction> make_catalog() {
  std::vector<TestFunction> out;
  out.push_back(polynomial("constant", 0, [](double) { return 1.0; }, "1"));
  out.push_back(polynomial("linear", 1, [](double t) { return t; }, "t"));
  out.push_back(polynomial("quadratic", 2, [](double t) { return t * t; }, "t^2"));
  out.push_back(polynomial("cubic", 3, [](double t) { return t * t * t - 0.5 * t; },
                           "t^3 - t/2"));
  out.push_back(polynomial(
      "quintic", 5, [](double t) { return ((0.5 * t * t - 1.0) * t * t + 0.25) * t + 0.1; },
      "t^5/2 - t^3 + t/4 + 1/10"));
  out.push_back(polynomial(
      "chebyshev10", 10, [](double t) { return std::cos(10.0 * std::acos(t)); }, "T_10(t)"));
  out.push_back(lipschitz("sqrt_abs", 0, 0.5, [](double t) { return std::sqrt(std::abs(t)); },
                          "|t|^(1/2)"));
  out.push_back(lipschitz("abs_pow_3_2", 1, 0.5,
                          [](double t) { return std::pow(std::abs(t), 1.5); }, "|t|^(3/2)"));
  out.push_back(lipschitz("sq_abs_pow_1_2", 2, 0.5,
                          [](double t) { return t * t * std::sqrt(std::abs(t)); },
                          "t^2 |t|^(1/2)"));
  out.push_back({"bump", kSymmetricInterval,
                 [](double t) {
                   const double s = 1.0 - t * t;
                   return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
                 },
                 FunctionClass::smooth, 0, 0.0, true, "exp(1 - 1/(1 - t^2))", {}});
  // ϖ(f, h) ≈ 1 / ln(e + 1/h), so ϖ(f, 1/n) ln n stays near 1.
  out.push_back({"slow_modulus", kSymmetricInterval,
                 [](double t) {
                   const double a = std::abs(t);
                   return a == 0.0 ? 0.0 : 1.0 / std::log(std::numbers::e + 1.0 / a);
                 },
                 FunctionClass::generic, 0, 0.0, false, "1 / ln(e + 1/|t|)", {0.0}});
  return out;
}

Eigen::VectorXd sample_grid(const TestFunction& f, const Interval& interval, int density,
                            double& spacing) {
  const long cells = std::lround(interval.length() * density);
  if (cells < 1) throw std::invalid_argument("grid density too small for the interval");
  spacing = interval.length() / static_cast<double>(cells);
  Eigen::VectorXd values(cells + 1);
  for (long i = 0; i <= cells; ++i) {
    const double t = i == cells ? interval.hi : interval.lo + static_cast<double>(i) * spacing;
    values(i) = f(t);
  }
  return values;
}

// Largest (max - min) over all windows spanning `reach` cells.
double window_oscillation(const Eigen::VectorXd& v, long reach) {
  const long n = v.size();
  if (reach <= 0 || n < 2) return 0.0;
  std::deque<long> hi;
  std::deque<long> lo;
  double best = 0.0;
  for (long i = 0; i < n; ++i) {
    while (!hi.empty() && v(hi.back()) <= v(i)) hi.pop_back();
    while (!lo.empty() && v(lo.back()) >= v(i)) lo.pop_back();
    hi.push_back(i);
    lo.push_back(i);
    while (hi.front() < i - reach) hi.pop_front();
    while (lo.front() < i - reach) lo.pop_front();
    best = std::max(best, v(hi.front()) - v(lo.front()));
  }
  return best;
}

long reach_for(double eps, double spacing) {
  return static_cast<long>(std::floor(eps / spacing * (1.0 + 1e-12)));
}

LipschitzFit fit_modulus(const Eigen::VectorXd& values, double spacing,
                         const LipschitzSweep& sweep) {
  if (sweep.finest_level <= sweep.coarsest_level) {
    throw std::invalid_argument("lipschitz sweep needs finest_level > coarsest_level");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int level = sweep.coarsest_level; level <= sweep.finest_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    const double w = window_oscillation(values, reach_for(h, spacing));
    if (!(w > 1e-14)) {
      throw std::domain_error("lipschitz_fit: modulus vanishes, slope undefined");
    }
    const double x = std::log(h);
    const double y = std::log(w);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  return {slope, std::exp(intercept)};
}

}  // namespace

std::string_view to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::polynomial: return "polynomial";
    case FunctionClass::lipschitz: return "lipschitz";
    case FunctionClass::smooth: return "smooth";
    case FunctionClass::generic: return "generic";
  }
  return "unknown";
}

const std::vector<TestFunction>& catalog() {
  static const std::vector<TestFunction> entries = make_catalog();
  return entries;
}

const TestFunction& catalog_entry(std::string_view id) {
  for (const auto& f : catalog()) {
    if (f.id == id) return f;
  }
  throw std::invalid_argument("unknown function id '" + std::string(id) + "'");
}

TestFunction on_unit_interval(const TestFunction& f) {
  if (f.domain != kSymmetricInterval) {
    throw std::invalid_argument("on_unit_interval: '" + f.id + "' is not defined on [-1, 1]");
  }
  TestFunction out = f;
  out.domain = kUnitInterval;
  out.evaluator = [g = f.evaluator](double t) { return g(2.0 * t - 1.0); };
  out.description = f.description + " at 2t-1";
  for (double& b : out.breakpoints) b = 0.5 * (b + 1.0);
  return out;
}

double modulus_of_continuity(const TestFunction& f, double eps, int grid_density) {
  if (!(eps > 0.0)) throw std::invalid_argument("modulus_of_continuity: eps must be positive");
  if (grid_density < 2) throw std::invalid_argument("modulus_of_continuity: grid_density < 2");
  double spacing = 0.0;
  const Eigen::VectorXd values = sample_grid(f, f.domain, grid_density, spacing);
  return window_oscillation(values, reach_for(eps, spacing));
}

std::vector<double> dl_diagnostic(const TestFunction& f, std::span<const int> n_list,
                                  int grid_density) {
  double spacing = 0.0;
  const Eigen::VectorXd values = sample_grid(f, f.domain, grid_density, spacing);
  std::vector<double> out;
  out.reserve(n_list.size());
  for (const int n : n_list) {
    if (n < 2) throw std::invalid_argument("dl_diagnostic: degrees must be >= 2");
    const double omega = window_oscillation(values, reach_for(1.0 / n, spacing));
    out.push_back(omega * std::log(static_cast<double>(n)));
  }
  return out;
}

LipschitzFit lipschitz_fit(const TestFunction& f, const Interval& interval,
                           const LipschitzSweep& sweep) {
  double spacing = 0.0;
  const Eigen::VectorXd values = sample_grid(f, interval, sweep.grid_density, spacing);
  return fit_modulus(values, spacing, sweep);
}

LipschitzFit derivative_lipschitz_fit(const TestFunction& f, int p, const LipschitzSweep& sweep) {
  if (p < 0) throw std::invalid_argument("derivative_lipschitz_fit: negative order");
  double spacing = 0.0;
  Eigen::VectorXd values = sample_grid(f, f.domain, sweep.grid_density, spacing);
  for (int k = 0; k < p; ++k) {
    const Eigen::Index n = values.size();
    values = ((values.tail(n - 1) - values.head(n - 1)) / spacing).eval();
  }
  return fit_modulus(values, spacing, sweep);
}

}  // namespace rfj
