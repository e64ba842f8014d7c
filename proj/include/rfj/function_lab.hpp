// Catalog of continuous test functions and smoothness diagnostics.
//
// Every catalog entry lives on [-1, 1]; experiments on [0, 1] use the
// pullback t ↦ f(2t - 1) from on_unit_interval().

#ifndef RFJ_FUNCTION_LAB_HPP
#define RFJ_FUNCTION_LAB_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfj/jacobi_basis.hpp"

namespace rfj {

enum class FunctionClass {
  polynomial,  // degree in declared_p
  lipschitz,   // p-th derivative Hölder of order declared_mu (LC(p, μ))
  smooth,      // C-infinity
  generic,     // continuous only
};

std::string_view to_string(FunctionClass c);

struct TestFunction {
  std::string id;
  Interval domain = kSymmetricInterval;
  std::function<double(double)> evaluator;
  FunctionClass declared_class = FunctionClass::generic;
  int declared_p = 0;
  double declared_mu = 0.0;
  bool declared_dl = true;  // in DL[a, b]: ϖ(f, 1/n) ln n → 0
  std::string description;
  std::vector<double> breakpoints;  // interior points where f is not smooth

  double operator()(double t) const { return evaluator(t); }
  double smoothness() const { return declared_p + declared_mu; }
};

const std::vector<TestFunction>& catalog();

/// Throws std::invalid_argument for unknown ids.
const TestFunction& catalog_entry(std::string_view id);

TestFunction on_unit_interval(const TestFunction& f);

/// Grid lower bound on ϖ(f, eps): max |f(x) - f(t)| over grid pairs with
/// |x - t| <= eps, on a uniform grid with grid_density points per unit length.
double modulus_of_continuity(const TestFunction& f, double eps, int grid_density);

/// ϖ(f, 1/n) · ln n for each n.
std::vector<double> dl_diagnostic(const TestFunction& f, std::span<const int> n_list,
                                  int grid_density = 4096);

struct LipschitzFit {
  double mu;        // fitted exponent
  double constant;  // fitted Lipschitz constant
};

struct LipschitzSweep {
  int finest_level = 12;   // smallest h = 2^-finest_level
  int coarsest_level = 3;  // largest h = 2^-coarsest_level
  int grid_density = 1 << 14;
};

/// Least-squares fit of log ϖ(f, h) = log C + μ log h over a dyadic h sweep.
/// Throws std::domain_error for (numerically) constant f.
LipschitzFit lipschitz_fit(const TestFunction& f, const Interval& interval,
                           const LipschitzSweep& sweep = {});

/// Same fit applied to the p-th divided difference of f on the sweep grid,
/// the proxy for the Hölder exponent of f^{(p)}.
LipschitzFit derivative_lipschitz_fit(const TestFunction& f, int p,
                                      const LipschitzSweep& sweep = {6, 2, 1 << 13});

}  // namespace rfj

#endif  // RFJ_FUNCTION_LAB_HPP
