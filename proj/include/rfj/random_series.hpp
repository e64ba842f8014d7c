// Partial sums of random Fourier–Jacobi series and their kernel form.
//
// For an expansion with coefficients d_k in a basis φ_k and random
// coefficients r_k = ∫ φ_k w dX,
//   partial_sum(n, y) = Σ_{k<=n} d_k r_k φ_k(y)
//                     = ∫ kernel_n(y, t) w(t) dX(t),
//   kernel_n(y, t)    = Σ_{k<=n} d_k φ_k(y) φ_k(t).
// The limit integrand is stood in for by the kernel at a reference
// truncation N_ref, evaluated on the same path.

#ifndef RFJ_RANDOM_SERIES_HPP
#define RFJ_RANDOM_SERIES_HPP

#include <string_view>

#include <Eigen/Dense>

#include "rfj/quadrature.hpp"
#include "rfj/stochastic_integral.hpp"

namespace rfj {

enum class SeriesVariant { S, S_weighted, T };

std::string_view to_string(SeriesVariant v);
SeriesVariant variant_for(BasisKind basis);

struct KernelEvaluation {
  int n;
  double y;
  Eigen::VectorXd t_values;
  Eigen::VectorXd values;
};

struct PartialSumEvaluation {
  int n;
  SeriesVariant variant;
  Eigen::VectorXd y_grid;
  Eigen::VectorXd values;
  PathProvenance path;
};

double kernel(const SeriesExpansion& expansion, int n, double y, double t);

KernelEvaluation kernel_on_grid(const SeriesExpansion& expansion, int n, double y,
                                const Eigen::Ref<const Eigen::VectorXd>& t);

double partial_sum(const SeriesExpansion& expansion, const RandomCoefficients& random, int n,
                   double y);

PartialSumEvaluation partial_sums(const SeriesExpansion& expansion,
                                  const RandomCoefficients& random, int n,
                                  const Eigen::Ref<const Eigen::VectorXd>& y_grid);

/// integrate_path(t ↦ kernel_n(y, t), weight, path).
double kernel_path_integral(const SeriesExpansion& expansion, const WeightParams& weight, int n,
                            double y, const SamplePath& path);

/// Kernel path integral at truncation n_ref. When max_test_degree >= 0 the
/// reference truncation must exceed it.
double reference_limit(const SeriesExpansion& expansion, const WeightParams& weight, double y,
                       const SamplePath& path, int n_ref, int max_test_degree = -1);

}  // namespace rfj

#endif  // RFJ_RANDOM_SERIES_HPP
