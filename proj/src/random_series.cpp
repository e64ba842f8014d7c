#include "rfj/random_series.hpp"

#include <stdexcept>
#include <string>

namespace rfj {

namespace {

void check_truncation(const SeriesExpansion& expansion, int n) {
  if (n < 0 || n > expansion.n_max()) {
    throw std::out_of_range("truncation degree " + std::to_string(n) +
                            " exceeds the expansion length " +
                            std::to_string(expansion.n_max()));
  }
}

Eigen::VectorXd basis_row(const JacobiBasis& basis, double y, int n) {
  Eigen::VectorXd point(1);
  point(0) = y;
  return basis.values(point, n).row(0).transpose();
}

}  // namespace

std::string_view to_string(SeriesVariant v) {
  switch (v) {
    case SeriesVariant::S: return "S";
    case SeriesVariant::S_weighted: return "S_weighted";
    case SeriesVariant::T: return "T";
  }
  return "?";
}

SeriesVariant variant_for(BasisKind basis) {
  switch (basis) {
    case BasisKind::orthonormal_p: return SeriesVariant::S;
    case BasisKind::weighted_u: return SeriesVariant::S_weighted;
    case BasisKind::modified_q: return SeriesVariant::T;
  }
  throw std::invalid_argument("variant_for: unknown basis");
}

double kernel(const SeriesExpansion& expansion, int n, double y, double t) {
  check_truncation(expansion, n);
  const JacobiBasis basis(expansion.basis, expansion.params, n);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += expansion.coefficients(k) * basis(k, y) * basis(k, t);
  return sum;
}

KernelEvaluation kernel_on_grid(const SeriesExpansion& expansion, int n, double y,
                                const Eigen::Ref<const Eigen::VectorXd>& t) {
  check_truncation(expansion, n);
  const JacobiBasis basis(expansion.basis, expansion.params, n);
  const Eigen::VectorXd at_y =
      expansion.coefficients.head(n + 1).cwiseProduct(basis_row(basis, y, n));
  return {n, y, t, basis.values(t, n) * at_y};
}

double partial_sum(const SeriesExpansion& expansion, const RandomCoefficients& random, int n,
                   double y) {
  Eigen::VectorXd point(1);
  point(0) = y;
  return partial_sums(expansion, random, n, point).values(0);
}

PartialSumEvaluation partial_sums(const SeriesExpansion& expansion,
                                  const RandomCoefficients& random, int n,
                                  const Eigen::Ref<const Eigen::VectorXd>& y_grid) {
  if (basis_for(random.kind) != expansion.basis || !(random.params == expansion.params)) {
    throw std::invalid_argument(std::string("partial_sum: ") +
                                std::string(to_string(expansion.basis)) +
                                " coefficients cannot be paired with random coefficients " +
                                std::string(to_string(random.kind)));
  }
  check_truncation(expansion, n);
  if (n > random.n_max()) throw std::out_of_range("partial_sum: degree exceeds random coefficients");
  const JacobiBasis basis(expansion.basis, expansion.params, n);
  const Eigen::VectorXd products =
      expansion.coefficients.head(n + 1).cwiseProduct(random.values.head(n + 1));
  return {n, variant_for(expansion.basis), y_grid, basis.values(y_grid, n) * products, random.path};
}

double kernel_path_integral(const SeriesExpansion& expansion, const WeightParams& weight, int n,
                            double y, const SamplePath& path) {
  if (!(basis_domain(expansion.basis) == path.grid.interval())) {
    throw std::invalid_argument("kernel_path_integral: path interval differs from basis domain");
  }
  const KernelEvaluation k = kernel_on_grid(expansion, n, y, path.grid.left_points());
  double sum = 0.0;
  for (int i = 0; i < path.grid.increments(); ++i) {
    sum += k.values(i) * path_weight(weight, path.grid.interval(), k.t_values(i)) *
           path.increments(i);
  }
  return sum;
}

double reference_limit(const SeriesExpansion& expansion, const WeightParams& weight, double y,
                       const SamplePath& path, int n_ref, int max_test_degree) {
  if (max_test_degree >= 0 && n_ref <= max_test_degree) {
    throw std::invalid_argument("reference_limit: N_ref = " + std::to_string(n_ref) +
                                " must exceed the largest tested degree " +
                                std::to_string(max_test_degree));
  }
  return kernel_path_integral(expansion, weight, n_ref, y, path);
}

}  // namespace rfj
