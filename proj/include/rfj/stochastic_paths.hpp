// Discretized sample paths of the Wiener process and of symmetric α-stable
// processes, stored as independent increments on a uniform grid.
//
// Scale conventions: Wiener increments are N(0, dt) (β = 1). Stable
// increments are S(α, dt^{1/α}) with characteristic function
// exp(-|dt^{1/α} u|^α), so α = 2 gives N(0, 2 dt), not the Wiener law.

#ifndef RFJ_STOCHASTIC_PATHS_HPP
#define RFJ_STOCHASTIC_PATHS_HPP

#include <cstdint>
#include <ostream>
#include <string_view>

#include <Eigen/Dense>

#include "rfj/jacobi_basis.hpp"
#include "rfj/rng.hpp"

namespace rfj {

class PathGrid {
 public:
  PathGrid(Interval interval, int increments);

  const Interval& interval() const { return interval_; }
  int increments() const { return increments_; }
  double dt() const { return dt_; }

  /// Grid point i in [0, M]; the last point is exactly hi.
  double point(int i) const;
  /// Left endpoints t_0 .. t_{M-1}.
  Eigen::VectorXd left_points() const;
  /// All M + 1 points.
  Eigen::VectorXd points() const;

  friend bool operator==(const PathGrid&, const PathGrid&) = default;

 private:
  Interval interval_;
  int increments_;
  double dt_;
};

enum class ProcessKind { wiener, stable };

std::string_view to_string(ProcessKind kind);
ProcessKind process_kind_from_string(std::string_view name);

struct SamplePath {
  PathGrid grid;
  Eigen::VectorXd increments;
  double alpha = 2.0;
  ProcessKind process = ProcessKind::wiener;
  StreamKey stream;

  /// X(t_i) = Σ_{j<i} increments_j, starting at 0; M + 1 values.
  Eigen::VectorXd values() const;
};

/// Chambers–Mallows–Stuck variate S(α, 1) from two uniforms in (0, 1):
/// V = π (u_v - 1/2), E = -ln u_e.
double stable_variate(double alpha, double u_v, double u_e);

/// Standard normal from two uniforms (Box–Muller, cosine branch).
double normal_variate(double u1, double u2);

SamplePath sample_wiener(const PathGrid& grid, StreamKey stream);
SamplePath sample_stable(const PathGrid& grid, double alpha, StreamKey stream);
SamplePath sample_path(ProcessKind process, const PathGrid& grid, double alpha, StreamKey stream);

/// Fills column r of `increments` (M x count) with the path of replica first + r.
void sample_increments(ProcessKind process, const PathGrid& grid, double alpha,
                       std::uint64_t seed, std::uint64_t first_replica,
                       Eigen::Ref<Eigen::MatrixXd> increments);

/// Merges adjacent cell pairs: the same realization on a grid of M/2 cells.
SamplePath coarsen(const SamplePath& path);

/// CSV with header "t,x" and one row per grid point.
void write_path_csv(std::ostream& out, const SamplePath& path);

}  // namespace rfj

#endif  // RFJ_STOCHASTIC_PATHS_HPP
