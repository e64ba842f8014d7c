#include "rfj/stochastic_paths.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rfj {

PathGrid::PathGrid(Interval interval, int increments)
    : interval_(interval), increments_(increments), dt_(0.0) {
  if (increments < 1) throw std::invalid_argument("PathGrid: need at least one increment");
  if (!(interval.hi > interval.lo)) throw std::invalid_argument("PathGrid: empty interval");
  dt_ = interval.length() / increments;
}

double PathGrid::point(int i) const {
  if (i < 0 || i > increments_) throw std::out_of_range("PathGrid::point");
  return i == increments_ ? interval_.hi : interval_.lo + i * dt_;
}

Eigen::VectorXd PathGrid::left_points() const {
  Eigen::VectorXd t(increments_);
  for (int i = 0; i < increments_; ++i) t(i) = point(i);
  return t;
}

Eigen::VectorXd PathGrid::points() const {
  Eigen::VectorXd t(increments_ + 1);
  for (int i = 0; i <= increments_; ++i) t(i) = point(i);
  return t;
}

std::string_view to_string(ProcessKind kind) {
  return kind == ProcessKind::wiener ? "wiener" : "stable";
}

ProcessKind process_kind_from_string(std::string_view name) {
  if (name == "wiener") return ProcessKind::wiener;
  if (name == "stable") return ProcessKind::stable;
  throw std::invalid_argument("unknown process '" + std::string(name) + "'");
}

Eigen::VectorXd SamplePath::values() const {
  Eigen::VectorXd x(increments.size() + 1);
  x(0) = 0.0;
  for (Eigen::Index i = 0; i < increments.size(); ++i) x(i + 1) = x(i) + increments(i);
  return x;
}

double stable_variate(double alpha, double u_v, double u_e) {
  const double v = std::numbers::pi * (u_v - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double e = -std::log(u_e);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - alpha * v) / e, (1.0 - alpha) / alpha);
}

double normal_variate(double u1, double u2) {
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("stable index alpha must lie in [1, 2], got " +
                                std::to_string(alpha));
  }
}

void fill_increments(ProcessKind process, const PathGrid& grid, double alpha,
                     const StreamKey& stream, Eigen::Ref<Eigen::VectorXd> out) {
  const int m = grid.increments();
  if (process == ProcessKind::wiener) {
    const double scale = std::sqrt(grid.dt());
    for (int i = 0; i < m; ++i) {
      const UniformPair u = uniform_pair(stream, static_cast<std::uint64_t>(i));
      out(i) = scale * normal_variate(u.first, u.second);
    }
  } else {
    const double scale = std::pow(grid.dt(), 1.0 / alpha);
    for (int i = 0; i < m; ++i) {
      const UniformPair u = uniform_pair(stream, static_cast<std::uint64_t>(i));
      out(i) = scale * stable_variate(alpha, u.first, u.second);
    }
  }
}

}  // namespace

SamplePath sample_wiener(const PathGrid& grid, StreamKey stream) {
  SamplePath path{grid, Eigen::VectorXd(grid.increments()), 2.0, ProcessKind::wiener, stream};
  fill_increments(ProcessKind::wiener, grid, 2.0, stream, path.increments);
  return path;
}

SamplePath sample_stable(const PathGrid& grid, double alpha, StreamKey stream) {
  check_alpha(alpha);
  SamplePath path{grid, Eigen::VectorXd(grid.increments()), alpha, ProcessKind::stable, stream};
  fill_increments(ProcessKind::stable, grid, alpha, stream, path.increments);
  return path;
}

SamplePath sample_path(ProcessKind process, const PathGrid& grid, double alpha,
                       StreamKey stream) {
  return process == ProcessKind::wiener ? sample_wiener(grid, stream)
                                        : sample_stable(grid, alpha, stream);
}

void sample_increments(ProcessKind process, const PathGrid& grid, double alpha,
                       std::uint64_t seed, std::uint64_t first_replica,
                       Eigen::Ref<Eigen::MatrixXd> increments) {
  if (process == ProcessKind::stable) check_alpha(alpha);
  if (increments.rows() != grid.increments()) {
    throw std::invalid_argument("sample_increments: row count must equal M");
  }
  for (Eigen::Index r = 0; r < increments.cols(); ++r) {
    fill_increments(process, grid, alpha, {seed, first_replica + static_cast<std::uint64_t>(r)},
                    increments.col(r));
  }
}

SamplePath coarsen(const SamplePath& path) {
  const int m = path.grid.increments();
  if (m % 2 != 0) throw std::invalid_argument("coarsen: increment count must be even");
  SamplePath out{PathGrid(path.grid.interval(), m / 2), Eigen::VectorXd(m / 2), path.alpha,
                 path.process, path.stream};
  for (int i = 0; i < m / 2; ++i) {
    out.increments(i) = path.increments(2 * i) + path.increments(2 * i + 1);
  }
  return out;
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  const Eigen::VectorXd x = path.values();
  out << "t,x\n";
  char buf[64];
  for (int i = 0; i <= path.grid.increments(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.grid.point(i), x(i));
    out << buf;
  }
}

}  // namespace rfj
