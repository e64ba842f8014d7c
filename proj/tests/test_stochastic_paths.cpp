#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rfj/stochastic_paths.hpp"

using namespace rfj;

namespace {

struct Stats {
  double mean;
  double var;
};

Stats stats(const std::vector<double>& x) {
  double m = 0.0;
  for (const double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (const double v : x) s += (v - m) * (v - m);
  return {m, s / static_cast<double>(x.size() - 1)};
}

std::vector<double> stable_draws(double alpha, std::uint64_t seed, int count) {
  std::vector<double> out;
  out.reserve(count);
  const StreamKey stream{seed, 0};
  for (int i = 0; i < count; ++i) {
    const UniformPair u = uniform_pair(stream, static_cast<std::uint64_t>(i));
    out.push_back(stable_variate(alpha, u.first, u.second));
  }
  return out;
}

// Asymptotic two-sample Kolmogorov–Smirnov p-value.
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    q += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(q, 0.0, 1.0);
}

double lag1_correlation(const Eigen::VectorXd& x) {
  const Eigen::ArrayXd c = x.array() - x.mean();
  return (c.head(c.size() - 1) * c.tail(c.size() - 1)).sum() / c.square().sum();
}

double median(std::vector<double> x) {
  std::nth_element(x.begin(), x.begin() + x.size() / 2, x.end());
  return x[x.size() / 2];
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  const Philox4x32 zero = philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zero == Philox4x32{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  const Philox4x32 ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox4x32{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  const Philox4x32 pi = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
  CHECK(pi == Philox4x32{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("open-interval uniforms") {
  CHECK(open_unit(0) > 0.0);
  CHECK(open_unit(~std::uint64_t{0}) < 1.0);
  const StreamKey s{7, 3};
  const UniformPair a = uniform_pair(s, 11);
  const UniformPair b = uniform_pair(s, 11);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(uniform_pair({7, 4}, 11).first != a.first);
  CHECK(uniform_pair({8, 3}, 11).first != a.first);
}

TEST_CASE("PathGrid") {
  const PathGrid g({-1.0, 1.0}, 3);
  CHECK(g.dt() == doctest::Approx(2.0 / 3.0));
  CHECK(g.point(0) == -1.0);
  CHECK(g.point(3) == 1.0);
  CHECK(g.left_points().size() == 3);
  CHECK(g.points().size() == 4);
  CHECK_THROWS_AS(PathGrid({0.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid({1.0, 1.0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(g.point(4), std::out_of_range);
}

TEST_CASE("paths are deterministic and start at zero") {
  const PathGrid g(kUnitInterval, 64);
  const SamplePath a = sample_wiener(g, {5, 2});
  const SamplePath b = sample_wiener(g, {5, 2});
  CHECK(a.increments == b.increments);
  CHECK(sample_wiener(g, {5, 3}).increments != a.increments);
  CHECK(a.values()(0) == 0.0);
  CHECK(a.values()(64) == doctest::Approx(a.increments.sum()));
  CHECK(a.process == ProcessKind::wiener);

  const SamplePath s = sample_stable(g, 1.5, {5, 2});
  CHECK(s.process == ProcessKind::stable);
  CHECK(s.alpha == 1.5);
  CHECK_THROWS_AS(sample_stable(g, 0.9, {5, 2}), std::invalid_argument);
  CHECK_THROWS_AS(sample_stable(g, 2.5, {5, 2}), std::invalid_argument);

  Eigen::MatrixXd block(64, 3);
  sample_increments(ProcessKind::stable, g, 1.5, 5, 1, block);
  CHECK(block.col(1) == s.increments);
  CHECK_THROWS_AS(sample_increments(ProcessKind::wiener, PathGrid(kUnitInterval, 32), 2.0, 5, 0, block),
                  std::invalid_argument);
}

TEST_CASE("Wiener increments have variance dt") {
  const PathGrid one(kUnitInterval, 1);
  std::vector<double> x;
  for (std::uint64_t r = 0; r < 100000; ++r) x.push_back(sample_wiener(one, {17, r}).increments(0));
  const Stats s = stats(x);
  CHECK(s.var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(s.mean) < 4.0 / std::sqrt(1e5));

  const PathGrid four(kUnitInterval, 4);
  std::vector<double> pairs;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    const SamplePath c = coarsen(sample_wiener(four, {18, r}));
    REQUIRE(c.grid.increments() == 2);
    pairs.push_back(c.increments(0));
    pairs.push_back(c.increments(1));
  }
  // Each merged cell spans 2 dt = 1/2; SE of a variance estimate is about var·sqrt(2/n).
  const double var = stats(pairs).var;
  CHECK(std::abs(var - 0.5) < 4.0 * 0.5 * std::sqrt(2.0 / 40000.0));
  CHECK_THROWS_AS(coarsen(sample_wiener(PathGrid(kUnitInterval, 3), {1, 0})), std::invalid_argument);
}

TEST_CASE("stable sampler reductions") {
  SUBCASE("alpha = 2 is N(0, 2)") {
    const std::vector<double> z = stable_draws(2.0, 101, 100000);
    CHECK(std::abs(stats(z).var - 2.0) < 0.05);
    // Closed form 2 sin(V) sqrt(E) on the same uniforms.
    const UniformPair u = uniform_pair({101, 0}, 5);
    const double v = std::numbers::pi * (u.first - 0.5);
    CHECK(z[5] == doctest::Approx(2.0 * std::sin(v) * std::sqrt(-std::log(u.second))).epsilon(1e-12));
  }
  SUBCASE("alpha = 1 is standard Cauchy") {
    const std::vector<double> z = stable_draws(1.0, 102, 100000);
    const double tail = std::count_if(z.begin(), z.end(), [](double v) { return std::abs(v) > 1.0; }) / 1e5;
    CHECK(std::abs(tail - 0.5) < 0.01);
  }
  SUBCASE("alpha = 1.5 characteristic function") {
    const std::vector<double> z = stable_draws(1.5, 103, 100000);
    for (const double u : {0.5, 1.0, 2.0}) {
      std::vector<double> c;
      for (const double v : z) c.push_back(std::cos(u * v));
      const Stats s = stats(c);
      const double se = std::sqrt(s.var / static_cast<double>(c.size()));
      CHECK(std::abs(s.mean - std::exp(-std::pow(u, 1.5))) < 3.0 * se);
    }
  }
}

TEST_CASE("stable increments scale as dt^(1/alpha)") {
  for (const double alpha : {1.0, 1.5, 2.0}) {
    CAPTURE(alpha);
    const PathGrid coarse(kUnitInterval, 8);
    const PathGrid fine(kUnitInterval, 16);
    std::vector<double> a, b;
    for (std::uint64_t r = 0; r < 1250; ++r) {
      const SamplePath p = sample_stable(coarse, alpha, {201, r});
      const SamplePath q = sample_stable(fine, alpha, {202, r});
      for (int i = 0; i < 8; ++i) a.push_back(p.increments(i) / std::pow(coarse.dt(), 1.0 / alpha));
      for (int i = 0; i < 8; ++i) b.push_back(q.increments(i) / std::pow(fine.dt(), 1.0 / alpha));
    }
    CHECK(ks_pvalue(a, b) > 0.01);
    CHECK(std::abs(median(a)) < 0.08);
    CHECK(std::abs(median(b)) < 0.08);
  }
}

TEST_CASE("increments are uncorrelated") {
  const PathGrid g(kUnitInterval, 4096);
  const double band = 3.0 / std::sqrt(4096.0);
  for (std::uint64_t r = 0; r < 5; ++r) {
    CHECK(std::abs(lag1_correlation(sample_wiener(g, {301, r}).increments)) < band);
    const SamplePath c = sample_stable(g, 1.0, {302, r});
    const Eigen::VectorXd signs = c.increments.array().sign().matrix();
    CHECK(std::abs(lag1_correlation(signs)) < band);
  }
}

TEST_CASE("path CSV") {
  const SamplePath p = sample_wiener(PathGrid(kUnitInterval, 2), {1, 0});
  std::ostringstream out;
  write_path_csv(out, p);
  const std::string text = out.str();
  CHECK(text.rfind("t,x\n0,0\n0.5,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(process_kind_from_string("stable") == ProcessKind::stable);
  CHECK(to_string(ProcessKind::wiener) == "wiener");
  CHECK_THROWS_AS(process_kind_from_string("levy"), std::invalid_argument);
}
