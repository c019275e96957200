#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "percshape/experiments.hpp"

using namespace percshape;

TEST(Replicas, OrderedRegardlessOfThreads) {
  auto square = [](std::uint64_t r) { return static_cast<int>(r * r); };
  const auto one = for_each_replica(50, 1, square);
  const auto many = for_each_replica(50, 7, square);
  EXPECT_EQ(one, many);
  EXPECT_EQ(one[7], 49);
  EXPECT_TRUE(for_each_replica(0, 4, square).empty());
}

TEST(Replicas, WorkerExceptionPropagates) {
  auto boom = [](std::uint64_t r) -> int {
    if (r == 3) throw std::runtime_error("replica failed");
    return 0;
  };
  EXPECT_THROW(for_each_replica(10, 3, boom), std::runtime_error);
}

TEST(Csv, ByteIdenticalAcrossThreadCounts) {
  auto render = [](int threads) {
    std::vector<CsvRow> rows;
    const auto v = cross_shape_samples(0.2, {0.0, 1.0}, 300, 6, 17, threads);
    append_series(rows, 0.0, 0.2, 300, "cross_distance", v[0]);
    append_series(rows, 1.0, 0.2, 300, "cross_distance", v[1]);
    const auto mu = estimate_mu(0.2, {0.5}, 200, 5, 17, 0.25, 0.5, threads, 0.0);
    std::vector<double> vals;
    for (const auto& s : mu[0].samples) vals.push_back(s.accepted ? s.distance / 200.0 : -1.0);
    append_series(rows, 0.5, 0.2, 200, "chemical_distance", vals);
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
  };
  const std::string a = render(1);
  EXPECT_EQ(a, render(4));
  EXPECT_EQ(a.substr(0, a.find('\n')), "lambda,epsilon,n,seed,value,stderr,quantity");
}

TEST(EstimateMu, ZeroEpsilonIsExactlyOne) {
  for (const MuEstimate& e : estimate_mu(0.0, {0.0, 0.5, 1.0}, 1000, 2, 1, 0.25, std::nullopt)) {
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.acceptance_rate(), 1.0);
    EXPECT_EQ(e.lower_bound, 1.0);
  }
}

TEST(EstimateMu, RejectsBadParameters) {
  EXPECT_THROW(estimate_mu(0.6, {0.5}, 100, 1, 1, 0.25, std::nullopt), std::invalid_argument);
  EXPECT_THROW(estimate_mu(0.1, {1.5}, 100, 1, 1, 0.25, std::nullopt), std::invalid_argument);
  // a thin box near criticality loses the endpoints
  EXPECT_THROW(estimate_mu(0.45, {0.0}, 400, 20, 1, 0.02, std::nullopt), std::runtime_error);
}

TEST(EstimateMu, LowerBoundAtModerateSize) {
  const auto e = estimate_mu(0.1, {1.0}, 1000, 20, 3, 0.25, std::nullopt);
  EXPECT_TRUE(e[0].above_lower_bound()) << e[0].mean << " vs " << e[0].lower_bound;
  EXPECT_GT(e[0].acceptance_rate(), 0.9);
}

// The cross estimate and the current of the extracted trajectory give the
// same number on every replica.
TEST(CrossModel, DistanceEqualsCurrentFormulaPerReplica) {
  const int n = 400;
  const double eps = 0.2;
  const auto v = cross_shape_samples(eps, {0.5}, n, 5, 9);
  const int j = target_row(n, eps, 0.5);
  const RowRange rr = compact_rows(n, j, eps);
  for (std::uint64_t r = 0; r < 5; ++r) {
    Rng rng = make_stream(9, r, Stream::cross_edges);
    const CrossConfig c = sample_cross(n, rr.lo, rr.hi, eps, rng, r);
    const ParticleField last = cross_trajectory(c).at_time(n);
    long cur = 0;
    for (int s = j + 1; s <= last.window_hi(); ++s) cur += last.occupied(s);
    EXPECT_DOUBLE_EQ(v[0][r], static_cast<double>(n + j + 2 * cur) / n);
  }
}

TEST(CrossModel, TasepAndLppEstimatorsNearLimits) {
  const auto t = tasep_current_samples(0.3, 0.5, 1500, 6, 2);
  const RunningStats st = summarize(t);
  EXPECT_NEAR(st.mean(), current_limit(1.0, 0.15, 0.3), 0.01);
  const auto l = lpp_samples(0.5, 1.0, 300, 6, 2);
  EXPECT_NEAR(summarize(l).mean(), psi(1, 1, 0.5), 0.03 * psi(1, 1, 0.5));
}

TEST(Shape, FullDensityIsL1Sphere) {
  const BallBoundary b = shape_scan(1.0, 30, 0.25, 1, 0);
  std::vector<Point> sphere;
  for (int x = -30; x <= 30; ++x)
    for (int y = -30; y <= 30; ++y)
      if (std::abs(x) + std::abs(y) == 30) sphere.push_back({x, y});
  std::sort(sphere.begin(), sphere.end());
  std::vector<Point> got = b.boundary;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, sphere);
  for (int y = 0; y <= 30; ++y) EXPECT_EQ(b.outer_x[static_cast<std::size_t>(y)], 30 - y);
  const ShapeCheck c = check_shape(b);
  EXPECT_TRUE(c.axis_within);
  EXPECT_EQ(c.band_rows, 0);
}

TEST(Shape, BoundaryPointsHaveOutsideNeighbour) {
  const BallBoundary b = shape_scan_accepted(0.9, 60, 0.25, 4).first;
  EXPECT_FALSE(b.boundary.empty());
  for (const Point& p : b.boundary) EXPECT_LE(std::abs(p.x) + std::abs(p.y), 60);
  EXPECT_EQ(b.theory.size(), 101u);
  EXPECT_NEAR(b.theory.front().first, 60 / f_first_order(0, 0.1), 1e-9);
  EXPECT_DOUBLE_EQ(b.theory.front().second, 0.0);
}

TEST(Shape, StaircaseDetector) {
  EXPECT_TRUE(is_staircase({10, 9, 9, 8, 6}, 4, 1.0));
  EXPECT_TRUE(is_staircase({10, 9, 10, 8}, 3, 1.0));   // within jitter
  EXPECT_FALSE(is_staircase({10, 9, 12, 8}, 3, 1.0));
}

TEST(Verify, SmallRunPassesAndFaultIsCaught) {
  VerifyOptions opt;
  opt.seeds = 4;
  opt.n = 60;
  opt.exhaustive_law = false;
  const VerifyReport ok = run_verify(opt);
  EXPECT_TRUE(ok.all_passed());
  opt.inject_fault = true;
  const VerifyReport bad = run_verify(opt);
  EXPECT_FALSE(bad.all_passed());
  bool reported = false;
  for (const auto& r : bad.results)
    if (r.failures > 0) reported = reported || r.first_failing_seed.has_value();
  EXPECT_TRUE(reported);
}

TEST(Shape, AxisExtentNearPrediction) {
  RunningStats axis;
  std::uint64_t next = 0;
  for (int k = 0; k < 5; ++k) {
    const auto [ball, rep] = shape_scan_accepted(0.95, 500, 0.25, 11, next);
    next = rep + 1;
    axis.add(ball.outer_x[0]);
    const ShapeCheck c = check_shape(ball);
    EXPECT_TRUE(c.axis_within);
    EXPECT_TRUE(c.off_axis_strict);
  }
  const double predicted = 500 / f_shape(0.0, 0.05);
  EXPECT_NEAR(axis.mean(), predicted, 0.02 * predicted);
}

// The outer contour is exactly monotone at full density. With closed edges
// the boundary is rough on a scale of a few sites (2 to 5 measured at
// r = 500), so the tolerance there is r^(1/3).
TEST(Shape, OuterContourIsStaircase) {
  const BallBoundary full = shape_scan(1.0, 200, 0.25, 1, 0);
  const std::vector<double> fx(full.outer_x.begin(), full.outer_x.end());
  EXPECT_TRUE(is_staircase(fx, 200, 1.0));
  const BallBoundary ball = shape_scan_accepted(0.95, 500, 0.25, 11).first;
  int y_max = 0;
  while (y_max + 1 < static_cast<int>(ball.outer_x.size()) && ball.outer_x[static_cast<std::size_t>(y_max) + 1] >= 0) ++y_max;
  const std::vector<double> ox(ball.outer_x.begin(), ball.outer_x.end());
  EXPECT_TRUE(is_staircase(ox, y_max, std::ceil(std::cbrt(500.0))));
}

TEST(Verify, HundredSeedsUnderAMinute) {
  VerifyOptions opt;
  opt.epsilon = 0.2;
  opt.n = 100;
  opt.seeds = 100;
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyReport rep = run_verify(opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& r : rep.results) EXPECT_TRUE(r.passed()) << r.name;
  EXPECT_EQ(rep.results.size(), 7u);
  EXPECT_LT(secs, 60.0);
}
