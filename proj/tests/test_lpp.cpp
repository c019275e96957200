#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "percshape/exact_law.hpp"
#include "percshape/lpp.hpp"
#include "percshape/random.hpp"
#include "percshape/stats.hpp"

using namespace percshape;

namespace {

WeightGrid grid_from(const std::vector<std::vector<std::int64_t>>& g) {
  WeightGrid w{Grid1<std::int64_t>(static_cast<int>(g.size()), static_cast<int>(g[0].size()), 0), 0.5};
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) w.g(static_cast<int>(i) + 1, static_cast<int>(j) + 1) = g[i][j];
  return w;
}

}  // namespace

TEST(SampleWeights, UnitProbabilityGivesOnes) {
  Rng rng = make_stream(1, 0, Stream::lpp_weights);
  const WeightGrid w = sample_weights(5, 7, 1.0, rng);
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 7; ++j) EXPECT_EQ(w.g(i, j), 1);
  EXPECT_THROW(sample_weights(5, 7, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_weights(0, 7, 0.5, rng), std::invalid_argument);
}

TEST(SampleWeights, MeanAndPmfAtHalf) {
  Rng rng = make_stream(2, 0, Stream::lpp_weights);
  const WeightGrid w = sample_weights(100, 100, 0.5, rng);
  RunningStats s;
  std::map<std::int64_t, int> hist;
  for (int i = 1; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j) {
      s.add(static_cast<double>(w.g(i, j)));
      ++hist[w.g(i, j)];
    }
  EXPECT_NEAR(s.mean(), 2.0, 3.0 * s.stderr_of_mean());
  for (int m = 1; m <= 5; ++m) {
    const double p = std::pow(0.5, m);
    EXPECT_NEAR(hist[m] / 1e4, p, 4.0 * std::sqrt(p * (1 - p) / 1e4)) << m;
  }
}

TEST(PassageTimes, SmallExamples) {
  const PassageTable ones = passage_times(grid_from({{1, 1, 1}, {1, 1, 1}}));
  EXPECT_EQ(ones.G(2, 3), 4);
  const PassageTable t = passage_times(grid_from({{1, 2}, {3, 1}}));
  EXPECT_EQ(t.G(2, 2), 5);
  EXPECT_EQ(t.G(1, 1), 1);
}

TEST(PassageTimes, MatchesBruteForceOverAllPaths) {
  Rng rng = make_stream(3, 0, Stream::lpp_weights);
  for (int rep = 0; rep < 20; ++rep) {
    const WeightGrid w = sample_weights(6, 5, 0.4, rng);
    std::vector<std::vector<std::int64_t>> g(6, std::vector<std::int64_t>(5));
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 5; ++j) g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = w.g(i, j);
    const PassageTable t = passage_times(w);
    for (int a = 1; a <= 6; ++a)
      for (int b = 1; b <= 5; ++b) ASSERT_EQ(t.G(a, b), oracle::lpp_brute(g, a, b));
  }
}

TEST(Psi, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(psi(1, 1, 1.0), 2.0);
  EXPECT_NEAR(psi(1, 1, 0.5), 4.0 + 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(psi(1, 0, 0.25), 4.0);
  EXPECT_THROW(psi(1, 1, 0.0), std::invalid_argument);
}

// G/N sits below the limit by a finite-size correction of order N^(-2/3).
TEST(Psi, SimulatedPassageTimeApproachesLimit) {
  const int N = 1200;
  RunningStats s;
  for (std::uint64_t r = 0; r < 10; ++r) {
    Rng rng = make_stream(4, r, Stream::lpp_weights);
    s.add(static_cast<double>(passage_times(sample_weights(N, N / 2, 0.5, rng)).G(N, N / 2)) / N);
  }
  EXPECT_NEAR(s.mean(), psi(1.0, 0.5, 0.5), 0.025 * psi(1.0, 0.5, 0.5));
}

TEST(TasepFromLpp, UnitWeightsFirstJumpTimes) {
  Rng rng(1);
  const PassageTable t = passage_times(sample_weights(10, 10, 1.0, rng));
  const Trajectory traj = tasep_from_lpp(t, 9);
  for (int k = 1; k <= 9; ++k) {
    EXPECT_TRUE(traj.occupied(k - 1, 1 - k)) << k;
    EXPECT_FALSE(traj.occupied(k, 1 - k)) << k;
  }
}

TEST(TasepFromLpp, UnitWeightsMatchDeterministicDynamics) {
  Rng rng(1);
  const PassageTable t = passage_times(sample_weights(30, 30, 1.0, rng));
  const Trajectory traj = tasep_from_lpp(t, 25);
  Rng unused(2);
  ParticleField f = tasep_init(traj.window_lo(), traj.window_hi());
  for (long time = 0; time <= 25; ++time) {
    ASSERT_EQ(traj.at_time(time).bits(), f.bits()) << time;
    f = tasep_step(f, 1.0, unused);
  }
}

TEST(TasepFromLpp, IsAParallelUpdateTrajectory) {
  Rng rng = make_stream(5, 0, Stream::lpp_weights);
  const PassageTable t = sample_covering_table(40, 40, 0.3, rng);
  const Trajectory traj = tasep_from_lpp(t, t.G(40, 40));
  for (long time = 0; time < traj.steps(); ++time)
    ASSERT_TRUE(is_parallel_update(traj.at_time(time), traj.at_time(time + 1))) << time;
}

TEST(TasepFromLpp, RejectsUncoveredHorizon) {
  Rng rng(1);
  const PassageTable t = passage_times(sample_weights(3, 3, 1.0, rng));
  EXPECT_THROW(tasep_from_lpp(t, 10), std::invalid_argument);
}

TEST(Coupling, IdentityExamples) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng = make_stream(6, s, Stream::lpp_weights);
    EXPECT_TRUE(verify_coupling(1, 1, 0.3, rng));
  }
  Rng one(1);
  const PassageTable t = sample_covering_table(5, 5, 1.0, one);
  EXPECT_EQ(t.G(5, 5), 9);
  EXPECT_TRUE(coupling_identity_holds(t, 5, 5));
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = make_stream(7, s, Stream::lpp_weights);
    ASSERT_TRUE(verify_coupling(100, 40, 0.2, rng)) << s;
  }
  Rng rng(3);
  EXPECT_THROW(verify_coupling(3, 4, 0.5, rng), std::invalid_argument);
}

TEST(Coupling, AllPairsOnOneRealization) {
  Rng rng = make_stream(8, 0, Stream::lpp_weights);
  const PassageTable t = sample_covering_table(30, 30, 0.5, rng);
  EXPECT_TRUE(coupling_violations(t, 30).empty());
}

// Exact law of the coupled trajectory against direct TASEP with jump
// probability 1/2 over 3 steps. Weights are enumerated in {1,2,3,>=4}; a
// weight of 4 or more cannot complete a jump by time 3, so lumping the
// tail into 4 leaves the first three snapshots unchanged.
TEST(Coupling, ExactLawAgreesWithDirectDynamicsAtSmallScale) {
  const int A = 3, B = 3;
  const long horizon = 3;
  std::map<std::vector<std::uint64_t>, std::uint64_t> law;
  const int cells = A * B;
  // P(1) = 1/2, P(2) = 1/4, P(3) = 1/8, P(>=4) = 1/8, scaled by 8
  const std::uint64_t mass[4] = {4, 2, 1, 1};
  std::vector<int> digits(static_cast<std::size_t>(cells), 0);
  for (;;) {
    WeightGrid w{Grid1<std::int64_t>(A, B, 0), 0.5};
    std::uint64_t m = 1;
    for (int c = 0; c < cells; ++c) {
      w.g(c / B + 1, c % B + 1) = digits[static_cast<std::size_t>(c)] + 1;
      m *= mass[digits[static_cast<std::size_t>(c)]];
    }
    const PassageTable t = passage_times(w);
    // restrict to the sites the direct law tracks
    const Trajectory traj = tasep_from_lpp(t, horizon);
    std::vector<std::uint64_t> key;
    for (long time = 1; time <= horizon; ++time) {
      ParticleField f(-2, 4, time);
      for (int j = -2; j <= 4; ++j) f.set(j, traj.occupied(time, j));
      for (auto word : f.bits().words()) key.push_back(word);
    }
    law[key] += m;
    int c = 0;
    while (c < cells && ++digits[static_cast<std::size_t>(c)] == 4) digits[static_cast<std::size_t>(c++)] = 0;
    if (c == cells) break;
  }
  const ExactLaw direct = tasep_trajectory_law(-2, 4, static_cast<int>(horizon), {1, 1});
  // common denominator 8^9 = 2^27
  const ExactLaw d = direct.rescaled(27);
  std::uint64_t total = 0;
  for (const auto& [k, v] : law) total += v;
  ASSERT_EQ(total, std::uint64_t{1} << 27);
  EXPECT_EQ(d.mass, law);
}
