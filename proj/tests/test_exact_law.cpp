#include <gtest/gtest.h>

#include "percshape/exact_law.hpp"

using namespace percshape;

TEST(ExactLaw, TotalsAreOne) {
  const ExactLaw a = cross_trajectory_law(2, -3, 3, {1, 1});
  EXPECT_EQ(a.total(), std::uint64_t{1} << a.denominator_bits);
  const ExactLaw b = tasep_trajectory_law(-3, 4, 3, {1, 2});
  EXPECT_EQ(b.total(), std::uint64_t{1} << b.denominator_bits);
}

TEST(ExactLaw, EdgeEnumerationEqualsDirectDynamicsAtHalf) {
  EXPECT_TRUE(same_law(cross_trajectory_law(2, -3, 3, {1, 1}), tasep_trajectory_law(-2, 3, 2, {1, 1})));
}

TEST(ExactLaw, ThreeColumnElevenRowWindow) {
  const ExactLaw edges = cross_trajectory_law(2, -5, 5, {1, 1});
  const ExactLaw direct = tasep_trajectory_law(-4, 5, 2, {1, 1});
  EXPECT_TRUE(same_law(edges, direct));
}

TEST(ExactLaw, OtherDyadicProbabilities) {
  for (DyadicProb p : {DyadicProb{1, 2}, DyadicProb{3, 2}, DyadicProb{5, 3}}) {
    const ExactLaw edges = cross_trajectory_law(2, -4, 4, p);
    const ExactLaw direct = tasep_trajectory_law(-3, 4, 2, p);
    EXPECT_TRUE(same_law(edges, direct)) << p.num << "/2^" << p.bits;
  }
}

TEST(ExactLaw, DetectsMismatchedProbabilities) {
  const ExactLaw edges = cross_trajectory_law(2, -4, 4, {1, 1});
  const ExactLaw direct = tasep_trajectory_law(-3, 4, 2, {1, 2});
  EXPECT_FALSE(same_law(edges, direct));
}

TEST(ExactLaw, RejectsOversizedEnumeration) {
  EXPECT_THROW(cross_trajectory_law(4, -5, 5, {1, 1}), std::invalid_argument);
}
