#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "credal/credal_sets.hpp"
#include "credal/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace credal;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ProbabilityEnvelope fixture_env() { return {{0.1, 0.0, 0.0}, {1.0, 0.9, 0.75}}; }
CredalRegion fixture() { return CredalRegion(ConformityScores{{0.7, 0.2, 0.1}}, 0.25); }

}  // namespace

TEST(LowerProbability, Examples) {
  const auto env = fixture_env();
  EXPECT_NEAR(lower_probability(env, {0}), 0.1, 1e-15);
  EXPECT_NEAR(lower_probability(env, {0, 1}), 0.25, 1e-15);
  EXPECT_EQ(lower_probability(env, LabelSet::full(3)), 1.0);
  EXPECT_NEAR(upper_probability(env, {2}), 0.75, 1e-15);
  EXPECT_EQ(upper_probability(env, LabelSet()), 0.0);
  EXPECT_EQ(upper_probability(env, LabelSet::full(3)), 1.0);
}

TEST(LowerProbability, SureLossDetected) {
  try {
    lower_probability({{0.6, 0.6}, {1, 1}}, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SureLossViolation);
  }
  EXPECT_THROW(lower_probability({{0, 0}, {0.4, 0.4}}, {0}), Error);
  EXPECT_THROW(lower_probability(fixture_env(), {5}), Error);
}

TEST(ExactLowerProbability, Examples) {
  EXPECT_NEAR(exact_lower_probability(fixture(), {0, 1}), 0.25, 1e-12);
  EXPECT_NEAR(exact_lower_probability(fixture(), LabelSet::full(3)), 1.0, 1e-12);
  const CredalRegion vac(ConformityScores{{0.7, 0.2, 0.1}}, kNegInf);
  EXPECT_EQ(exact_lower_probability(vac, {0, 2}), 0.0);
}

TEST(LowerProbabilityTable, MatchesPointwise) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + i % 7;
    const auto env = gen::random_envelope(rng, k);
    const LowerProbabilityTable table(env);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
      EXPECT_EQ(table.lower(LabelSet(m)), lower_probability(env, LabelSet(m)));
      EXPECT_EQ(table.lower(LabelSet(m)), oracle::eq3(env.lower, env.upper, m));
    }
  }
}

TEST(LowerProbability, StructuralProperties) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 2 + i % 4;
    const auto c = gen::random_region(rng, k);
    const auto region = gen::make_region(c);
    const auto env = envelope(region);
    const std::uint64_t n = std::uint64_t{1} << k;
    const double empty = lower_probability(env, LabelSet());
    double up_sum = 0.0;
    for (double x : env.upper) up_sum += x;
    EXPECT_NEAR(empty, std::max(0.0, 1.0 - up_sum), 1e-15);
    for (std::uint64_t a = 0; a < n; ++a) {
      const double la = lower_probability(env, LabelSet(a));
      EXPECT_LE(la, exact_lower_probability(region, LabelSet(a)) + 1e-12);
      EXPECT_EQ(upper_probability(env, LabelSet(a)),
                1.0 - lower_probability(env, LabelSet(a).complement(k)));
      for (std::uint64_t b = 0; b < n; ++b) {
        if ((a & b) == a) EXPECT_LE(la, lower_probability(env, LabelSet(b)) + 1e-15);
        if ((a & b) == 0) {
          EXPECT_GE(lower_probability(env, LabelSet(a | b)),
                    la + lower_probability(env, LabelSet(b)) - 1e-12);
        }
      }
    }
  }
}

TEST(Algorithm1, Fixture) {
  const auto r = ihds_algorithm1(fixture_env(), 0.8);
  EXPECT_EQ(r.set, (LabelSet{0, 1}));
  EXPECT_NEAR(r.lower_probability, 0.25, 1e-15);
  EXPECT_EQ(r.method, SetMethod::IhdsAlgorithm1);
  EXPECT_EQ(ihds_algorithm1(fixture_env(), 1.0).set, LabelSet());
  EXPECT_EQ(ihds_algorithm1(fixture_env(), 0.0).set, LabelSet::full(3));
}

TEST(Algorithm1, Errors) {
  EXPECT_THROW(ihds_algorithm1(fixture_env(), 1.5), Error);
  EXPECT_THROW(ihds_algorithm1(fixture_env(), -0.1), Error);
  try {
    ihds_algorithm1(fixture_env(), 0.1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelSpaceTooLarge);
  }
}

TEST(Algorithm1, MatchesExplicitSort) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + i % 8;
    const auto env = gen::random_envelope(rng, k);
    const double delta = i % 10 == 0 ? 0.0 : u(rng);
    const auto r = ihds_algorithm1(env, delta);
    EXPECT_EQ(r.set.mask(), oracle::algorithm1_sorted(env.lower, env.upper, delta)) << i;
    EXPECT_GE(r.lower_probability, 1.0 - delta - 1e-12);
  }
}

TEST(MinCardinality, Examples) {
  EXPECT_EQ(ihds_min_cardinality(fixture_env(), 0.8).set, (LabelSet{0, 1}));
  EXPECT_EQ(ihds_min_cardinality(fixture_env(), 0.0).set, LabelSet::full(3));
  const ProbabilityEnvelope tight{{0.95, 0, 0}, {1, 0.05, 0.05}};
  EXPECT_EQ(ihds_min_cardinality(tight, 0.1).set, (LabelSet{0}));
}

TEST(MinCardinality, NeverLargerThanAlgorithm1) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const auto env = gen::random_envelope(rng, 2 + i % 8);
    const double delta = u(rng);
    const auto a = ihds_algorithm1(env, delta);
    const auto m = ihds_min_cardinality(env, delta);
    EXPECT_EQ(m.set.mask(), oracle::min_cardinality(env.lower, env.upper, delta));
    EXPECT_LE(m.set.size(), a.set.size());
    EXPECT_FALSE(m.set.empty());
  }
}

TEST(Prps, Examples) {
  EXPECT_EQ(prps(fixture(), 0.8, 200).set, LabelSet::full(3));
  const CredalRegion vac(ConformityScores{{0.7, 0.2, 0.1}}, kNegInf);
  EXPECT_EQ(prps(vac, 0.5, 200).set, LabelSet::full(3));
  const CredalRegion point(ConformityScores{{1, 0, 0}}, 1.0);
  EXPECT_EQ(prps(point, 0.3, 200).set, (LabelSet{0}));
}

TEST(Prps, StrictInclusionOnFixture) {
  const auto ihds = ihds_algorithm1(envelope(fixture()), 0.8);
  const auto base = prps(fixture(), 0.8, 200);
  EXPECT_TRUE(ihds.set.is_subset_of(base.set));
  EXPECT_NE(ihds.set, base.set);
}

TEST(Prps, MatchesLatticeOracle) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 150; ++i) {
    const std::size_t k = 2 + i % 3;
    const auto c = gen::random_region(rng, k);
    const double delta = u(rng);
    const auto got = prps(gen::make_region(c), delta, 30);
    EXPECT_EQ(got.set.mask(), oracle::prps(c.e, c.tau, delta, 30)) << i;
  }
}

TEST(Prps, ContainsIhdsForThreeLabels) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 500; ++i) {
    const auto c = gen::random_region(rng, 3);
    const auto region = gen::make_region(c);
    const double delta = u(rng);
    const auto ihds = ihds_algorithm1(envelope(region), delta);
    EXPECT_TRUE(ihds.set.is_subset_of(prps(region, delta, 200).set)) << i;
  }
}
