#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "credal/conformal.hpp"
#include "credal/error.hpp"

using namespace credal;

namespace {

ProbabilityVector pv(std::vector<double> v) { return ProbabilityVector::from(std::move(v)); }

// A K=2 record whose plausibility score is exactly s.
CalibrationRecord scored(double s, std::string id = "r") {
  return {std::move(id), pv({s, 1.0 - s}), pv({1.0, 0.0})};
}

std::vector<CalibrationRecord> scored_all(const std::vector<double>& scores) {
  std::vector<CalibrationRecord> out;
  for (double s : scores) out.push_back(scored(s));
  return out;
}

}  // namespace

TEST(Conformity, IdentityDefault) {
  EXPECT_EQ(conformity_scores(pv({0.7, 0.2, 0.1})).per_label, (std::vector<double>{0.7, 0.2, 0.1}));
  EXPECT_EQ(conformity_scores(pv({1, 0, 0})).per_label, (std::vector<double>{1, 0, 0}));
}

TEST(PlausibilityScore, Examples) {
  const ConformityScores e{{0.7, 0.2, 0.1}};
  const std::vector<double> lam{0.5, 0.3, 0.2};
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) sum += e.per_label[k] * lam[k];
  EXPECT_NEAR(plausibility_score(e, lam), 0.43, 1e-15);
  EXPECT_DOUBLE_EQ(plausibility_score(e, lam), sum);
  EXPECT_DOUBLE_EQ(plausibility_score(e, std::vector<double>{1, 0, 0}), 0.7);
  EXPECT_NEAR(plausibility_score(ConformityScores{{0.3, 0.3, 0.3}}, lam), 0.3, 1e-15);
  EXPECT_THROW(plausibility_score(e, std::vector<double>{1, 0}), Error);
}

TEST(PlausibilityScore, LinearAndBounded) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    ConformityScores e{{u(rng), u(rng), u(rng), u(rng)}};
    std::vector<double> a(4), b(4), mix(4);
    double sa = 0, sb = 0;
    for (int k = 0; k < 4; ++k) {
      sa += (a[k] = u(rng));
      sb += (b[k] = u(rng));
    }
    for (int k = 0; k < 4; ++k) {
      a[k] /= sa;
      b[k] /= sb;
    }
    const double beta = u(rng);
    for (int k = 0; k < 4; ++k) mix[k] = beta * a[k] + (1 - beta) * b[k];
    EXPECT_NEAR(plausibility_score(e, mix),
                beta * plausibility_score(e, a) + (1 - beta) * plausibility_score(e, b), 1e-12);
    const auto [lo, hi] = std::minmax_element(e.per_label.begin(), e.per_label.end());
    EXPECT_GE(plausibility_score(e, a), *lo - 1e-15);
    EXPECT_LE(plausibility_score(e, a), *hi + 1e-15);
  }
}

TEST(QuantileIndex, FloorWithGuard) {
  EXPECT_EQ(quantile_index(0.1, 9), 1U);
  EXPECT_EQ(quantile_index(0.05, 9), 0U);
  EXPECT_EQ(quantile_index(0.1, 19), 2U);
  EXPECT_EQ(quantile_index(0.29, 99), 29U);
  EXPECT_EQ(quantile_index(0.0, 10), 0U);
  EXPECT_EQ(quantile_index(0.99, 5), 5U);
}

TEST(Calibrate, OrderStatistic) {
  const auto nine = scored_all({0.9, 0.3, 0.5, 0.1, 0.7, 0.2, 0.8, 0.4, 0.6});
  const auto t = calibrate(nine, 0.1);
  EXPECT_EQ(t.k_index, 1U);
  EXPECT_NEAR(t.tau, 0.1, 1e-15);
  EXPECT_TRUE(std::is_sorted(t.score_trace.begin(), t.score_trace.end()));
  EXPECT_EQ(t.n_calibration, 9U);

  const auto vac = calibrate(nine, 0.05);
  EXPECT_TRUE(vac.vacuous());
  EXPECT_TRUE(std::isinf(vac.tau) && vac.tau < 0);

  std::vector<double> s19;
  for (int i = 19; i >= 1; --i) s19.push_back(i / 20.0);
  const auto t19 = calibrate(scored_all(s19), 0.1);
  auto sorted = s19;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(t19.k_index, 2U);
  EXPECT_EQ(t19.tau, sorted[1]);
}

TEST(Calibrate, PermutationInvariantAndMonotone) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(200);
  for (double& x : s) x = u(rng);
  auto records = scored_all(s);
  const auto base = calibrate(records, 0.2);
  std::shuffle(records.begin(), records.end(), rng);
  EXPECT_EQ(calibrate(records, 0.2).tau, base.tau);
  double prev = -INFINITY;
  for (double a = 0.0; a < 1.0; a += 0.05) {
    const double t = calibrate(records, a).tau;
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(Calibrate, Errors) {
  std::vector<CalibrationRecord> none;
  try {
    calibrate(none, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCalibration);
  }
  std::vector<CalibrationRecord> mixed{scored(0.3),
                                       {"x", pv({0.2, 0.3, 0.5}), pv({1, 0, 0})}};
  try {
    calibrate(mixed, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Calibrate, PluggableConformity) {
  const auto records = scored_all({0.2, 0.4, 0.6, 0.8});
  const auto flipped = [](const ProbabilityVector& p) {
    return ConformityScores{{p[1], p[0]}};
  };
  EXPECT_NEAR(calibrate(records, 0.2, flipped).tau, 0.2, 1e-15);
}
