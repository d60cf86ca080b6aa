#include <gtest/gtest.h>

#include "credal/error.hpp"
#include "credal/synthetic.hpp"

using namespace credal;

TEST(Synthetic, UntemperedModelIsPosterior) {
  const auto d = generate_synthetic(GeneratorSpec::balanced(3, 1.2, 1.0), 200, 3);
  for (const auto& r : d.records) EXPECT_EQ(r.model_probs, r.plausibility);
}

TEST(Synthetic, IndistinguishableClasses) {
  auto spec = GeneratorSpec::balanced(3, 0.0, 1.5);
  const auto d = generate_synthetic(spec, 50, 1);
  for (const auto& r : d.records) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.plausibility[k], 1.0 / 3.0, 1e-12);
  }
}

TEST(Synthetic, Deterministic) {
  const auto spec = GeneratorSpec::balanced();
  const auto a = generate_synthetic(spec, 100, 42);
  const auto b = generate_synthetic(spec, 100, 42);
  ASSERT_EQ(a.records.size(), 100U);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].id, b.records[i].id);
    EXPECT_EQ(a.records[i].model_probs, b.records[i].model_probs);
    EXPECT_EQ(a.records[i].plausibility, b.records[i].plausibility);
    EXPECT_EQ(a.components[i], b.components[i]);
  }
  const auto c = generate_synthetic(spec, 100, 43);
  EXPECT_NE(a.records[0].plausibility, c.records[0].plausibility);
}

TEST(Synthetic, InvalidSpec) {
  auto spec = GeneratorSpec::balanced();
  spec.components[0].covariance = {1, 2, 2, 1};
  EXPECT_THROW(generate_synthetic(spec, 10, 0), Error);
  spec = GeneratorSpec::balanced();
  spec.components[1].prior = 0.5;
  try {
    generate_synthetic(spec, 10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
  EXPECT_THROW(generate_synthetic(GeneratorSpec::balanced(), 0, 0), Error);
}
