#include <gtest/gtest.h>

#include <cstring>

#include "contact/errors.hpp"
#include "contact/synthetic.hpp"

using namespace contact;

namespace {

bool same_map(const FeatureMap& a, const FeatureMap& b) {
  return a.tensor().shape() == b.tensor().shape() &&
         std::memcmp(a.tensor().data().data(), b.tensor().data().data(), a.tensor().data().size_bytes()) == 0;
}

// Best match of `pattern` in channel block `block` over all locations.
double best_match(const FeatureMap& m, std::size_t block, const std::vector<double>& pattern) {
  const auto v = m.tensor().data();
  double best = -1e300;
  for (std::size_t p = 0; p < m.n(); ++p) {
    double dot = 0.0;
    for (std::size_t c = 0; c < pattern.size(); ++c) dot += v[p * m.d() + block * pattern.size() + c] * pattern[c];
    best = std::max(best, dot);
  }
  return best;
}

}  // namespace

TEST(Synthetic, SameSpecIsBitIdentical) {
  SyntheticSpec spec;
  spec.count = 50;
  const auto a = generate(spec);
  const auto b = generate(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same_map(a[i].hand, b[i].hand));
    ASSERT_EQ(a[i].unions.size(), b[i].unions.size());
    for (std::size_t k = 0; k < a[i].unions.size(); ++k) EXPECT_TRUE(same_map(a[i].unions[k], b[i].unions[k]));
    EXPECT_EQ(a[i].label, b[i].label);
  }
  spec.seed = 8;
  EXPECT_FALSE(same_map(generate(spec)[0].hand, a[0].hand));
}

TEST(Synthetic, ShapesAndPairCounts) {
  SyntheticSpec spec;
  spec.count = 300;
  spec.n = 9;
  spec.d = 8;
  spec.k_min = 2;
  spec.k_max = 4;
  std::array<int, 5> seen{};
  for (const auto& s : generate(spec)) {
    EXPECT_EQ(s.hand.n(), 9u);
    EXPECT_EQ(s.hand.d(), 8u);
    ASSERT_GE(s.unions.size(), 2u);
    ASSERT_LE(s.unions.size(), 4u);
    ++seen[s.unions.size()];
  }
  EXPECT_GT(seen[2], 0);
  EXPECT_GT(seen[4], 0);
}

TEST(Synthetic, MarginalsMatchTargets) {
  SyntheticSpec spec;
  spec.count = 10000;
  spec.n = 4;
  spec.d = 8;
  spec.unsure_rate = 0.0;
  const auto data = generate(spec);
  const auto target = target_yes_rates(spec);
  for (std::size_t s = 0; s < kNumStates; ++s) {
    double yes = 0;
    for (const auto& x : data) yes += x.label[s] == TriState::kYes;
    EXPECT_NEAR(yes / spec.count, target[s], 0.05) << kStateNames[s];
  }
}

TEST(Synthetic, UnsureRate) {
  SyntheticSpec spec;
  spec.count = 5000;
  spec.n = 4;
  spec.d = 8;
  spec.unsure_rate = 0.2;
  double unsure = 0;
  for (const auto& x : generate(spec))
    for (auto t : x.label.states) unsure += t == TriState::kUnsure;
  EXPECT_NEAR(unsure / (4.0 * spec.count), 0.2, 0.02);
}

TEST(Synthetic, NoiselessRuleDetectorIsExact) {
  SyntheticSpec spec;
  spec.count = 1000;
  spec.noise_std = 0.0;
  spec.unsure_rate = 0.0;
  const auto patterns = planted_patterns(spec);
  const double threshold = spec.marker_amplitude * static_cast<double>(spec.d / 4) / 2;
  for (const auto& x : generate(spec)) {
    const bool any = best_match(x.hand, 0, patterns[0]) > threshold;
    const bool self = best_match(x.hand, 1, patterns[1]) > threshold;
    bool other = false, object = false;
    for (const auto& u : x.unions) {
      other = other || best_match(u, 2, patterns[2]) > threshold;
      object = object || best_match(u, 3, patterns[3]) > threshold;
    }
    EXPECT_EQ(!any, x.label[0] == TriState::kYes);
    EXPECT_EQ(self, x.label[1] == TriState::kYes);
    EXPECT_EQ(other, x.label[2] == TriState::kYes);
    EXPECT_EQ(object, x.label[3] == TriState::kYes);
  }
}

TEST(Synthetic, PatternsDependOnlyOnWidth) {
  SyntheticSpec a, b;
  b.seed = 99;
  b.n = 3;
  EXPECT_EQ(planted_patterns(a), planted_patterns(b));
  b.d = 8;
  EXPECT_EQ(planted_patterns(b)[0].size(), 2u);
}

TEST(Synthetic, RejectsBadSpecs) {
  SyntheticSpec s;
  s.rule = "other";
  EXPECT_THROW(generate(s), ConfigError);
  s = {};
  s.d = 6;
  EXPECT_THROW(generate(s), ConfigError);
  s = {};
  s.k_min = 0;
  EXPECT_THROW(generate(s), ConfigError);
  s = {};
  s.unsure_rate = 1.5;
  EXPECT_THROW(generate(s), ConfigError);
}
