#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "contact/attention.hpp"
#include "contact/errors.hpp"
#include "contact/ops.hpp"
#include "finite_diff.hpp"
#include "oracles.hpp"

using namespace contact;

namespace {

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

FeatureMap random_map(std::size_t n, std::size_t d, std::mt19937_64& rng, bool grad = false) {
  return FeatureMap(normal_init({n, d}, 1.0, rng, grad));
}

void fill(Tensor t, const std::vector<double>& v) { std::copy(v.begin(), v.end(), t.mutable_data().begin()); }

CrossAttentionParams cross_params(std::size_t d, std::size_t groups, double std, std::mt19937_64& rng,
                                  ParameterList& reg) {
  AttentionInit init;
  init.weight_std = std;
  init.gn_groups = groups;
  return CrossAttentionParams::create(d, init, rng, reg);
}

}  // namespace

TEST(Affinity, ZeroAlphaGivesZero) {
  std::mt19937_64 rng(1);
  ParameterList reg;
  auto p = cross_params(8, 8, 1.0, rng, reg);
  fill(p.w_alpha, std::vector<double>(64, 0.0));
  const Tensor a = affinity(random_map(4, 8, rng), random_map(4, 8, rng), p);
  for (double v : a.data()) EXPECT_EQ(v, 0.0);
}

TEST(Affinity, IdentityWeightsOrthonormalRows) {
  std::mt19937_64 rng(1);
  ParameterList reg;
  auto p = cross_params(4, 4, 1.0, rng, reg);
  std::vector<double> eye(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i) eye[i * 5] = 1.0;
  fill(p.w_alpha, eye);
  fill(p.w_beta, eye);
  auto h = FeatureMap::from(3, 4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0});
  auto a = affinity(h, h, p);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a.at(i, j), i == j ? 1.0 : 0.0);
}

TEST(Affinity, MatchesLoopOracle) {
  std::mt19937_64 rng(2);
  ParameterList reg;
  auto p = cross_params(4, 4, 1.0, rng, reg);
  auto h = random_map(3, 4, rng), u = random_map(3, 4, rng);
  const auto expect = oracle::affinity(values(h.tensor()), values(u.tensor()), values(p.w_alpha), values(p.w_beta), 3, 4);
  const auto got = values(affinity(h, u, p));
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
}

TEST(Affinity, ShapeMismatchIsDimensionError) {
  std::mt19937_64 rng(2);
  ParameterList reg;
  auto p = cross_params(8, 8, 1.0, rng, reg);
  EXPECT_THROW(affinity(random_map(4, 8, rng), random_map(3, 8, rng), p), DimensionError);
}

TEST(CrossAttend, MatchesLoopOracleWithRandomAffine) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterList reg;
    auto p = cross_params(8, 4, 0.5, rng, reg);
    fill(p.gn_scale, values(normal_init({8}, 1.0, rng, false)));
    fill(p.gn_shift, values(normal_init({8}, 1.0, rng, false)));
    auto h = random_map(4, 8, rng), u = random_map(4, 8, rng);
    const auto expect = oracle::cross_attend(values(h.tensor()), values(u.tensor()), values(p.w_alpha),
                                             values(p.w_beta), values(p.gn_scale), values(p.gn_shift), 4, p.gn_eps, 4, 8);
    const auto got = values(cross_attend(h, u, p).tensor());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
  }
}

TEST(CrossAttend, ZeroWeightsCollapseToHand) {
  std::mt19937_64 rng(4);
  ParameterList reg;
  auto p = cross_params(8, 8, 0.0, rng, reg);
  auto h = random_map(4, 8, rng), u = random_map(4, 8, rng);
  EXPECT_EQ(values(cross_attend(h, u, p).tensor()), values(h.tensor()));
}

TEST(CrossAttend, OutputShapeAndSoftmaxRows) {
  std::mt19937_64 rng(5);
  ParameterList reg;
  auto p = cross_params(8, 8, 0.5, rng, reg);
  auto h = random_map(6, 8, rng), u = random_map(6, 8, rng);
  EXPECT_EQ(cross_attend(h, u, p).tensor().shape(), h.tensor().shape());
  auto s = ops::softmax_lastdim(affinity(h, u, p));
  for (std::size_t r = 0; r < 6; ++r) {
    double sum = 0;
    for (std::size_t c = 0; c < 6; ++c) {
      EXPECT_GE(s.at(r, c), 0.0);
      sum += s.at(r, c);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(CrossAttend, PooledTermInvariantUnderUnionRowPermutation) {
  std::mt19937_64 rng(6);
  ParameterList reg;
  auto p = cross_params(8, 8, 0.5, rng, reg);
  auto h = random_map(5, 8, rng), u = random_map(5, 8, rng);
  std::vector<std::size_t> perm(5);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto uv = values(u.tensor());
  std::vector<double> permuted(uv.size());
  for (std::size_t r = 0; r < 5; ++r) std::copy_n(uv.begin() + perm[r] * 8, 8, permuted.begin() + r * 8);
  const auto a = values(affinity_pool(h, u, p));
  const auto b = values(affinity_pool(h, FeatureMap::from(5, 8, permuted), p));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(CrossAttend, FiniteDifferenceAtN4D8) {
  std::mt19937_64 rng(7);
  ParameterList reg;
  auto p = cross_params(8, 8, 0.3, rng, reg);
  auto h = random_map(4, 8, rng, true), u = random_map(4, 8, rng, true);
  auto w = normal_init({4, 8}, 1.0, rng, false);
  auto loss = [&] { return ops::sum_all(ops::mul(cross_attend(h, u, p).tensor(), w)); };
  for (auto t : {h.tensor(), u.tensor(), p.w_alpha, p.w_beta, p.gn_scale, p.gn_shift}) {
    EXPECT_LT(oracle::fd_max_rel_error(loss, t), 1e-4);
  }
}

TEST(CrossAttend, FrozenAffineHasNoGradient) {
  std::mt19937_64 rng(8);
  ParameterList reg;
  AttentionInit init;
  init.train_gn_affine = false;
  auto p = CrossAttentionParams::create(8, init, rng, reg);
  EXPECT_FALSE(p.gn_scale.requires_grad());
  EXPECT_FALSE(p.gn_shift.requires_grad());
  ASSERT_NE(reg.find("cross.gn_scale"), nullptr);
}

TEST(SpatialAttention, ZeroWeightsGiveUniformMaps) {
  std::mt19937_64 rng(9);
  ParameterList reg;
  auto p = SpatialAttentionParams::create(8, 3, 0.0, rng, reg);
  const Tensor maps = spatial_attention_maps(random_map(4, 8, rng), p);
  for (double v : maps.data()) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(SpatialAttention, ColumnsSumToOneAndSingleLocation) {
  std::mt19937_64 rng(10);
  ParameterList reg;
  auto p = SpatialAttentionParams::create(8, 5, 1.0, rng, reg);
  auto a = spatial_attention_maps(random_map(6, 8, rng), p);
  EXPECT_EQ(a.shape(), (Shape{6, 5}));
  for (std::size_t l = 0; l < 5; ++l) {
    double sum = 0;
    for (std::size_t r = 0; r < 6; ++r) sum += a.at(r, l);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  const Tensor maps = spatial_attention_maps(random_map(1, 8, rng), p);
  for (double v : maps.data()) EXPECT_EQ(v, 1.0);
}

TEST(SpatialScores, MatchesLoopOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterList reg;
    auto p = SpatialAttentionParams::create(8, 3, 1.0, rng, reg);
    auto u = random_map(4, 8, rng);
    const auto expect = oracle::spatial_scores(values(u.tensor()), values(p.w), values(p.theta), 4, 8, 3);
    const auto got = spatial_scores(u, p);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], expect[k], 1e-12);
  }
}

TEST(SpatialScores, ConstantMapIndependentOfAttentionWeights) {
  std::mt19937_64 rng(12);
  ParameterList reg;
  auto p = SpatialAttentionParams::create(8, 3, 1.0, rng, reg);
  const auto row = values(normal_init({8}, 1.0, rng, false));
  std::vector<double> flat;
  for (int r = 0; r < 5; ++r) flat.insert(flat.end(), row.begin(), row.end());
  auto u = FeatureMap::from(5, 8, flat);
  const auto before = values(spatial_scores(u, p));
  // u . Theta_l averaged over l.
  std::array<double, 4> expect{};
  const auto theta = values(p.theta);
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t c = 0; c < 8; ++c)
      for (std::size_t k = 0; k < 4; ++k) expect[k] += row[c] * theta[(l * 8 + c) * 4 + k] / 3.0;
  fill(p.w, values(normal_init({8, 3}, 5.0, rng, false)));
  const auto after = values(spatial_scores(u, p));
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(before[k], after[k], 1e-12);
    EXPECT_NEAR(before[k], expect[k], 1e-12);
  }
}

TEST(SpatialScores, ZeroThetaGivesZero) {
  std::mt19937_64 rng(13);
  ParameterList reg;
  auto p = SpatialAttentionParams::create(8, 3, 1.0, rng, reg);
  fill(p.theta, std::vector<double>(3 * 8 * 4, 0.0));
  const Tensor s = spatial_scores(random_map(4, 8, rng), p);
  for (double v : s.data()) EXPECT_EQ(v, 0.0);
}

TEST(SpatialScores, FiniteDifference) {
  std::mt19937_64 rng(14);
  ParameterList reg;
  auto p = SpatialAttentionParams::create(8, 3, 0.3, rng, reg);
  auto u = random_map(4, 8, rng, true);
  auto w = normal_init({4}, 1.0, rng, false);
  auto loss = [&] { return ops::sum_all(ops::mul(spatial_scores(u, p), w)); };
  for (auto t : {u.tensor(), p.w, p.theta}) EXPECT_LT(oracle::fd_max_rel_error(loss, t), 1e-4);
}
