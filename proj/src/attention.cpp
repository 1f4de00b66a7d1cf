#include "contact/attention.hpp"

#include "contact/errors.hpp"
#include "contact/labels.hpp"
#include "contact/ops.hpp"

namespace contact {

FeatureMap::FeatureMap(Tensor values) : values_(std::move(values)) {
  if (values_.rank() != 2) {
    throw DimensionError("feature map must be [n x d], got " + shape_str(values_.shape()));
  }
}

FeatureMap FeatureMap::from(std::size_t n, std::size_t d, std::vector<double> values, bool requires_grad) {
  return FeatureMap(Tensor::from({n, d}, std::move(values), requires_grad));
}

void require_same_dims(const FeatureMap& a, const FeatureMap& b, const char* where) {
  if (a.n() != b.n() || a.d() != b.d()) {
    throw DimensionError(std::string(where) + ": feature maps differ, " + shape_str(a.tensor().shape()) +
                         " vs " + shape_str(b.tensor().shape()));
  }
}

CrossAttentionParams CrossAttentionParams::create(std::size_t d, const AttentionInit& init,
                                                  std::mt19937_64& rng, ParameterList& registry,
                                                  const std::string& prefix) {
  if (init.gn_groups == 0 || d % init.gn_groups != 0) {
    throw ConfigError("feature dim " + std::to_string(d) + " not divisible by " +
                      std::to_string(init.gn_groups) + " GroupNorm groups");
  }
  CrossAttentionParams p;
  p.w_alpha = registry.add(prefix + "w_alpha", normal_init({d, d}, init.weight_std, rng));
  p.w_beta = registry.add(prefix + "w_beta", normal_init({d, d}, init.weight_std, rng));
  p.gn_scale = registry.add(prefix + "gn_scale", Tensor::full({d}, 1.0, init.train_gn_affine));
  p.gn_shift = registry.add(prefix + "gn_shift", Tensor::zeros({d}, init.train_gn_affine));
  p.gn_groups = init.gn_groups;
  p.gn_eps = init.gn_eps;
  return p;
}

SpatialAttentionParams SpatialAttentionParams::create(std::size_t d, std::size_t maps, double weight_std,
                                                      std::mt19937_64& rng, ParameterList& registry,
                                                      const std::string& prefix) {
  if (maps == 0) throw ConfigError("spatial attention needs at least one map");
  SpatialAttentionParams p;
  p.w = registry.add(prefix + "w", normal_init({d, maps}, weight_std, rng));
  p.theta = registry.add(prefix + "theta", normal_init({maps, d, kNumStates}, weight_std, rng));
  return p;
}

Tensor affinity(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p) {
  require_same_dims(hand, uni, "affinity");
  if (p.w_alpha.shape() != Shape{hand.d(), hand.d()} || p.w_beta.shape() != Shape{hand.d(), hand.d()}) {
    throw DimensionError("affinity: weights " + shape_str(p.w_alpha.shape()) + ", " +
                         shape_str(p.w_beta.shape()) + " do not match d=" + std::to_string(hand.d()));
  }
  const Tensor hq = ops::matmul(hand.tensor(), p.w_alpha);
  const Tensor uk = ops::matmul(uni.tensor(), p.w_beta);
  return ops::matmul(hq, ops::transpose(uk));
}

Tensor affinity_pool(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p) {
  return ops::matmul(ops::softmax_lastdim(affinity(hand, uni, p)), uni.tensor());
}

FeatureMap cross_attend(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p) {
  const Tensor pooled = affinity_pool(hand, uni, p);
  const Tensor normed = ops::group_norm(pooled, p.gn_groups, p.gn_scale, p.gn_shift, p.gn_eps);
  return FeatureMap(ops::add(hand.tensor(), normed));
}

namespace {

void check_spatial(const FeatureMap& uni, const SpatialAttentionParams& p) {
  const std::size_t d = uni.d(), L = p.w.rank() == 2 ? p.w.dim(1) : 0;
  if (p.w.rank() != 2 || p.w.dim(0) != d || p.theta.shape() != Shape{L, d, kNumStates}) {
    throw DimensionError("spatial attention: w " + shape_str(p.w.shape()) + " / theta " +
                         shape_str(p.theta.shape()) + " incompatible with features " +
                         shape_str(uni.tensor().shape()));
  }
}

// [L x n], row l = a_l.
Tensor maps_by_row(const FeatureMap& uni, const SpatialAttentionParams& p) {
  return ops::softmax_lastdim(ops::transpose(ops::matmul(uni.tensor(), p.w)));
}

}  // namespace

Tensor spatial_attention_maps(const FeatureMap& uni, const SpatialAttentionParams& p) {
  check_spatial(uni, p);
  return ops::transpose(maps_by_row(uni, p));
}

Tensor spatial_scores(const FeatureMap& uni, const SpatialAttentionParams& p) {
  check_spatial(uni, p);
  const std::size_t L = p.maps();
  const Tensor maps = maps_by_row(uni, p);
  Tensor total;
  for (std::size_t l = 0; l < L; ++l) {
    const Tensor per_location = ops::matmul(uni.tensor(), ops::select(p.theta, l));  // [n x 4]
    const Tensor z = ops::broadcast_mul(per_location, ops::select(maps, l));
    const Tensor t = ops::sum_axis(z, 0);
    total = total.defined() ? ops::add(total, t) : t;
  }
  return ops::scale(total, 1.0 / static_cast<double>(L));
}

}  // namespace contact
