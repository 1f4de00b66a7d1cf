#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "contact/parameters.hpp"
#include "contact/tensor.hpp"

namespace contact {

// Dense feature block over n = h*w spatial locations with d channels,
// stored row-major as an [n x d] tensor (one row per location).
class FeatureMap {
 public:
  FeatureMap() = default;
  explicit FeatureMap(Tensor values);
  static FeatureMap from(std::size_t n, std::size_t d, std::vector<double> values, bool requires_grad = false);

  const Tensor& tensor() const { return values_; }
  std::size_t n() const { return values_.dim(0); }
  std::size_t d() const { return values_.dim(1); }

 private:
  Tensor values_;
};

void require_same_dims(const FeatureMap& a, const FeatureMap& b, const char* where);

struct AttentionInit {
  double weight_std = 0.01;
  std::size_t gn_groups = 8;
  double gn_eps = 1e-5;
  bool train_gn_affine = true;
};

// Affinity weights W_alpha, W_beta [d x d] plus the GroupNorm applied to the
// pooled term before the residual connection.
struct CrossAttentionParams {
  Tensor w_alpha;
  Tensor w_beta;
  Tensor gn_scale;
  Tensor gn_shift;
  std::size_t gn_groups = 8;
  double gn_eps = 1e-5;

  static CrossAttentionParams create(std::size_t d, const AttentionInit& init, std::mt19937_64& rng,
                                     ParameterList& registry, const std::string& prefix = "cross.");
};

// L attention maps: w [d x L] (column l scores locations for map l) and a
// contiguous stack theta [L x d x 4] of per-map score projections.
struct SpatialAttentionParams {
  Tensor w;
  Tensor theta;

  std::size_t maps() const { return w.dim(1); }

  static SpatialAttentionParams create(std::size_t d, std::size_t maps, double weight_std,
                                       std::mt19937_64& rng, ParameterList& registry,
                                       const std::string& prefix = "spatial.");
};

// A = (H W_alpha)(U W_beta)^T, [n x n]. No 1/sqrt(d) temperature.
Tensor affinity(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p);

// softmax(A) U, the affinity-weighted pooling of union features onto each
// hand location (before normalization).
Tensor affinity_pool(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p);

// H + GroupNorm(softmax(A) U).
FeatureMap cross_attend(const FeatureMap& hand, const FeatureMap& uni, const CrossAttentionParams& p);

// Column l is softmax over locations of U w_l; shape [n x L].
Tensor spatial_attention_maps(const FeatureMap& uni, const SpatialAttentionParams& p);

// Mean over maps of t_l, where t_l sums a_l (broadcast) * (U theta_l) over
// locations. Shape [4].
Tensor spatial_scores(const FeatureMap& uni, const SpatialAttentionParams& p);

}  // namespace contact
