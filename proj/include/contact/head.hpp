#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "contact/attention.hpp"
#include "contact/labels.hpp"
#include "contact/parameters.hpp"

namespace contact {

struct HeadConfig {
  std::size_t n = 49;  // 7x7 pooled regions
  std::size_t d = 256;
  std::size_t width = 1024;  // FC embedding width
  std::size_t maps = 32;     // spatial attention maps L
  std::size_t gn_groups = 8;
  double gn_eps = 1e-5;
  bool train_gn_affine = true;
  double attention_init_std = 0.01;
  bool ablate_cross = false;
  bool ablate_spatial = false;
  std::uint64_t seed = 0;
};

// Fully-connected layer on row vectors: x[1 x in] W[in x out] + b[1 x out].
struct Dense {
  Tensor weight;
  Tensor bias;

  Tensor operator()(const Tensor& x) const;

  // Weights and biases uniform in +-1/sqrt(in).
  static Dense create(std::size_t in, std::size_t out, std::mt19937_64& rng, ParameterList& registry,
                      const std::string& name);
};

struct ScoreOptions {
  // Drop s^(2) at inference even when the model carries spatial weights.
  bool use_spatial = true;
};

// The contact-estimation branch. For each hand-object pair:
//   s1 = fuse(concat(fc_psi(cross_attend(H, U)), fc_h(H), fc_u(U)))
//   s2 = spatial_scores(U)
//   s  = s1 + s2
// and the hand's scores are the coordinate-wise max over its pairs.
// Ablating a module removes its parameters (and fc_psi with cross attention).
class ContactHead {
 public:
  explicit ContactHead(HeadConfig config);

  ContactHead(const ContactHead&) = delete;
  ContactHead& operator=(const ContactHead&) = delete;
  ContactHead(ContactHead&&) = default;
  ContactHead& operator=(ContactHead&&) = default;

  const HeadConfig& config() const { return config_; }
  const ParameterList& parameters() const { return params_; }
  ParameterList& parameters() { return params_; }

  const std::optional<CrossAttentionParams>& cross() const { return cross_; }
  const std::optional<SpatialAttentionParams>& spatial() const { return spatial_; }

  Tensor pair_score(const FeatureMap& hand, const FeatureMap& uni, const ScoreOptions& opts = {}) const;

  // Scores for one hand against all its union maps. With no unions the hand
  // map itself stands in as the single union region.
  Tensor hand_score(const FeatureMap& hand, std::span<const FeatureMap> unions,
                    const ScoreOptions& opts = {}) const;

 private:
  Tensor embed_hand(const FeatureMap& hand) const;
  Tensor pair_score_embedded(const FeatureMap& hand, const Tensor& hand_embedding, const FeatureMap& uni,
                             const ScoreOptions& opts) const;
  void check_dims(const FeatureMap& m, const char* where) const;

  HeadConfig config_;
  ParameterList params_;
  std::optional<CrossAttentionParams> cross_;
  std::optional<SpatialAttentionParams> spatial_;
  std::optional<Dense> fc_psi_;
  Dense fc_h_;
  Dense fc_u_;
  Dense fuse_hidden_;
  Dense fuse_out_;
};

// Coordinate-wise maximum of K >= 1 score vectors.
Tensor combine(std::span<const Tensor> scores);

// Sum over states of BCE-with-logits; Unsure states are skipped entirely.
Tensor contact_loss(const Tensor& logits, const ContactLabel& label);

// Per-state sigmoid.
std::array<double, kNumStates> predict(const Tensor& logits);

}  // namespace contact
