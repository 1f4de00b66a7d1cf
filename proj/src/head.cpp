#include "contact/head.hpp"

#include <cmath>
#include <vector>

#include "contact/errors.hpp"
#include "contact/ops.hpp"

namespace contact {

Tensor Dense::operator()(const Tensor& x) const { return ops::add(ops::matmul(x, weight), bias); }

Dense Dense::create(std::size_t in, std::size_t out, std::mt19937_64& rng, ParameterList& registry,
                    const std::string& name) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Dense layer;
  layer.weight = registry.add(name + ".weight", uniform_init({in, out}, bound, rng));
  layer.bias = registry.add(name + ".bias", uniform_init({1, out}, bound, rng));
  return layer;
}

ContactHead::ContactHead(HeadConfig config) : config_(config) {
  if (config_.n == 0 || config_.d == 0 || config_.width == 0) {
    throw ConfigError("head dimensions n, d and width must be positive");
  }
  std::mt19937_64 rng(config_.seed);
  const std::size_t flat = config_.n * config_.d;
  std::size_t paths = 2;
  if (!config_.ablate_cross) {
    AttentionInit init;
    init.weight_std = config_.attention_init_std;
    init.gn_groups = config_.gn_groups;
    init.gn_eps = config_.gn_eps;
    init.train_gn_affine = config_.train_gn_affine;
    cross_ = CrossAttentionParams::create(config_.d, init, rng, params_);
    fc_psi_ = Dense::create(flat, config_.width, rng, params_, "fc_psi");
    paths = 3;
  }
  fc_h_ = Dense::create(flat, config_.width, rng, params_, "fc_h");
  fc_u_ = Dense::create(flat, config_.width, rng, params_, "fc_u");
  fuse_hidden_ = Dense::create(paths * config_.width, config_.width, rng, params_, "fuse_hidden");
  fuse_out_ = Dense::create(config_.width, kNumStates, rng, params_, "fuse_out");
  if (!config_.ablate_spatial) {
    spatial_ = SpatialAttentionParams::create(config_.d, config_.maps, config_.attention_init_std, rng, params_);
  }
}

void ContactHead::check_dims(const FeatureMap& m, const char* where) const {
  if (m.n() != config_.n || m.d() != config_.d) {
    throw DimensionError(std::string(where) + ": feature map " + shape_str(m.tensor().shape()) +
                         " does not match head [" + std::to_string(config_.n) + "x" +
                         std::to_string(config_.d) + "]");
  }
}

namespace {
// Row-major (location, channel) flattening to a [1 x n*d] row.
Tensor flatten(const FeatureMap& m) { return ops::reshape(m.tensor(), {1, m.n() * m.d()}); }
}  // namespace

Tensor ContactHead::embed_hand(const FeatureMap& hand) const { return ops::relu(fc_h_(flatten(hand))); }

Tensor ContactHead::pair_score_embedded(const FeatureMap& hand, const Tensor& hand_embedding,
                                        const FeatureMap& uni, const ScoreOptions& opts) const {
  std::vector<Tensor> parts;
  parts.reserve(3);
  if (cross_) parts.push_back(ops::relu((*fc_psi_)(flatten(cross_attend(hand, uni, *cross_)))));
  parts.push_back(hand_embedding);
  parts.push_back(ops::relu(fc_u_(flatten(uni))));
  const Tensor hidden = ops::relu(fuse_hidden_(ops::concat_lastdim(parts)));
  Tensor s = ops::reshape(fuse_out_(hidden), {kNumStates});
  if (spatial_ && opts.use_spatial) s = ops::add(s, spatial_scores(uni, *spatial_));
  return s;
}

Tensor ContactHead::pair_score(const FeatureMap& hand, const FeatureMap& uni, const ScoreOptions& opts) const {
  check_dims(hand, "pair_score");
  check_dims(uni, "pair_score");
  return pair_score_embedded(hand, embed_hand(hand), uni, opts);
}

Tensor ContactHead::hand_score(const FeatureMap& hand, std::span<const FeatureMap> unions,
                               const ScoreOptions& opts) const {
  check_dims(hand, "hand_score");
  const Tensor embedding = embed_hand(hand);
  std::vector<Tensor> scores;
  if (unions.empty()) {
    scores.push_back(pair_score_embedded(hand, embedding, hand, opts));
  } else {
    scores.reserve(unions.size());
    for (const auto& u : unions) {
      check_dims(u, "hand_score");
      scores.push_back(pair_score_embedded(hand, embedding, u, opts));
    }
  }
  return combine(scores);
}

Tensor combine(std::span<const Tensor> scores) {
  if (scores.empty()) throw ContractError("combine: need at least one pair score");
  for (const auto& s : scores) {
    if (s.numel() != kNumStates) throw DimensionError("combine: score vector of shape " + shape_str(s.shape()));
  }
  if (scores.size() == 1) return scores[0];
  return ops::elementwise_max(scores);
}

Tensor contact_loss(const Tensor& logits, const ContactLabel& label) {
  if (logits.numel() != kNumStates) {
    throw DimensionError("contact_loss: logits of shape " + shape_str(logits.shape()));
  }
  std::array<double, kNumStates> targets{};
  std::array<bool, kNumStates> active{};
  for (std::size_t i = 0; i < kNumStates; ++i) {
    active[i] = label[i] != TriState::kUnsure;
    targets[i] = label[i] == TriState::kYes ? 1.0 : 0.0;
  }
  return ops::masked_bce_with_logits(logits, targets, active);
}

std::array<double, kNumStates> predict(const Tensor& logits) {
  if (logits.numel() != kNumStates) throw DimensionError("predict: logits of shape " + shape_str(logits.shape()));
  std::array<double, kNumStates> p{};
  const auto x = logits.data();
  for (std::size_t i = 0; i < kNumStates; ++i) {
    p[i] = x[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-x[i])) : std::exp(x[i]) / (1.0 + std::exp(x[i]));
  }
  return p;
}

}  // namespace contact
