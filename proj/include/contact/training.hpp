#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "contact/head.hpp"
#include "contact/synthetic.hpp"

namespace contact {

struct TrainConfig {
  double lr = 0.001;
  std::size_t batch = 1;
  std::size_t plateau_patience = 500;  // steps without held-out improvement
  double plateau_min_delta = 1e-4;
  double lr_decay = 0.1;
  std::size_t max_steps = 5000;
  bool ablate_cross = false;
  bool ablate_spatial = false;
  double lambda = 1.0;  // contact loss weight
  double holdout_fraction = 0.1;
  std::size_t eval_interval = 0;  // 0: once per pass over the training split
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& config);

// Head configuration with the ablation switches taken from `train`.
HeadConfig head_config_for(const TrainConfig& train, std::size_t n, std::size_t d, HeadConfig base = {});

struct HeldOutMetrics {
  double loss = 0.0;  // mean contact loss
  std::array<double, kNumStates> accuracy{};
  std::array<std::size_t, kNumStates> labeled{};  // non-Unsure counts per state
};

struct TraceRecord {
  std::size_t step = 0;
  double loss = 0.0;  // lambda-weighted loss of the step's sample(s)
  double lr = 0.0;
  std::optional<HeldOutMetrics> heldout;
};

struct TrainResult {
  std::vector<TraceRecord> trace;
  HeldOutMetrics final_heldout;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> heldout_indices;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> heldout;
};

// Seed-pinned shuffle, the last ceil(fraction * count) indices held out.
Split split_dataset(std::size_t count, double holdout_fraction, std::uint64_t seed);

HeldOutMetrics evaluate_samples(const ContactHead& model, const Dataset& data, std::span<const std::size_t> indices,
                                const ScoreOptions& opts = {});

// SGD on the lambda-weighted contact loss. Held-out metrics are computed every
// eval_interval steps (and after the last step); the learning rate is
// multiplied by lr_decay when the held-out loss has not improved by
// plateau_min_delta for plateau_patience steps. A non-finite loss (or non-finite
// values inside the forward pass) throws TrainingDiverged naming the step.
TrainResult train(ContactHead& model, const Dataset& data, const TrainConfig& config,
                  const std::function<void(const TraceRecord&)>& on_record = {});

}  // namespace contact
