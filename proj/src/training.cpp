#include "contact/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

#include "contact/errors.hpp"
#include "contact/ops.hpp"

namespace contact {

void validate(const TrainConfig& c) {
  if (!(c.lr >= 0.0)) throw ConfigError("lr must be nonnegative");
  if (!(c.lr_decay > 0.0 && c.lr_decay < 1.0)) throw ConfigError("lr_decay must lie in (0,1)");
  if (c.batch == 0) throw ConfigError("batch must be at least 1");
  if (!(c.holdout_fraction > 0.0 && c.holdout_fraction < 1.0)) throw ConfigError("holdout_fraction must lie in (0,1)");
  if (!(c.lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
}

HeadConfig head_config_for(const TrainConfig& train, std::size_t n, std::size_t d, HeadConfig base) {
  base.n = n;
  base.d = d;
  base.ablate_cross = train.ablate_cross;
  base.ablate_spatial = train.ablate_spatial;
  return base;
}

Split split_dataset(std::size_t count, double holdout_fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto held = static_cast<std::size_t>(std::ceil(holdout_fraction * static_cast<double>(count)));
  if (count >= 2) held = std::clamp<std::size_t>(held, 1, count - 1);
  else held = 0;
  Split s;
  s.train.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(held));
  s.heldout.assign(order.end() - static_cast<std::ptrdiff_t>(held), order.end());
  return s;
}

HeldOutMetrics evaluate_samples(const ContactHead& model, const Dataset& data, std::span<const std::size_t> indices,
                                const ScoreOptions& opts) {
  NoGradGuard no_grad;
  HeldOutMetrics m;
  std::array<std::size_t, kNumStates> correct{};
  for (auto i : indices) {
    const Sample& s = data.at(i);
    const Tensor logits = model.hand_score(s.hand, s.unions, opts);
    m.loss += contact_loss(logits, s.label).item();
    const auto probs = predict(logits);
    for (std::size_t st = 0; st < kNumStates; ++st) {
      if (s.label[st] == TriState::kUnsure) continue;
      ++m.labeled[st];
      if ((probs[st] > 0.5) == (s.label[st] == TriState::kYes)) ++correct[st];
    }
  }
  if (!indices.empty()) m.loss /= static_cast<double>(indices.size());
  for (std::size_t st = 0; st < kNumStates; ++st) {
    m.accuracy[st] = m.labeled[st] ? static_cast<double>(correct[st]) / static_cast<double>(m.labeled[st]) : 0.0;
  }
  return m;
}

TrainResult train(ContactHead& model, const Dataset& data, const TrainConfig& config,
                  const std::function<void(const TraceRecord&)>& on_record) {
  validate(config);
  if (data.empty()) throw ContractError("train: empty dataset");
  if (model.config().ablate_cross != config.ablate_cross || model.config().ablate_spatial != config.ablate_spatial) {
    throw ConfigError("train: model ablation switches differ from the training configuration");
  }

  TrainResult result;
  Split split = split_dataset(data.size(), config.holdout_fraction, config.seed);
  if (split.train.empty()) split.train = split.heldout;
  result.train_indices = split.train;
  result.heldout_indices = split.heldout;

  std::mt19937_64 rng(config.seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::size_t> order = split.train;
  std::size_t cursor = order.size();

  const std::size_t eval_interval =
      config.eval_interval ? config.eval_interval : std::max<std::size_t>(1, split.train.size() / config.batch);
  double lr = config.lr;
  double best_heldout = std::numeric_limits<double>::infinity();
  std::size_t last_improvement = 0;
  auto params = model.parameters().items();
  model.parameters().zero_grad();

  for (std::size_t step = 1; step <= config.max_steps; ++step) {
    double step_loss = 0.0;
    for (std::size_t b = 0; b < config.batch; ++b) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      const Sample& s = data[order[cursor++]];
      Tensor loss;
      try {
        loss = ops::scale(contact_loss(model.hand_score(s.hand, s.unions), s.label),
                          config.lambda / static_cast<double>(config.batch));
      } catch (const NumericError& e) {
        throw TrainingDiverged("non-finite values at step " + std::to_string(step) + ": " + e.what(), step);
      }
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw TrainingDiverged("loss became non-finite at step " + std::to_string(step), step);
      }
      step_loss += value;
      loss.backward();
    }
    sgd_step(params, lr);

    TraceRecord rec{step, step_loss, lr, std::nullopt};
    if (step % eval_interval == 0 || step == config.max_steps) {
      if (!split.heldout.empty()) {
        rec.heldout = evaluate_samples(model, data, split.heldout);
        if (rec.heldout->loss < best_heldout - config.plateau_min_delta) {
          best_heldout = rec.heldout->loss;
          last_improvement = step;
        } else if (step - last_improvement >= config.plateau_patience) {
          lr *= config.lr_decay;
          last_improvement = step;
          spdlog::info("step {}: held-out loss plateaued, learning rate now {}", step, lr);
        }
        spdlog::debug("step {}: held-out loss {:.5f}", step, rec.heldout->loss);
      }
    }
    if (on_record) on_record(rec);
    result.trace.push_back(std::move(rec));
  }
  result.final_heldout = split.heldout.empty() ? HeldOutMetrics{} : evaluate_samples(model, data, split.heldout);
  return result;
}

}  // namespace contact
