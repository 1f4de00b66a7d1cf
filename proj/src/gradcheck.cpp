#include "contact/gradcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "contact/attention.hpp"
#include "contact/errors.hpp"
#include "contact/head.hpp"
#include "contact/ops.hpp"

namespace contact {

namespace {

struct TrialShape {
  std::size_t n, d, groups, maps, pairs;
};

constexpr std::array<TrialShape, 5> kShapes = {{
    {4, 8, 8, 3, 2},
    {3, 8, 4, 2, 1},
    {5, 4, 2, 4, 3},
    {2, 12, 3, 1, 2},
    {6, 8, 2, 3, 3},
}};

constexpr std::size_t kCheckWidth = 6;
constexpr double kCheckWeightStd = 0.3;

Tensor random_tensor(Shape shape, std::mt19937_64& rng, bool requires_grad, double stddev = 1.0) {
  return normal_init(std::move(shape), stddev, rng, requires_grad);
}

// Scalarizes an output with fixed random weights so that every output
// coordinate contributes a distinct amount.
Tensor weighted_sum(const Tensor& out, const Tensor& weights) { return ops::sum_all(ops::mul(out, weights)); }

void randomize_affine(Tensor scale, Tensor shift, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 0.2);
  for (auto& v : scale.mutable_data()) v = 1.0 + dist(rng);
  for (auto& v : shift.mutable_data()) v = dist(rng);
}

void run_trial(const std::string& module, std::size_t trial, std::mt19937_64& rng, double step, double tolerance,
               std::vector<GradCheckFailure>& failures, ModuleGradReport& report) {
  const TrialShape& s = kShapes[trial % kShapes.size()];
  std::vector<NamedInput> inputs;
  std::function<Tensor()> loss_fn;
  ParameterList registry;

  if (module == "cross_attend") {
    AttentionInit init;
    init.weight_std = kCheckWeightStd;
    init.gn_groups = s.groups;
    auto p = CrossAttentionParams::create(s.d, init, rng, registry);
    randomize_affine(p.gn_scale, p.gn_shift, rng);
    FeatureMap h(random_tensor({s.n, s.d}, rng, true));
    FeatureMap u(random_tensor({s.n, s.d}, rng, true));
    Tensor w = random_tensor({s.n, s.d}, rng, false);
    inputs = {{"H", h.tensor()}, {"U", u.tensor()}};
    loss_fn = [=] { return weighted_sum(cross_attend(h, u, p).tensor(), w); };
  } else if (module == "spatial_scores") {
    auto p = SpatialAttentionParams::create(s.d, s.maps, kCheckWeightStd, rng, registry);
    FeatureMap u(random_tensor({s.n, s.d}, rng, true));
    Tensor w = random_tensor({kNumStates}, rng, false);
    inputs = {{"U", u.tensor()}};
    loss_fn = [=] { return weighted_sum(spatial_scores(u, p), w); };
  } else if (module == "pair_score" || module == "contact_loss") {
    HeadConfig cfg;
    cfg.n = s.n;
    cfg.d = s.d;
    cfg.width = kCheckWidth;
    cfg.maps = s.maps;
    cfg.gn_groups = s.groups;
    cfg.attention_init_std = kCheckWeightStd;
    cfg.seed = rng();
    auto model = std::make_shared<ContactHead>(cfg);
    randomize_affine(model->cross()->gn_scale, model->cross()->gn_shift, rng);
    FeatureMap h(random_tensor({s.n, s.d}, rng, true));
    inputs.push_back({"H", h.tensor()});
    if (module == "pair_score") {
      FeatureMap u(random_tensor({s.n, s.d}, rng, true));
      Tensor w = random_tensor({kNumStates}, rng, false);
      inputs.push_back({"U", u.tensor()});
      loss_fn = [=] { return weighted_sum(model->pair_score(h, u), w); };
    } else {
      std::vector<FeatureMap> unions;
      for (std::size_t k = 0; k < s.pairs; ++k) {
        unions.emplace_back(random_tensor({s.n, s.d}, rng, true));
        inputs.push_back({"U" + std::to_string(k + 1), unions.back().tensor()});
      }
      ContactLabel label;
      std::uniform_int_distribution<int> pick(0, 2);
      for (std::size_t st = 0; st < kNumStates; ++st) {
        label[st] = std::array{TriState::kNo, TriState::kYes, TriState::kUnsure}[static_cast<std::size_t>(pick(rng))];
      }
      loss_fn = [=] { return contact_loss(model->hand_score(h, unions), label); };
    }
    for (const auto& p : model->parameters().items()) inputs.push_back({p.name, p.tensor});
  } else {
    throw ConfigError("unknown gradient-check module '" + module + "'");
  }
  for (const auto& p : registry.items()) inputs.push_back({p.name, p.tensor});

  const double worst =
      check_gradients(loss_fn, inputs, step, tolerance, module, trial, failures, report.elements_checked);
  report.max_rel_error = std::max(report.max_rel_error, worst);
  ++report.trials;
}

}  // namespace

const std::vector<std::string>& grad_check_modules() {
  static const std::vector<std::string> names = {"cross_attend", "spatial_scores", "pair_score", "contact_loss"};
  return names;
}

double gradient_rel_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

double check_gradients(const std::function<Tensor()>& loss_fn, const std::vector<NamedInput>& inputs, double step,
                       double tolerance, const std::string& module, std::size_t trial,
                       std::vector<GradCheckFailure>& failures, std::size_t& elements_checked) {
  for (auto in : inputs) in.tensor.zero_grad();
  loss_fn().backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& in : inputs) {
    if (in.tensor.has_grad()) {
      analytic.emplace_back(in.tensor.grad().begin(), in.tensor.grad().end());
    } else {
      analytic.emplace_back(in.tensor.numel(), 0.0);
    }
  }

  NoGradGuard no_grad;
  double worst = 0.0;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    Tensor x = inputs[t].tensor;
    auto values = x.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = loss_fn().item();
      values[i] = saved - step;
      const double down = loss_fn().item();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = gradient_rel_error(analytic[t][i], numeric);
      worst = std::max(worst, err);
      ++elements_checked;
      if (!(err < tolerance)) {
        failures.push_back({module, trial, inputs[t].name, i, analytic[t][i], numeric, err});
      }
    }
  }
  return worst;
}

GradCheckReport grad_check(const GradCheckOptions& options) {
  if (!(options.tolerance > 0.0)) throw ConfigError("gradient-check tolerance must be positive");
  if (!(options.step > 0.0)) throw ConfigError("gradient-check step must be positive");
  const auto& all = grad_check_modules();
  const std::vector<std::string> selected = options.modules.empty() ? all : options.modules;
  GradCheckReport report;
  for (const auto& module : selected) {
    const auto it = std::find(all.begin(), all.end(), module);
    if (it == all.end()) throw ConfigError("unknown gradient-check module '" + module + "'");
    ModuleGradReport mr;
    mr.module = module;
    std::mt19937_64 rng(options.seed * 1000003ULL + static_cast<std::uint64_t>(it - all.begin()));
    for (std::size_t t = 0; t < options.trials; ++t) {
      run_trial(module, t, rng, options.step, options.tolerance, report.failures, mr);
    }
    report.modules.push_back(mr);
  }
  return report;
}

}  // namespace contact
