#include "contact/synthetic.hpp"

#include <random>

#include "contact/errors.hpp"

namespace contact {

namespace {

constexpr std::uint64_t kPatternStream = 0x9e3779b97f4a7c15ULL;

enum Block : std::size_t { kPosture = 0, kSelf = 1, kPerson = 2, kObject = 3 };

void plant(std::vector<double>& values, std::size_t d, std::size_t location, std::size_t block,
           const std::vector<double>& pattern, double amplitude) {
  const std::size_t width = pattern.size();
  for (std::size_t c = 0; c < width; ++c) values[location * d + block * width + c] += amplitude * pattern[c];
}

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (spec.rule != "planted-v1") throw ConfigError("unknown synthetic rule '" + spec.rule + "'");
  if (spec.n == 0) throw ConfigError("synthetic n must be positive");
  if (spec.d < kNumStates || spec.d % kNumStates != 0) {
    throw ConfigError("synthetic d must be a positive multiple of 4, got " + std::to_string(spec.d));
  }
  if (spec.k_min == 0 || spec.k_min > spec.k_max) throw ConfigError("synthetic K range must satisfy 1 <= k_min <= k_max");
  if (spec.noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
  for (double p : {spec.p_self, spec.p_other, spec.p_object, spec.unsure_rate}) {
    if (p < 0.0 || p > 1.0) throw ConfigError("synthetic rates must lie in [0,1]");
  }
}

std::array<double, kNumStates> target_yes_rates(const SyntheticSpec& spec) {
  return {(1.0 - spec.p_self) * (1.0 - spec.p_other) * (1.0 - spec.p_object), spec.p_self, spec.p_other,
          spec.p_object};
}

std::array<std::vector<double>, kNumStates> planted_patterns(const SyntheticSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(kPatternStream + spec.d);
  std::bernoulli_distribution coin(0.5);
  std::array<std::vector<double>, kNumStates> patterns;
  for (auto& p : patterns) {
    p.resize(spec.d / kNumStates);
    for (auto& v : p) v = coin(rng) ? 1.0 : -1.0;
  }
  return patterns;
}

Dataset generate(const SyntheticSpec& spec) {
  validate(spec);
  const auto patterns = planted_patterns(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> k_dist(spec.k_min, spec.k_max);
  std::uniform_int_distribution<std::size_t> loc_dist(0, spec.n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto noisy_map = [&] {
    std::vector<double> v(spec.n * spec.d);
    for (auto& x : v) x = spec.noise_std * noise(rng);
    return v;
  };

  Dataset data;
  data.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const bool self = unit(rng) < spec.p_self;
    const bool other = unit(rng) < spec.p_other;
    const bool object = unit(rng) < spec.p_object;
    const std::size_t k = k_dist(rng);

    std::vector<double> hand = noisy_map();
    std::vector<std::vector<double>> unions(k);
    for (auto& u : unions) u = noisy_map();

    const double a = spec.marker_amplitude;
    if (self || other || object) plant(hand, spec.d, loc_dist(rng), kPosture, patterns[kPosture], a);
    if (self) plant(hand, spec.d, loc_dist(rng), kSelf, patterns[kSelf], a);
    if (other) {
      const std::size_t which = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
      plant(unions[which], spec.d, loc_dist(rng), kPerson, patterns[kPerson], a);
    }
    if (object) {
      const std::size_t which = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
      plant(unions[which], spec.d, loc_dist(rng), kObject, patterns[kObject], a);
    }

    Sample s;
    s.hand = FeatureMap::from(spec.n, spec.d, std::move(hand));
    for (auto& u : unions) s.unions.push_back(FeatureMap::from(spec.n, spec.d, std::move(u)));
    const std::array<bool, kNumStates> yes{!(self || other || object), self, other, object};
    for (std::size_t st = 0; st < kNumStates; ++st) {
      s.label[st] = yes[st] ? TriState::kYes : TriState::kNo;
      if (unit(rng) < spec.unsure_rate) s.label[st] = TriState::kUnsure;
    }
    data.push_back(std::move(s));
  }
  return data;
}

}  // namespace contact
