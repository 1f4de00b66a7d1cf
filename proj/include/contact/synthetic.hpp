#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "contact/attention.hpp"
#include "contact/labels.hpp"

namespace contact {

struct Sample {
  FeatureMap hand;
  std::vector<FeatureMap> unions;
  ContactLabel label;
};

using Dataset = std::vector<Sample>;

// Desk-scale stand-in for pooled detector features with planted contact rules.
//
// Rule "planted-v1" splits the d channels into four equal blocks and places a
// fixed +-amplitude sign pattern at one random location:
//   block 0 of H      iff any contact state is Yes (so No-Contact is its absence)
//   block 1 of H      iff Self-Contact
//   block 2 of one U  iff Other-Person-Contact
//   block 3 of one U  iff Object-Contact
// Every value also carries N(0, noise_std) noise. Each state's label is then
// independently replaced by Unsure with probability unsure_rate.
struct SyntheticSpec {
  std::size_t n = 16;
  std::size_t d = 16;
  std::size_t k_min = 1;
  std::size_t k_max = 3;
  std::string rule = "planted-v1";
  double noise_std = 0.1;
  std::uint64_t seed = 7;
  std::size_t count = 2000;
  double p_self = 0.3;
  double p_other = 0.3;
  double p_object = 0.5;
  double unsure_rate = 0.05;
  double marker_amplitude = 5.0;
};

void validate(const SyntheticSpec& spec);

// Expected fraction of Yes labels per state before Unsure replacement.
std::array<double, kNumStates> target_yes_rates(const SyntheticSpec& spec);

// The four block sign patterns (each d/4 entries of +-1) used by the rule.
// They depend only on d, so datasets drawn with different seeds share them.
std::array<std::vector<double>, kNumStates> planted_patterns(const SyntheticSpec& spec);

// Deterministic: the same SyntheticSpec yields a bit-identical dataset.
Dataset generate(const SyntheticSpec& spec);

}  // namespace contact
