#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "contact/tensor.hpp"

namespace contact {

struct GradCheckOptions {
  std::vector<std::string> modules;  // empty: all of grad_check_modules()
  std::size_t trials = 5;
  double tolerance = 1e-4;
  double step = 1e-5;
  std::uint64_t seed = 1;
};

struct GradCheckFailure {
  std::string module;
  std::size_t trial = 0;
  std::string tensor;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct ModuleGradReport {
  std::string module;
  std::size_t trials = 0;
  std::size_t elements_checked = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<ModuleGradReport> modules;
  std::vector<GradCheckFailure> failures;

  bool passed() const { return failures.empty(); }
};

// "cross_attend", "spatial_scores", "pair_score", "contact_loss".
const std::vector<std::string>& grad_check_modules();

// |a - b| / max(|a|, |b|, 1e-6): relative where gradients are meaningful,
// absolute (scaled by 1e6) where both are negligible.
double gradient_rel_error(double analytic, double numeric);

struct NamedInput {
  std::string name;
  Tensor tensor;  // leaf, perturbed in place
};

// Compares backward() of `loss_fn` against central differences for every
// element of every listed leaf. Appends failures above `tolerance`; returns
// the maximum relative error seen.
double check_gradients(const std::function<Tensor()>& loss_fn, const std::vector<NamedInput>& inputs, double step,
                       double tolerance, const std::string& module, std::size_t trial,
                       std::vector<GradCheckFailure>& failures, std::size_t& elements_checked);

// Runs seeded trials over the selected modules; trial t uses the t-th entry
// of a fixed table of small shapes (n, d, groups, L, K).
GradCheckReport grad_check(const GradCheckOptions& options);

}  // namespace contact
