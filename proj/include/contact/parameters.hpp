#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "contact/tensor.hpp"

namespace contact {

struct Parameter {
  std::string name;
  Tensor tensor;
};

// Ordered registry of a model's parameters. Names are unique; registering the
// same name twice throws ContractError.
class ParameterList {
 public:
  Tensor add(std::string name, Tensor tensor);

  std::span<const Parameter> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const Parameter* find(const std::string& name) const;
  std::size_t total_values() const;
  void zero_grad();

 private:
  std::vector<Parameter> items_;
};

Tensor normal_init(Shape shape, double stddev, std::mt19937_64& rng, bool requires_grad = true);
Tensor uniform_init(Shape shape, double bound, std::mt19937_64& rng, bool requires_grad = true);

// p <- p - lr * grad(p), then clears the gradient. Parameters that do not
// require a gradient (frozen) are skipped; a trainable parameter without a
// populated gradient is a ContractError.
void sgd_step(std::span<const Parameter> params, double lr);

}  // namespace contact
