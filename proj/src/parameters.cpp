#include "contact/parameters.hpp"

#include "contact/errors.hpp"

namespace contact {

Tensor ParameterList::add(std::string name, Tensor tensor) {
  if (find(name) != nullptr) throw ContractError("parameter registered twice: " + name);
  items_.push_back({std::move(name), tensor});
  return tensor;
}

const Parameter* ParameterList::find(const std::string& name) const {
  for (const auto& p : items_)
    if (p.name == name) return &p;
  return nullptr;
}

std::size_t ParameterList::total_values() const {
  std::size_t n = 0;
  for (const auto& p : items_) n += p.tensor.numel();
  return n;
}

void ParameterList::zero_grad() {
  for (auto& p : items_) p.tensor.zero_grad();
}

Tensor normal_init(Shape shape, double stddev, std::mt19937_64& rng, bool requires_grad) {
  if (!(stddev >= 0.0)) throw ConfigError("normal_init: stddev must be nonnegative");
  std::vector<double> v(shape_numel(shape), 0.0);
  if (stddev > 0.0) {
    std::normal_distribution<double> dist(0.0, stddev);
    for (auto& x : v) x = dist(rng);
  }
  return Tensor::from(std::move(shape), std::move(v), requires_grad);
}

Tensor uniform_init(Shape shape, double bound, std::mt19937_64& rng, bool requires_grad) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = dist(rng);
  return Tensor::from(std::move(shape), std::move(v), requires_grad);
}

void sgd_step(std::span<const Parameter> params, double lr) {
  for (const auto& p : params) {
    if (!p.tensor.requires_grad()) continue;
    if (!p.tensor.has_grad()) throw ContractError("sgd_step: parameter '" + p.name + "' has no gradient");
  }
  for (const auto& p : params) {
    if (!p.tensor.requires_grad()) continue;
    Tensor t = p.tensor;
    auto values = t.mutable_data();
    const auto g = t.grad();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= lr * g[i];
    t.zero_grad();
  }
}

}  // namespace contact
