#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace contact {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

// One recorded value in the computation graph. Values are immutable once an
// operation has produced them; only leaves may be overwritten (by optimizers)
// and every node owns a lazily-allocated gradient slot.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until something accumulates into it
  bool requires_grad = false;
  bool is_leaf = true;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this->grad and accumulates into parents' grads.
  std::function<void(Node&)> backward;

  void accumulate(std::span<const double> g);
  std::span<double> grad_buffer();  // allocates zeros on first use
};

}  // namespace detail

// Shape-tagged dense row-major array of doubles with an attached gradient slot.
//
// A Tensor is a cheap handle; copies share the same node. Operations in
// ops.hpp record their inputs eagerly so that backward() can walk the graph
// in reverse topological order.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;

  std::span<const double> data() const;
  // Writable view; only leaves may be mutated.
  std::span<double> mutable_data();
  double item() const;
  double operator[](std::size_t i) const { return data()[i]; }
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  bool is_leaf() const;
  bool has_grad() const;
  std::span<const double> grad() const;
  void zero_grad();

  // Reverse-mode sweep from a single-element tensor. Leaf gradients
  // accumulate across calls; interior gradients are reset each call.
  void backward() const;

  // Copy of the values with no graph history.
  Tensor detach() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }
  static Tensor wrap(std::shared_ptr<detail::Node> node);

 private:
  std::shared_ptr<detail::Node> node_;
};

// While alive on the current thread, operations do not record graph history.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_recording_enabled();

}  // namespace contact
