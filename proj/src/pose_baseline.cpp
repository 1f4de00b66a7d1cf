#include "contact/pose_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contact/errors.hpp"

namespace contact::pose {

namespace {

double dist(double ax, double ay, double bx, double by) { return std::hypot(ax - bx, ay - by); }

double stable_sigmoid(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

std::optional<WristAssignment> assign_wrist(const geom::AxisBox& hand, std::span<const PoseRecord> poses) {
  const geom::Point c = hand.center();
  std::optional<WristAssignment> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < poses.size(); ++p) {
    for (std::size_t j : {kRightWrist, kLeftWrist}) {
      const Joint& w = poses[p].joints[j];
      if (!w.visible()) continue;
      const double d = dist(w.x, w.y, c.x, c.y);
      if (d < best_dist) {
        best_dist = d;
        best = WristAssignment{p, j};
      }
    }
  }
  return best;
}

std::array<double, kSelfDims> self_distances(const PoseRecord& pose, std::size_t wrist_joint, double diagonal) {
  if (wrist_joint >= kNumJoints) throw ContractError("self_distances: wrist index out of range");
  if (!(diagonal > 0.0)) throw ContractError("self_distances: diagonal must be positive");
  std::array<double, kSelfDims> out{};
  const Joint& w = pose.joints[wrist_joint];
  std::size_t k = 0;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (j == wrist_joint) continue;
    const Joint& o = pose.joints[j];
    out[k++] = o.visible() ? dist(w.x, w.y, o.x, o.y) / diagonal : 0.0;
  }
  return out;
}

std::array<double, kOtherDims> other_person_distances(const Joint& wrist, std::span<const PoseRecord> poses,
                                                      std::size_t own_pose, double diagonal) {
  if (!(diagonal > 0.0)) throw ContractError("other_person_distances: diagonal must be positive");
  std::array<double, kOtherDims> sum{};
  std::array<std::size_t, kOtherDims> count{};
  for (std::size_t p = 0; p < poses.size(); ++p) {
    if (p == own_pose) continue;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Joint& o = poses[p].joints[j];
      if (!o.visible()) continue;
      sum[j] += dist(wrist.x, wrist.y, o.x, o.y) / diagonal;
      ++count[j];
    }
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) sum[j] = count[j] ? sum[j] / static_cast<double>(count[j]) : 0.0;
  return sum;
}

std::array<double, kObjectDims> object_relation(const geom::AxisBox& hand, std::span<const geom::AxisBox> objects,
                                                double diagonal) {
  if (!(diagonal > 0.0)) throw ContractError("object_relation: diagonal must be positive");
  std::array<double, kObjectDims> out{};
  if (objects.empty()) return out;
  const geom::Point hc = hand.center();
  for (const auto& o : objects) {
    const geom::Point oc = o.center();
    out[0] += dist(hc.x, hc.y, oc.x, oc.y) / diagonal;
    out[1] += geom::overlap_fraction(hand, o);
    out[2] += geom::iou(hand, o);
  }
  for (auto& v : out) v /= static_cast<double>(objects.size());
  return out;
}

FeatureVector BaselineFeature::concat() const {
  FeatureVector h{};
  auto it = std::copy(self.begin(), self.end(), h.begin());
  it = std::copy(others.begin(), others.end(), it);
  std::copy(objects.begin(), objects.end(), it);
  return h;
}

std::optional<BaselineFeature> build_feature(const geom::AxisBox& hand, std::span<const PoseRecord> poses,
                                             std::span<const geom::AxisBox> objects, double image_width,
                                             double image_height) {
  if (!(hand.area() > 0.0)) return std::nullopt;
  const auto wrist = assign_wrist(hand, poses);
  if (!wrist) return std::nullopt;
  const double diagonal = std::hypot(image_width, image_height);
  BaselineFeature f;
  f.self = self_distances(poses[wrist->pose], wrist->joint, diagonal);
  f.others = other_person_distances(poses[wrist->pose].joints[wrist->joint], poses, wrist->pose, diagonal);
  f.objects = object_relation(hand, objects, diagonal);
  return f;
}

double LogisticModel::probability(const FeatureVector& h) const {
  if (!trained) return 0.5;
  double z = bias;
  for (std::size_t i = 0; i < kFeatureDims; ++i) z += weights[i] * h[i];
  return stable_sigmoid(z);
}

std::array<double, kNumStates> BaselineClassifier::predict(const FeatureVector& h) const {
  std::array<double, kNumStates> p{};
  for (std::size_t s = 0; s < kNumStates; ++s) p[s] = models[s].probability(h);
  return p;
}

BaselineClassifier train_baseline(std::span<const std::pair<FeatureVector, ContactLabel>> examples,
                                  const BaselineTrainOptions& options) {
  BaselineClassifier clf;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    std::vector<const FeatureVector*> xs;
    std::vector<double> ts;
    for (const auto& [h, label] : examples) {
      if (label[s] == TriState::kUnsure) continue;
      xs.push_back(&h);
      ts.push_back(label[s] == TriState::kYes ? 1.0 : 0.0);
    }
    LogisticModel& m = clf.models[s];
    if (xs.empty()) continue;
    m.trained = true;
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (std::size_t it = 0; it < options.iterations; ++it) {
      FeatureVector gw{};
      double gb = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double err = m.probability(*xs[i]) - ts[i];
        for (std::size_t k = 0; k < kFeatureDims; ++k) gw[k] += err * (*xs[i])[k];
        gb += err;
      }
      for (std::size_t k = 0; k < kFeatureDims; ++k) m.weights[k] -= options.learning_rate * inv_n * gw[k];
      m.bias -= options.learning_rate * inv_n * gb;
    }
  }
  return clf;
}

}  // namespace contact::pose
