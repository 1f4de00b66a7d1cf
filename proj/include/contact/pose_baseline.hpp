#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contact/geometry.hpp"
#include "contact/labels.hpp"

namespace contact::pose {

// 25-joint body layout (OpenPose BODY_25 order). Only the wrist indices carry
// meaning here; the remaining joints are treated as an opaque ordering.
inline constexpr std::size_t kNumJoints = 25;
inline constexpr std::size_t kRightWrist = 4;
inline constexpr std::size_t kLeftWrist = 7;

inline constexpr std::size_t kSelfDims = kNumJoints - 1;
inline constexpr std::size_t kOtherDims = kNumJoints;
inline constexpr std::size_t kObjectDims = 3;
inline constexpr std::size_t kFeatureDims = kSelfDims + kOtherDims + kObjectDims;
static_assert(kFeatureDims == 52);

struct Joint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;  // 0 marks a missing joint

  bool visible() const { return confidence > 0.0; }
};

struct PoseRecord {
  std::string person_id;
  std::array<Joint, kNumJoints> joints{};
};

struct WristAssignment {
  std::size_t pose = 0;
  std::size_t joint = 0;
};

// Nearest visible wrist (either side, any person) to the hand box center.
// nullopt when no pose has a visible wrist.
std::optional<WristAssignment> assign_wrist(const geom::AxisBox& hand, std::span<const PoseRecord> poses);

// Wrist-to-joint distances over the other 24 joints of the same person, in
// joint order, divided by `diagonal`. Missing joints give 0.
std::array<double, kSelfDims> self_distances(const PoseRecord& pose, std::size_t wrist_joint, double diagonal);

// For each joint index, the mean normalized distance from `wrist` to that
// joint over every pose except `own_pose`, counting only visible joints.
std::array<double, kOtherDims> other_person_distances(const Joint& wrist, std::span<const PoseRecord> poses,
                                                      std::size_t own_pose, double diagonal);

// (mean normalized center distance, mean overlap fraction, mean IoU) over the
// detected objects; zeros when there are none.
std::array<double, kObjectDims> object_relation(const geom::AxisBox& hand, std::span<const geom::AxisBox> objects,
                                                double diagonal);

using FeatureVector = std::array<double, kFeatureDims>;

struct BaselineFeature {
  std::array<double, kSelfDims> self{};
  std::array<double, kOtherDims> others{};
  std::array<double, kObjectDims> objects{};

  FeatureVector concat() const;
};

// Full feature for one hand, or nullopt when the hand cannot be described
// (no visible wrist anywhere, or a zero-area hand box).
std::optional<BaselineFeature> build_feature(const geom::AxisBox& hand, std::span<const PoseRecord> poses,
                                             std::span<const geom::AxisBox> objects, double image_width,
                                             double image_height);

struct LogisticModel {
  FeatureVector weights{};
  double bias = 0.0;
  bool trained = false;

  // 0.5 when untrained.
  double probability(const FeatureVector& h) const;
};

struct BaselineTrainOptions {
  std::size_t iterations = 3000;
  double learning_rate = 1.0;
};

struct BaselineClassifier {
  std::array<LogisticModel, kNumStates> models;

  std::array<double, kNumStates> predict(const FeatureVector& h) const;
};

// Four independent logistic regressions fit by full-batch gradient descent on
// the mean masked BCE. A state with no Yes/No labels stays untrained.
BaselineClassifier train_baseline(std::span<const std::pair<FeatureVector, ContactLabel>> examples,
                                  const BaselineTrainOptions& options = {});

}  // namespace contact::pose
