#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contact/annotations.hpp"
#include "contact/geometry.hpp"
#include "contact/labels.hpp"

namespace contact::eval {

// IoU must strictly exceed this for a match (and for Unsure exclusion).
inline constexpr double kIouThreshold = 0.5;

struct DetectionRecord {
  std::string image_id;
  geom::AxisBox box;
  double det_score = 0.0;
  std::array<double, kNumStates> contact_probs{};
};

// Throws IngestError if scores or probabilities leave [0,1].
void validate(const DetectionRecord& det);

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  bool operator==(const PRPoint&) const = default;
};

struct PRCurve {
  std::vector<PRPoint> points;  // one per scored detection, descending joint score
  std::size_t num_ground_truth = 0;
  std::size_t num_excluded = 0;  // detections dropped by the Unsure rule
  std::optional<double> ap;      // absent when there is no ground truth
};

// Joint detection + contact AP for one state.
//
// Ground truth: hands labeled Yes for `state`. A detection whose best-IoU
// hand (IoU > 0.5) is labeled Unsure for `state` is dropped. The rest are
// ranked by det_score * contact_probs[state] (ties keep input order) and
// matched greedily, VOC style: the detection takes its best-IoU ground truth
// if IoU > 0.5 and that box is still free, otherwise it is a false positive.
PRCurve evaluate_state(std::span<const DetectionRecord> dets, std::span<const ImageRecord> gts,
                       std::size_t state);

// Area under the precision envelope (all-point interpolation). Points must
// have nondecreasing recall.
double average_precision(std::span<const PRPoint> points);

// Mean over defined APs; EvaluationError if none is defined.
double mean_ap(std::span<const std::optional<double>> aps);

struct EvaluationSummary {
  std::array<PRCurve, kNumStates> curves;
  double map = 0.0;
};

EvaluationSummary evaluate(std::span<const DetectionRecord> dets, std::span<const ImageRecord> gts);

}  // namespace contact::eval
