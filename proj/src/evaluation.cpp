#include "contact/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "contact/errors.hpp"

namespace contact::eval {

void validate(const DetectionRecord& det) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(det.det_score)) throw IngestError("detection on '" + det.image_id + "': det_score outside [0,1]");
  for (double p : det.contact_probs) {
    if (!in_unit(p)) throw IngestError("detection on '" + det.image_id + "': contact_probs outside [0,1]");
  }
  if (!det.box.valid()) throw IngestError("detection on '" + det.image_id + "': inverted box");
}

namespace {

struct ImageGroundTruth {
  const ImageRecord* record = nullptr;
  std::vector<geom::AxisBox> hand_boxes;
  std::vector<std::size_t> positives;  // indices into hand_boxes labeled Yes
  std::vector<bool> matched;           // parallel to positives
};

}  // namespace

PRCurve evaluate_state(std::span<const DetectionRecord> dets, std::span<const ImageRecord> gts,
                       std::size_t state) {
  if (state >= kNumStates) throw ContractError("evaluate_state: state index out of range");

  std::unordered_map<std::string, ImageGroundTruth> images;
  PRCurve curve;
  for (const auto& r : gts) {
    auto [slot, fresh] = images.try_emplace(r.image_id);
    if (!fresh) throw IngestError("duplicate image_id '" + r.image_id + "' in annotations");
    auto& g = slot->second;
    g.record = &r;
    for (std::size_t h = 0; h < r.hands.size(); ++h) {
      g.hand_boxes.push_back(r.hands[h].box());
      if (r.hands[h].contact[state] == TriState::kYes) g.positives.push_back(h);
    }
    g.matched.assign(g.positives.size(), false);
    curve.num_ground_truth += g.positives.size();
  }

  struct Scored {
    double score;
    std::size_t index;
    ImageGroundTruth* image;
  };
  std::vector<Scored> scored;
  scored.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto& det = dets[i];
    auto it = images.find(det.image_id);
    if (it == images.end()) throw IngestError("detection references unknown image_id '" + det.image_id + "'");
    auto& g = it->second;

    double best = 0.0;
    std::size_t best_hand = g.hand_boxes.size();
    for (std::size_t h = 0; h < g.hand_boxes.size(); ++h) {
      const double o = geom::iou(det.box, g.hand_boxes[h]);
      if (o > best) {
        best = o;
        best_hand = h;
      }
    }
    if (best_hand < g.hand_boxes.size() && best > kIouThreshold &&
        g.record->hands[best_hand].contact[state] == TriState::kUnsure) {
      ++curve.num_excluded;
      continue;
    }
    scored.push_back({det.det_score * det.contact_probs[state], i, &g});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });

  std::size_t tp = 0, fp = 0;
  curve.points.reserve(scored.size());
  for (const auto& s : scored) {
    auto& g = *s.image;
    double best = 0.0;
    std::size_t best_pos = g.positives.size();
    for (std::size_t k = 0; k < g.positives.size(); ++k) {
      const double o = geom::iou(dets[s.index].box, g.hand_boxes[g.positives[k]]);
      if (o > best) {
        best = o;
        best_pos = k;
      }
    }
    if (best_pos < g.positives.size() && best > kIouThreshold && !g.matched[best_pos]) {
      g.matched[best_pos] = true;
      ++tp;
    } else {
      ++fp;
    }
    const double recall =
        curve.num_ground_truth > 0 ? static_cast<double>(tp) / static_cast<double>(curve.num_ground_truth) : 0.0;
    curve.points.push_back({recall, static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  if (curve.num_ground_truth > 0) curve.ap = average_precision(curve.points);
  return curve;
}

double average_precision(std::span<const PRPoint> points) {
  std::vector<double> envelope(points.size());
  double running = 0.0;
  for (std::size_t i = points.size(); i-- > 0;) {
    running = std::max(running, points[i].precision);
    envelope[i] = running;
  }
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].recall < prev_recall) throw ContractError("average_precision: recall must be nondecreasing");
    ap += (points[i].recall - prev_recall) * envelope[i];
    prev_recall = points[i].recall;
  }
  return ap;
}

double mean_ap(std::span<const std::optional<double>> aps) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& ap : aps) {
    if (ap) {
      sum += *ap;
      ++count;
    }
  }
  if (count == 0) throw EvaluationError("mean_ap: no state has a defined AP");
  return sum / static_cast<double>(count);
}

EvaluationSummary evaluate(std::span<const DetectionRecord> dets, std::span<const ImageRecord> gts) {
  EvaluationSummary summary;
  std::array<std::optional<double>, kNumStates> aps;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    summary.curves[s] = evaluate_state(dets, gts, s);
    aps[s] = summary.curves[s].ap;
  }
  summary.map = mean_ap(aps);
  return summary;
}

}  // namespace contact::eval
