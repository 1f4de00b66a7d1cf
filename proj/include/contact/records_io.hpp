#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contact/annotations.hpp"
#include "contact/attention.hpp"
#include "contact/evaluation.hpp"
#include "contact/pose_baseline.hpp"
#include "contact/synthetic.hpp"
#include "contact/training.hpp"

// Line-delimited JSON records, one object per line. Blank lines are skipped.
// Field layouts are documented in docs/formats.md.
namespace contact::io {

using json = nlohmann::json;

// Calls `fn(record, line_number)` for each non-blank line. Parse errors and
// anything `fn` throws as IngestError carry the line number.
void for_each_record(std::istream& in, const std::function<void(const json&, std::size_t)>& fn);
void for_each_record(const std::filesystem::path& path, const std::function<void(const json&, std::size_t)>& fn);

void write_record(std::ostream& out, const json& record);

// Annotations. Quadrilaterals are normalized on ingest (`warn` hears about
// repairs) and each record is validated.
ImageRecord parse_image_record(const json& j, std::size_t line = 0,
                               const std::function<void(const std::string&)>& warn = {});
json to_json(const ImageRecord& record);
std::vector<ImageRecord> read_annotations(const std::filesystem::path& path,
                                          const std::function<void(const std::string&)>& warn = {});
void write_annotations(const std::filesystem::path& path, const std::vector<ImageRecord>& records);

eval::DetectionRecord parse_detection(const json& j, std::size_t line = 0);
json to_json(const eval::DetectionRecord& det);
std::vector<eval::DetectionRecord> read_detections(const std::filesystem::path& path);

// Keypoints: {"image_id", "poses": [{"person_id", "joints": 25 x [x, y, conf]}]}.
using PoseIndex = std::map<std::string, std::vector<pose::PoseRecord>>;
PoseIndex read_keypoints(const std::filesystem::path& path);
json to_json(const std::string& image_id, const std::vector<pose::PoseRecord>& poses);

// One detected hand with its pooled features: H and U_1..U_K as flat
// row-major [n x d] arrays. `label` is optional (present for training data).
struct FeatureRecord {
  std::string image_id;
  geom::AxisBox box;
  double det_score = 1.0;
  Sample sample;
  bool has_label = false;
};

FeatureRecord parse_feature_record(const json& j, std::size_t line = 0);
json to_json(const FeatureRecord& record);

json to_json(const ContactLabel& label);
ContactLabel parse_label(const json& j, std::size_t line = 0);

json to_json(const HeldOutMetrics& m);
json to_json(const TraceRecord& rec);

}  // namespace contact::io
