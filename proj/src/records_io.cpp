#include "contact/records_io.hpp"

#include <cmath>
#include <fstream>

#include "contact/errors.hpp"

namespace contact::io {

namespace {

const json& field(const json& j, const char* name, std::size_t line) {
  if (!j.is_object()) throw IngestError("record must be a JSON object", line);
  auto it = j.find(name);
  if (it == j.end()) throw IngestError(std::string("missing field '") + name + "'", line);
  return *it;
}

double number(const json& j, const std::string& what, std::size_t line) {
  if (!j.is_number()) throw IngestError("field '" + what + "' must be a number", line);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw IngestError("field '" + what + "' must be finite", line);
  return v;
}

std::string text(const json& j, const std::string& what, std::size_t line) {
  if (!j.is_string()) throw IngestError("field '" + what + "' must be a string", line);
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& what, std::size_t line, std::optional<std::size_t> size = {}) {
  if (!j.is_array()) throw IngestError("field '" + what + "' must be an array", line);
  if (size && j.size() != *size) {
    throw IngestError("field '" + what + "' must have " + std::to_string(*size) + " entries, found " +
                          std::to_string(j.size()),
                      line);
  }
  return j;
}

std::size_t count(const json& j, const std::string& what, std::size_t line) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) {
    throw IngestError("field '" + what + "' must be a positive integer", line);
  }
  return j.get<std::size_t>();
}

geom::AxisBox parse_box(const json& j, const std::string& what, std::size_t line) {
  array(j, what, line, 4);
  geom::AxisBox b{number(j[0], what, line), number(j[1], what, line), number(j[2], what, line),
                  number(j[3], what, line)};
  if (!b.valid()) throw IngestError("field '" + what + "' must satisfy x0 <= x1 and y0 <= y1", line);
  return b;
}

json box_json(const geom::AxisBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

FeatureMap parse_block(const json& j, const std::string& what, std::size_t n, std::size_t d, std::size_t line) {
  array(j, what, line, n * d);
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = number(j[i], what, line);
  return FeatureMap::from(n, d, std::move(values));
}

json block_json(const FeatureMap& m) {
  const auto values = m.tensor().data();
  return json(std::vector<double>(values.begin(), values.end()));
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  return in;
}

}  // namespace

void for_each_record(std::istream& in, const std::function<void(const json&, std::size_t)>& fn) {
  std::string buffer;
  std::size_t line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    if (buffer.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(buffer);
    } catch (const json::parse_error& e) {
      throw IngestError(std::string("malformed JSON: ") + e.what(), line);
    }
    try {
      fn(record, line);
    } catch (const IngestError& e) {
      if (e.line() > 0) throw;
      throw IngestError(e.what(), line);
    }
  }
}

void for_each_record(const std::filesystem::path& path, const std::function<void(const json&, std::size_t)>& fn) {
  auto in = open(path);
  for_each_record(in, fn);
}

void write_record(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

json to_json(const ContactLabel& label) {
  json out = json::array();
  for (auto s : label.states) out.push_back(std::string(to_string(s)));
  return out;
}

ContactLabel parse_label(const json& j, std::size_t line) {
  array(j, "contact", line, kNumStates);
  ContactLabel label;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto parsed = parse_tristate(text(j[s], "contact", line));
    if (!parsed) throw IngestError("field 'contact' entries must be yes, no or unsure", line);
    label.states[s] = *parsed;
  }
  return label;
}

ImageRecord parse_image_record(const json& j, std::size_t line, const std::function<void(const std::string&)>& warn) {
  ImageRecord r;
  r.image_id = text(field(j, "image_id", line), "image_id", line);
  r.height = number(field(j, "height", line), "height", line);
  r.width = number(field(j, "width", line), "width", line);
  if (!(r.height > 0.0 && r.width > 0.0)) throw IngestError("height and width must be positive", line);
  for (const auto& h : array(field(j, "hands", line), "hands", line)) {
    HandAnnotation hand;
    const auto& quad = array(field(h, "quad", line), "quad", line, 4);
    for (std::size_t v = 0; v < 4; ++v) {
      array(quad[v], "quad", line, 2);
      hand.quad.vertices[v] = {number(quad[v][0], "quad", line), number(quad[v][1], "quad", line)};
    }
    std::function<void(const std::string&)> tagged;
    if (warn) tagged = [&](const std::string& msg) { warn("line " + std::to_string(line) + ": " + msg); };
    hand.quad = geom::normalize_quad(hand.quad, r.width, r.height, tagged);
    hand.contact = parse_label(field(h, "contact", line), line);
    r.hands.push_back(hand);
  }
  if (j.contains("objects")) {
    for (const auto& o : array(j["objects"], "objects", line)) r.objects.push_back(parse_box(o, "objects", line));
  }
  try {
    validate(r);
  } catch (const IngestError& e) {
    throw IngestError(e.what(), line);
  }
  return r;
}

json to_json(const ImageRecord& r) {
  json hands = json::array();
  for (const auto& h : r.hands) {
    json quad = json::array();
    for (const auto& p : h.quad.vertices) quad.push_back({p.x, p.y});
    hands.push_back({{"quad", quad}, {"contact", to_json(h.contact)}});
  }
  json objects = json::array();
  for (const auto& o : r.objects) objects.push_back(box_json(o));
  return {{"image_id", r.image_id}, {"height", r.height}, {"width", r.width}, {"hands", hands}, {"objects", objects}};
}

std::vector<ImageRecord> read_annotations(const std::filesystem::path& path,
                                          const std::function<void(const std::string&)>& warn) {
  std::vector<ImageRecord> out;
  for_each_record(path, [&](const json& j, std::size_t line) { out.push_back(parse_image_record(j, line, warn)); });
  return out;
}

void write_annotations(const std::filesystem::path& path, const std::vector<ImageRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) write_record(out, to_json(r));
}

eval::DetectionRecord parse_detection(const json& j, std::size_t line) {
  eval::DetectionRecord d;
  d.image_id = text(field(j, "image_id", line), "image_id", line);
  d.box = parse_box(field(j, "box", line), "box", line);
  d.det_score = number(field(j, "det_score", line), "det_score", line);
  const auto& probs = array(field(j, "contact_probs", line), "contact_probs", line, kNumStates);
  for (std::size_t s = 0; s < kNumStates; ++s) d.contact_probs[s] = number(probs[s], "contact_probs", line);
  try {
    eval::validate(d);
  } catch (const IngestError& e) {
    throw IngestError(e.what(), line);
  }
  return d;
}

json to_json(const eval::DetectionRecord& d) {
  return {{"image_id", d.image_id},
          {"box", box_json(d.box)},
          {"det_score", d.det_score},
          {"contact_probs", json(std::vector<double>(d.contact_probs.begin(), d.contact_probs.end()))}};
}

std::vector<eval::DetectionRecord> read_detections(const std::filesystem::path& path) {
  std::vector<eval::DetectionRecord> out;
  for_each_record(path, [&](const json& j, std::size_t line) { out.push_back(parse_detection(j, line)); });
  return out;
}

PoseIndex read_keypoints(const std::filesystem::path& path) {
  PoseIndex index;
  for_each_record(path, [&](const json& j, std::size_t line) {
    const auto id = text(field(j, "image_id", line), "image_id", line);
    if (index.count(id)) throw IngestError("duplicate image_id '" + id + "'", line);
    auto& poses = index[id];
    for (const auto& p : array(field(j, "poses", line), "poses", line)) {
      pose::PoseRecord rec;
      rec.person_id = p.contains("person_id") ? text(p["person_id"], "person_id", line) : std::to_string(poses.size());
      const auto& joints = array(field(p, "joints", line), "joints", line, pose::kNumJoints);
      for (std::size_t k = 0; k < pose::kNumJoints; ++k) {
        array(joints[k], "joints", line, 3);
        rec.joints[k] = {number(joints[k][0], "joints", line), number(joints[k][1], "joints", line),
                         number(joints[k][2], "joints", line)};
      }
      poses.push_back(rec);
    }
  });
  return index;
}

json to_json(const std::string& image_id, const std::vector<pose::PoseRecord>& poses) {
  json arr = json::array();
  for (const auto& p : poses) {
    json joints = json::array();
    for (const auto& jt : p.joints) joints.push_back({jt.x, jt.y, jt.confidence});
    arr.push_back({{"person_id", p.person_id}, {"joints", joints}});
  }
  return {{"image_id", image_id}, {"poses", arr}};
}

FeatureRecord parse_feature_record(const json& j, std::size_t line) {
  FeatureRecord r;
  r.image_id = text(field(j, "image_id", line), "image_id", line);
  r.box = j.contains("box") ? parse_box(j["box"], "box", line) : geom::AxisBox{};
  if (j.contains("det_score")) {
    r.det_score = number(j["det_score"], "det_score", line);
    if (r.det_score < 0.0 || r.det_score > 1.0) throw IngestError("field 'det_score' must lie in [0,1]", line);
  }
  const std::size_t n = count(field(j, "n", line), "n", line);
  const std::size_t d = count(field(j, "d", line), "d", line);
  r.sample.hand = parse_block(field(j, "hand", line), "hand", n, d, line);
  for (const auto& u : array(field(j, "unions", line), "unions", line)) {
    r.sample.unions.push_back(parse_block(u, "unions", n, d, line));
  }
  if (j.contains("contact") && !j["contact"].is_null()) {
    r.sample.label = parse_label(j["contact"], line);
    r.has_label = true;
  }
  return r;
}

json to_json(const FeatureRecord& r) {
  json unions = json::array();
  for (const auto& u : r.sample.unions) unions.push_back(block_json(u));
  json out = {{"image_id", r.image_id},
              {"box", box_json(r.box)},
              {"det_score", r.det_score},
              {"n", r.sample.hand.n()},
              {"d", r.sample.hand.d()},
              {"hand", block_json(r.sample.hand)},
              {"unions", unions}};
  if (r.has_label) out["contact"] = to_json(r.sample.label);
  return out;
}

json to_json(const HeldOutMetrics& m) {
  return {{"loss", m.loss},
          {"accuracy", json(std::vector<double>(m.accuracy.begin(), m.accuracy.end()))},
          {"labeled", json(std::vector<std::size_t>(m.labeled.begin(), m.labeled.end()))}};
}

json to_json(const TraceRecord& rec) {
  json out = {{"step", rec.step}, {"loss", rec.loss}, {"lr", rec.lr}};
  if (rec.heldout) out["heldout"] = to_json(*rec.heldout);
  return out;
}

}  // namespace contact::io
