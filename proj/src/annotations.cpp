#include "contact/annotations.hpp"

#include <algorithm>
#include <cctype>

#include "contact/errors.hpp"

namespace contact {

std::string_view to_string(TriState s) {
  switch (s) {
    case TriState::kYes:
      return "yes";
    case TriState::kNo:
      return "no";
    case TriState::kUnsure:
      return "unsure";
  }
  return "?";
}

std::optional<TriState> parse_tristate(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "yes") return TriState::kYes;
  if (lower == "no") return TriState::kNo;
  if (lower == "unsure") return TriState::kUnsure;
  return std::nullopt;
}

namespace {
bool inside(const geom::AxisBox& b, const ImageRecord& r) {
  return b.valid() && b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_max <= r.width && b.y_max <= r.height;
}
}  // namespace

void validate(const ImageRecord& record) {
  if (!(record.height > 0.0 && record.width > 0.0)) {
    throw IngestError("image '" + record.image_id + "': height and width must be positive");
  }
  for (const auto& h : record.hands) {
    if (!inside(h.box(), record)) throw IngestError("image '" + record.image_id + "': hand outside image bounds");
  }
  for (const auto& o : record.objects) {
    if (!inside(o, record)) throw IngestError("image '" + record.image_id + "': object box outside image bounds");
  }
}

DatasetStats dataset_stats(std::span<const ImageRecord> records) {
  DatasetStats stats;
  for (const auto& r : records) {
    ++stats.images;
    for (const auto& h : r.hands) {
      ++stats.hands;
      if (geom::size_filter(h.quad, r.height, r.width)) ++stats.hands_passing_size_filter;
      for (std::size_t s = 0; s < kNumStates; ++s) {
        switch (h.contact[s]) {
          case TriState::kYes:
            ++stats.states[s].yes;
            break;
          case TriState::kNo:
            ++stats.states[s].no;
            break;
          case TriState::kUnsure:
            ++stats.states[s].unsure;
            break;
        }
      }
    }
  }
  return stats;
}

}  // namespace contact
