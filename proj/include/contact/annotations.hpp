#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "contact/geometry.hpp"
#include "contact/labels.hpp"

namespace contact {

struct HandAnnotation {
  geom::Quadrilateral quad;
  ContactLabel contact;

  geom::AxisBox box() const { return geom::envelope(quad); }
};

struct ImageRecord {
  std::string image_id;
  double height = 0.0;
  double width = 0.0;
  std::vector<HandAnnotation> hands;
  std::vector<geom::AxisBox> objects;  // detector output, ingested

  geom::AxisBox bounds() const { return {0.0, 0.0, width, height}; }
};

// Checks the record's invariants (positive size, geometry inside the image).
void validate(const ImageRecord& record);

struct StateTally {
  std::size_t yes = 0;
  std::size_t no = 0;
  std::size_t unsure = 0;
  bool operator==(const StateTally&) const = default;
};

struct DatasetStats {
  std::size_t images = 0;
  std::size_t hands = 0;
  std::size_t hands_passing_size_filter = 0;
  std::array<StateTally, kNumStates> states{};
};

DatasetStats dataset_stats(std::span<const ImageRecord> records);

}  // namespace contact
