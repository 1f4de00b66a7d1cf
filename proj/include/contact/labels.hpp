#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace contact {

inline constexpr std::size_t kNumStates = 4;

// Index order of every 4-vector of scores, probabilities and labels.
enum class ContactState : std::size_t {
  kNoContact = 0,
  kSelfContact = 1,
  kOtherPersonContact = 2,
  kObjectContact = 3,
};

inline constexpr std::array<std::string_view, kNumStates> kStateNames = {
    "no_contact", "self_contact", "other_person_contact", "object_contact"};

enum class TriState { kNo, kYes, kUnsure };

std::string_view to_string(TriState s);
// Accepts "yes", "no", "unsure" (case-insensitive).
std::optional<TriState> parse_tristate(std::string_view text);

struct ContactLabel {
  std::array<TriState, kNumStates> states{TriState::kNo, TriState::kNo, TriState::kNo, TriState::kNo};

  TriState operator[](std::size_t i) const { return states[i]; }
  TriState& operator[](std::size_t i) { return states[i]; }
  bool operator==(const ContactLabel&) const = default;
};

}  // namespace contact
