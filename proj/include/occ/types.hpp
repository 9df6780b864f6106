#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace occ {

/// Ordinal thermal preference vote. Cooler < NoChange < Warmer.
enum class PreferenceLabel : std::uint8_t { Cooler = 0, NoChange = 1, Warmer = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<PreferenceLabel, kNumClasses> kAllLabels = {
    PreferenceLabel::Cooler, PreferenceLabel::NoChange, PreferenceLabel::Warmer};

constexpr std::size_t class_index(PreferenceLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

constexpr PreferenceLabel label_from_index(std::size_t k) noexcept {
  return static_cast<PreferenceLabel>(k);
}

/// Canonical CSV spelling: cooler, no_change, warmer.
std::string_view to_string(PreferenceLabel label) noexcept;

/// Case-insensitive inverse of to_string. Throws LabelError on anything else.
PreferenceLabel parse_label(std::string_view text);

/// Probabilities ordered (cooler, no change, warmer).
using ProbTriple = std::array<double, kNumClasses>;

/// The four continuous conditions an occupant experiences.
struct EnvState {
  double indoor_temp = 24.0;   // degC
  double air_speed = 0.1;      // m/s
  double outdoor_temp = 27.5;  // degC
  double outdoor_rh = 75.0;    // percent

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

inline constexpr double kMinIndoorTemp = 20.0;
inline constexpr double kMaxIndoorTemp = 35.0;
inline constexpr double kMaxAirSpeed = 2.0;

/// Throws InputError when a field is outside its physical range.
void validate(const EnvState& env);

}  // namespace occ
