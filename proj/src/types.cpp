#include "occ/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "occ/error.hpp"

namespace occ {

std::string_view to_string(PreferenceLabel label) noexcept {
  switch (label) {
    case PreferenceLabel::Cooler:
      return "cooler";
    case PreferenceLabel::NoChange:
      return "no_change";
    case PreferenceLabel::Warmer:
      return "warmer";
  }
  return "?";
}

PreferenceLabel parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto label : kAllLabels) {
    if (lower == to_string(label)) return label;
  }
  throw LabelError(std::string(text));
}

void validate(const EnvState& env) {
  auto fail = [](const std::string& what) { throw InputError("invalid environment: " + what); };
  if (!std::isfinite(env.indoor_temp) || env.indoor_temp < kMinIndoorTemp || env.indoor_temp > kMaxIndoorTemp)
    fail("indoor_temp " + std::to_string(env.indoor_temp) + " outside [20, 35] degC");
  if (!std::isfinite(env.air_speed) || env.air_speed < 0.0 || env.air_speed > kMaxAirSpeed)
    fail("air_speed " + std::to_string(env.air_speed) + " outside [0, 2] m/s");
  if (!std::isfinite(env.outdoor_temp)) fail("outdoor_temp not finite");
  if (!std::isfinite(env.outdoor_rh) || env.outdoor_rh < 0.0 || env.outdoor_rh > 100.0)
    fail("outdoor_rh " + std::to_string(env.outdoor_rh) + " outside [0, 100] %");
}

}  // namespace occ
