#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "occ/rng.hpp"
#include "occ/types.hpp"
#include "occ/weather.hpp"

namespace occ {

/// Ground-truth parameters of one synthetic occupant's ordered-logit preference curve.
struct OccupantParams {
  int id = 0;
  double neutral_temp = 26.5;    // degC, centre of the no-change band
  double slope = 1.5;            // 1/degC, > 0
  double band_halfwidth = 1.0;   // degC, >= 0.3
  double airspeed_gain = 2.0;    // degC per m/s, >= 0

  friend bool operator==(const OccupantParams&, const OccupantParams&) = default;
};

/// Normal distributions (then clipped) for each occupant parameter.
struct PopulationConfig {
  double neutral_mean = 26.5;
  double neutral_sd = 0.5;
  double neutral_min = 24.5;
  double neutral_max = 28.5;
  double slope_mean = 1.5;
  double slope_sd = 0.3;
  double slope_min = 0.5;
  double band_mean = 1.5;
  double band_sd = 0.25;
  double band_min = 0.3;
  double airspeed_gain_mean = 2.0;
  double airspeed_gain_sd = 0.3;
  double airspeed_gain_min = 0.0;
};

/// Occupants with ids 0..n-1. Deterministic for a fixed seed. Throws InputError when n == 0.
std::vector<OccupantParams> generate_population(std::size_t n, std::uint64_t seed,
                                                const PopulationConfig& cfg = {});

/// Lowest air speed in the collected data; the ordered-logit curve is anchored there.
inline constexpr double kReferenceAirSpeed = 0.1;

double logistic(double x) noexcept;

/// indoor_temp - airspeed_gain * (air_speed - 0.1)
double effective_temperature(const OccupantParams& occ, const EnvState& env) noexcept;

/// Cumulative ordered logit:
///   p_cooler = sigma(s (T_eff - T_n) - s w), p_warmer = sigma(-s (T_eff - T_n) - s w),
///   p_nochange = 1 - p_cooler - p_warmer.
ProbTriple preference_probabilities(const OccupantParams& occ, const EnvState& env) noexcept;

/// One survey answer drawn from preference_probabilities with a single uniform draw.
PreferenceLabel sample_label(const OccupantParams& occ, const EnvState& env, Rng& rng);

struct LabeledInstance {
  int timestep = 0;
  int occupant_id = 0;
  EnvState env;
  PreferenceLabel label = PreferenceLabel::NoChange;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

inline constexpr std::string_view kDatasetHeader =
    "timestep,occupant_id,indoor_temp_c,air_speed_ms,outdoor_temp_c,outdoor_rh_pct,label";

std::vector<LabeledInstance> read_dataset_csv(std::istream& in);
std::vector<LabeledInstance> load_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, std::span<const LabeledInstance> rows);
void write_dataset_csv(const std::filesystem::path& path, std::span<const LabeledInstance> rows);

/// Settings for synthesising a survey dataset the way the field study collected it:
/// rotating groups of occupants, indoor temperature and air speed re-randomised
/// every block, one vote per occupant per block.
struct SurveyConfig {
  std::size_t days = 10;
  std::size_t group_min = 5;
  std::size_t group_max = 6;
  std::size_t blocks_per_day = 16;     // 30-minute blocks in an 8-hour session
  double block_minutes = 30.0;
  double start_hour = 9.0;
  double indoor_lo = 24.0;
  double indoor_hi = 28.0;
  double air_lo = 0.1;
  double air_hi = 0.8;
};

/// Oracle-labelled dataset; outdoor conditions are read from `weather` by time.
std::vector<LabeledInstance> generate_survey_dataset(std::span<const OccupantParams> population,
                                                     std::span<const WeatherPoint> weather,
                                                     const SurveyConfig& cfg, std::uint64_t seed);

/// One candidate for annotation at a control step. `recorded_label` is set only in
/// replay mode, where the answer already exists in the dataset and is revealed when queried.
struct Candidate {
  int occupant_id = 0;
  EnvState env;
  int timestep = 0;
  std::optional<PreferenceLabel> recorded_label;
};

/// Scaled distance over the controlled variables: indoor temperature over the 24-28 degC
/// range and air speed over the 0.1-0.8 m/s range.
double condition_distance(const EnvState& a, const EnvState& b) noexcept;

/// Oracle mode: k distinct occupants drawn uniformly without replacement; every candidate
/// carries the current conditions. Throws PoolError if k exceeds the number of occupants.
std::vector<Candidate> sample_candidates(std::span<const int> occupant_ids, const EnvState& env,
                                         std::size_t k, int timestep, Rng& rng);

/// Replay mode: k distinct occupants drawn from the pool; for each, the pool instance
/// closest to `env` (ties: lowest timestep, then pool order).
std::vector<Candidate> nearest_instances(std::span<const LabeledInstance> pool, const EnvState& env,
                                         std::size_t k, Rng& rng);

/// Sorted distinct occupant ids of a dataset.
std::vector<int> distinct_occupants(std::span<const LabeledInstance> rows);

}  // namespace occ
