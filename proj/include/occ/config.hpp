#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "occ/active_learning.hpp"
#include "occ/comfort_profiles.hpp"
#include "occ/gbt.hpp"
#include "occ/occupant_data.hpp"
#include "occ/weather.hpp"
#include "occ/zone_sim.hpp"

namespace occ {

enum class DataMode { Oracle, Replay };

/// Everything a simulation run needs besides the strategy and seed.
struct SimConfig {
  std::size_t population_size = 58;
  PopulationConfig population;
  std::size_t candidates_per_step = 6;
  DataMode data_mode = DataMode::Oracle;
  std::string data_path;     // replay dataset
  std::string weather_path;  // empty: synthetic weather
  WeatherConfig weather;
  double grid_lo = 24.5;
  double grid_hi = 28.0;
  double grid_step = 0.1;
  GbtParams gbt;
  ZoneParams zone;

  std::size_t committee_size = 5;
  SelectionPolicy policy;
  std::size_t cold_start_min_labels = 12;

  std::size_t days = 56;
  double step_minutes = 30.0;
  double initial_setpoint = 24.0;
  double initial_zone_temp = 26.0;
  double occupied_air_speed = 0.8;
  double baseline_setpoint = 27.0;
  double baseline_air_speed = 0.94;
  double random_fraction = 0.7;

  std::size_t holdout_size = 2000;
  double convergence_window_days = 7.0;
  bool annualize = false;

  std::size_t total_steps() const;
  TempGrid grid() const { return TempGrid(grid_lo, grid_hi, grid_step); }
};

/// Throws ConfigError when settings contradict each other (grid outside the modelled indoor
/// range, more candidates than occupants, bad step length, ...).
void validate(const SimConfig& cfg);

struct ConfigKey {
  std::string key;
  std::string help;
};

/// Every recognised key with a one-line description and its default.
std::vector<ConfigKey> config_keys();

/// Applies a flat JSON object of key -> value. Unknown keys and wrong types raise ConfigError.
void apply_config_json(SimConfig& cfg, const std::string& json_text);

/// Defaults overridden by the file's keys. Throws IoError when the file cannot be read.
SimConfig load_config(const std::filesystem::path& path);

/// Flat JSON of every key, pretty-printed.
std::string config_to_json(const SimConfig& cfg);

}  // namespace occ
