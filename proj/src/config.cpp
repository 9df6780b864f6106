#include "occ/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "occ/error.hpp"

namespace occ {

using nlohmann::json;

namespace {

struct Entry {
  std::string key;
  std::string help;
  std::function<void(SimConfig&, const json&)> set;
  std::function<json(const SimConfig&)> get;
};

template <class T>
T as(const json& v, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
    const auto x = v.get<long long>();
    if constexpr (std::is_unsigned_v<T>)
      if (x < 0) throw ConfigError(key + ": must not be negative");
    return static_cast<T>(x);
  } else {
    if (!v.is_number()) throw ConfigError(key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key + ": must be finite");
    return x;
  }
}

template <class T>
Entry field(std::string key, std::string help, T& (*ref)(SimConfig&)) {
  const std::string k = key;
  return {std::move(key), std::move(help), [ref, k](SimConfig& c, const json& v) { ref(c) = as<T>(v, k); },
          [ref](const SimConfig& c) { return json(ref(const_cast<SimConfig&>(c))); }};
}

#define OCC_FIELD(KEY, MEMBER, HELP) \
  field<std::remove_reference_t<decltype(std::declval<SimConfig&>().MEMBER)>>( \
      KEY, HELP, +[](SimConfig& c) -> decltype(auto) { return (c.MEMBER); })

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back(OCC_FIELD("population.size", population_size, "synthetic occupants (ids 0..n-1)"));
    e.push_back(OCC_FIELD("population.neutral_mean", population.neutral_mean, "neutral temperature mean, degC"));
    e.push_back(OCC_FIELD("population.neutral_sd", population.neutral_sd, "neutral temperature sd, degC"));
    e.push_back(OCC_FIELD("population.neutral_min", population.neutral_min, "neutral temperature lower clip"));
    e.push_back(OCC_FIELD("population.neutral_max", population.neutral_max, "neutral temperature upper clip"));
    e.push_back(OCC_FIELD("population.slope_mean", population.slope_mean, "logit slope mean, 1/degC"));
    e.push_back(OCC_FIELD("population.slope_sd", population.slope_sd, "logit slope sd"));
    e.push_back(OCC_FIELD("population.slope_min", population.slope_min, "logit slope lower clip"));
    e.push_back(OCC_FIELD("population.band_mean", population.band_mean, "no-change band half-width mean, degC"));
    e.push_back(OCC_FIELD("population.band_sd", population.band_sd, "band half-width sd"));
    e.push_back(OCC_FIELD("population.band_min", population.band_min, "band half-width lower clip"));
    e.push_back(OCC_FIELD("population.airspeed_gain_mean", population.airspeed_gain_mean,
                          "cooling effect of air speed mean, degC per m/s"));
    e.push_back(OCC_FIELD("population.airspeed_gain_sd", population.airspeed_gain_sd, "air-speed gain sd"));
    e.push_back(OCC_FIELD("population.airspeed_gain_min", population.airspeed_gain_min, "air-speed gain lower clip"));
    e.push_back(OCC_FIELD("candidates.per_step", candidates_per_step, "distinct occupants sampled per control step"));
    e.push_back({"data.mode", "oracle (synthetic labels) or replay (answers from data.path)",
                 [](SimConfig& c, const json& v) {
                   const auto s = as<std::string>(v, "data.mode");
                   if (s == "oracle")
                     c.data_mode = DataMode::Oracle;
                   else if (s == "replay")
                     c.data_mode = DataMode::Replay;
                   else
                     throw ConfigError("data.mode must be oracle or replay, got '" + s + "'");
                 },
                 [](const SimConfig& c) { return json(c.data_mode == DataMode::Oracle ? "oracle" : "replay"); }});
    e.push_back(OCC_FIELD("data.path", data_path, "dataset CSV for replay mode"));
    e.push_back(OCC_FIELD("weather.path", weather_path, "weather CSV; empty for synthetic weather"));
    e.push_back(OCC_FIELD("weather.mean_temp", weather.mean_temp, "synthetic outdoor mean, degC"));
    e.push_back(OCC_FIELD("weather.amplitude", weather.amplitude, "diurnal amplitude, degC"));
    e.push_back(OCC_FIELD("weather.zero_crossing_hour", weather.zero_crossing_hour, "hour of the rising mean crossing"));
    e.push_back(OCC_FIELD("weather.rh_mean", weather.rh_mean, "outdoor RH at the mean temperature, %"));
    e.push_back(OCC_FIELD("weather.rh_slope", weather.rh_slope, "RH drop per degC above the mean"));
    e.push_back(OCC_FIELD("weather.rh_min", weather.rh_min, "RH lower clip, %"));
    e.push_back(OCC_FIELD("weather.rh_max", weather.rh_max, "RH upper clip, %"));
    e.push_back(OCC_FIELD("weather.noise_sigma", weather.noise_sigma, "AR(1) innovation sd, degC"));
    e.push_back(OCC_FIELD("weather.noise_phi", weather.noise_phi, "AR(1) coefficient per sample"));
    e.push_back(OCC_FIELD("grid.lo", grid_lo, "lowest candidate setpoint, degC"));
    e.push_back(OCC_FIELD("grid.hi", grid_hi, "highest candidate setpoint, degC"));
    e.push_back(OCC_FIELD("grid.step", grid_step, "setpoint grid spacing, degC"));
    e.push_back(OCC_FIELD("gbt.rounds", gbt.rounds, "boosting rounds"));
    e.push_back(OCC_FIELD("gbt.learning_rate", gbt.learning_rate, "shrinkage per round"));
    e.push_back(OCC_FIELD("gbt.max_depth", gbt.max_depth, "tree depth"));
    e.push_back(OCC_FIELD("gbt.min_samples_leaf", gbt.min_samples_leaf, "minimum rows per leaf"));
    e.push_back(OCC_FIELD("gbt.l2", gbt.l2, "L2 penalty on leaf values"));
    e.push_back(OCC_FIELD("zone.capacitance", zone.capacitance, "thermal capacitance, J/K"));
    e.push_back(OCC_FIELD("zone.ua", zone.ua, "envelope conductance, W/K"));
    e.push_back(OCC_FIELD("zone.q_int_occupied", zone.q_int_occupied, "internal gains when occupied, W"));
    e.push_back(OCC_FIELD("zone.q_int_unoccupied", zone.q_int_unoccupied, "internal gains otherwise, W"));
    e.push_back(OCC_FIELD("zone.q_max", zone.q_max, "cooling capacity, W"));
    e.push_back(OCC_FIELD("zone.supply_dt", zone.supply_dt, "supply air temperature difference, K"));
    e.push_back(OCC_FIELD("zone.q_nom", zone.q_nom, "nominal cooling load for the fan and pump laws, W"));
    e.push_back(OCC_FIELD("zone.p_fan_nom", zone.p_fan_nom, "AHU fan power at q_nom, W"));
    e.push_back(OCC_FIELD("zone.p_pump_nom", zone.p_pump_nom, "chilled-water pump power at q_nom, W"));
    e.push_back(OCC_FIELD("zone.cop", zone.cop, "district cooling performance factor"));
    e.push_back(OCC_FIELD("zone.occupied_start_hour", zone.occupied_start_hour, "office hours start"));
    e.push_back(OCC_FIELD("zone.occupied_end_hour", zone.occupied_end_hour, "office hours end"));
    e.push_back(OCC_FIELD("zone.workdays_per_week", zone.workdays_per_week, "occupied days per week, from Monday"));
    e.push_back(OCC_FIELD("al.committee_size", committee_size, "query-by-committee members"));
    e.push_back({"al.policy", "threshold (entropy > al.theta) or top_k (al.k most contested)",
                 [](SimConfig& c, const json& v) {
                   const auto s = as<std::string>(v, "al.policy");
                   if (s == "threshold")
                     c.policy.kind = SelectionPolicy::Kind::Threshold;
                   else if (s == "top_k")
                     c.policy.kind = SelectionPolicy::Kind::TopK;
                   else
                     throw ConfigError("al.policy must be threshold or top_k, got '" + s + "'");
                 },
                 [](const SimConfig& c) {
                   return json(c.policy.kind == SelectionPolicy::Kind::Threshold ? "threshold" : "top_k");
                 }});
    e.push_back(OCC_FIELD("al.theta", policy.theta, "vote-entropy threshold, nats"));
    e.push_back(OCC_FIELD("al.k", policy.k, "candidates labelled per step under top_k"));
    e.push_back(OCC_FIELD("al.cold_start_min_labels", cold_start_min_labels,
                          "labels (over two or more classes) needed before the model drives the setpoint"));
    e.push_back(OCC_FIELD("sim.days", days, "simulated days, starting on a Monday"));
    e.push_back(OCC_FIELD("sim.step_minutes", step_minutes, "control step, minutes"));
    e.push_back(OCC_FIELD("sim.initial_setpoint", initial_setpoint, "setpoint until the model is ready, degC"));
    e.push_back(OCC_FIELD("sim.initial_zone_temp", initial_zone_temp, "zone temperature at t = 0, degC"));
    e.push_back(OCC_FIELD("sim.occupied_air_speed", occupied_air_speed, "air speed under occupant-centric control, m/s"));
    e.push_back(OCC_FIELD("baseline.setpoint", baseline_setpoint, "fixed baseline setpoint, degC"));
    e.push_back(OCC_FIELD("baseline.air_speed", baseline_air_speed, "baseline air speed, m/s"));
    e.push_back(OCC_FIELD("random.fraction", random_fraction, "labelling probability per candidate, random strategy"));
    e.push_back(OCC_FIELD("eval.holdout_size", holdout_size, "oracle-labelled holdout rows for macro-F1"));
    e.push_back(OCC_FIELD("eval.convergence_window_days", convergence_window_days,
                          "minimum agreement span for convergence, days"));
    e.push_back(OCC_FIELD("report.annualize", annualize, "add a 365-day linear extrapolation of energy"));
    return e;
  }();
  return entries;
}

#undef OCC_FIELD

}  // namespace

std::size_t SimConfig::total_steps() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(days) * 1440.0 / step_minutes));
}

void validate(const SimConfig& c) {
  if (c.population_size == 0) throw ConfigError("population.size must be at least 1");
  if (c.data_mode == DataMode::Oracle && c.candidates_per_step > c.population_size)
    throw ConfigError("candidates.per_step exceeds population.size");
  if (c.candidates_per_step == 0) throw ConfigError("candidates.per_step must be at least 1");
  if (c.data_mode == DataMode::Replay && c.data_path.empty()) throw ConfigError("replay mode needs data.path");
  const TempGrid grid = c.grid();
  if (grid.lo() < kMinIndoorTemp || grid.hi() > kMaxIndoorTemp)
    throw ConfigError("setpoint grid lies outside the modelled indoor range");
  if (c.initial_setpoint < kMinIndoorTemp || c.initial_setpoint > kMaxIndoorTemp)
    throw ConfigError("sim.initial_setpoint outside the modelled indoor range");
  if (c.baseline_setpoint < kMinIndoorTemp || c.baseline_setpoint > kMaxIndoorTemp)
    throw ConfigError("baseline.setpoint outside the modelled indoor range");
  if (c.occupied_air_speed < 0.0 || c.occupied_air_speed > kMaxAirSpeed ||
      c.baseline_air_speed < 0.0 || c.baseline_air_speed > kMaxAirSpeed)
    throw ConfigError("air speeds must be within [0, 2] m/s");
  validate(c.gbt);
  validate(c.zone);
  if (c.committee_size < 2) throw ConfigError("al.committee_size must be at least 2");
  if (c.policy.kind == SelectionPolicy::Kind::Threshold && !(c.policy.theta >= 0.0))
    throw ConfigError("al.theta must be >= 0");
  if (c.policy.kind == SelectionPolicy::Kind::TopK && c.policy.k > c.candidates_per_step)
    throw ConfigError("al.k exceeds candidates.per_step");
  if (c.days == 0) throw ConfigError("sim.days must be at least 1");
  if (!(c.step_minutes > 0.0) || std::fmod(1440.0, c.step_minutes) != 0.0)
    throw ConfigError("sim.step_minutes must divide a day");
  if (!(c.random_fraction >= 0.0 && c.random_fraction <= 1.0)) throw ConfigError("random.fraction must be in [0, 1]");
  if (!(c.convergence_window_days >= 0.0)) throw ConfigError("eval.convergence_window_days must be >= 0");
  if (std::abs(c.weather.noise_phi) >= 1.0) throw ConfigError("weather.noise_phi must satisfy |phi| < 1");
}

std::vector<ConfigKey> config_keys() {
  const SimConfig defaults;
  std::vector<ConfigKey> out;
  for (const auto& e : registry()) out.push_back({e.key, e.help + " [default " + e.get(defaults).dump() + "]"});
  return out;
}

void apply_config_json(SimConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a flat JSON object of key: value");
  for (const auto& [key, value] : doc.items()) {
    const auto& reg = registry();
    auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.key == key; });
    if (it == reg.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(cfg, value);
  }
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  SimConfig cfg;
  apply_config_json(cfg, buf.str());
  return cfg;
}

std::string config_to_json(const SimConfig& cfg) {
  json out = json::object();
  for (const auto& e : registry()) out[e.key] = e.get(cfg);
  return out.dump(2);
}

}  // namespace occ
