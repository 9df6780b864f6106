#include "occ/zone_sim.hpp"

#include <algorithm>
#include <cmath>

#include "occ/error.hpp"

namespace occ {

void validate(const ZoneParams& p) {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + " must be positive");
  };
  positive(p.capacitance, "zone.capacitance");
  positive(p.ua, "zone.ua");
  positive(p.q_int_occupied, "zone.q_int_occupied");
  positive(p.q_int_unoccupied, "zone.q_int_unoccupied");
  positive(p.q_max, "zone.q_max");
  positive(p.supply_dt, "zone.supply_dt");
  positive(p.q_nom, "zone.q_nom");
  positive(p.p_fan_nom, "zone.p_fan_nom");
  positive(p.p_pump_nom, "zone.p_pump_nom");
  positive(p.cop, "zone.cop");
  if (!(p.occupied_start_hour >= 0.0 && p.occupied_start_hour < p.occupied_end_hour && p.occupied_end_hour <= 24.0))
    throw ConfigError("zone occupied hours must satisfy 0 <= start < end <= 24");
  if (p.workdays_per_week < 0 || p.workdays_per_week > 7) throw ConfigError("zone.workdays_per_week must be 0..7");
}

bool is_occupied(const ZoneParams& p, double time_min) noexcept {
  const double day = std::floor(time_min / 1440.0);
  const auto weekday = static_cast<long long>(day) % 7;
  if (weekday >= p.workdays_per_week) return false;
  const double hour = (time_min - day * 1440.0) / 60.0;
  return hour >= p.occupied_start_hour && hour < p.occupied_end_hour;
}

double internal_gains(const ZoneParams& p, double time_min) noexcept {
  return is_occupied(p, time_min) ? p.q_int_occupied : p.q_int_unoccupied;
}

EnergyBreakdown cooling_energy(double q_cool, const ZoneParams& p, double dt_min) noexcept {
  const double hours = dt_min / 60.0;
  const double ratio = q_cool / p.q_nom;
  return {q_cool * hours / p.cop / 1000.0, p.p_fan_nom * ratio * ratio * ratio * hours / 1000.0,
          p.p_pump_nom * ratio * hours / 1000.0};
}

StepOutcome zone_step(const ZoneState& state, double setpoint, const WeatherPoint& weather, double q_int,
                      const ZoneParams& p, double dt_min) {
  if (!(dt_min > 0.0)) throw InputError("zone_step: dt must be positive");
  const double a = std::exp(-dt_min * 60.0 * p.ua / p.capacitance);
  // Equilibrium temperature that would bring the zone to the setpoint in exactly dt.
  const double target_ss = state.zone_temp == setpoint ? setpoint : (setpoint - state.zone_temp * a) / (1.0 - a);
  const double q_required = q_int + p.ua * (weather.outdoor_temp - target_ss);
  const double q = std::clamp(q_required, 0.0, p.q_max);
  const double t_ss = weather.outdoor_temp + (q_int - q) / p.ua;
  StepOutcome out;
  out.q_cool = q;
  out.next.zone_temp = q == q_required ? setpoint : t_ss + (state.zone_temp - t_ss) * a;
  out.next.time_min = state.time_min + dt_min;
  out.energy = cooling_energy(q, p, dt_min);
  return out;
}

StepOutcome zone_step(const ZoneState& state, double setpoint, const WeatherPoint& weather, const ZoneParams& p,
                      double dt_min) {
  return zone_step(state, setpoint, weather, internal_gains(p, state.time_min), p, dt_min);
}

std::vector<ZoneRecord> run_baseline(const WeatherSeries& weather, const ZoneParams& params, double setpoint,
                                     double air_speed, std::size_t steps, double dt_min, double initial_temp) {
  validate(params);
  std::vector<ZoneRecord> out;
  out.reserve(steps);
  ZoneState state{initial_temp, 0.0};
  for (std::size_t i = 0; i < steps; ++i) {
    const auto res = zone_step(state, setpoint, weather.at(state.time_min), params, dt_min);
    out.push_back({i, state.time_min, setpoint, air_speed, res.next.zone_temp, res.q_cool, res.energy});
    state = res.next;
  }
  return out;
}

EnergyBreakdown total_energy(const std::vector<ZoneRecord>& records) noexcept {
  EnergyBreakdown e;
  for (const auto& r : records) e += r.energy;
  return e;
}

}  // namespace occ
