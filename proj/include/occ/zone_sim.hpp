#pragma once

#include <vector>

#include "occ/weather.hpp"

namespace occ {

/// Single-zone 1R1C model with an ideal cooling controller and a VAV-style energy split.
struct ZoneParams {
  double capacitance = 5e6;          // J/K
  double ua = 120.0;                 // W/K
  double q_int_occupied = 900.0;     // W
  double q_int_unoccupied = 100.0;   // W
  double q_max = 6000.0;             // W
  double supply_dt = 8.0;            // K, recorded only; airflow is implied by the fan law
  double q_nom = 4000.0;             // W
  double p_fan_nom = 400.0;          // W at q_nom
  double p_pump_nom = 150.0;         // W at q_nom
  double cop = 4.0;                  // district plant performance factor
  double occupied_start_hour = 8.0;
  double occupied_end_hour = 18.0;
  int workdays_per_week = 5;         // day 0 of the simulation is a Monday
};

/// Throws ConfigError unless every physical parameter is strictly positive and the schedule
/// is sensible.
void validate(const ZoneParams& params);

/// Weekday office hours; time is minutes since a Monday midnight.
bool is_occupied(const ZoneParams& params, double time_min) noexcept;
double internal_gains(const ZoneParams& params, double time_min) noexcept;

struct ZoneState {
  double zone_temp = 26.0;  // degC
  double time_min = 0.0;
};

struct EnergyBreakdown {
  double district_kwh = 0.0;
  double fan_kwh = 0.0;
  double pump_kwh = 0.0;

  double total() const noexcept { return district_kwh + fan_kwh + pump_kwh; }
  EnergyBreakdown& operator+=(const EnergyBreakdown& o) noexcept {
    district_kwh += o.district_kwh;
    fan_kwh += o.fan_kwh;
    pump_kwh += o.pump_kwh;
    return *this;
  }
};

struct StepOutcome {
  ZoneState next;
  double q_cool = 0.0;  // W, held constant over the step
  EnergyBreakdown energy;
};

/// Energy drawn by a constant cooling rate over `dt_min` minutes.
EnergyBreakdown cooling_energy(double q_cool, const ZoneParams& params, double dt_min) noexcept;

/// Picks the constant cooling rate that lands the zone exactly on `setpoint` after `dt_min`
/// under C dT/dt = UA (T_out - T) + Q_int - Q, clamps it to [0, q_max], and advances the
/// state with the exact exponential solution. `q_int` overrides the schedule.
StepOutcome zone_step(const ZoneState& state, double setpoint, const WeatherPoint& weather, double q_int,
                      const ZoneParams& params, double dt_min);

/// As above with internal gains taken from the occupancy schedule at the step start.
StepOutcome zone_step(const ZoneState& state, double setpoint, const WeatherPoint& weather,
                      const ZoneParams& params, double dt_min);

struct ZoneRecord {
  std::size_t step = 0;
  double time_min = 0.0;  // step start
  double setpoint = 0.0;
  double air_speed = 0.0;
  double zone_temp = 0.0;  // at step end
  double q_cool = 0.0;
  EnergyBreakdown energy;
};

/// Fixed setpoint and air speed for `steps` steps of `dt_min` starting at t = 0.
std::vector<ZoneRecord> run_baseline(const WeatherSeries& weather, const ZoneParams& params, double setpoint,
                                     double air_speed, std::size_t steps, double dt_min, double initial_temp);

EnergyBreakdown total_energy(const std::vector<ZoneRecord>& records) noexcept;

}  // namespace occ
