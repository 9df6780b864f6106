#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "occ/error.hpp"
#include "occ/weather.hpp"
#include "occ/zone_sim.hpp"
#include "support.hpp"

using namespace occ;

TEST_CASE("zone_step: equilibrium uses no energy") {
  const ZoneParams p;
  const auto out = zone_step({26.0, 0.0}, 26.0, {0.0, 26.0, 70.0}, 0.0, p, 30.0);
  CHECK(out.q_cool == 0.0);
  CHECK(out.energy.total() == 0.0);
  CHECK(out.next.zone_temp == 26.0);
  CHECK(out.next.time_min == 30.0);
}

TEST_CASE("zone_step: steady-state balance example") {
  ZoneParams p;
  p.ua = 100.0;
  p.cop = 4.0;
  const auto out = zone_step({27.0, 0.0}, 27.0, {0.0, 32.0, 70.0}, 500.0, p, 30.0);
  CHECK(std::abs(out.q_cool - 1000.0) <= 1e-9);
  CHECK(std::abs(out.energy.district_kwh - 0.125) <= 1e-9);
  CHECK(out.next.zone_temp == 27.0);
  // Fan and pump laws at this load.
  CHECK(out.energy.fan_kwh == doctest::Approx(p.p_fan_nom * std::pow(1000.0 / p.q_nom, 3) * 0.5 / 1000.0));
  CHECK(out.energy.pump_kwh == doctest::Approx(p.p_pump_nom * (1000.0 / p.q_nom) * 0.5 / 1000.0));
}

TEST_CASE("cooling_energy: nominal point of the fan law") {
  const ZoneParams p;
  const auto e = cooling_energy(p.q_nom, p, 60.0);
  CHECK(e.fan_kwh == doctest::Approx(p.p_fan_nom / 1000.0).epsilon(1e-15));
  CHECK(e.pump_kwh == doctest::Approx(p.p_pump_nom / 1000.0).epsilon(1e-15));
  CHECK(e.district_kwh == doctest::Approx(p.q_nom / p.cop / 1000.0).epsilon(1e-15));
}

TEST_CASE("zone_step: pulls down to the setpoint and matches the exponential solution") {
  const ZoneParams p;
  const WeatherPoint w{0.0, 31.0, 65.0};
  const auto out = zone_step({27.5, 0.0}, 26.0, w, 900.0, p, 30.0);
  REQUIRE(out.q_cool > 0.0);
  REQUIRE(out.q_cool < p.q_max);
  CHECK(out.next.zone_temp == doctest::Approx(26.0).epsilon(1e-12));
  // Independent check: integrate C dT/dt = UA(To - T) + Qint - Q in closed form with the applied Q.
  const double tau = p.capacitance / p.ua;
  const double t_inf = w.outdoor_temp + (900.0 - out.q_cool) / p.ua;
  const double t_end = t_inf + (27.5 - t_inf) * std::exp(-1800.0 / tau);
  CHECK(t_end == doctest::Approx(26.0).epsilon(1e-9));
}

TEST_CASE("zone_step: capacity limit leaves the zone above setpoint") {
  ZoneParams p;
  p.q_max = 500.0;
  const auto out = zone_step({30.0, 0.0}, 24.0, {0.0, 33.0, 60.0}, 900.0, p, 30.0);
  CHECK(out.q_cool == p.q_max);
  CHECK(out.next.zone_temp > 24.0);
  const double tau = p.capacitance / p.ua;
  const double t_inf = 33.0 + (900.0 - 500.0) / p.ua;
  CHECK(out.next.zone_temp == doctest::Approx(t_inf + (30.0 - t_inf) * std::exp(-1800.0 / tau)).epsilon(1e-12));
}

TEST_CASE("zone_step: no cooling when the zone drifts below setpoint") {
  const ZoneParams p;
  const auto out = zone_step({24.0, 0.0}, 27.0, {0.0, 25.0, 80.0}, 100.0, p, 30.0);
  CHECK(out.q_cool == 0.0);
  CHECK(out.energy.total() == 0.0);
  CHECK(out.next.zone_temp < 27.0);
}

TEST_CASE("zone_step: halving dt leaves an unconstrained trajectory unchanged") {
  const ZoneParams p;
  const WeatherPoint w{0.0, 31.0, 65.0};
  ZoneState coarse{26.0, 0.0}, fine{26.0, 0.0};
  for (int i = 0; i < 8; ++i) coarse = zone_step(coarse, 26.5, w, 900.0, p, 30.0).next;
  for (int i = 0; i < 16; ++i) fine = zone_step(fine, 26.5, w, 900.0, p, 15.0).next;
  CHECK(std::abs(coarse.zone_temp - fine.zone_temp) < 1e-6);
}

TEST_CASE("zone_step: energy nonnegative and monotone in the setpoint") {
  Rng rng(6);
  const ZoneParams p;
  for (int trial = 0; trial < 200; ++trial) {
    const WeatherPoint w{0.0, 24.0 + 10.0 * uniform01(rng), 70.0};
    const double qint = 1500.0 * uniform01(rng);
    const double t0 = 23.0 + 6.0 * uniform01(rng);
    const double lo = 24.0 + 4.0 * uniform01(rng), hi = lo + 0.1 + uniform01(rng);
    const auto a = zone_step({t0, 0.0}, lo, w, qint, p, 30.0);
    const auto b = zone_step({t0, 0.0}, hi, w, qint, p, 30.0);
    for (const auto* s : {&a, &b}) {
      CHECK(s->energy.district_kwh >= 0.0);
      CHECK(s->energy.fan_kwh >= 0.0);
      CHECK(s->energy.pump_kwh >= 0.0);
      CHECK(s->q_cool <= p.q_max);
    }
    CHECK(b.q_cool <= a.q_cool);
    CHECK(b.energy.total() <= a.energy.total());
  }
}

TEST_CASE("occupancy schedule: weekday office hours from a Monday start") {
  const ZoneParams p;
  CHECK(!is_occupied(p, 7.5 * 60));
  CHECK(is_occupied(p, 8.0 * 60));
  CHECK(is_occupied(p, 17.5 * 60));
  CHECK(!is_occupied(p, 18.0 * 60));
  CHECK(is_occupied(p, 4 * 1440 + 9 * 60));   // Friday
  CHECK(!is_occupied(p, 5 * 1440 + 9 * 60));  // Saturday
  CHECK(!is_occupied(p, 6 * 1440 + 9 * 60));  // Sunday
  CHECK(is_occupied(p, 7 * 1440 + 9 * 60));   // next Monday
  CHECK(internal_gains(p, 9 * 60) == p.q_int_occupied);
  CHECK(internal_gains(p, 20 * 60) == p.q_int_unoccupied);
}

TEST_CASE("ZoneParams: validation") {
  ZoneParams p;
  p.capacitance = 0.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = {};
  p.cop = -1.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = {};
  p.occupied_end_hour = 7.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  CHECK_NOTHROW(validate(ZoneParams{}));
}

TEST_CASE("run_baseline: fixed setpoint, determinism, accounting") {
  const WeatherSeries weather(synth_weather(3, 30.0, 4));
  const ZoneParams p;
  const auto a = run_baseline(weather, p, 27.0, 0.94, 96, 30.0, 26.0);
  const auto b = run_baseline(weather, p, 27.0, 0.94, 96, 30.0, 26.0);
  REQUIRE(a.size() == 96);
  EnergyBreakdown sum;
  for (const auto& r : a) {
    CHECK(r.setpoint == 27.0);
    CHECK(r.air_speed == 0.94);
    sum += r.energy;
  }
  const auto total = total_energy(a);
  CHECK(total.district_kwh == sum.district_kwh);
  CHECK(total.total() == total_energy(b).total());
  CHECK(total.total() > 0.0);
}

TEST_CASE("synth_weather: noise-free shape") {
  WeatherConfig cfg;
  cfg.noise_sigma = 0.0;
  const auto w = synth_weather(2, 30.0, 1, cfg);
  REQUIRE(w.size() == 96);
  CHECK(w[18].time_min == 9 * 60);
  CHECK(w[18].outdoor_temp == doctest::Approx(27.5).epsilon(1e-12));
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < 48; ++i) {
    lo = std::min(lo, w[i].outdoor_temp);
    hi = std::max(hi, w[i].outdoor_temp);
  }
  CHECK(hi - lo == doctest::Approx(7.0).epsilon(1e-9));
  for (const auto& p : w) {
    const double rh = std::clamp(75.0 - 1.5 * (p.outdoor_temp - 27.5), 40.0, 100.0);
    CHECK(p.outdoor_rh == doctest::Approx(rh).epsilon(1e-12));
  }
  CHECK(synth_weather(2, 30.0, 9) == synth_weather(2, 30.0, 9));
}

TEST_CASE("synth_weather: AR(1) residual variance") {
  WeatherConfig cfg;
  cfg.noise_sigma = 0.5;
  const auto w = synth_weather(30, 30.0, 11, cfg);
  std::vector<double> r;
  for (const auto& p : w) r.push_back(p.outdoor_temp - diurnal_temperature(cfg, p.time_min));
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / double(r.size());
  double var = 0.0;
  for (double x : r) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / double(r.size() - 1));
  const double theory = cfg.noise_sigma / std::sqrt(1.0 - cfg.noise_phi * cfg.noise_phi);
  CHECK(std::abs(sd / theory - 1.0) <= 0.3);
}

TEST_CASE("WeatherSeries: interpolation, clamping, ordering") {
  const WeatherSeries s({{0.0, 26.0, 80.0}, {60.0, 28.0, 70.0}});
  const auto mid = s.at(30.0);
  CHECK(mid.outdoor_temp == doctest::Approx(27.0));
  CHECK(mid.outdoor_rh == doctest::Approx(75.0));
  CHECK(s.at(60.0).outdoor_temp == 28.0);
  CHECK(s.at(-10.0).outdoor_temp == 26.0);
  CHECK(s.at(500.0).outdoor_rh == 70.0);
  CHECK_THROWS_AS(WeatherSeries({{0.0, 26.0, 80.0}, {0.0, 28.0, 70.0}}), FormatError);
  CHECK_THROWS_AS(WeatherSeries({}), InputError);
}

TEST_CASE("weather CSV: round trip and nonmonotonic time") {
  const auto w = synth_weather(2, 30.0, 5);
  std::ostringstream out;
  write_weather_csv(out, w);
  std::istringstream in(out.str());
  CHECK(read_weather_csv(in) == w);
  std::istringstream bad(std::string(kWeatherHeader) + "\n0,27,70\n30,27,70\n15,27,70\n");
  CHECK_THROWS_AS(read_weather_csv(bad), FormatError);
  std::istringstream rh(std::string(kWeatherHeader) + "\n0,27,170\n");
  CHECK_THROWS(read_weather_csv(rh));
}
