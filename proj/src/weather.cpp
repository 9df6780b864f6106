#include "occ/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "occ/csv.hpp"
#include "occ/error.hpp"
#include "occ/rng.hpp"

namespace occ {

double diurnal_temperature(const WeatherConfig& cfg, double time_min) noexcept {
  const double hours = time_min / 60.0;
  return cfg.mean_temp +
         cfg.amplitude * std::sin(2.0 * std::numbers::pi * (hours - cfg.zero_crossing_hour) / 24.0);
}

std::vector<WeatherPoint> synth_weather(std::size_t days, double step_minutes, std::uint64_t seed,
                                        const WeatherConfig& cfg) {
  if (days == 0) throw InputError("synth_weather: days must be at least 1");
  if (!(step_minutes > 0.0)) throw InputError("synth_weather: step must be positive");
  if (std::abs(cfg.noise_phi) >= 1.0) throw ConfigError("weather AR(1) coefficient must satisfy |phi| < 1");

  const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(days) * 1440.0 / step_minutes));
  Rng rng = make_rng(seed, Stream::Weather);
  // Start the AR(1) process in its stationary distribution.
  const double stationary_sd = cfg.noise_sigma / std::sqrt(1.0 - cfg.noise_phi * cfg.noise_phi);
  double noise = stationary_sd * standard_normal(rng);

  std::vector<WeatherPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) noise = cfg.noise_phi * noise + cfg.noise_sigma * standard_normal(rng);
    const double t = static_cast<double>(i) * step_minutes;
    const double temp = diurnal_temperature(cfg, t) + noise;
    const double rh = std::clamp(cfg.rh_mean - cfg.rh_slope * (temp - cfg.mean_temp), cfg.rh_min, cfg.rh_max);
    out.push_back({t, temp, rh});
  }
  return out;
}

WeatherSeries::WeatherSeries(std::vector<WeatherPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InputError("weather series is empty");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].time_min > points_[i - 1].time_min))
      throw FormatError("weather time must be strictly increasing (sample " + std::to_string(i + 1) + ")");
  }
}

WeatherPoint WeatherSeries::at(double time_min) const {
  if (time_min <= points_.front().time_min) return {time_min, points_.front().outdoor_temp, points_.front().outdoor_rh};
  if (time_min >= points_.back().time_min) return {time_min, points_.back().outdoor_temp, points_.back().outdoor_rh};
  auto hi = std::lower_bound(points_.begin(), points_.end(), time_min,
                             [](const WeatherPoint& p, double t) { return p.time_min < t; });
  if (hi->time_min == time_min) return *hi;
  auto lo = std::prev(hi);
  const double f = (time_min - lo->time_min) / (hi->time_min - lo->time_min);
  return {time_min, lo->outdoor_temp + f * (hi->outdoor_temp - lo->outdoor_temp),
          lo->outdoor_rh + f * (hi->outdoor_rh - lo->outdoor_rh)};
}

std::vector<WeatherPoint> read_weather_csv(std::istream& in) {
  csv::expect_header(in, kWeatherHeader, "weather");
  static constexpr std::array<std::string_view, 3> kColumns = {"time_min", "outdoor_temp_c", "outdoor_rh_pct"};
  std::vector<WeatherPoint> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != kColumns.size())
      throw ParseError(row, f.size() < kColumns.size() ? std::string(kColumns[f.size()]) : "outdoor_rh_pct",
                       "expected 3 fields, found " + std::to_string(f.size()));
    WeatherPoint p;
    p.time_min = csv::parse_double(f[0], row, kColumns[0]);
    p.outdoor_temp = csv::parse_double(f[1], row, kColumns[1]);
    p.outdoor_rh = csv::parse_double(f[2], row, kColumns[2]);
    if (p.outdoor_rh < 0.0 || p.outdoor_rh > 100.0)
      throw ParseError(row, "outdoor_rh_pct", "relative humidity outside [0, 100]");
    if (!out.empty() && !(p.time_min > out.back().time_min))
      throw FormatError("weather time must be strictly increasing (row " + std::to_string(row) + ")");
    out.push_back(p);
  }
  return out;
}

std::vector<WeatherPoint> load_weather_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weather file '" + path.string() + "'");
  return read_weather_csv(in);
}

void write_weather_csv(std::ostream& out, std::span<const WeatherPoint> points) {
  out << kWeatherHeader << '\n';
  for (const auto& p : points)
    out << csv::format(p.time_min) << ',' << csv::format(p.outdoor_temp) << ',' << csv::format(p.outdoor_rh) << '\n';
}

void write_weather_csv(const std::filesystem::path& path, std::span<const WeatherPoint> points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weather file '" + path.string() + "'");
  write_weather_csv(out, points);
}

}  // namespace occ
