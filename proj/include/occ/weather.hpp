#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace occ {

struct WeatherPoint {
  double time_min = 0.0;      // minutes since simulation start
  double outdoor_temp = 27.5;  // degC
  double outdoor_rh = 75.0;    // percent

  friend bool operator==(const WeatherPoint&, const WeatherPoint&) = default;
};

/// Diurnal sinusoid plus AR(1) noise. Relative humidity tracks temperature inversely.
struct WeatherConfig {
  double mean_temp = 27.5;
  double amplitude = 3.5;
  double zero_crossing_hour = 9.0;  // sine argument is zero here (rising)
  double rh_mean = 75.0;
  double rh_slope = 1.5;  // % per degC above the mean
  double rh_min = 40.0;
  double rh_max = 100.0;
  double noise_sigma = 0.3;  // innovation standard deviation, degC
  double noise_phi = 0.9;    // AR(1) coefficient per sample
};

/// days * 1440 / step_minutes samples starting at t = 0. Deterministic per seed.
std::vector<WeatherPoint> synth_weather(std::size_t days, double step_minutes, std::uint64_t seed,
                                        const WeatherConfig& cfg = {});

/// Noise-free diurnal temperature at a given time; used as the residual reference.
double diurnal_temperature(const WeatherConfig& cfg, double time_min) noexcept;

/// Time-indexed weather with linear interpolation between samples.
/// Queries before the first or after the last sample clamp to the end values.
class WeatherSeries {
 public:
  /// Throws FormatError unless times are strictly increasing; InputError if empty.
  explicit WeatherSeries(std::vector<WeatherPoint> points);

  WeatherPoint at(double time_min) const;
  std::span<const WeatherPoint> points() const noexcept { return points_; }

 private:
  std::vector<WeatherPoint> points_;
};

inline constexpr std::string_view kWeatherHeader = "time_min,outdoor_temp_c,outdoor_rh_pct";

std::vector<WeatherPoint> read_weather_csv(std::istream& in);
std::vector<WeatherPoint> load_weather_csv(const std::filesystem::path& path);
void write_weather_csv(std::ostream& out, std::span<const WeatherPoint> points);
void write_weather_csv(const std::filesystem::path& path, std::span<const WeatherPoint> points);

}  // namespace occ
