#include "occ/occupant_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "occ/csv.hpp"
#include "occ/error.hpp"

namespace occ {

namespace {

double draw(Rng& rng, double mean, double sd) {
  const double z = standard_normal(rng);
  return mean + sd * z;
}

// Partial Fisher-Yates: first k entries of a uniformly shuffled copy.
template <typename T>
std::vector<T> choose_without_replacement(std::vector<T> items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(k);
  return items;
}

}  // namespace

std::vector<OccupantParams> generate_population(std::size_t n, std::uint64_t seed,
                                                const PopulationConfig& cfg) {
  if (n == 0) throw InputError("empty population: n must be at least 1");
  Rng rng = make_rng(seed, Stream::Population);
  std::vector<OccupantParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    OccupantParams p;
    p.id = static_cast<int>(i);
    p.neutral_temp =
        std::clamp(draw(rng, cfg.neutral_mean, cfg.neutral_sd), cfg.neutral_min, cfg.neutral_max);
    p.slope = std::max(draw(rng, cfg.slope_mean, cfg.slope_sd), cfg.slope_min);
    p.band_halfwidth = std::max(draw(rng, cfg.band_mean, cfg.band_sd), cfg.band_min);
    p.airspeed_gain = std::max(draw(rng, cfg.airspeed_gain_mean, cfg.airspeed_gain_sd), cfg.airspeed_gain_min);
    out.push_back(p);
  }
  return out;
}

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double effective_temperature(const OccupantParams& occ, const EnvState& env) noexcept {
  return env.indoor_temp - occ.airspeed_gain * (env.air_speed - kReferenceAirSpeed);
}

ProbTriple preference_probabilities(const OccupantParams& occ, const EnvState& env) noexcept {
  const double d = effective_temperature(occ, env) - occ.neutral_temp;
  const double band = occ.slope * occ.band_halfwidth;
  const double p_cooler = logistic(occ.slope * d - band);
  const double p_warmer = logistic(-occ.slope * d - band);
  return {p_cooler, 1.0 - p_cooler - p_warmer, p_warmer};
}

PreferenceLabel sample_label(const OccupantParams& occ, const EnvState& env, Rng& rng) {
  const auto p = preference_probabilities(occ, env);
  const double u = uniform01(rng);
  if (u < p[0]) return PreferenceLabel::Cooler;
  if (u < p[0] + p[1]) return PreferenceLabel::NoChange;
  return PreferenceLabel::Warmer;
}

std::vector<LabeledInstance> read_dataset_csv(std::istream& in) {
  csv::expect_header(in, kDatasetHeader, "dataset");
  static constexpr std::array<std::string_view, 7> kColumns = {
      "timestep", "occupant_id", "indoor_temp_c", "air_speed_ms", "outdoor_temp_c", "outdoor_rh_pct", "label"};
  std::vector<LabeledInstance> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != kColumns.size())
      throw ParseError(row, f.size() < kColumns.size() ? std::string(kColumns[f.size()]) : "label",
                       "expected 7 fields, found " + std::to_string(f.size()));
    LabeledInstance r;
    r.timestep = static_cast<int>(csv::parse_int(f[0], row, kColumns[0]));
    r.occupant_id = static_cast<int>(csv::parse_int(f[1], row, kColumns[1]));
    r.env.indoor_temp = csv::parse_double(f[2], row, kColumns[2]);
    r.env.air_speed = csv::parse_double(f[3], row, kColumns[3]);
    r.env.outdoor_temp = csv::parse_double(f[4], row, kColumns[4]);
    r.env.outdoor_rh = csv::parse_double(f[5], row, kColumns[5]);
    r.label = parse_label(f[6]);
    try {
      validate(r.env);
    } catch (const InputError& e) {
      throw ParseError(row, "env", e.what());
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<LabeledInstance> load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, std::span<const LabeledInstance> rows) {
  out << kDatasetHeader << '\n';
  for (const auto& r : rows) {
    out << r.timestep << ',' << r.occupant_id << ',' << csv::format(r.env.indoor_temp) << ','
        << csv::format(r.env.air_speed) << ',' << csv::format(r.env.outdoor_temp) << ','
        << csv::format(r.env.outdoor_rh) << ',' << to_string(r.label) << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, std::span<const LabeledInstance> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset '" + path.string() + "'");
  write_dataset_csv(out, rows);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<LabeledInstance> generate_survey_dataset(std::span<const OccupantParams> population,
                                                     std::span<const WeatherPoint> weather,
                                                     const SurveyConfig& cfg, std::uint64_t seed) {
  if (population.empty()) throw InputError("survey dataset needs a nonempty population");
  if (cfg.group_min == 0 || cfg.group_min > cfg.group_max)
    throw ConfigError("survey group size range is empty");
  if (weather.empty()) throw InputError("survey dataset needs weather samples");
  WeatherSeries series(std::vector<WeatherPoint>(weather.begin(), weather.end()));

  Rng rng = make_rng(seed, Stream::Dataset);
  std::vector<int> ids;
  ids.reserve(population.size());
  for (const auto& p : population) ids.push_back(p.id);

  // Occupants are dealt into groups in a shuffled rotation so every occupant takes part.
  std::vector<int> rotation;
  std::size_t cursor = 0;
  std::vector<LabeledInstance> rows;
  int timestep = 0;
  for (std::size_t day = 0; day < cfg.days; ++day) {
    std::uniform_int_distribution<std::size_t> size_pick(cfg.group_min, cfg.group_max);
    const std::size_t group_size = std::min(size_pick(rng), ids.size());
    std::vector<int> group;
    while (group.size() < group_size) {
      if (cursor >= rotation.size()) {
        rotation = choose_without_replacement(ids, ids.size(), rng);
        cursor = 0;
      }
      const int id = rotation[cursor++];
      if (std::find(group.begin(), group.end(), id) == group.end()) group.push_back(id);
    }
    for (std::size_t block = 0; block < cfg.blocks_per_day; ++block, ++timestep) {
      const double t = static_cast<double>(day) * 1440.0 + cfg.start_hour * 60.0 +
                       static_cast<double>(block) * cfg.block_minutes;
      const auto w = series.at(t);
      EnvState env;
      env.indoor_temp = cfg.indoor_lo + (cfg.indoor_hi - cfg.indoor_lo) * uniform01(rng);
      env.air_speed = cfg.air_lo + (cfg.air_hi - cfg.air_lo) * uniform01(rng);
      env.outdoor_temp = w.outdoor_temp;
      env.outdoor_rh = w.outdoor_rh;
      for (int id : group) {
        const auto it = std::find_if(population.begin(), population.end(),
                                     [id](const OccupantParams& p) { return p.id == id; });
        rows.push_back({timestep, id, env, sample_label(*it, env, rng)});
      }
    }
  }
  return rows;
}

double condition_distance(const EnvState& a, const EnvState& b) noexcept {
  constexpr double kTempRange = 28.0 - 24.0;
  constexpr double kAirRange = 0.8 - 0.1;
  const double dt = (a.indoor_temp - b.indoor_temp) / kTempRange;
  const double dv = (a.air_speed - b.air_speed) / kAirRange;
  return std::sqrt(dt * dt + dv * dv);
}

std::vector<Candidate> sample_candidates(std::span<const int> occupant_ids, const EnvState& env,
                                         std::size_t k, int timestep, Rng& rng) {
  if (k > occupant_ids.size())
    throw PoolError("requested " + std::to_string(k) + " occupants but only " +
                    std::to_string(occupant_ids.size()) + " are available");
  const auto chosen =
      choose_without_replacement(std::vector<int>(occupant_ids.begin(), occupant_ids.end()), k, rng);
  std::vector<Candidate> out;
  out.reserve(k);
  for (int id : chosen) out.push_back({id, env, timestep, std::nullopt});
  return out;
}

std::vector<int> distinct_occupants(std::span<const LabeledInstance> rows) {
  std::vector<int> ids;
  ids.reserve(rows.size());
  for (const auto& r : rows) ids.push_back(r.occupant_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<Candidate> nearest_instances(std::span<const LabeledInstance> pool, const EnvState& env,
                                         std::size_t k, Rng& rng) {
  const auto ids = distinct_occupants(pool);
  if (k > ids.size())
    throw PoolError("requested " + std::to_string(k) + " occupants but the pool has " +
                    std::to_string(ids.size()));
  const auto chosen = choose_without_replacement(ids, k, rng);
  std::vector<Candidate> out;
  out.reserve(k);
  for (int id : chosen) {
    const LabeledInstance* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& r : pool) {
      if (r.occupant_id != id) continue;
      const double d = condition_distance(r.env, env);
      if (d < best_d || (d == best_d && best != nullptr && r.timestep < best->timestep)) {
        best = &r;
        best_d = d;
      }
    }
    out.push_back({id, best->env, best->timestep, best->label});
  }
  return out;
}

}  // namespace occ
