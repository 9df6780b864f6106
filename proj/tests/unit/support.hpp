#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "occ/config.hpp"
#include "occ/gbt.hpp"
#include "occ/occupant_data.hpp"
#include "occ/rng.hpp"

namespace testutil {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Small, fast scenario: 12 occupants over three days.
inline occ::SimConfig small_config() {
  occ::SimConfig cfg;
  cfg.population_size = 12;
  cfg.days = 3;
  cfg.holdout_size = 200;
  cfg.gbt.rounds = 15;
  return cfg;
}

inline std::vector<int> iota_ids(int n) {
  std::vector<int> ids;
  for (int i = 0; i < n; ++i) ids.push_back(i);
  return ids;
}

// Oracle-labelled rows at random conditions for a population.
inline occ::TrainingSet oracle_set(const std::vector<occ::OccupantParams>& population, std::size_t n,
                                   std::uint64_t seed) {
  std::vector<int> ids;
  for (const auto& o : population) ids.push_back(o.id);
  const auto layout = occ::FeatureLayout::comfort(ids);
  occ::TrainingSet set(layout);
  occ::Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = population[i % population.size()];
    const occ::EnvState env{24.0 + 4.0 * occ::uniform01(rng), 0.1 + 0.7 * occ::uniform01(rng),
                            25.0 + 6.0 * occ::uniform01(rng), 60.0 + 30.0 * occ::uniform01(rng)};
    set.add(occ::comfort_features(layout, o.id, env), occ::sample_label(o, env, rng));
  }
  return set;
}

// Rows with no occupant block and arbitrary continuous columns.
inline occ::TrainingSet plain_set(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < x.front().size(); ++c) names.push_back("f" + std::to_string(c));
  occ::TrainingSet set(occ::FeatureLayout({}, names));
  for (std::size_t i = 0; i < x.size(); ++i)
    set.add({-1, x[i]}, occ::label_from_index(static_cast<std::size_t>(y[i])));
  return set;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("occ_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
