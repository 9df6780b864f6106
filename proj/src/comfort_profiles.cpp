#include "occ/comfort_profiles.hpp"

#include <algorithm>
#include <cmath>

#include "occ/error.hpp"

namespace occ {

TempGrid::TempGrid(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step), size_(0) {
  if (!(lo < hi)) throw ConfigError("temperature grid needs lo < hi");
  if (!(step > 0.0)) throw ConfigError("temperature grid step must be positive");
  const double intervals = (hi - lo) / step;
  const double whole = std::round(intervals);
  if (std::abs(intervals - whole) * step > 1e-9)
    throw ConfigError("temperature grid span is not a multiple of the step");
  size_ = static_cast<std::size_t>(whole) + 1;
}

double TempGrid::at(std::size_t i) const noexcept {
  return std::round((lo_ + static_cast<double>(i) * step_) * 1e9) / 1e9;
}

std::optional<std::size_t> TempGrid::index_of(double temp) const noexcept {
  const double pos = std::round((temp - lo_) / step_);
  if (pos < 0.0 || pos >= static_cast<double>(size_)) return std::nullopt;
  const auto i = static_cast<std::size_t>(pos);
  if (std::abs(at(i) - temp) > 1e-6) return std::nullopt;
  return i;
}

double TempGrid::midpoint() const noexcept { return at((size_ - 1) / 2); }

bool is_comfortable(const ProbTriple& p) noexcept { return p[1] > p[0] && p[1] > p[2]; }

ComfortProfile ComfortProfile::from_probabilities(int occupant_id, std::vector<ProbTriple> probabilities) {
  ComfortProfile out;
  out.occupant_id = occupant_id;
  out.comfortable.reserve(probabilities.size());
  for (const auto& p : probabilities) out.comfortable.push_back(is_comfortable(p));
  out.probabilities = std::move(probabilities);
  return out;
}

ComfortProfile generate_profile(const BoostedEnsemble& model, int occupant_id, const ProfileContext& context,
                                const TempGrid& grid) {
  std::vector<ProbTriple> probs;
  probs.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EnvState env{grid.at(i), context.air_speed, context.outdoor_temp, context.outdoor_rh};
    probs.push_back(model.predict_proba(comfort_features(model.layout(), occupant_id, env)));
  }
  return ComfortProfile::from_probabilities(occupant_id, std::move(probs));
}

std::vector<ComfortProfile> generate_profiles(const BoostedEnsemble& model, std::span<const int> occupant_ids,
                                              const ProfileContext& context, const TempGrid& grid, Exec exec) {
  for (int id : occupant_ids)
    if (!model.layout().category_of(id))
      throw ShapeError("occupant " + std::to_string(id) + " is not in the model layout");
  std::vector<ComfortProfile> out(occupant_ids.size());
  const auto n = static_cast<std::ptrdiff_t>(occupant_ids.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = generate_profile(model, occupant_ids[static_cast<std::size_t>(i)], context, grid);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = generate_profile(model, occupant_ids[static_cast<std::size_t>(i)], context, grid);
  }
  return out;
}

ComfortProfile oracle_profile(const OccupantParams& occupant, const ProfileContext& context, const TempGrid& grid) {
  std::vector<ProbTriple> probs;
  probs.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    probs.push_back(preference_probabilities(
        occupant, EnvState{grid.at(i), context.air_speed, context.outdoor_temp, context.outdoor_rh}));
  return ComfortProfile::from_probabilities(occupant.id, std::move(probs));
}

std::vector<double> comfort_temperatures(const ComfortProfile& profile, const TempGrid& grid) {
  std::vector<double> temps;
  for (std::size_t i = 0; i < profile.comfortable.size() && i < grid.size(); ++i)
    if (profile.comfortable[i]) temps.push_back(grid.at(i));
  return temps;
}

SetpointDecision aggregate_setpoint(std::span<const ComfortProfile> profiles, const TempGrid& grid,
                                    std::optional<double> previous) {
  if (profiles.empty()) throw InputError("aggregate_setpoint: no profiles");
  SetpointDecision d;
  d.histogram.assign(grid.size(), 0);
  for (const auto& p : profiles) {
    if (p.comfortable.size() != grid.size())
      throw InputError("profile for occupant " + std::to_string(p.occupant_id) + " does not match the grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (p.comfortable[i]) ++d.histogram[i];
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (d.histogram[i] >= d.histogram[best]) best = i;
  d.agreement_count = d.histogram[best];
  if (d.agreement_count == 0) {
    d.fallback = true;
    d.setpoint = previous.value_or(grid.midpoint());
  } else {
    d.setpoint = grid.at(best);
  }
  return d;
}

double acceptability(std::span<const ComfortProfile> profiles, const TempGrid& grid, double setpoint) {
  if (profiles.empty()) throw InputError("acceptability: no profiles");
  const auto idx = grid.index_of(setpoint);
  if (!idx) throw InputError("acceptability: setpoint is not on the temperature grid");
  std::size_t ok = 0;
  for (const auto& p : profiles)
    if (p.comfortable.at(*idx)) ++ok;
  return static_cast<double>(ok) / static_cast<double>(profiles.size());
}

double model_acceptability(const BoostedEnsemble& model, std::span<const int> occupant_ids, const EnvState& env) {
  if (occupant_ids.empty()) throw InputError("model_acceptability: no occupants");
  std::size_t ok = 0;
  for (int id : occupant_ids)
    if (is_comfortable(model.predict_proba(comfort_features(model.layout(), id, env)))) ++ok;
  return static_cast<double>(ok) / static_cast<double>(occupant_ids.size());
}

double oracle_acceptability(std::span<const OccupantParams> population, const EnvState& env) {
  if (population.empty()) throw InputError("oracle_acceptability: empty population");
  std::size_t ok = 0;
  for (const auto& occ : population)
    if (is_comfortable(preference_probabilities(occ, env))) ++ok;
  return static_cast<double>(ok) / static_cast<double>(population.size());
}

}  // namespace occ
