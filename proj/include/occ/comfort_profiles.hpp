#pragma once

#include <optional>
#include <span>
#include <vector>

#include "occ/exec.hpp"
#include "occ/gbt.hpp"
#include "occ/occupant_data.hpp"

namespace occ {

/// Evenly spaced candidate setpoints lo, lo + step, ..., hi.
class TempGrid {
 public:
  /// Throws ConfigError unless lo < hi, step > 0 and (hi - lo) is a multiple of step within 1e-9.
  TempGrid(double lo = 24.5, double hi = 28.0, double step = 0.1);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return size_; }

  /// lo + i * step, rounded to 1e-9 so printed values are clean.
  double at(std::size_t i) const noexcept;
  /// Index of the grid point within 1e-6 of `temp`, if any.
  std::optional<std::size_t> index_of(double temp) const noexcept;
  double midpoint() const noexcept;

 private:
  double lo_;
  double hi_;
  double step_;
  std::size_t size_;
};

/// Conditions held fixed while indoor temperature sweeps the grid.
struct ProfileContext {
  double air_speed = 0.1;
  double outdoor_temp = 27.5;
  double outdoor_rh = 75.0;
};

/// "More likely comfortable": p_nochange strictly greater than both alternatives.
bool is_comfortable(const ProbTriple& p) noexcept;

struct ComfortProfile {
  int occupant_id = 0;
  std::vector<ProbTriple> probabilities;  // one per grid point
  std::vector<bool> comfortable;          // is_comfortable per grid point

  /// Builds the comfort mask from the probabilities.
  static ComfortProfile from_probabilities(int occupant_id, std::vector<ProbTriple> probabilities);
};

/// One predict_proba call per grid temperature. Throws ShapeError for unknown occupants.
ComfortProfile generate_profile(const BoostedEnsemble& model, int occupant_id, const ProfileContext& context,
                                const TempGrid& grid);

/// generate_profile for several occupants, distributed over threads under Exec::Parallel.
std::vector<ComfortProfile> generate_profiles(const BoostedEnsemble& model, std::span<const int> occupant_ids,
                                              const ProfileContext& context, const TempGrid& grid,
                                              Exec exec = Exec::Parallel);

/// Ground-truth profile from the synthetic occupant's ordered-logit curve.
ComfortProfile oracle_profile(const OccupantParams& occupant, const ProfileContext& context, const TempGrid& grid);

/// Grid temperatures in the profile's comfort set, ascending.
std::vector<double> comfort_temperatures(const ComfortProfile& profile, const TempGrid& grid);

struct SetpointDecision {
  double setpoint = 0.0;
  std::size_t agreement_count = 0;
  std::vector<std::size_t> histogram;  // occupants comfortable at each grid point
  bool fallback = false;               // no occupant was comfortable anywhere
};

/// Histogram of comfort sets; the setpoint is the highest temperature among those with the
/// greatest agreement. If nobody is comfortable anywhere, holds `previous` (or the grid
/// midpoint). Throws InputError for an empty list or profiles of the wrong length.
SetpointDecision aggregate_setpoint(std::span<const ComfortProfile> profiles, const TempGrid& grid,
                                    std::optional<double> previous = std::nullopt);

/// Share of profiles whose comfort set contains `setpoint`. Throws InputError when the setpoint
/// is off the grid or the list is empty.
double acceptability(std::span<const ComfortProfile> profiles, const TempGrid& grid, double setpoint);

/// Share of occupants for which the model says "more likely comfortable" at exactly `env`.
double model_acceptability(const BoostedEnsemble& model, std::span<const int> occupant_ids, const EnvState& env);

/// Same rule applied to the ground-truth probabilities.
double oracle_acceptability(std::span<const OccupantParams> population, const EnvState& env);

}  // namespace occ
