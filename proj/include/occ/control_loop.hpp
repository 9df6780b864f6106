#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "occ/comfort_profiles.hpp"
#include "occ/config.hpp"
#include "occ/exec.hpp"
#include "occ/gbt.hpp"
#include "occ/zone_sim.hpp"

namespace occ {

enum class Strategy { AlOcc, ConventionalOcc, Baseline, RandomOcc };

/// al, conventional, baseline, random
std::string_view to_string(Strategy s) noexcept;
/// Inverse of to_string. Throws ConfigError otherwise.
Strategy parse_strategy(std::string_view text);

struct StepRecord {
  std::size_t step = 0;
  double time_min = 0.0;
  bool occupied = false;
  bool cold_start = false;
  double setpoint = 0.0;
  double air_speed = 0.0;
  double zone_temp = 0.0;  // at step end
  double q_cool = 0.0;
  EnergyBreakdown energy;
  std::vector<int> candidate_ids;
  std::vector<int> queried_ids;
  std::size_t cumulative_labels = 0;
  double model_acceptability = 0.0;   // NaN when no model exists or the zone is unoccupied
  double oracle_acceptability = 0.0;  // NaN when unoccupied or without a ground-truth population
};

/// Holdout performance of the comfort model after a given step.
struct LearningPoint {
  std::size_t step = 0;
  std::size_t labels = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

struct RunResult {
  Strategy strategy = Strategy::Baseline;
  std::uint64_t seed = 0;
  double step_minutes = 30.0;
  std::vector<StepRecord> steps;
  std::vector<LabeledInstance> labels;  // in collection order
  std::size_t total_candidates = 0;
  double labelling_effort = 0.0;        // NaN for the baseline
  std::vector<LearningPoint> learning;  // end of every simulated day with a model, plus the final step
  std::optional<EvalMetrics> final_metrics;

  std::vector<double> setpoints() const;
  EnergyBreakdown total_energy() const;
  /// Energy per 7-day block; the last block may be partial.
  std::vector<EnergyBreakdown> weekly_energy() const;
};

struct RunOptions {
  Exec exec = Exec::Parallel;
  /// Called at every occupied step where profiles were generated.
  std::function<void(std::size_t step, std::span<const ComfortProfile>)> on_profiles;
};

/// The six-step loop: sample candidates, choose which to label, retrain, build profiles,
/// aggregate a setpoint, advance the zone. Candidate and label draws depend only on the seed,
/// the step and the occupant, so strategies see the same candidate stream.
RunResult run_simulation(const SimConfig& cfg, Strategy strategy, std::uint64_t seed, const RunOptions& options = {});

/// Earliest step s such that |a[t] - b[t]| <= tol for every t >= s and the agreeing tail is at
/// least `window_steps` long. Throws InputError on a length mismatch.
std::optional<std::size_t> detect_convergence(std::span<const double> a, std::span<const double> b,
                                              std::size_t window_steps, double tol = 0.051);

struct StrategySummary {
  Strategy strategy = Strategy::Baseline;
  EnergyBreakdown energy;
  double reduction_vs_baseline = 0.0;  // (E_base - E) / E_base
  double labelling_effort = 0.0;
  double effort_reduction_vs_conventional = 0.0;  // 1 - effort / effort_conventional
  std::optional<std::size_t> convergence_step;
  double mean_post_setpoint = 0.0;  // occupied steps from convergence on
  double model_acceptability_pre = 0.0;
  double model_acceptability_post = 0.0;
  double oracle_acceptability_pre = 0.0;
  double oracle_acceptability_post = 0.0;
  double post_convergence_kwh = 0.0;
  double final_macro_f1 = 0.0;
  double annualized_kwh = 0.0;  // NaN unless requested
};

/// Per-strategy metrics. Convergence is measured against the conventional run (the AL run for
/// the conventional strategy itself). Unavailable values are NaN. Throws InputError when the
/// runs differ in horizon.
std::vector<StrategySummary> metrics_summary(std::span<const RunResult> runs, const RunResult& baseline,
                                             const SimConfig& cfg);

/// Mean over finite values; NaN if there are none.
double finite_mean(std::span<const double> values) noexcept;

}  // namespace occ
