#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "occ/comfort_profiles.hpp"
#include "occ/control_loop.hpp"

namespace occ {

inline constexpr std::string_view kStepsHeader =
    "step,time_min,strategy,setpoint_c,zone_temp_c,q_cool_w,district_kwh,fan_kwh,pump_kwh";
inline constexpr std::string_view kControlHeader =
    "step,time_min,occupied,cold_start,air_speed_ms,candidates,queried,cumulative_labels,model_acceptability,"
    "oracle_acceptability";
inline constexpr std::string_view kLearningHeader = "step,labels,accuracy,macro_f1";
inline constexpr std::string_view kProfileHeader = "occupant_id,temp_c,p_cooler,p_nochange,p_warmer,comfortable";
inline constexpr std::string_view kSummaryHeader =
    "strategy,total_kwh,district_kwh,fan_kwh,pump_kwh,reduction_vs_baseline,labelling_effort,"
    "effort_reduction_vs_conventional,convergence_step,mean_post_setpoint_c,model_acceptability_pre,"
    "model_acceptability_post,oracle_acceptability_pre,oracle_acceptability_post,post_convergence_kwh,"
    "final_macro_f1,annualized_kwh";

void write_steps_csv(std::ostream& out, const RunResult& run);
void write_control_csv(std::ostream& out, const RunResult& run);
void write_learning_csv(std::ostream& out, const RunResult& run);
void write_summary_csv(std::ostream& out, std::span<const StrategySummary> summary);
void write_profiles_csv(std::ostream& out, std::span<const ComfortProfile> profiles, const TempGrid& grid);

struct EmitFlags {
  bool charts = true;
};

/// steps_, control_ and learning_<strategy>.csv per run, summary.csv, and (with charts) the
/// SVGs from render_plots. Returns the files written. Throws IoError naming the path.
std::vector<std::filesystem::path> emit_outputs(std::span<const RunResult> runs,
                                                std::span<const StrategySummary> summary,
                                                const std::filesystem::path& out_dir, const EmitFlags& flags = {});

/// Reads steps_*.csv and learning_*.csv from `dir` and writes setpoints.svg,
/// weekly_energy.svg and learning_curve.svg there. Throws InputError if no step files exist.
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& dir);

/// Opens `path` for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace occ
