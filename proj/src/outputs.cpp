#include "occ/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include "occ/csv.hpp"
#include "occ/error.hpp"
#include "occ/svg.hpp"

namespace occ {

namespace fs = std::filesystem;

namespace {

using csv::format;

std::string opt_step(const std::optional<std::size_t>& s) { return s ? std::to_string(*s) : ""; }

void write_file(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

int strategy_order(const std::string& name) {
  static const std::vector<std::string> order = {"al", "conventional", "baseline", "random"};
  const auto it = std::find(order.begin(), order.end(), name);
  return static_cast<int>(it - order.begin());
}

struct StepRow {
  double time_min;
  double setpoint;
  EnergyBreakdown energy;
};

std::vector<StepRow> read_steps(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  csv::expect_header(in, kStepsHeader, path.string());
  std::vector<StepRow> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 9) throw ParseError(row, "step", "expected 9 fields");
    rows.push_back({csv::parse_double(f[1], row, "time_min"), csv::parse_double(f[3], row, "setpoint_c"),
                    {csv::parse_double(f[6], row, "district_kwh"), csv::parse_double(f[7], row, "fan_kwh"),
                     csv::parse_double(f[8], row, "pump_kwh")}});
  }
  return rows;
}

struct LearningRow {
  double labels;
  double macro_f1;
};

std::vector<LearningRow> read_learning(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  csv::expect_header(in, kLearningHeader, path.string());
  std::vector<LearningRow> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 4) throw ParseError(row, "step", "expected 4 fields");
    rows.push_back({csv::parse_double(f[1], row, "labels"), csv::parse_double(f[3], row, "macro_f1")});
  }
  return rows;
}

// Strategy names found as <prefix><name>.csv in dir, in canonical order.
std::vector<std::string> strategies_in(const fs::path& dir, const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto file = entry.path().filename().string();
    if (file.size() > prefix.size() + 4 && file.starts_with(prefix) && file.ends_with(".csv"))
      names.push_back(file.substr(prefix.size(), file.size() - prefix.size() - 4));
  }
  std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
    const int oa = strategy_order(a), ob = strategy_order(b);
    return oa != ob ? oa < ob : a < b;
  });
  return names;
}

}  // namespace

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_steps_csv(std::ostream& out, const RunResult& run) {
  out << kStepsHeader << '\n';
  const auto name = to_string(run.strategy);
  for (const auto& s : run.steps)
    out << s.step << ',' << format(s.time_min) << ',' << name << ',' << format(s.setpoint) << ','
        << format(s.zone_temp) << ',' << format(s.q_cool) << ',' << format(s.energy.district_kwh) << ','
        << format(s.energy.fan_kwh) << ',' << format(s.energy.pump_kwh) << '\n';
}

void write_control_csv(std::ostream& out, const RunResult& run) {
  out << kControlHeader << '\n';
  for (const auto& s : run.steps)
    out << s.step << ',' << format(s.time_min) << ',' << (s.occupied ? 1 : 0) << ',' << (s.cold_start ? 1 : 0) << ','
        << format(s.air_speed) << ',' << s.candidate_ids.size() << ',' << s.queried_ids.size() << ','
        << s.cumulative_labels << ',' << format(s.model_acceptability) << ',' << format(s.oracle_acceptability)
        << '\n';
}

void write_learning_csv(std::ostream& out, const RunResult& run) {
  out << kLearningHeader << '\n';
  for (const auto& p : run.learning)
    out << p.step << ',' << p.labels << ',' << format(p.accuracy) << ',' << format(p.macro_f1) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const StrategySummary> summary) {
  out << kSummaryHeader << '\n';
  for (const auto& s : summary)
    out << to_string(s.strategy) << ',' << format(s.energy.total()) << ',' << format(s.energy.district_kwh) << ','
        << format(s.energy.fan_kwh) << ',' << format(s.energy.pump_kwh) << ',' << format(s.reduction_vs_baseline)
        << ',' << format(s.labelling_effort) << ',' << format(s.effort_reduction_vs_conventional) << ','
        << opt_step(s.convergence_step) << ',' << format(s.mean_post_setpoint) << ','
        << format(s.model_acceptability_pre) << ',' << format(s.model_acceptability_post) << ','
        << format(s.oracle_acceptability_pre) << ',' << format(s.oracle_acceptability_post) << ','
        << format(s.post_convergence_kwh) << ',' << format(s.final_macro_f1) << ',' << format(s.annualized_kwh)
        << '\n';
}

void write_profiles_csv(std::ostream& out, std::span<const ComfortProfile> profiles, const TempGrid& grid) {
  out << kProfileHeader << '\n';
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
      out << p.occupant_id << ',' << format(grid.at(i)) << ',' << format(p.probabilities[i][0]) << ','
          << format(p.probabilities[i][1]) << ',' << format(p.probabilities[i][2]) << ','
          << (p.comfortable[i] ? 1 : 0) << '\n';
}

std::vector<fs::path> emit_outputs(std::span<const RunResult> runs, std::span<const StrategySummary> summary,
                                   const fs::path& out_dir, const EmitFlags& flags) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  for (const auto& run : runs) {
    const std::string name(to_string(run.strategy));
    const auto steps = out_dir / ("steps_" + name + ".csv");
    const auto control = out_dir / ("control_" + name + ".csv");
    const auto learning = out_dir / ("learning_" + name + ".csv");
    {
      auto out = open_output(steps);
      write_steps_csv(out, run);
    }
    {
      auto out = open_output(control);
      write_control_csv(out, run);
    }
    {
      auto out = open_output(learning);
      write_learning_csv(out, run);
    }
    written.insert(written.end(), {steps, control, learning});
  }
  if (!summary.empty()) {
    const auto path = out_dir / "summary.csv";
    auto out = open_output(path);
    write_summary_csv(out, summary);
    written.push_back(path);
  }
  if (flags.charts) {
    const auto charts = render_plots(out_dir);
    written.insert(written.end(), charts.begin(), charts.end());
  }
  return written;
}

std::vector<fs::path> render_plots(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  const auto names = strategies_in(dir, "steps_");
  if (names.empty()) throw InputError("no steps_<strategy>.csv files in " + dir.string());

  std::vector<svg::Series> setpoints;
  svg::StackedBars weekly;
  weekly.components = {"district cooling", "AHU fan", "CHW pump"};
  std::size_t weeks = 0;
  for (const auto& name : names) {
    const auto rows = read_steps(dir / ("steps_" + name + ".csv"));
    svg::Series s{name, {}, {}};
    std::map<std::size_t, EnergyBreakdown> per_week;
    for (const auto& r : rows) {
      s.x.push_back(r.time_min / 1440.0);
      s.y.push_back(r.setpoint);
      per_week[static_cast<std::size_t>(std::floor(r.time_min / (7.0 * 1440.0)))] += r.energy;
    }
    setpoints.push_back(std::move(s));
    weeks = std::max(weeks, per_week.empty() ? 0 : per_week.rbegin()->first + 1);
    std::vector<std::vector<double>> stacks;
    for (std::size_t w = 0; w < weeks; ++w) {
      const auto e = per_week.count(w) ? per_week.at(w) : EnergyBreakdown{};
      stacks.push_back({e.district_kwh, e.fan_kwh, e.pump_kwh});
    }
    weekly.series.push_back(name);
    weekly.values.push_back(std::move(stacks));
  }
  for (auto& v : weekly.values) v.resize(weeks, std::vector<double>(3, 0.0));
  for (std::size_t w = 0; w < weeks; ++w) weekly.categories.push_back("W" + std::to_string(w + 1));

  std::vector<svg::Series> curves;
  for (const auto& name : strategies_in(dir, "learning_")) {
    svg::Series s{name, {}, {}};
    for (const auto& r : read_learning(dir / ("learning_" + name + ".csv"))) {
      s.x.push_back(r.labels);
      s.y.push_back(r.macro_f1);
    }
    if (!s.x.empty()) curves.push_back(std::move(s));
  }

  const auto sp = dir / "setpoints.svg";
  const auto energy = dir / "weekly_energy.svg";
  const auto learn = dir / "learning_curve.svg";
  write_file(sp, svg::line_chart({"Zone setpoint", "day", "setpoint (degC)"}, setpoints));
  write_file(energy, svg::stacked_bar_chart({"Weekly cooling energy", "week", "energy (kWh)"}, weekly));
  write_file(learn, svg::line_chart({"Learning curve", "labels collected", "holdout macro-F1"}, curves));
  return {sp, energy, learn};
}

}  // namespace occ
