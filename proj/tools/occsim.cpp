// occsim: command-line front end for the occupant-centric control simulator.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "occ/config.hpp"
#include "occ/control_loop.hpp"
#include "occ/csv.hpp"
#include "occ/error.hpp"
#include "occ/feature_select.hpp"
#include "occ/outputs.hpp"

namespace fs = std::filesystem;
using namespace occ;

namespace {

std::string keys_footer() {
  std::string text = "\nConfig keys (flat JSON object, e.g. {\"al.theta\": 0.3}):\n";
  for (const auto& k : config_keys()) text += "  " + k.key + "\n      " + k.help + "\n";
  return text;
}

SimConfig config_from(const std::string& path) { return path.empty() ? SimConfig{} : load_config(path); }

void write_profiles(const fs::path& dir, const TempGrid& grid, std::size_t step,
                    std::span<const ComfortProfile> profiles) {
  fs::create_directories(dir);
  auto out = open_output(dir / ("step_" + std::to_string(step) + ".csv"));
  write_profiles_csv(out, profiles, grid);
}

RunOptions options_for(const SimConfig& cfg, const std::string& profile_dir, bool serial) {
  RunOptions opt;
  opt.exec = serial ? Exec::Serial : Exec::Parallel;
  if (!profile_dir.empty()) {
    const TempGrid grid = cfg.grid();
    const fs::path dir = profile_dir;
    opt.on_profiles = [dir, grid](std::size_t step, std::span<const ComfortProfile> p) {
      write_profiles(dir, grid, step, p);
    };
  }
  return opt;
}

void dump_model(const SimConfig& cfg, const RunResult& run, const fs::path& path) {
  if (run.labels.empty()) return;
  const auto ids = distinct_occupants(run.labels);
  std::vector<int> all;
  if (cfg.data_mode == DataMode::Oracle)
    for (std::size_t i = 0; i < cfg.population_size; ++i) all.push_back(static_cast<int>(i));
  else
    all = distinct_occupants(load_dataset_csv(cfg.data_path));
  const auto model = train(make_training_set(run.labels, FeatureLayout::comfort(all)), cfg.gbt, run.seed);
  auto out = open_output(path);
  out << dump_json(model) << '\n';
}

void print_summary(std::span<const StrategySummary> summary) {
  for (const auto& s : summary) {
    std::printf("%-13s energy %9.2f kWh  vs baseline %+7.2f%%", std::string(to_string(s.strategy)).c_str(),
                s.energy.total(), 100.0 * s.reduction_vs_baseline);
    if (std::isfinite(s.labelling_effort)) std::printf("  effort %.3f", s.labelling_effort);
    if (s.convergence_step) std::printf("  converged at step %zu", *s.convergence_step);
    if (std::isfinite(s.oracle_acceptability_post))
      std::printf("  acceptability after %.3f", s.oracle_acceptability_post);
    else if (std::isfinite(s.oracle_acceptability_pre))
      std::printf("  acceptability %.3f", s.oracle_acceptability_pre);
    std::printf("\n");
  }
}

int cmd_gen_data(const std::string& config_path, const std::string& out, const std::string& weather_out,
                 std::uint64_t seed, std::size_t days) {
  const SimConfig cfg = config_from(config_path);
  const auto population = generate_population(cfg.population_size, derive_seed(seed, Stream::Population),
                                              cfg.population);
  const auto weather = synth_weather(days + 1, cfg.step_minutes, seed, cfg.weather);
  SurveyConfig survey;
  survey.days = days;
  const auto rows = generate_survey_dataset(population, weather, survey, seed);
  write_dataset_csv(fs::path(out), rows);
  if (!weather_out.empty()) write_weather_csv(fs::path(weather_out), weather);
  std::printf("wrote %zu instances from %zu occupants to %s\n", rows.size(), distinct_occupants(rows).size(),
              out.c_str());
  return 0;
}

int cmd_select_features(const std::string& config_path, const std::string& data, std::size_t folds,
                        std::uint64_t seed, std::size_t noise) {
  const SimConfig cfg = config_from(config_path);
  const auto rows = load_dataset_csv(data);
  auto names = FeatureLayout::comfort({}).continuous_names();
  for (std::size_t j = 0; j < noise; ++j) names.push_back("noise_" + std::to_string(j + 1));
  const FeatureLayout layout(distinct_occupants(rows), names);
  TrainingSet set(layout);
  Rng rng = make_rng(seed, Stream::Dataset, {noise});
  for (const auto& r : rows) {
    FeatureVector x = comfort_features(FeatureLayout::comfort(layout.occupant_ids()), r.occupant_id, r.env);
    for (std::size_t j = 0; j < noise; ++j) x.continuous.push_back(uniform01(rng));
    set.add(x, r.label);
  }
  std::printf("feature,mean_rank,importance\n");
  for (const auto& f : feature_report(set, folds, cfg.gbt, seed))
    std::printf("%s,%s,%s\n", f.name.c_str(), csv::format(f.mean_rank).c_str(), csv::format(f.importance).c_str());
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& strategy_name, std::uint64_t seed,
            const std::string& out, const std::string& profile_dir, bool serial, bool charts, bool model_json) {
  const SimConfig cfg = config_from(config_path);
  const Strategy strategy = parse_strategy(strategy_name);
  std::vector<RunResult> runs;
  runs.push_back(run_simulation(cfg, strategy, seed, options_for(cfg, profile_dir, serial)));
  std::vector<StrategySummary> summary;
  if (strategy != Strategy::Baseline) {
    const auto baseline = run_simulation(cfg, Strategy::Baseline, seed, options_for(cfg, "", serial));
    summary = metrics_summary(runs, baseline, cfg);
  } else {
    summary = metrics_summary({}, runs.front(), cfg);
  }
  emit_outputs(runs, summary, out, {charts});
  if (model_json) dump_model(cfg, runs.front(), fs::path(out) / "model.json");
  print_summary(summary);
  return 0;
}

int cmd_compare(const std::string& config_path, std::uint64_t seed, const std::string& out, bool serial,
                bool charts) {
  SimConfig cfg = config_from(config_path);
  const RunOptions opt = options_for(cfg, "", serial);
  const Strategy first[] = {Strategy::AlOcc, Strategy::ConventionalOcc, Strategy::Baseline};
  std::vector<RunResult> runs(3);
  std::vector<std::exception_ptr> errors(3);
  // Independent runs; each is deterministic, so running them side by side changes nothing.
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < 3; ++i) {
    try {
      runs[static_cast<std::size_t>(i)] = run_simulation(cfg, first[i], seed, opt);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  // Random sampling gets the same labelling budget the committee ended up using.
  cfg.random_fraction = runs[0].labelling_effort;
  runs.push_back(run_simulation(cfg, Strategy::RandomOcc, seed, opt));
  const RunResult baseline = runs[2];
  const auto summary = metrics_summary(runs, baseline, cfg);
  emit_outputs(runs, summary, out, {charts});
  print_summary(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupant-centric HVAC control simulator with active learning"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  bool serial = false;
  bool no_charts = false;

  auto* gen = app.add_subcommand("gen-data", "Synthesise a labelled survey dataset");
  std::string gen_out, weather_out;
  std::size_t gen_days = 10;
  gen->add_option("--out", gen_out, "dataset CSV to write")->required();
  gen->add_option("--weather-out", weather_out, "also write the weather CSV");
  gen->add_option("--days", gen_days, "survey days")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--config", config_path, "JSON config file");

  auto* sel = app.add_subcommand("select-features", "Rank features by recursive elimination and importance");
  std::string data;
  std::size_t folds = 5, noise = 0;
  sel->add_option("--data", data, "dataset CSV")->required();
  sel->add_option("--folds", folds, "cross-validation folds");
  sel->add_option("--seed", seed, "random seed");
  sel->add_option("--noise", noise, "append this many uniform noise columns");
  sel->add_option("--config", config_path, "JSON config file (gbt.* keys)");

  auto* run = app.add_subcommand("run", "Simulate one strategy (plus the baseline for the summary)");
  std::string strategy = "al", out, profile_dir;
  bool model_json = false;
  run->add_option("--strategy", strategy, "al | conventional | baseline | random");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--profiles", profile_dir, "write comfort profiles per control step into this directory");
  run->add_flag("--model-json", model_json, "write the final comfort model as model.json");
  run->add_flag("--serial", serial, "use the serial reference kernels");
  run->add_flag("--no-charts", no_charts, "skip SVG output");

  auto* cmp = app.add_subcommand("compare", "Run every strategy with one seed and summarise");
  cmp->add_option("--config", config_path, "JSON config file");
  cmp->add_option("--seed", seed, "random seed");
  cmp->add_option("--out", out, "output directory")->required();
  cmp->add_flag("--serial", serial, "use the serial reference kernels");
  cmp->add_flag("--no-charts", no_charts, "skip SVG output");

  auto* plot = app.add_subcommand("plot", "Redraw the SVG charts from CSVs in a directory");
  std::string in_dir;
  plot->add_option("--in", in_dir, "directory holding steps_*.csv")->required();
  // Set after the subcommands exist so only the top-level help lists every key.
  app.footer(keys_footer());

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_data(config_path, gen_out, weather_out, seed, gen_days);
    if (*sel) return cmd_select_features(config_path, data, folds, seed, noise);
    if (*run) return cmd_run(config_path, strategy, seed, out, profile_dir, serial, !no_charts, model_json);
    if (*cmp) return cmd_compare(config_path, seed, out, serial, !no_charts);
    if (*plot) {
      for (const auto& p : render_plots(in_dir)) std::printf("wrote %s\n", p.string().c_str());
      return 0;
    }
  } catch (const occ::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
