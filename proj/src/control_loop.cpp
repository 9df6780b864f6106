#include "occ/control_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occ/active_learning.hpp"
#include "occ/error.hpp"
#include "occ/feature_select.hpp"
#include "occ/rng.hpp"

namespace occ {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Scenario {
  std::vector<OccupantParams> population;  // empty in replay mode
  std::vector<int> ids;
  std::vector<LabeledInstance> pool;  // replay mode only
  WeatherSeries weather;
  FeatureLayout layout;
  TrainingSet holdout;
};

WeatherSeries make_weather(const SimConfig& cfg, std::uint64_t seed) {
  if (!cfg.weather_path.empty()) return WeatherSeries(load_weather_csv(cfg.weather_path));
  // One extra day so interpolation never clamps inside the horizon.
  return WeatherSeries(synth_weather(cfg.days + 1, cfg.step_minutes, seed, cfg.weather));
}

Scenario make_scenario(const SimConfig& cfg, std::uint64_t seed) {
  std::vector<OccupantParams> population;
  std::vector<LabeledInstance> pool;
  std::vector<int> ids;
  if (cfg.data_mode == DataMode::Oracle) {
    population = generate_population(cfg.population_size, derive_seed(seed, Stream::Population), cfg.population);
    for (const auto& o : population) ids.push_back(o.id);
  } else {
    pool = load_dataset_csv(cfg.data_path);
    ids = distinct_occupants(pool);
    if (cfg.candidates_per_step > ids.size())
      throw ConfigError("candidates.per_step exceeds the occupants in " + cfg.data_path);
  }
  auto layout = FeatureLayout::comfort(ids);
  TrainingSet holdout(layout);
  if (cfg.data_mode == DataMode::Oracle) {
    // Operating conditions the profiles are queried at: grid temperatures, OCC air speed,
    // outdoor weather from anywhere in the horizon.
    Rng rng = make_rng(seed, Stream::Holdout);
    WeatherSeries weather = make_weather(cfg, seed);
    const double horizon = static_cast<double>(cfg.days) * 1440.0;
    holdout.reserve(cfg.holdout_size);
    for (std::size_t i = 0; i < cfg.holdout_size; ++i) {
      const auto& occ = population[std::min(population.size() - 1,
                                            static_cast<std::size_t>(uniform01(rng) * population.size()))];
      const double indoor = cfg.grid_lo + uniform01(rng) * (cfg.grid_hi - cfg.grid_lo);
      const auto w = weather.at(uniform01(rng) * horizon);
      const EnvState env{indoor, cfg.occupied_air_speed, w.outdoor_temp, w.outdoor_rh};
      holdout.add(comfort_features(layout, occ.id, env), sample_label(occ, env, rng));
    }
  } else {
    holdout = make_training_set(pool, layout);
  }
  return {std::move(population), std::move(ids), std::move(pool), make_weather(cfg, seed), std::move(layout),
          std::move(holdout)};
}

const OccupantParams& occupant(const Scenario& sc, int id) {
  auto it = std::lower_bound(sc.population.begin(), sc.population.end(), id,
                             [](const OccupantParams& o, int v) { return o.id < v; });
  if (it == sc.population.end() || it->id != id) throw InputError("unknown occupant " + std::to_string(id));
  return *it;
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::AlOcc:
      return "al";
    case Strategy::ConventionalOcc:
      return "conventional";
    case Strategy::Baseline:
      return "baseline";
    case Strategy::RandomOcc:
      return "random";
  }
  return "baseline";
}

Strategy parse_strategy(std::string_view text) {
  for (auto s : {Strategy::AlOcc, Strategy::ConventionalOcc, Strategy::Baseline, Strategy::RandomOcc})
    if (text == to_string(s)) return s;
  throw ConfigError("unknown strategy '" + std::string(text) + "' (al, conventional, baseline, random)");
}

std::vector<double> RunResult::setpoints() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.setpoint);
  return out;
}

EnergyBreakdown RunResult::total_energy() const {
  EnergyBreakdown e;
  for (const auto& s : steps) e += s.energy;
  return e;
}

std::vector<EnergyBreakdown> RunResult::weekly_energy() const {
  std::vector<EnergyBreakdown> weeks;
  for (const auto& s : steps) {
    const auto w = static_cast<std::size_t>(std::floor(s.time_min / (7.0 * 1440.0)));
    if (weeks.size() <= w) weeks.resize(w + 1);
    weeks[w] += s.energy;
  }
  return weeks;
}

RunResult run_simulation(const SimConfig& cfg, Strategy strategy, std::uint64_t seed, const RunOptions& options) {
  validate(cfg);
  const Scenario sc = make_scenario(cfg, seed);
  const TempGrid grid = cfg.grid();
  const bool occ_strategy = strategy != Strategy::Baseline;
  const bool oracle = cfg.data_mode == DataMode::Oracle;
  const double dt = cfg.step_minutes;
  const std::size_t steps = cfg.total_steps();
  const auto steps_per_day = static_cast<std::size_t>(std::llround(1440.0 / dt));

  RunResult result;
  result.strategy = strategy;
  result.seed = seed;
  result.step_minutes = dt;
  result.steps.reserve(steps);

  TrainingSet labelled(sc.layout);
  std::optional<BoostedEnsemble> model;
  std::optional<Committee> committee;
  std::size_t committee_labels = std::numeric_limits<std::size_t>::max();
  bool model_dirty = false;
  bool first_decision = true;
  double setpoint = occ_strategy ? cfg.initial_setpoint : cfg.baseline_setpoint;
  const double air = occ_strategy ? cfg.occupied_air_speed : cfg.baseline_air_speed;
  ZoneState state{cfg.initial_zone_temp, 0.0};

  for (std::size_t step = 0; step < steps; ++step) {
    StepRecord rec;
    rec.step = step;
    rec.time_min = state.time_min;
    rec.occupied = is_occupied(cfg.zone, state.time_min);
    rec.air_speed = air;
    const WeatherPoint w = sc.weather.at(state.time_min);

    if (occ_strategy && rec.occupied) {
      // (i) candidates near the current conditions
      const EnvState env{std::clamp(state.zone_temp, kMinIndoorTemp, kMaxIndoorTemp), air, w.outdoor_temp,
                         w.outdoor_rh};
      Rng cand_rng = make_rng(seed, Stream::Candidates, {step});
      const auto candidates =
          oracle ? sample_candidates(sc.ids, env, cfg.candidates_per_step, static_cast<int>(step), cand_rng)
                 : nearest_instances(sc.pool, env, cfg.candidates_per_step, cand_rng);
      result.total_candidates += candidates.size();

      // (ii) which candidates to label
      std::vector<bool> chosen(candidates.size(), true);
      const bool cold = in_cold_start(labelled, cfg.cold_start_min_labels);
      if (!cold && strategy == Strategy::AlOcc) {
        if (committee_labels != labelled.size()) {
          committee = build_committee(labelled, cfg.committee_size,
                                      derive_seed(seed, Stream::Committee, {labelled.size()}), cfg.gbt, options.exec);
          committee_labels = labelled.size();
        }
        std::vector<FeatureVector> xs;
        std::vector<int> ids;
        for (const auto& c : candidates) {
          xs.push_back(comfort_features(sc.layout, c.occupant_id, c.env));
          ids.push_back(c.occupant_id);
        }
        const auto decisions = select_informative(*committee, xs, ids, cfg.policy);
        for (const auto& d : decisions) chosen[d.candidate] = d.selected;
      } else if (!cold && strategy == Strategy::RandomOcc) {
        Rng pick = make_rng(seed, Stream::RandomSelection, {step});
        chosen = select_random(candidates.size(), cfg.random_fraction, pick);
      }

      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        rec.candidate_ids.push_back(c.occupant_id);
        if (!chosen[i]) continue;
        PreferenceLabel y;
        if (oracle) {
          Rng label_rng = make_rng(seed, Stream::Labels, {step, static_cast<std::uint64_t>(c.occupant_id)});
          y = sample_label(occupant(sc, c.occupant_id), c.env, label_rng);
        } else {
          y = *c.recorded_label;
        }
        labelled.add(comfort_features(sc.layout, c.occupant_id, c.env), y);
        result.labels.push_back({static_cast<int>(step), c.occupant_id, c.env, y});
        rec.queried_ids.push_back(c.occupant_id);
        model_dirty = true;
      }

      // (iii) retrain on everything collected so far
      rec.cold_start = in_cold_start(labelled, cfg.cold_start_min_labels);
      if (!rec.cold_start && model_dirty) {
        model = train(labelled, cfg.gbt, seed, options.exec);
        model_dirty = false;
      }

      // (iv)-(v) profiles and setpoint
      if (first_decision || rec.cold_start || !model) {
        setpoint = cfg.initial_setpoint;
      } else {
        const ProfileContext ctx{air, w.outdoor_temp, w.outdoor_rh};
        const auto profiles = generate_profiles(*model, sc.ids, ctx, grid, options.exec);
        setpoint = aggregate_setpoint(profiles, grid, setpoint).setpoint;
        if (options.on_profiles) options.on_profiles(step, profiles);
      }
      first_decision = false;
    }

    rec.setpoint = setpoint;
    rec.cumulative_labels = result.labels.size();
    rec.model_acceptability = kNaN;
    rec.oracle_acceptability = kNaN;
    if (rec.occupied) {
      const EnvState at_setpoint{setpoint, air, w.outdoor_temp, w.outdoor_rh};
      if (model && occ_strategy) rec.model_acceptability = model_acceptability(*model, sc.ids, at_setpoint);
      if (oracle) rec.oracle_acceptability = oracle_acceptability(sc.population, at_setpoint);
    }

    // (vi) advance the zone
    const auto out = zone_step(state, setpoint, w, cfg.zone, dt);
    rec.zone_temp = out.next.zone_temp;
    rec.q_cool = out.q_cool;
    rec.energy = out.energy;
    state = out.next;

    const bool day_end = (step + 1) % steps_per_day == 0 || step + 1 == steps;
    if (day_end && model && !sc.holdout.empty()) {
      const auto m = evaluate(*model, sc.holdout, options.exec);
      if (result.learning.empty() || result.learning.back().labels != labelled.size() || step + 1 == steps)
        result.learning.push_back({step, labelled.size(), m.accuracy, m.macro_f1});
      if (step + 1 == steps) result.final_metrics = m;
    }
    result.steps.push_back(std::move(rec));
  }

  result.labelling_effort =
      occ_strategy && result.total_candidates > 0 ? labelling_effort(result.labels.size(), result.total_candidates)
                                                  : kNaN;
  return result;
}

std::optional<std::size_t> detect_convergence(std::span<const double> a, std::span<const double> b,
                                              std::size_t window_steps, double tol) {
  if (a.size() != b.size()) throw InputError("detect_convergence: series lengths differ");
  std::size_t s = a.size();
  while (s > 0 && std::abs(a[s - 1] - b[s - 1]) <= tol) --s;
  if (s == a.size() || a.size() - s < window_steps) return std::nullopt;
  return s;
}

double finite_mean(std::span<const double> values) noexcept {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values)
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  return n > 0 ? sum / static_cast<double>(n) : kNaN;
}

std::vector<StrategySummary> metrics_summary(std::span<const RunResult> runs, const RunResult& baseline,
                                             const SimConfig& cfg) {
  const RunResult* al = nullptr;
  const RunResult* conv = nullptr;
  for (const auto& r : runs) {
    if (r.steps.size() != baseline.steps.size()) throw InputError("metrics_summary: runs differ in horizon");
    if (r.strategy == Strategy::AlOcc && !al) al = &r;
    if (r.strategy == Strategy::ConventionalOcc && !conv) conv = &r;
  }
  const auto window =
      static_cast<std::size_t>(std::llround(cfg.convergence_window_days * 1440.0 / baseline.step_minutes));
  const double e_base = baseline.total_energy().total();

  std::vector<const RunResult*> all;
  for (const auto& r : runs) all.push_back(&r);
  if (std::none_of(all.begin(), all.end(), [](const RunResult* r) { return r->strategy == Strategy::Baseline; }))
    all.push_back(&baseline);

  std::vector<StrategySummary> out;
  for (const RunResult* r : all) {
    StrategySummary s;
    s.strategy = r->strategy;
    s.energy = r->total_energy();
    s.reduction_vs_baseline = e_base > 0.0 ? (e_base - s.energy.total()) / e_base : kNaN;
    s.labelling_effort = r->labelling_effort;
    s.effort_reduction_vs_conventional =
        conv && r->strategy != Strategy::Baseline && conv->labelling_effort > 0.0
            ? 1.0 - r->labelling_effort / conv->labelling_effort
            : kNaN;

    const RunResult* partner = r->strategy == Strategy::ConventionalOcc ? al : conv;
    if (r->strategy != Strategy::Baseline && partner && partner != r) {
      const auto a = r->setpoints();
      const auto b = partner->setpoints();
      s.convergence_step = detect_convergence(a, b, window);
    }

    std::vector<double> mpre, mpost, opre, opost, sp_post;
    double post_kwh = 0.0;
    for (const auto& st : r->steps) {
      const bool post = s.convergence_step && st.step >= *s.convergence_step;
      if (post) post_kwh += st.energy.total();
      if (!st.occupied) continue;
      (post ? mpost : mpre).push_back(st.model_acceptability);
      (post ? opost : opre).push_back(st.oracle_acceptability);
      if (post) sp_post.push_back(st.setpoint);
    }
    s.model_acceptability_pre = finite_mean(mpre);
    s.model_acceptability_post = finite_mean(mpost);
    s.oracle_acceptability_pre = finite_mean(opre);
    s.oracle_acceptability_post = finite_mean(opost);
    s.mean_post_setpoint = finite_mean(sp_post);
    s.post_convergence_kwh = s.convergence_step ? post_kwh : kNaN;
    s.final_macro_f1 = r->final_metrics ? r->final_metrics->macro_f1 : kNaN;
    const double days = static_cast<double>(r->steps.size()) * r->step_minutes / 1440.0;
    s.annualized_kwh = cfg.annualize && days > 0.0 ? s.energy.total() * 365.0 / days : kNaN;
    out.push_back(s);
  }
  return out;
}

}  // namespace occ
