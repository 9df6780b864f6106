#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "occ/config.hpp"
#include "occ/control_loop.hpp"
#include "occ/csv.hpp"
#include "occ/error.hpp"
#include "occ/outputs.hpp"
#include "occ/svg.hpp"
#include "support.hpp"

using namespace occ;
namespace fs = std::filesystem;

namespace {

// Checks that every opened tag is closed in order; enough to catch malformed output.
bool balanced_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const auto end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    const std::string name = tag.substr(tag[0] == '/' ? 1 : 0, tag.find_first_of(" \t\n", 0) - (tag[0] == '/' ? 1 : 0));
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      stack.push_back(name.substr(0, name.find(' ')));
    }
  }
  return stack.empty();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config: defaults validate and every key round-trips") {
  SimConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.total_steps() == 56u * 48u);
  const auto keys = config_keys();
  CHECK(keys.size() > 50);
  const auto doc = nlohmann::json::parse(config_to_json(cfg));
  std::set<std::string> names;
  for (const auto& k : keys) {
    names.insert(k.key);
    CHECK(doc.contains(k.key));
    CHECK(k.help.find("[default") != std::string::npos);
  }
  CHECK(names.size() == keys.size());
  SimConfig again;
  apply_config_json(again, config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("config: overrides and errors") {
  SimConfig cfg;
  apply_config_json(cfg, R"({"al.theta": 0.35, "sim.days": 14, "al.policy": "top_k", "al.k": 2, "data.mode": "oracle"})");
  CHECK(cfg.policy.theta == 0.35);
  CHECK(cfg.days == 14);
  CHECK(cfg.policy.kind == SelectionPolicy::Kind::TopK);
  CHECK(cfg.policy.k == 2);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"al.thetta": 0.3})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"sim.days": "many"})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"al.policy": "greedy"})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(cfg, "[1, 2]"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(cfg, "{not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("config: validation catches contradictions") {
  auto bad = [](auto mutate) {
    SimConfig c;
    mutate(c);
    CHECK_THROWS_AS(validate(c), ConfigError);
  };
  bad([](SimConfig& c) { c.candidates_per_step = 100; });
  bad([](SimConfig& c) { c.committee_size = 1; });
  bad([](SimConfig& c) { c.policy.theta = -0.5; });
  bad([](SimConfig& c) { c.step_minutes = 7.0; });
  bad([](SimConfig& c) { c.grid_hi = 40.0; });
  bad([](SimConfig& c) { c.random_fraction = 1.5; });
  bad([](SimConfig& c) { c.days = 0; });
  bad([](SimConfig& c) { c.data_mode = DataMode::Replay; });
  bad([](SimConfig& c) { c.gbt.min_samples_leaf = 0; });
  bad([](SimConfig& c) { c.zone.ua = 0.0; });
}

TEST_CASE("config: file loading") {
  const auto dir = testutil::scratch_dir("config");
  {
    std::ofstream(dir / "c.json") << R"({"population.size": 20, "gbt.rounds": 10})";
  }
  const auto cfg = load_config(dir / "c.json");
  CHECK(cfg.population_size == 20);
  CHECK(cfg.gbt.rounds == 10);
}

TEST_CASE("csv helpers") {
  CHECK(csv::split("a,b,,c\r") == std::vector<std::string_view>{"a", "b", "", "c"});
  CHECK(csv::parse_double("27.9", 1, "x") == 27.9);
  CHECK_THROWS_AS(csv::parse_double("27.9x", 1, "x"), ParseError);
  CHECK_THROWS_AS(csv::parse_double("", 1, "x"), ParseError);
  CHECK(csv::parse_int("-4", 1, "x") == -4);
  for (double v : {0.1, 27.9, 1.0 / 3.0, 1e-300, 12345.678})
    CHECK(csv::parse_double(csv::format(v), 1, "x") == v);
  CHECK(csv::format(27.9) == "27.9");
}

TEST_CASE("svg: polylines, escaping and structure") {
  const std::string chart = svg::line_chart({"A & B", "x", "y"}, {{"one", {0, 1, 2}, {1, 2, 3}}, {"two<", {0, 1}, {3, 1}}});
  CHECK(count(chart, "<polyline") == 2);
  CHECK(chart.find("A &amp; B") != std::string::npos);
  CHECK(chart.find("two&lt;") != std::string::npos);
  CHECK(balanced_xml(chart));
  svg::StackedBars bars{{"W1", "W2"}, {"al", "baseline"}, {"a", "b", "c"}, {{{1, 2, 3}, {1, 1, 1}}, {{2, 2, 2}, {0, 0, 0}}}};
  const auto bar = svg::stacked_bar_chart({"t", "x", "y"}, bars);
  CHECK(count(bar, "<rect") >= 12);
  CHECK(balanced_xml(bar));
}

TEST_CASE("emit_outputs: inventory, charts and accounting identities") {
  const auto cfg = testutil::small_config();
  std::vector<RunResult> runs = {run_simulation(cfg, Strategy::AlOcc, 5),
                                 run_simulation(cfg, Strategy::ConventionalOcc, 5)};
  const auto base = run_simulation(cfg, Strategy::Baseline, 5);
  runs.push_back(base);
  const auto summary = metrics_summary(runs, base, cfg);
  const auto dir = testutil::scratch_dir("outputs");
  const auto files = emit_outputs(runs, summary, dir);

  for (const char* name : {"steps_al.csv", "steps_conventional.csv", "steps_baseline.csv", "control_al.csv",
                           "learning_al.csv", "summary.csv", "setpoints.svg", "weekly_energy.svg",
                           "learning_curve.svg"})
    CHECK(fs::exists(dir / name));
  CHECK(files.size() == 3 * 3 + 1 + 3);

  const auto setpoints = testutil::slurp(dir / "setpoints.svg");
  CHECK(count(setpoints, "<polyline") == 3);
  CHECK(balanced_xml(setpoints));
  CHECK(balanced_xml(testutil::slurp(dir / "weekly_energy.svg")));
  CHECK(balanced_xml(testutil::slurp(dir / "learning_curve.svg")));

  // Recompute per-strategy totals from the step CSVs and compare with summary.csv.
  std::map<std::string, double> from_steps;
  for (const char* s : {"al", "conventional", "baseline"}) {
    std::istringstream in(testutil::slurp(dir / (std::string("steps_") + s + ".csv")));
    std::string line;
    std::getline(in, line);
    CHECK(line == kStepsHeader);
    std::map<long, double> weekly;
    while (std::getline(in, line)) {
      const auto f = csv::split(line);
      const double e = csv::parse_double(f[6], 0, "") + csv::parse_double(f[7], 0, "") + csv::parse_double(f[8], 0, "");
      weekly[static_cast<long>(csv::parse_double(f[1], 0, "") / (7 * 1440))] += e;
      from_steps[s] += e;
    }
    double weeks = 0.0;
    for (const auto& [w, e] : weekly) weeks += e;
    CHECK(weeks == doctest::Approx(from_steps[s]).epsilon(1e-12));
  }
  std::istringstream sum(testutil::slurp(dir / "summary.csv"));
  std::string line;
  std::getline(sum, line);
  CHECK(line == kSummaryHeader);
  std::size_t rows = 0;
  while (std::getline(sum, line)) {
    const auto f = csv::split(line);
    CHECK(csv::parse_double(f[1], 0, "") == doctest::Approx(from_steps[std::string(f[0])]).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == 3);

  // plot regenerates the same charts from the CSVs alone.
  const auto before = testutil::slurp(dir / "weekly_energy.svg");
  fs::remove(dir / "weekly_energy.svg");
  render_plots(dir);
  CHECK(testutil::slurp(dir / "weekly_energy.svg") == before);
}

TEST_CASE("outputs: I/O errors name the path") {
  try {
    open_output("/nonexistent-dir/x.csv");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(render_plots(testutil::scratch_dir("empty")), InputError);
}
