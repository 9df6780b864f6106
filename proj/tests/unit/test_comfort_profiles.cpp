#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "occ/comfort_profiles.hpp"
#include "occ/error.hpp"
#include "support.hpp"

using namespace occ;

namespace {

ComfortProfile mask_profile(int id, const TempGrid& grid, const std::vector<double>& comfortable_temps) {
  std::vector<ProbTriple> probs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool in = std::any_of(comfortable_temps.begin(), comfortable_temps.end(),
                                [&](double t) { return std::abs(t - grid.at(i)) < 1e-9; });
    probs.push_back(in ? ProbTriple{0.1, 0.8, 0.1} : ProbTriple{0.7, 0.2, 0.1});
  }
  return ComfortProfile::from_probabilities(id, probs);
}

// Direct search: maximum count, then highest temperature; `fallback` when nobody is comfortable.
std::size_t brute_force(const std::vector<std::vector<bool>>& masks, std::size_t points, std::size_t fallback) {
  std::vector<std::size_t> counts(points, 0);
  for (const auto& m : masks)
    for (std::size_t t = 0; t < points; ++t) counts[t] += m[t];
  const std::size_t top = *std::max_element(counts.begin(), counts.end());
  if (top == 0) return fallback;
  std::size_t best = 0;
  for (std::size_t t = 0; t < points; ++t)
    if (counts[t] == top) best = t;
  return best;
}

}  // namespace

TEST_CASE("TempGrid: defaults and validation") {
  const TempGrid g;
  CHECK(g.size() == 36);
  CHECK(g.at(0) == 24.5);
  CHECK(g.at(35) == 28.0);
  CHECK(g.at(34) == 27.9);
  CHECK(g.index_of(27.9) == 34u);
  CHECK(!g.index_of(27.95));
  CHECK(g.midpoint() == 26.2);  // lower-middle grid point, so fallbacks stay on the grid
  CHECK_THROWS_AS(TempGrid(28.0, 24.5, 0.1), ConfigError);
  CHECK_THROWS_AS(TempGrid(24.5, 28.0, 0.0), ConfigError);
  CHECK_THROWS_AS(TempGrid(24.5, 28.0, 0.3), ConfigError);
}

TEST_CASE("is_comfortable: strict rule") {
  CHECK(is_comfortable({0.1, 0.8, 0.1}));
  CHECK(!is_comfortable({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(!is_comfortable({0.4, 0.4, 0.2}));
  CHECK(!is_comfortable({0.2, 0.3, 0.5}));
}

TEST_CASE("generate_profile: base-score models") {
  const TempGrid grid;
  const auto layout = FeatureLayout::comfort({0, 1});
  SUBCASE("priors (0.2, 0.6, 0.2) -> comfortable everywhere") {
    TrainingSet set(layout);
    const auto x = comfort_features(layout, 0, EnvState{});
    set.add(x, PreferenceLabel::Cooler);
    for (int i = 0; i < 5; ++i) set.add(x, PreferenceLabel::NoChange);
    set.add(x, PreferenceLabel::Warmer);
    GbtParams p;
    p.rounds = 0;
    const auto model = train(set, p, 1);
    const auto prof = generate_profile(model, 1, ProfileContext{}, grid);
    REQUIRE(prof.probabilities.size() == 36);
    CHECK(prof.probabilities[0][1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(comfort_temperatures(prof, grid).size() == 36);
  }
  SUBCASE("cooler everywhere -> empty comfort set") {
    const BoostedEnsemble model(layout, GbtParams{}, {std::log(0.9), std::log(0.05), std::log(0.05)}, {}, {}, 0);
    const auto prof = generate_profile(model, 0, ProfileContext{}, grid);
    CHECK(comfort_temperatures(prof, grid).empty());
    CHECK_THROWS_AS(generate_profile(model, 7, ProfileContext{}, grid), ShapeError);
  }
}

TEST_CASE("oracle_profile: comfort set is the contiguous interval of the ordered logit") {
  const TempGrid grid;
  const auto pop = generate_population(30, 6);
  for (const auto& o : pop) {
    const ProfileContext ctx{0.8, 30.0, 65.0};
    const auto prof = oracle_profile(o, ctx, grid);
    const auto temps = comfort_temperatures(prof, grid);
    std::vector<double> direct;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = o.slope * (grid.at(i) - o.airspeed_gain * (0.8 - 0.1) - o.neutral_temp);
      const double pc = testutil::sigmoid(x - o.slope * o.band_halfwidth);
      const double pw = testutil::sigmoid(-x - o.slope * o.band_halfwidth);
      const double pn = 1 - pc - pw;
      if (pn > pc && pn > pw) direct.push_back(grid.at(i));
    }
    CHECK(temps == direct);
    for (std::size_t i = 1; i < temps.size(); ++i) CHECK(temps[i] - temps[i - 1] == doctest::Approx(0.1));
  }
}

TEST_CASE("aggregate_setpoint: examples") {
  const TempGrid grid(25.0, 28.0, 1.0);
  std::vector<ComfortProfile> abc = {mask_profile(0, grid, {26, 27, 28}), mask_profile(1, grid, {25, 26, 27}),
                                     mask_profile(2, grid, {27, 28})};
  const auto d = aggregate_setpoint(abc, grid);
  CHECK(d.setpoint == 27.0);
  CHECK(d.agreement_count == 3);
  CHECK(d.histogram == std::vector<std::size_t>{1, 2, 3, 2});

  const TempGrid fine;
  std::vector<ComfortProfile> all;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> every;
    for (std::size_t k = 0; k < fine.size(); ++k) every.push_back(fine.at(k));
    all.push_back(mask_profile(i, fine, every));
  }
  CHECK(aggregate_setpoint(all, fine).setpoint == 28.0);

  const std::vector<ComfortProfile> single = {mask_profile(0, fine, {25.0})};
  const auto s = aggregate_setpoint(single, fine);
  CHECK(s.setpoint == 25.0);
  CHECK(s.agreement_count == 1);

  CHECK_THROWS_AS(aggregate_setpoint(std::vector<ComfortProfile>{}, fine), InputError);
}

TEST_CASE("aggregate_setpoint: all-zero histogram falls back") {
  const TempGrid grid;
  const std::vector<ComfortProfile> none = {mask_profile(0, grid, {}), mask_profile(1, grid, {})};
  const auto a = aggregate_setpoint(none, grid, 24.0);
  CHECK(a.setpoint == 24.0);
  CHECK(a.fallback);
  CHECK(a.agreement_count == 0);
  CHECK(aggregate_setpoint(none, grid).setpoint == doctest::Approx(grid.midpoint()));
}

TEST_CASE("aggregate_setpoint: brute force, ordering and empty-set invariance") {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t points = 2 + rng() % 9;
    const TempGrid grid(25.0, 25.0 + 0.5 * double(points - 1), 0.5);
    const std::size_t n = 1 + rng() % 6;
    std::vector<ComfortProfile> profiles;
    std::vector<std::vector<bool>> masks;
    for (std::size_t o = 0; o < n; ++o) {
      std::vector<double> temps;
      std::vector<bool> m(points);
      for (std::size_t t = 0; t < points; ++t)
        if (uniform01(rng) < 0.5) {
          temps.push_back(grid.at(t));
          m[t] = true;
        }
      profiles.push_back(mask_profile(static_cast<int>(o), grid, temps));
      masks.push_back(m);
    }
    const auto d = aggregate_setpoint(profiles, grid);
    const auto idx = brute_force(masks, points, points);
    if (idx == points)
      CHECK(d.fallback);
    else
      CHECK(d.setpoint == grid.at(idx));

    auto reversed = profiles;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(aggregate_setpoint(reversed, grid).setpoint == d.setpoint);
    auto with_empty = profiles;
    with_empty.push_back(mask_profile(99, grid, {}));
    CHECK(aggregate_setpoint(with_empty, grid).setpoint == d.setpoint);
  }
}

TEST_CASE("acceptability") {
  const TempGrid grid;
  std::vector<ComfortProfile> profiles;
  for (int i = 0; i < 58; ++i) profiles.push_back(mask_profile(i, grid, i == 0 ? std::vector<double>{} : std::vector<double>{27.9}));
  CHECK(acceptability(profiles, grid, 27.9) == doctest::Approx(57.0 / 58.0));
  CHECK(acceptability(profiles, grid, 27.9) == doctest::Approx(0.9828).epsilon(1e-4));
  CHECK(acceptability(profiles, grid, 25.0) == 0.0);
  profiles.erase(profiles.begin());
  CHECK(acceptability(profiles, grid, 27.9) == 1.0);
  CHECK_THROWS_AS(acceptability(profiles, grid, 27.95), InputError);
}

TEST_CASE("oracle_acceptability counts occupants more likely comfortable") {
  const auto pop = generate_population(20, 2);
  const EnvState env{27.0, 0.8, 30.0, 65.0};
  std::size_t count = 0;
  for (const auto& o : pop) count += is_comfortable(preference_probabilities(o, env));
  CHECK(oracle_acceptability(pop, env) == doctest::Approx(double(count) / 20.0));
}

TEST_CASE("generate_profiles: serial and parallel identical, model acceptability consistent") {
  const auto pop = generate_population(10, 3);
  const auto model = train(testutil::oracle_set(pop, 400, 3), GbtParams{}, 1);
  const TempGrid grid;
  const auto ids = testutil::iota_ids(10);
  const ProfileContext ctx{0.8, 29.0, 70.0};
  const auto a = generate_profiles(model, ids, ctx, grid, Exec::Serial);
  const auto b = generate_profiles(model, ids, ctx, grid, Exec::Parallel);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].occupant_id == ids[i]);
    CHECK(a[i].probabilities == b[i].probabilities);
    CHECK(a[i].comfortable == b[i].comfortable);
  }
  const EnvState env{27.0, 0.8, 29.0, 70.0};
  CHECK(model_acceptability(model, ids, env) == doctest::Approx(acceptability(a, grid, 27.0)));
  const std::vector<int> bad = {0, 99};
  CHECK_THROWS_AS(generate_profiles(model, bad, ctx, grid), ShapeError);
}

TEST_CASE("setpoint decision dominates higher temperatures") {
  Rng rng(5);
  const TempGrid grid;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ComfortProfile> profiles;
    for (int o = 0; o < 8; ++o) {
      const double lo = 24.5 + 0.1 * double(rng() % 36);
      const double hi = std::min(28.0, lo + 0.1 * double(rng() % 20));
      std::vector<double> temps;
      for (double t = lo; t <= hi + 1e-9; t += 0.1) temps.push_back(t);
      profiles.push_back(mask_profile(o, grid, temps));
    }
    const auto d = aggregate_setpoint(profiles, grid);
    const auto s = *grid.index_of(d.setpoint);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      CHECK(d.histogram[s] >= d.histogram[t]);
      if (t > s) CHECK(d.histogram[s] > d.histogram[t]);
    }
  }
}
