// Serial reference vs OpenMP kernels on representative workloads.
// Usage: occ_bench [rows] [reps]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "occ/active_learning.hpp"
#include "occ/comfort_profiles.hpp"
#include "occ/feature_select.hpp"
#include "occ/gbt.hpp"
#include "occ/kernels.hpp"
#include "occ/occupant_data.hpp"

using namespace occ;

namespace {

double median_ms(int reps, const std::function<void()>& fn) {
  std::vector<double> ms;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t rows = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1500;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  const auto population = generate_population(58, 11);
  std::vector<int> ids;
  for (const auto& o : population) ids.push_back(o.id);
  const auto layout = FeatureLayout::comfort(ids);
  TrainingSet data(layout);
  Rng rng = make_rng(11, Stream::Dataset);
  std::vector<FeatureVector> probe;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& o = population[i % population.size()];
    const EnvState env{24.0 + 4.0 * uniform01(rng), 0.1 + 0.7 * uniform01(rng), 25.0 + 7.0 * uniform01(rng),
                       60.0 + 30.0 * uniform01(rng)};
    const auto x = comfort_features(layout, o.id, env);
    data.add(x, sample_label(o, env, rng));
    probe.push_back(x);
  }
  const GbtParams params;

  std::printf("rows %zu, reps %d, threads %d\n", rows, reps, available_threads());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  {
    std::optional<BoostedEnsemble> oa, ob;
    const double s = median_ms(reps, [&] { oa = train(data, params, 1, Exec::Serial); });
    const double p = median_ms(reps, [&] { ob = train(data, params, 1, Exec::Parallel); });
    const auto& a = *oa;
    const auto& b = *ob;
    report("train (split search)", s, p, dump_json(a) == dump_json(b));

    std::vector<ProbTriple> ps(probe.size()), pp(probe.size());
    const double s2 = median_ms(reps, [&] { kernels::predict_proba_batch(a, probe, ps, Exec::Serial); });
    const double p2 = median_ms(reps, [&] { kernels::predict_proba_batch(a, probe, pp, Exec::Parallel); });
    report("predict batch", s2, p2, ps == pp);

    std::vector<ComfortProfile> cs, cp;
    const ProfileContext ctx{};
    const TempGrid grid;
    const double s3 = median_ms(reps, [&] { cs = generate_profiles(a, ids, ctx, grid, Exec::Serial); });
    const double p3 = median_ms(reps, [&] { cp = generate_profiles(a, ids, ctx, grid, Exec::Parallel); });
    bool same = cs.size() == cp.size();
    for (std::size_t i = 0; same && i < cs.size(); ++i)
      same = cs[i].probabilities == cp[i].probabilities && cs[i].comfortable == cp[i].comfortable;
    report("comfort profiles", s3, p3, same);
  }
  {
    Committee a, b;
    const double s = median_ms(reps, [&] { a = build_committee(data, 5, 3, params, Exec::Serial); });
    const double p = median_ms(reps, [&] { b = build_committee(data, 5, 3, params, Exec::Parallel); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = dump_json(a.members[i]) == dump_json(b.members[i]);
    report("committee (m=5)", s, p, same);
  }
  {
    GbtParams small = params;
    small.rounds = 10;
    std::vector<double> a, b;
    const double s = median_ms(1, [&] { a = rfecv_rank(data, 5, small, 5, Exec::Serial); });
    const double p = median_ms(1, [&] { b = rfecv_rank(data, 5, small, 5, Exec::Parallel); });
    report("rfecv (5 folds)", s, p, a == b);
  }
  return 0;
}
