#include "occ/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "occ/error.hpp"
#include "occ/kernels.hpp"
#include "occ/rng.hpp"

namespace occ {

namespace {

bool has_occupants(const FeatureLayout& layout) { return layout.num_indicators() > 0; }

std::size_t logical_of(const FeatureLayout& layout, std::size_t feature) {
  const std::size_t n = layout.num_indicators();
  if (feature < n) return 0;
  return (n > 0 ? 1 : 0) + (feature - n);
}

// Projection of `data` onto a subset of logical features (ascending).
TrainingSet project_logical(const TrainingSet& data, std::span<const std::size_t> logical) {
  const bool occ = has_occupants(data.layout());
  bool keep_occ = false;
  std::vector<std::size_t> cols;
  for (auto j : logical) {
    if (occ && j == 0)
      keep_occ = true;
    else
      cols.push_back(j - (occ ? 1 : 0));
  }
  return data.project(keep_occ, cols);
}

}  // namespace

TrainingSet make_training_set(std::span<const LabeledInstance> rows, const FeatureLayout& layout) {
  TrainingSet out(layout);
  out.reserve(rows.size());
  for (const auto& r : rows) out.add(comfort_features(layout, r.occupant_id, r.env), r.label);
  return out;
}

std::vector<std::string> logical_features(const FeatureLayout& layout) {
  std::vector<std::string> names;
  if (has_occupants(layout)) names.emplace_back(kOccupantFeature);
  for (const auto& c : layout.continuous_names()) names.push_back(c);
  return names;
}

std::vector<double> impurity_importance(const BoostedEnsemble& model) {
  const auto& layout = model.layout();
  std::vector<double> imp(logical_features(layout).size(), 0.0);
  for (std::size_t r = 0; r < model.num_rounds(); ++r) {
    for (const auto& tree : model.round(r)) {
      const auto nodes = tree.nodes();
      const double total = nodes[0].samples;
      if (total <= 0.0) continue;
      for (const auto& node : nodes) {
        if (node.is_leaf() || node.samples <= 0.0) continue;
        const auto& l = nodes[static_cast<std::size_t>(node.left)];
        const auto& rt = nodes[static_cast<std::size_t>(node.right)];
        const double children = (l.samples * l.impurity + rt.samples * rt.impurity) / node.samples;
        const double decrease = std::max(0.0, node.impurity - children);
        imp[logical_of(layout, static_cast<std::size_t>(node.feature))] += node.samples / total * decrease;
      }
    }
  }
  const double sum = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (sum > 0.0) {
    for (auto& v : imp) v /= sum;
  } else {
    std::fill(imp.begin(), imp.end(), 1.0 / static_cast<double>(imp.size()));
  }
  return imp;
}

std::vector<double> impurity_importance(const TrainingSet& data, const GbtParams& params, std::uint64_t seed,
                                        Exec exec) {
  if (data.distinct_classes() < 2) throw DegenerateDataError("feature importance needs at least two classes");
  if (logical_features(data.layout()).empty()) throw InputError("feature importance needs at least one feature");
  return impurity_importance(train(data, params, seed, exec));
}

double standalone_root_gain(const TrainingSet& data, std::size_t logical_feature, const GbtParams& params) {
  const std::size_t one[] = {logical_feature};
  const TrainingSet single = project_logical(data, one);
  const std::size_t n = single.size();
  if (n == 0) return 0.0;
  const auto counts = single.class_counts();
  std::array<double, kNumClasses> base{};
  for (std::size_t k = 0; k < kNumClasses; ++k)
    base[k] = std::log((static_cast<double>(counts[k]) + 1.0) / (static_cast<double>(n) + kNumClasses));
  const auto p = softmax(base);

  std::vector<int> slot(n, 0);
  std::vector<double> grad(n), hess(n);
  double gain = 0.0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    kernels::GradStats total;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = p[k] - (class_index(single.label(i)) == k ? 1.0 : 0.0);
      hess[i] = p[k] * (1.0 - p[k]);
      total.grad += grad[i];
      total.hess += hess[i];
      ++total.count;
    }
    const kernels::GradStats totals[] = {total};
    kernels::LevelProblem problem;
    problem.slot_of_row = slot;
    problem.totals = totals;
    problem.grad = grad;
    problem.hess = hess;
    problem.categories = single.categories();
    problem.num_indicators = single.layout().num_indicators();
    problem.values = single.values();
    problem.num_continuous = single.layout().num_continuous();
    problem.l2 = params.l2;
    problem.min_samples_leaf = static_cast<std::size_t>(params.min_samples_leaf);
    const auto choice = kernels::best_splits(problem, Exec::Serial);
    if (choice[0].valid()) gain += choice[0].gain;
  }
  return gain;
}

namespace {

std::vector<std::vector<std::size_t>> stratified_folds(const TrainingSet& data, std::size_t k, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> folds(k);
  Rng rng = make_rng(seed, Stream::Folds);
  std::size_t next = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (class_index(data.label(i)) == c) rows.push_back(i);
    // Fisher-Yates with the portable uniform draw.
    for (std::size_t i = rows.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(rows[i - 1], rows[std::min(j, i - 1)]);
    }
    for (auto r : rows) folds[next++ % k].push_back(r);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<int> eliminate(const TrainingSet& train_rows, const GbtParams& params, std::uint64_t seed) {
  const std::size_t f = logical_features(train_rows.layout()).size();
  std::vector<double> root_gain(f);
  for (std::size_t j = 0; j < f; ++j) root_gain[j] = standalone_root_gain(train_rows, j, params);

  std::vector<int> rank(f, 0);
  std::vector<std::size_t> alive(f);
  std::iota(alive.begin(), alive.end(), 0);
  while (!alive.empty()) {
    if (alive.size() == 1) {
      rank[alive[0]] = 1;
      break;
    }
    const auto imp = impurity_importance(train(project_logical(train_rows, alive), params, seed, Exec::Serial));
    std::size_t worst = 0;
    for (std::size_t a = 1; a < alive.size(); ++a) {
      const std::size_t cand = alive[a], cur = alive[worst];
      if (imp[a] != imp[worst]) {
        if (imp[a] < imp[worst]) worst = a;
      } else if (root_gain[cand] != root_gain[cur]) {
        if (root_gain[cand] < root_gain[cur]) worst = a;
      } else {
        worst = a;  // higher index goes first
      }
    }
    rank[alive[worst]] = static_cast<int>(alive.size());
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  return rank;
}

}  // namespace

std::vector<std::vector<int>> rfe_fold_ranks(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                                             std::uint64_t seed, Exec exec) {
  if (k_folds < 2) throw ConfigError("feature selection needs at least 2 folds");
  if (data.size() < k_folds) throw InputError("dataset has fewer rows than folds");
  if (logical_features(data.layout()).empty()) throw InputError("no features to rank");
  validate(params);

  const auto folds = stratified_folds(data, k_folds, seed);
  std::vector<TrainingSet> train_sets;
  train_sets.reserve(k_folds);
  for (std::size_t f = 0; f < k_folds; ++f) {
    std::vector<std::size_t> rows;
    for (std::size_t g = 0; g < k_folds; ++g)
      if (g != f) rows.insert(rows.end(), folds[g].begin(), folds[g].end());
    std::sort(rows.begin(), rows.end());
    train_sets.push_back(data.subset(rows));
  }

  std::vector<std::vector<int>> ranks(k_folds);
  const auto count = static_cast<std::ptrdiff_t>(k_folds);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t f = 0; f < count; ++f) {
      const auto u = static_cast<std::size_t>(f);
      ranks[u] = eliminate(train_sets[u], params, derive_seed(seed, Stream::Folds, {u}));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t f = 0; f < count; ++f) {
      const auto u = static_cast<std::size_t>(f);
      ranks[u] = eliminate(train_sets[u], params, derive_seed(seed, Stream::Folds, {u}));
    }
  }
  return ranks;
}

std::vector<double> rfecv_rank(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                               std::uint64_t seed, Exec exec) {
  const auto per_fold = rfe_fold_ranks(data, k_folds, params, seed, exec);
  std::vector<double> mean(per_fold.front().size(), 0.0);
  for (const auto& fold : per_fold)
    for (std::size_t j = 0; j < fold.size(); ++j) mean[j] += fold[j];
  for (auto& m : mean) m /= static_cast<double>(per_fold.size());
  return mean;
}

std::vector<std::string> select_top_features(const std::map<std::string, double>& ranks,
                                             const std::map<std::string, double>& importances, std::size_t n) {
  if (ranks.size() != importances.size() ||
      !std::equal(ranks.begin(), ranks.end(), importances.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; }))
    throw InputError("rankings and importances cover different features");
  if (n > ranks.size()) throw InputError("requested more features than are available");
  std::vector<std::string> names;
  for (const auto& [name, _] : ranks) names.push_back(name);
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    const double ra = ranks.at(a), rb = ranks.at(b);
    if (ra != rb) return ra < rb;
    const double ia = importances.at(a), ib = importances.at(b);
    if (ia != ib) return ia > ib;
    return a < b;
  });
  names.resize(n);
  return names;
}

std::vector<FeatureReport> feature_report(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                                          std::uint64_t seed, Exec exec) {
  const auto names = logical_features(data.layout());
  const auto ranks = rfecv_rank(data, k_folds, params, seed, exec);
  const auto imp = impurity_importance(data, params, seed, exec);
  std::map<std::string, double> rank_map, imp_map;
  for (std::size_t j = 0; j < names.size(); ++j) {
    rank_map[names[j]] = ranks[j];
    imp_map[names[j]] = imp[j];
  }
  std::vector<FeatureReport> out;
  for (const auto& name : select_top_features(rank_map, imp_map, names.size()))
    out.push_back({name, rank_map.at(name), imp_map.at(name)});
  return out;
}

}  // namespace occ
