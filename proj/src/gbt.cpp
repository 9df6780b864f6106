#include "occ/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "occ/error.hpp"
#include "occ/kernels.hpp"

namespace occ {

// ---------------------------------------------------------------- layout

FeatureLayout::FeatureLayout(std::vector<int> occupant_ids, std::vector<std::string> continuous_names)
    : occupant_ids_(std::move(occupant_ids)), continuous_names_(std::move(continuous_names)) {
  for (std::size_t i = 1; i < occupant_ids_.size(); ++i)
    if (occupant_ids_[i] <= occupant_ids_[i - 1])
      throw InputError("feature layout: occupant ids must be strictly increasing");
}

FeatureLayout FeatureLayout::comfort(std::vector<int> occupant_ids) {
  return FeatureLayout(std::move(occupant_ids), {"indoor_temp", "air_speed", "outdoor_temp", "outdoor_rh"});
}

std::optional<std::size_t> FeatureLayout::category_of(int occupant_id) const noexcept {
  auto it = std::lower_bound(occupant_ids_.begin(), occupant_ids_.end(), occupant_id);
  if (it == occupant_ids_.end() || *it != occupant_id) return std::nullopt;
  return static_cast<std::size_t>(it - occupant_ids_.begin());
}

std::string FeatureLayout::feature_name(std::size_t feature) const {
  if (feature < num_indicators()) return "occupant=" + std::to_string(occupant_ids_[feature]);
  if (feature < size()) return continuous_names_[feature - num_indicators()];
  throw ShapeError("feature index " + std::to_string(feature) + " out of range");
}

void check_shape(const FeatureLayout& layout, const FeatureVector& x) {
  if (x.continuous.size() != layout.num_continuous())
    throw ShapeError("expected " + std::to_string(layout.num_continuous()) + " continuous features, got " +
                     std::to_string(x.continuous.size()));
  if (layout.num_indicators() == 0) {
    if (x.category != -1) throw ShapeError("layout has no occupant block but a category was given");
  } else if (x.category < 0 || static_cast<std::size_t>(x.category) >= layout.num_indicators()) {
    throw ShapeError("occupant category " + std::to_string(x.category) + " outside the occupant block");
  }
}

FeatureVector comfort_features(const FeatureLayout& layout, int occupant_id, const EnvState& env) {
  const auto cat = layout.category_of(occupant_id);
  if (!cat) throw ShapeError("occupant " + std::to_string(occupant_id) + " is not in the model layout");
  FeatureVector x{static_cast<int>(*cat), {env.indoor_temp, env.air_speed, env.outdoor_temp, env.outdoor_rh}};
  check_shape(layout, x);
  return x;
}

// ---------------------------------------------------------------- training set

TrainingSet::TrainingSet(FeatureLayout layout) : layout_(std::move(layout)) {}

void TrainingSet::reserve(std::size_t n) {
  categories_.reserve(n);
  values_.reserve(n * layout_.num_continuous());
  labels_.reserve(n);
}

void TrainingSet::add(const FeatureVector& x, PreferenceLabel y) {
  check_shape(layout_, x);
  for (double v : x.continuous)
    if (!std::isfinite(v)) throw InputError("training features must be finite");
  categories_.push_back(x.category);
  values_.insert(values_.end(), x.continuous.begin(), x.continuous.end());
  labels_.push_back(y);
}

FeatureVector TrainingSet::row(std::size_t i) const {
  const std::size_t c = layout_.num_continuous();
  return {categories_[i], std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(i * c),
                                              values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c))};
}

std::array<std::size_t, kNumClasses> TrainingSet::class_counts() const noexcept {
  std::array<std::size_t, kNumClasses> counts{};
  for (auto y : labels_) ++counts[class_index(y)];
  return counts;
}

std::size_t TrainingSet::distinct_classes() const noexcept {
  const auto counts = class_counts();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> rows) const {
  TrainingSet out(layout_);
  out.reserve(rows.size());
  const std::size_t c = layout_.num_continuous();
  for (auto r : rows) {
    out.categories_.push_back(categories_[r]);
    out.values_.insert(out.values_.end(), values_.begin() + static_cast<std::ptrdiff_t>(r * c),
                       values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * c));
    out.labels_.push_back(labels_[r]);
  }
  return out;
}

TrainingSet TrainingSet::project(bool keep_occupants, std::span<const std::size_t> continuous_columns) const {
  std::vector<std::string> names;
  for (auto col : continuous_columns) {
    if (col >= layout_.num_continuous()) throw InputError("project: column index out of range");
    names.push_back(layout_.continuous_names()[col]);
  }
  TrainingSet out(FeatureLayout(keep_occupants ? layout_.occupant_ids() : std::vector<int>{}, std::move(names)));
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out.categories_.push_back(keep_occupants ? categories_[i] : -1);
    for (auto col : continuous_columns) out.values_.push_back(value(i, col));
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

void validate(const GbtParams& params) {
  if (params.rounds < 0) throw ConfigError("gbt.rounds must be >= 0");
  if (!(params.learning_rate > 0.0)) throw ConfigError("gbt.learning_rate must be > 0");
  if (params.max_depth < 0) throw ConfigError("gbt.max_depth must be >= 0");
  if (params.min_samples_leaf < 1) throw ConfigError("gbt.min_samples_leaf must be >= 1");
  if (params.l2 < 0.0) throw ConfigError("gbt.l2 must be >= 0");
}

// ---------------------------------------------------------------- trees

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, std::size_t num_indicators)
    : nodes_(std::move(nodes)), num_indicators_(num_indicators) {
  if (nodes_.empty()) throw InputError("a tree needs at least one node");
}

std::size_t RegressionTree::leaf_index(int category, std::span<const double> continuous) const noexcept {
  std::size_t idx = 0;
  while (!nodes_[idx].is_leaf()) {
    const TreeNode& n = nodes_[idx];
    const auto f = static_cast<std::size_t>(n.feature);
    const double x = f < num_indicators_ ? (category == n.feature ? 1.0 : 0.0) : continuous[f - num_indicators_];
    idx = static_cast<std::size_t>(x <= n.threshold ? n.left : n.right);
  }
  return idx;
}

void RegressionTree::scale_leaves(double factor) noexcept {
  for (auto& n : nodes_)
    if (n.is_leaf()) n.value *= factor;
}

// ---------------------------------------------------------------- ensemble

BoostedEnsemble::BoostedEnsemble(FeatureLayout layout, GbtParams params, std::array<double, kNumClasses> base_scores,
                                 std::vector<RoundTrees> rounds, std::vector<double> loss_history,
                                 std::uint64_t seed)
    : layout_(std::move(layout)),
      params_(params),
      base_scores_(base_scores),
      rounds_(std::move(rounds)),
      loss_history_(std::move(loss_history)),
      seed_(seed) {}

std::array<double, kNumClasses> BoostedEnsemble::raw_scores(const FeatureVector& x) const {
  check_shape(layout_, x);
  auto z = base_scores_;
  for (const auto& round : rounds_)
    for (std::size_t k = 0; k < kNumClasses; ++k) z[k] += round[k].predict(x.category, x.continuous);
  return z;
}

ProbTriple BoostedEnsemble::predict_proba(const FeatureVector& x) const { return softmax(raw_scores(x)); }

PreferenceLabel BoostedEnsemble::predict_label(const FeatureVector& x) const { return argmax_label(predict_proba(x)); }

ProbTriple softmax(const std::array<double, kNumClasses>& logits) noexcept {
  const double m = *std::max_element(logits.begin(), logits.end());
  ProbTriple p{};
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    p[k] = std::exp(logits[k] - m);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

PreferenceLabel argmax_label(const ProbTriple& p) noexcept {
  const double m = std::max({p[0], p[1], p[2]});
  if (p[1] == m) return PreferenceLabel::NoChange;
  if (p[0] == m) return PreferenceLabel::Cooler;
  return PreferenceLabel::Warmer;
}

namespace {

double logsumexp(const double* z) noexcept {
  const double m = std::max({z[0], z[1], z[2]});
  return m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m) + std::exp(z[2] - m));
}

double mean_loss(const std::vector<double>& scores, std::span<const PreferenceLabel> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double* z = &scores[i * kNumClasses];
    total += logsumexp(z) - z[class_index(labels[i])];
  }
  return total / static_cast<double>(labels.size());
}

struct NodeAccum {
  double grad = 0.0;
  double hess = 0.0;
  double grad_sq = 0.0;
  std::size_t count = 0;
};

class TreeGrower {
 public:
  TreeGrower(const TrainingSet& data, const std::vector<std::vector<std::uint32_t>>& sorted, const GbtParams& params,
             Exec exec)
      : data_(data), sorted_(sorted), params_(params), exec_(exec), node_of_row_(data.size()) {}

  // Grows one tree on (grad, hess); afterwards leaf_of_row() maps every row to its leaf.
  RegressionTree grow(std::span<const double> grad, std::span<const double> hess) {
    const std::size_t n = data_.size();
    std::fill(node_of_row_.begin(), node_of_row_.end(), 0);
    nodes_.assign(1, TreeNode{});
    accum_.assign(1, NodeAccum{});
    for (std::size_t i = 0; i < n; ++i) accumulate(accum_[0], grad[i], hess[i]);

    std::vector<int> frontier{0};
    std::vector<int> slot_of_row(n);
    for (int depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      std::vector<int> slot_of_node(nodes_.size(), -1);
      std::vector<kernels::GradStats> totals;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        slot_of_node[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
        const auto& a = accum_[static_cast<std::size_t>(frontier[s])];
        totals.push_back({a.grad, a.hess, a.count});
      }
      for (std::size_t i = 0; i < n; ++i) slot_of_row[i] = slot_of_node[static_cast<std::size_t>(node_of_row_[i])];

      kernels::LevelProblem problem;
      problem.slot_of_row = slot_of_row;
      problem.totals = totals;
      problem.grad = grad;
      problem.hess = hess;
      problem.categories = data_.categories();
      problem.num_indicators = data_.layout().num_indicators();
      problem.values = data_.values();
      problem.num_continuous = data_.layout().num_continuous();
      problem.sorted_rows = sorted_;
      problem.l2 = params_.l2;
      problem.min_samples_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
      const auto choices = kernels::best_splits(problem, exec_);

      std::vector<int> next;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        if (!choices[s].valid()) continue;
        const auto parent = static_cast<std::size_t>(frontier[s]);
        const int left = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{});
        nodes_.push_back(TreeNode{});
        accum_.resize(nodes_.size());
        nodes_[parent].feature = choices[s].feature;
        nodes_[parent].threshold = choices[s].threshold;
        nodes_[parent].left = left;
        nodes_[parent].right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;

      for (std::size_t i = 0; i < n; ++i) {
        const auto& node = nodes_[static_cast<std::size_t>(node_of_row_[i])];
        if (node.is_leaf()) continue;
        const auto f = static_cast<std::size_t>(node.feature);
        const std::size_t k = data_.layout().num_indicators();
        const double x = f < k ? (data_.category(i) == node.feature ? 1.0 : 0.0) : data_.value(i, f - k);
        node_of_row_[i] = x <= node.threshold ? node.left : node.right;
        accumulate(accum_[static_cast<std::size_t>(node_of_row_[i])], grad[i], hess[i]);
      }
      frontier = std::move(next);
    }

    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      const auto& a = accum_[j];
      auto& node = nodes_[j];
      node.samples = static_cast<double>(a.count);
      if (a.count > 0) {
        const double mean = a.grad / static_cast<double>(a.count);
        node.impurity = std::max(0.0, a.grad_sq / static_cast<double>(a.count) - mean * mean);
      }
      if (node.is_leaf()) {
        const double denom = a.hess + params_.l2;
        node.value = denom > 0.0 ? -params_.learning_rate * a.grad / denom : 0.0;
      }
    }
    return RegressionTree(nodes_, data_.layout().num_indicators());
  }

  std::span<const int> leaf_of_row() const noexcept { return node_of_row_; }

 private:
  static void accumulate(NodeAccum& a, double g, double h) noexcept {
    a.grad += g;
    a.hess += h;
    a.grad_sq += g * g;
    ++a.count;
  }

  const TrainingSet& data_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const GbtParams& params_;
  Exec exec_;
  std::vector<int> node_of_row_;
  std::vector<TreeNode> nodes_;
  std::vector<NodeAccum> accum_;
};

constexpr int kMaxShrinkSteps = 40;

}  // namespace

BoostedEnsemble train(const TrainingSet& data, const GbtParams& params, std::uint64_t seed, Exec exec) {
  validate(params);
  if (data.empty()) throw TrainingError("cannot train on an empty dataset");
  const std::size_t n = data.size();
  const std::size_t cols = data.layout().num_continuous();

  const auto counts = data.class_counts();
  std::array<double, kNumClasses> base{};
  for (std::size_t k = 0; k < kNumClasses; ++k)
    base[k] = std::log((static_cast<double>(counts[k]) + 1.0) / (static_cast<double>(n) + kNumClasses));

  std::vector<std::vector<std::uint32_t>> sorted(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    auto& order = sorted[c];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return data.value(a, c) < data.value(b, c); });
  }

  std::vector<double> scores(n * kNumClasses);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < kNumClasses; ++k) scores[i * kNumClasses + k] = base[k];

  std::vector<double> history{mean_loss(scores, data.labels())};
  std::vector<BoostedEnsemble::RoundTrees> rounds;
  rounds.reserve(static_cast<std::size_t>(params.rounds));

  TreeGrower grower(data, sorted, params, exec);
  std::vector<double> grad(n), hess(n), probs(n * kNumClasses), trial(n * kNumClasses);
  std::array<std::vector<int>, kNumClasses> leaves;

  for (int r = 0; r < params.rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = softmax({scores[i * 3], scores[i * 3 + 1], scores[i * 3 + 2]});
      std::copy(p.begin(), p.end(), probs.begin() + static_cast<std::ptrdiff_t>(i * 3));
    }
    BoostedEnsemble::RoundTrees trees;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = probs[i * 3 + k];
        grad[i] = p - (class_index(data.label(i)) == k ? 1.0 : 0.0);
        hess[i] = p * (1.0 - p);
      }
      trees[k] = grower.grow(grad, hess);
      leaves[k].assign(grower.leaf_of_row().begin(), grower.leaf_of_row().end());
    }

    auto apply = [&] {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < kNumClasses; ++k)
          trial[i * 3 + k] = scores[i * 3 + k] + trees[k].nodes()[static_cast<std::size_t>(leaves[k][i])].value;
      return mean_loss(trial, data.labels());
    };
    double loss = apply();
    for (int step = 0; loss > history.back() && step < kMaxShrinkSteps; ++step) {
      for (auto& t : trees) t.scale_leaves(0.5);
      loss = apply();
    }
    if (loss > history.back()) {
      for (auto& t : trees) t.scale_leaves(0.0);
      loss = apply();
    }
    scores.swap(trial);
    history.push_back(loss);
    rounds.push_back(std::move(trees));
  }
  return BoostedEnsemble(data.layout(), params, base, std::move(rounds), std::move(history), seed);
}

// ---------------------------------------------------------------- metrics

double log_loss(std::span<const ProbTriple> probs, std::span<const PreferenceLabel> truth) {
  if (probs.size() != truth.size() || probs.empty()) throw InputError("log_loss: mismatched or empty inputs");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    total -= std::log(std::max(probs[i][class_index(truth[i])], 1e-15));
  return total / static_cast<double>(probs.size());
}

EvalMetrics classification_metrics(std::span<const PreferenceLabel> truth, std::span<const PreferenceLabel> predicted,
                                   std::span<const ProbTriple> probs) {
  if (truth.empty() || truth.size() != predicted.size())
    throw InputError("classification_metrics: mismatched or empty inputs");
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};  // [truth][pred]
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++confusion[class_index(truth[i])][class_index(predicted[i])];
    if (truth[i] == predicted[i]) ++correct;
  }
  double f1_sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    std::size_t tp = confusion[k][k], actual = 0, pred = 0;
    for (std::size_t j = 0; j < kNumClasses; ++j) {
      actual += confusion[k][j];
      pred += confusion[j][k];
    }
    if (actual == 0 && pred == 0) continue;
    ++classes;
    if (tp > 0) f1_sum += 2.0 * static_cast<double>(tp) / static_cast<double>(actual + pred);
  }
  EvalMetrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  m.macro_f1 = f1_sum / static_cast<double>(classes);
  m.log_loss = probs.empty() ? std::numeric_limits<double>::quiet_NaN() : log_loss(probs, truth);
  return m;
}

EvalMetrics evaluate(const BoostedEnsemble& model, const TrainingSet& test, Exec exec) {
  if (test.empty()) throw InputError("evaluate: empty test set");
  std::vector<FeatureVector> rows;
  rows.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) rows.push_back(test.row(i));
  std::vector<ProbTriple> probs(rows.size());
  kernels::predict_proba_batch(model, rows, probs, exec);
  std::vector<PreferenceLabel> pred(rows.size());
  std::transform(probs.begin(), probs.end(), pred.begin(), argmax_label);
  return classification_metrics(test.labels(), pred, probs);
}

std::string dump_json(const BoostedEnsemble& model) {
  using nlohmann::json;
  json j;
  j["occupant_ids"] = model.layout().occupant_ids();
  j["continuous_features"] = model.layout().continuous_names();
  j["classes"] = {"cooler", "no_change", "warmer"};
  j["base_scores"] = model.base_scores();
  j["params"] = {{"rounds", model.params().rounds},
                 {"learning_rate", model.params().learning_rate},
                 {"max_depth", model.params().max_depth},
                 {"min_samples_leaf", model.params().min_samples_leaf},
                 {"l2", model.params().l2}};
  json rounds = json::array();
  for (std::size_t r = 0; r < model.num_rounds(); ++r) {
    json per_class = json::array();
    for (const auto& tree : model.round(r)) {
      json nodes = json::array();
      for (const auto& n : tree.nodes()) {
        if (n.is_leaf())
          nodes.push_back({{"leaf", n.value}, {"samples", n.samples}});
        else
          nodes.push_back({{"feature", n.feature},
                           {"name", model.layout().feature_name(static_cast<std::size_t>(n.feature))},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"samples", n.samples}});
      }
      per_class.push_back(std::move(nodes));
    }
    rounds.push_back(std::move(per_class));
  }
  j["rounds"] = std::move(rounds);
  j["training_loss"] = std::vector<double>(model.loss_history().begin(), model.loss_history().end());
  return j.dump(2);
}

}  // namespace occ
