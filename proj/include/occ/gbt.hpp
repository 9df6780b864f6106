#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occ/exec.hpp"
#include "occ/types.hpp"

namespace occ {

/// Column layout of a feature vector: a one-hot occupant block (indices 0..N-1, one per
/// occupant id in ascending order) followed by named continuous columns (indices N..).
class FeatureLayout {
 public:
  FeatureLayout() = default;
  /// `occupant_ids` must be strictly increasing. Throws InputError otherwise.
  FeatureLayout(std::vector<int> occupant_ids, std::vector<std::string> continuous_names);

  /// Occupant block plus indoor_temp, air_speed, outdoor_temp, outdoor_rh.
  static FeatureLayout comfort(std::vector<int> occupant_ids);

  std::size_t num_indicators() const noexcept { return occupant_ids_.size(); }
  std::size_t num_continuous() const noexcept { return continuous_names_.size(); }
  std::size_t size() const noexcept { return num_indicators() + num_continuous(); }

  const std::vector<int>& occupant_ids() const noexcept { return occupant_ids_; }
  const std::vector<std::string>& continuous_names() const noexcept { return continuous_names_; }

  std::optional<std::size_t> category_of(int occupant_id) const noexcept;
  std::string feature_name(std::size_t feature) const;

  friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;

 private:
  std::vector<int> occupant_ids_;
  std::vector<std::string> continuous_names_;
};

/// One input row. The occupant block is stored as the index of its single set indicator.
struct FeatureVector {
  int category = -1;  // -1 when the layout has no occupant block
  std::vector<double> continuous;
};

/// Throws ShapeError if `x` does not fit `layout`.
void check_shape(const FeatureLayout& layout, const FeatureVector& x);

/// Feature vector for a comfort-layout model. Throws ShapeError for unknown occupants.
FeatureVector comfort_features(const FeatureLayout& layout, int occupant_id, const EnvState& env);

/// Labelled rows in a fixed layout, stored column-friendly for tree growing.
class TrainingSet {
 public:
  explicit TrainingSet(FeatureLayout layout);

  void add(const FeatureVector& x, PreferenceLabel y);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const FeatureLayout& layout() const noexcept { return layout_; }

  int category(std::size_t row) const noexcept { return categories_[row]; }
  double value(std::size_t row, std::size_t column) const noexcept {
    return values_[row * layout_.num_continuous() + column];
  }
  PreferenceLabel label(std::size_t row) const noexcept { return labels_[row]; }

  std::span<const int> categories() const noexcept { return categories_; }
  /// Row-major n x num_continuous.
  std::span<const double> values() const noexcept { return values_; }
  std::span<const PreferenceLabel> labels() const noexcept { return labels_; }

  FeatureVector row(std::size_t i) const;
  std::array<std::size_t, kNumClasses> class_counts() const noexcept;
  std::size_t distinct_classes() const noexcept;

  /// Rows in the given order (duplicates allowed, as in bootstrap resampling).
  TrainingSet subset(std::span<const std::size_t> rows) const;

  /// Keeps the occupant block if `keep_occupants` and the listed continuous columns.
  TrainingSet project(bool keep_occupants, std::span<const std::size_t> continuous_columns) const;

 private:
  FeatureLayout layout_;
  std::vector<int> categories_;
  std::vector<double> values_;
  std::vector<PreferenceLabel> labels_;
};

struct GbtParams {
  int rounds = 50;
  double learning_rate = 0.3;
  int max_depth = 3;
  int min_samples_leaf = 2;
  double l2 = 1.0;
};

/// Throws ConfigError for nonsensical hyperparameters.
void validate(const GbtParams& params);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // rows with x <= threshold go left
  int left = -1;
  int right = -1;
  double value = 0.0;      // leaf output, learning rate already applied
  double samples = 0.0;    // training rows that reached the node
  double impurity = 0.0;   // variance of the pseudo-residuals at the node

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Regression tree over a FeatureLayout; indicator features test `category == feature`.
class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(std::vector<TreeNode> nodes, std::size_t num_indicators);

  std::size_t leaf_index(int category, std::span<const double> continuous) const noexcept;
  double predict(int category, std::span<const double> continuous) const noexcept {
    return nodes_[leaf_index(category, continuous)].value;
  }

  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  std::size_t num_indicators() const noexcept { return num_indicators_; }
  void scale_leaves(double factor) noexcept;

 private:
  std::vector<TreeNode> nodes_{TreeNode{}};
  std::size_t num_indicators_ = 0;
};

/// Multiclass boosted ensemble: one tree per class per round on top of log-prior base scores.
class BoostedEnsemble {
 public:
  using RoundTrees = std::array<RegressionTree, kNumClasses>;

  BoostedEnsemble(FeatureLayout layout, GbtParams params, std::array<double, kNumClasses> base_scores,
                  std::vector<RoundTrees> rounds, std::vector<double> loss_history, std::uint64_t seed);

  const FeatureLayout& layout() const noexcept { return layout_; }
  const GbtParams& params() const noexcept { return params_; }
  const std::array<double, kNumClasses>& base_scores() const noexcept { return base_scores_; }
  std::size_t num_rounds() const noexcept { return rounds_.size(); }
  const RoundTrees& round(std::size_t r) const { return rounds_.at(r); }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Training log-loss before any tree (index 0) and after each round.
  std::span<const double> loss_history() const noexcept { return loss_history_; }

  std::array<double, kNumClasses> raw_scores(const FeatureVector& x) const;
  ProbTriple predict_proba(const FeatureVector& x) const;
  PreferenceLabel predict_label(const FeatureVector& x) const;

 private:
  FeatureLayout layout_;
  GbtParams params_;
  std::array<double, kNumClasses> base_scores_{};
  std::vector<RoundTrees> rounds_;
  std::vector<double> loss_history_;
  std::uint64_t seed_ = 0;
};

/// Max-shifted softmax.
ProbTriple softmax(const std::array<double, kNumClasses>& logits) noexcept;

/// Argmax; ties resolve to NoChange, then Cooler.
PreferenceLabel argmax_label(const ProbTriple& p) noexcept;

/// Newton-boosted trees on the softmax log-loss. Gradients g = p - y, hessians p (1 - p),
/// leaf value -eta * G / (H + lambda). A round whose trees would raise the training loss is
/// shrunk by halving until it does not (to zero at worst), so the loss history never rises.
/// Throws TrainingError on empty data.
BoostedEnsemble train(const TrainingSet& data, const GbtParams& params, std::uint64_t seed,
                      Exec exec = Exec::Parallel);

/// Mean -ln p[label] with probabilities clipped at 1e-15.
double log_loss(std::span<const ProbTriple> probs, std::span<const PreferenceLabel> truth);

struct EvalMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double log_loss = 0.0;
};

/// Macro-F1 averages over classes present in `truth` or `predicted`.
EvalMetrics classification_metrics(std::span<const PreferenceLabel> truth,
                                   std::span<const PreferenceLabel> predicted,
                                   std::span<const ProbTriple> probs);

/// Throws InputError on an empty test set.
EvalMetrics evaluate(const BoostedEnsemble& model, const TrainingSet& test, Exec exec = Exec::Parallel);

/// JSON tree listing for debugging; see README for the layout.
std::string dump_json(const BoostedEnsemble& model);

}  // namespace occ
