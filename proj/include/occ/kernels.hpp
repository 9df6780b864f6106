#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occ/exec.hpp"
#include "occ/gbt.hpp"

namespace occ::kernels {

struct GradStats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;
};

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;

  bool valid() const noexcept { return feature >= 0; }
  friend bool operator==(const SplitChoice&, const SplitChoice&) = default;
};

/// Second-order split gain 0.5 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)].
double split_gain(const GradStats& left, const GradStats& right, double l2) noexcept;

/// One level of depth-wise tree growth: every frontier node ("slot") looks for its best split.
struct LevelProblem {
  std::span<const int> slot_of_row;  // -1 for rows not in the frontier
  std::span<const GradStats> totals;  // per slot
  std::span<const double> grad;
  std::span<const double> hess;
  std::span<const int> categories;  // per row; ignored when num_indicators == 0
  std::size_t num_indicators = 0;
  std::span<const double> values;   // row-major, n x num_continuous
  std::size_t num_continuous = 0;
  /// Per continuous column, row indices sorted by (value, row). Used by the parallel kernel.
  std::span<const std::vector<std::uint32_t>> sorted_rows;
  double l2 = 1.0;
  std::size_t min_samples_leaf = 1;
  double min_gain = 1e-12;
};

/// Best split per slot. Ties resolve to the lowest feature index, then the lowest threshold.
/// Serial: per-slot gather-and-sort reference. Parallel: one presorted sweep per feature,
/// features distributed over OpenMP threads and reduced in feature order.
std::vector<SplitChoice> best_splits(const LevelProblem& problem, Exec exec);

/// predict_proba over a batch; `out` must have the same length as `rows`.
void predict_proba_batch(const BoostedEnsemble& model, std::span<const FeatureVector> rows,
                         std::span<ProbTriple> out, Exec exec);

}  // namespace occ::kernels
