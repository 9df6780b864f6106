#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "occ/exec.hpp"
#include "occ/gbt.hpp"
#include "occ/occupant_data.hpp"

namespace occ {

/// Comfort-layout training rows for a dataset. Occupants missing from `layout` raise ShapeError.
TrainingSet make_training_set(std::span<const LabeledInstance> rows, const FeatureLayout& layout);

/// Name used for the whole occupant indicator block when features are ranked.
inline constexpr std::string_view kOccupantFeature = "occupant_id";

/// Features as ranked: the occupant block (if any) as one feature, then each continuous column.
std::vector<std::string> logical_features(const FeatureLayout& layout);

/// Sample-weighted decrease in pseudo-residual variance, summed over every split of every tree
/// and grouped by logical feature. Normalised to sum to 1; all-equal when the ensemble never
/// split.
std::vector<double> impurity_importance(const BoostedEnsemble& model);

/// Trains on `data` then calls the overload above. Throws DegenerateDataError when fewer than
/// two classes are present.
std::vector<double> impurity_importance(const TrainingSet& data, const GbtParams& params, std::uint64_t seed,
                                        Exec exec = Exec::Parallel);

/// Best second-order gain of a depth-1 split on one logical feature at the prior scores,
/// summed over classes. Breaks importance ties during elimination.
double standalone_root_gain(const TrainingSet& data, std::size_t logical_feature, const GbtParams& params);

/// Per-fold elimination ranks, rank 1 = last survivor. Folds are stratified by label.
std::vector<std::vector<int>> rfe_fold_ranks(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                                             std::uint64_t seed, Exec exec = Exec::Parallel);

/// Recursive elimination inside each of k stratified folds, one feature per round (lowest
/// importance first; ties by lower standalone gain, then higher index), ranks averaged
/// over folds. Folds run concurrently under Exec::Parallel with identical results.
/// Throws ConfigError for k < 2 and InputError when the dataset has fewer rows than folds.
std::vector<double> rfecv_rank(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                               std::uint64_t seed, Exec exec = Exec::Parallel);

struct FeatureReport {
  std::string name;
  double mean_rank = 0.0;
  double importance = 0.0;
};

/// Ascending mean rank, then descending importance, then name; the first n names.
/// Throws InputError when the two maps name different features or n exceeds their size.
std::vector<std::string> select_top_features(const std::map<std::string, double>& ranks,
                                             const std::map<std::string, double>& importances, std::size_t n);

/// Ranks and full-data importances for every logical feature, sorted like select_top_features.
std::vector<FeatureReport> feature_report(const TrainingSet& data, std::size_t k_folds, const GbtParams& params,
                                          std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace occ
