#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "occ/exec.hpp"
#include "occ/gbt.hpp"
#include "occ/rng.hpp"

namespace occ {

/// Query-by-committee members, each trained on a bootstrap resample of the labelled set.
struct Committee {
  std::vector<BoostedEnsemble> members;
  std::vector<std::uint64_t> member_seeds;

  std::size_t size() const noexcept { return members.size(); }
};

/// Members train concurrently under Exec::Parallel; the result does not depend on `exec`.
/// Throws ColdStartError for an empty labelled set and ConfigError when m < 2.
Committee build_committee(const TrainingSet& labelled, std::size_t m, std::uint64_t seed, const GbtParams& params,
                          Exec exec = Exec::Parallel);

using VoteCounts = std::array<std::size_t, kNumClasses>;

VoteCounts committee_votes(const Committee& committee, const FeatureVector& x);

/// -sum (v/m) ln(v/m) over classes with votes, in nats. Range [0, ln 3].
double vote_entropy(const VoteCounts& votes) noexcept;
double vote_entropy(const Committee& committee, const FeatureVector& x);

struct SelectionPolicy {
  enum class Kind { Threshold, TopK };
  Kind kind = Kind::Threshold;
  double theta = 0.2;  // select disagreement strictly above theta
  std::size_t k = 1;   // select the k most contested

  static SelectionPolicy threshold(double theta) { return {Kind::Threshold, theta, 0}; }
  static SelectionPolicy top_k(std::size_t k) { return {Kind::TopK, 0.0, k}; }
};

struct QueryDecision {
  std::size_t candidate = 0;  // index into the candidate list
  int occupant_id = 0;
  double disagreement = 0.0;  // nats
  bool selected = false;
};

/// Applies a policy to precomputed disagreements. top_k ties go to the lowest occupant id.
/// Throws ConfigError for theta < 0 or k > candidates.
std::vector<QueryDecision> select_by_disagreement(std::span<const double> disagreement,
                                                  std::span<const int> occupant_ids, const SelectionPolicy& policy);

/// Vote entropy for each candidate, then select_by_disagreement. Throws InputError when
/// `candidates` is empty or the two spans differ in length.
std::vector<QueryDecision> select_informative(const Committee& committee, std::span<const FeatureVector> candidates,
                                              std::span<const int> occupant_ids, const SelectionPolicy& policy);

/// Each candidate independently with probability `fraction`; the random-sampling baseline.
std::vector<bool> select_random(std::size_t candidates, double fraction, Rng& rng);

/// n_labelled / n_total. Throws InputError when n_total == 0 or n_labelled > n_total.
double labelling_effort(std::size_t n_labelled, std::size_t n_total);

/// True until at least `min_labels` labels spanning at least two classes exist.
bool in_cold_start(const TrainingSet& labelled, std::size_t min_labels) noexcept;

}  // namespace occ
