#include "occ/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "occ/error.hpp"

namespace occ {

Committee build_committee(const TrainingSet& labelled, std::size_t m, std::uint64_t seed, const GbtParams& params,
                          Exec exec) {
  if (labelled.empty()) throw ColdStartError("committee needs at least one labelled instance");
  if (m < 2) throw ConfigError("al.committee_size must be at least 2");
  validate(params);

  const std::size_t n = labelled.size();
  std::vector<std::uint64_t> seeds(m);
  std::vector<TrainingSet> resamples;
  resamples.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    seeds[j] = derive_seed(seed, Stream::Bootstrap, {j});
    Rng rng(seeds[j]);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = pick(rng);
    resamples.push_back(labelled.subset(rows));
  }

  std::vector<std::optional<BoostedEnsemble>> trained(m);
  const auto count = static_cast<std::ptrdiff_t>(m);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t j = 0; j < count; ++j)
      trained[static_cast<std::size_t>(j)] = train(resamples[static_cast<std::size_t>(j)], params,
                                                   seeds[static_cast<std::size_t>(j)], Exec::Serial);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < count; ++j)
      trained[static_cast<std::size_t>(j)] = train(resamples[static_cast<std::size_t>(j)], params,
                                                   seeds[static_cast<std::size_t>(j)], Exec::Parallel);
  }

  Committee c;
  c.member_seeds = std::move(seeds);
  c.members.reserve(m);
  for (auto& t : trained) c.members.push_back(std::move(*t));
  return c;
}

VoteCounts committee_votes(const Committee& committee, const FeatureVector& x) {
  VoteCounts votes{};
  for (const auto& member : committee.members) ++votes[class_index(member.predict_label(x))];
  return votes;
}

double vote_entropy(const VoteCounts& votes) noexcept {
  const double m = static_cast<double>(votes[0] + votes[1] + votes[2]);
  if (m == 0.0) return 0.0;
  double h = 0.0;
  for (auto v : votes) {
    if (v == 0) continue;
    const double q = static_cast<double>(v) / m;
    h -= q * std::log(q);
  }
  return std::max(h, 0.0);
}

double vote_entropy(const Committee& committee, const FeatureVector& x) {
  return vote_entropy(committee_votes(committee, x));
}

std::vector<QueryDecision> select_by_disagreement(std::span<const double> disagreement,
                                                  std::span<const int> occupant_ids, const SelectionPolicy& policy) {
  if (disagreement.size() != occupant_ids.size())
    throw InputError("select: disagreement and occupant lists differ in length");
  std::vector<QueryDecision> out(disagreement.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {i, occupant_ids[i], disagreement[i], false};

  if (policy.kind == SelectionPolicy::Kind::Threshold) {
    if (!(policy.theta >= 0.0)) throw ConfigError("al.theta must be >= 0");
    for (auto& d : out) d.selected = d.disagreement > policy.theta;
    return out;
  }
  if (policy.k > out.size())
    throw ConfigError("al.k = " + std::to_string(policy.k) + " exceeds the " + std::to_string(out.size()) +
                      " candidates");
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].disagreement != out[b].disagreement) return out[a].disagreement > out[b].disagreement;
    return out[a].occupant_id < out[b].occupant_id;
  });
  for (std::size_t i = 0; i < policy.k; ++i) out[order[i]].selected = true;
  return out;
}

std::vector<QueryDecision> select_informative(const Committee& committee, std::span<const FeatureVector> candidates,
                                              std::span<const int> occupant_ids, const SelectionPolicy& policy) {
  if (candidates.empty()) throw InputError("select_informative: no candidates");
  if (candidates.size() != occupant_ids.size())
    throw InputError("select_informative: candidates and occupant ids differ in length");
  std::vector<double> entropy(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) entropy[i] = vote_entropy(committee, candidates[i]);
  return select_by_disagreement(entropy, occupant_ids, policy);
}

std::vector<bool> select_random(std::size_t candidates, double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("random.fraction must be in [0, 1]");
  std::vector<bool> out(candidates);
  for (std::size_t i = 0; i < candidates; ++i) out[i] = uniform01(rng) < fraction;
  return out;
}

double labelling_effort(std::size_t n_labelled, std::size_t n_total) {
  if (n_total == 0) throw InputError("labelling effort is undefined with no candidates");
  if (n_labelled > n_total) throw InputError("more labels than candidates");
  return static_cast<double>(n_labelled) / static_cast<double>(n_total);
}

bool in_cold_start(const TrainingSet& labelled, std::size_t min_labels) noexcept {
  return labelled.size() < min_labels || labelled.distinct_classes() < 2;
}

}  // namespace occ
