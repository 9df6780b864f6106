#include "occ/kernels.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <omp.h>

#include "occ/error.hpp"

namespace occ {

int available_threads() noexcept { return omp_get_max_threads(); }

}  // namespace occ

namespace occ::kernels {

namespace {

GradStats minus(const GradStats& total, const GradStats& part) noexcept {
  return {total.grad - part.grad, total.hess - part.hess, total.count - part.count};
}

void add_row(GradStats& s, double g, double h) noexcept {
  s.grad += g;
  s.hess += h;
  ++s.count;
}

double midpoint(double lo, double hi) noexcept {
  const double mid = 0.5 * (lo + hi);
  // Adjacent doubles can round the midpoint up onto `hi`.
  return mid < hi ? mid : lo;
}

// Offers a candidate; replaces the incumbent only on a strictly larger gain so the first
// candidate in (feature, threshold) order wins ties.
void offer(SplitChoice& best, const GradStats& left, const GradStats& right, int feature, double threshold,
           const LevelProblem& p) noexcept {
  if (left.count < p.min_samples_leaf || right.count < p.min_samples_leaf) return;
  const double gain = split_gain(left, right, p.l2);
  if (gain > best.gain) best = {gain, feature, threshold};
}

SplitChoice empty_choice(const LevelProblem& p) noexcept { return {p.min_gain, -1, 0.0}; }

void finalize(std::vector<SplitChoice>& choices) noexcept {
  for (auto& c : choices)
    if (!c.valid()) c.gain = 0.0;
}

std::vector<SplitChoice> best_splits_serial(const LevelProblem& p) {
  const std::size_t slots = p.totals.size();
  const std::size_t n = p.slot_of_row.size();
  std::vector<SplitChoice> out(slots, empty_choice(p));
  std::vector<std::uint32_t> rows;
  for (std::size_t s = 0; s < slots; ++s) {
    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (p.slot_of_row[i] == static_cast<int>(s)) rows.push_back(static_cast<std::uint32_t>(i));
    const GradStats& total = p.totals[s];
    SplitChoice& best = out[s];

    for (std::size_t j = 0; j < p.num_indicators; ++j) {
      GradStats on;
      for (auto r : rows)
        if (p.categories[r] == static_cast<int>(j)) add_row(on, p.grad[r], p.hess[r]);
      if (on.count == 0) continue;
      offer(best, minus(total, on), on, static_cast<int>(j), 0.5, p);
    }

    for (std::size_t c = 0; c < p.num_continuous; ++c) {
      auto value = [&](std::uint32_t r) { return p.values[r * p.num_continuous + c]; };
      std::vector<std::uint32_t> order = rows;
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double va = value(a), vb = value(b);
        return va < vb || (va == vb && a < b);
      });
      GradStats left;
      double last = 0.0;
      for (auto r : order) {
        const double v = value(r);
        if (left.count > 0 && v > last)
          offer(best, left, minus(total, left), static_cast<int>(p.num_indicators + c), midpoint(last, v), p);
        add_row(left, p.grad[r], p.hess[r]);
        last = v;
      }
    }
  }
  finalize(out);
  return out;
}

void scan_indicators(const LevelProblem& p, std::vector<SplitChoice>& best) {
  const std::size_t slots = p.totals.size();
  const std::size_t k = p.num_indicators;
  std::vector<GradStats> on(slots * k);
  for (std::size_t i = 0; i < p.slot_of_row.size(); ++i) {
    const int s = p.slot_of_row[i];
    if (s < 0) continue;
    add_row(on[static_cast<std::size_t>(s) * k + static_cast<std::size_t>(p.categories[i])], p.grad[i], p.hess[i]);
  }
  for (std::size_t s = 0; s < slots; ++s) {
    for (std::size_t j = 0; j < k; ++j) {
      const GradStats& right = on[s * k + j];
      if (right.count == 0) continue;
      offer(best[s], minus(p.totals[s], right), right, static_cast<int>(j), 0.5, p);
    }
  }
}

void scan_continuous(const LevelProblem& p, std::size_t c, std::vector<SplitChoice>& best) {
  const std::size_t slots = p.totals.size();
  std::vector<GradStats> left(slots);
  std::vector<double> last(slots, 0.0);
  const int feature = static_cast<int>(p.num_indicators + c);
  for (auto r : p.sorted_rows[c]) {
    const int s = p.slot_of_row[r];
    if (s < 0) continue;
    const double v = p.values[static_cast<std::size_t>(r) * p.num_continuous + c];
    GradStats& l = left[static_cast<std::size_t>(s)];
    if (l.count > 0 && v > last[static_cast<std::size_t>(s)])
      offer(best[static_cast<std::size_t>(s)], l, minus(p.totals[static_cast<std::size_t>(s)], l), feature,
            midpoint(last[static_cast<std::size_t>(s)], v), p);
    add_row(l, p.grad[r], p.hess[r]);
    last[static_cast<std::size_t>(s)] = v;
  }
}

std::vector<SplitChoice> best_splits_parallel(const LevelProblem& p) {
  if (p.sorted_rows.size() != p.num_continuous)
    throw InputError("parallel split search needs presorted rows for every continuous column");
  const std::size_t slots = p.totals.size();
  const std::size_t first = p.num_indicators > 0 ? 0 : 1;
  const std::size_t tasks = 1 + p.num_continuous;
  std::vector<std::vector<SplitChoice>> per_task(tasks, std::vector<SplitChoice>(slots, empty_choice(p)));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t t = first; t < tasks; ++t) {
    if (t == 0)
      scan_indicators(p, per_task[t]);
    else
      scan_continuous(p, t - 1, per_task[t]);
  }

  std::vector<SplitChoice> out(slots, empty_choice(p));
  for (std::size_t t = first; t < tasks; ++t)
    for (std::size_t s = 0; s < slots; ++s)
      if (per_task[t][s].gain > out[s].gain) out[s] = per_task[t][s];
  finalize(out);
  return out;
}

}  // namespace

double split_gain(const GradStats& left, const GradStats& right, double l2) noexcept {
  const double g = left.grad + right.grad;
  const double h = left.hess + right.hess;
  return 0.5 * (left.grad * left.grad / (left.hess + l2) + right.grad * right.grad / (right.hess + l2) -
                g * g / (h + l2));
}

std::vector<SplitChoice> best_splits(const LevelProblem& problem, Exec exec) {
  return exec == Exec::Serial ? best_splits_serial(problem) : best_splits_parallel(problem);
}

void predict_proba_batch(const BoostedEnsemble& model, std::span<const FeatureVector> rows,
                         std::span<ProbTriple> out, Exec exec) {
  if (rows.size() != out.size()) throw InputError("predict_proba_batch: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = model.predict_proba(rows[static_cast<std::size_t>(i)]);
    return;
  }
  // Shape errors are checked up front so nothing throws inside the parallel region.
  for (const auto& r : rows) check_shape(model.layout(), r);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = model.predict_proba(rows[static_cast<std::size_t>(i)]);
}

}  // namespace occ::kernels
