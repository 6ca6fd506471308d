#pragma once

// Precedence entropy of solution pools and RDD/TF aggregation of benchmark
// results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smtwt/deviation.hpp"
#include "smtwt/model.hpp"
#include "smtwt/random.hpp"
#include "smtwt/search.hpp"

namespace smtwt {

/// A pool of sequences over a common job set.
class SolutionPool {
 public:
  explicit SolutionPool(std::vector<Permutation> perms) : perms_(std::move(perms)) {
    if (perms_.empty()) throw usage_error("solution pool is empty");
    for (const auto& p : perms_)
      if (p.size() != perms_.front().size()) throw usage_error("solution pool mixes sequence lengths");
  }

  std::size_t mu() const noexcept { return perms_.size(); }
  std::size_t jobs() const noexcept { return perms_.front().size(); }
  const std::vector<Permutation>& members() const noexcept { return perms_; }

 private:
  std::vector<Permutation> perms_;
};

/// omega(j, k): number of pool members in which job j precedes job k.
class PrecedenceCounts {
 public:
  PrecedenceCounts(std::size_t n, std::size_t mu) : n_(n), mu_(mu), omega_(n * n, 0) {}

  std::size_t jobs() const noexcept { return n_; }
  std::size_t mu() const noexcept { return mu_; }
  std::size_t operator()(std::size_t j, std::size_t k) const { return omega_[j * n_ + k]; }
  std::size_t& at(std::size_t j, std::size_t k) { return omega_[j * n_ + k]; }

 private:
  std::size_t n_;
  std::size_t mu_;
  std::vector<std::size_t> omega_;
};

inline PrecedenceCounts precedence_counts(const SolutionPool& pool) {
  const std::size_t n = pool.jobs();
  PrecedenceCounts counts(n, pool.mu());
  std::vector<std::size_t> pos(n);
  for (const auto& perm : pool.members()) {
    for (std::size_t i = 0; i < n; ++i) pos[static_cast<std::size_t>(perm[i])] = i;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k && pos[j] < pos[k]) ++counts.at(j, k);
  }
  return counts;
}

/// Mean over ordered pairs j != k of -(q log q) / log(sqrt 2), where q[j*n+k]
/// is the fraction of sequences with j before k and 0 log 0 = 0.
inline double entropy_of_fractions(std::size_t n, const std::vector<double>& q) {
  if (n < 2) throw usage_error("entropy needs at least two jobs");
  if (q.size() != n * n) throw usage_error("entropy: fraction matrix is not n x n");
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double x = q[j * n + k];
      if (j == k || x <= 0.0) continue;
      sum -= 2.0 * x * std::log2(x);  // log(sqrt 2) = log2(2) / 2
    }
  return sum / static_cast<double>(n * (n - 1));
}

/// Identical pools give 0; half/half precedences give 1.
inline double entropy(const PrecedenceCounts& counts) {
  const std::size_t n = counts.jobs();
  const double mu = static_cast<double>(counts.mu());
  std::vector<double> q(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) q[j * n + k] = static_cast<double>(counts(j, k)) / mu;
  return entropy_of_fractions(n, q);
}

inline double entropy(const SolutionPool& pool) { return entropy(precedence_counts(pool)); }

/// k members drawn uniformly without replacement (all of them if k >= size),
/// in draw order.
inline std::vector<Permutation> sample_distinct(const std::vector<Permutation>& members, std::size_t k,
                                                std::uint64_t seed) {
  std::vector<std::size_t> idx(members.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  k = std::min(k, idx.size());
  Rng rng(seed);
  std::vector<Permutation> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto r = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(idx.size() - 1)));
    std::swap(idx[i], idx[r]);
    out.push_back(members[idx[i]]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Per-instance outcome of one algorithm, the unit consumed by reports.
struct InstanceSummary {
  std::string set;
  std::size_t index = 0;
  std::string label;
  std::size_t n = 0;
  std::optional<double> rdd;
  std::optional<double> tf;
  std::string algorithm;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  std::optional<Cost> reference;
  std::string provenance;
  Cost best_cost = 0;
  bool solved = false;
  std::size_t solved_runs = 0;
  bool new_best = false;
  double mean_cost = 0;
  double mean_evaluations = 0;
  double mean_iterations = 0;
  std::optional<double> mean_deviation;
  std::size_t zero_misses = 0;
};

inline InstanceSummary summarize_instance(const std::string& set, std::size_t index, const Instance& inst,
                                          const RunStats& stats, std::uint64_t seed = 0,
                                          std::string provenance = {}) {
  InstanceSummary s;
  s.set = set;
  s.index = index;
  s.n = inst.size();
  if (inst.meta()) {
    s.rdd = inst.meta()->rdd;
    s.tf = inst.meta()->tf;
    s.label = inst.meta()->label;
  }
  if (s.label.empty()) s.label = set + " #" + std::to_string(index);
  s.algorithm = stats.algorithm;
  s.restarts = stats.restarts;
  s.seed = seed;
  s.reference = stats.reference;
  s.provenance = std::move(provenance);
  s.best_cost = stats.best_cost;
  s.solved = stats.solved;
  s.solved_runs = stats.solved_runs;
  s.new_best = stats.new_best;
  s.mean_cost = stats.mean_cost;
  s.mean_evaluations = stats.mean_evaluations;
  s.mean_iterations = stats.mean_iterations;
  s.mean_deviation = stats.mean_deviation;
  s.zero_misses = stats.zero_misses;
  return s;
}

struct GridCell {
  std::size_t instances = 0;
  std::size_t solved = 0;
  double deviation_sum = 0;
  std::size_t deviation_count = 0;

  std::optional<double> mean_deviation() const {
    if (deviation_count == 0) return std::nullopt;
    return deviation_sum / static_cast<double>(deviation_count);
  }
};

/// Solved counts and mean deviations on the RDD x TF grid. Axes hold the
/// distinct values observed, ascending; cells[r][t] is (rdd[r], tf[t]).
struct DifficultyReport {
  std::vector<double> rdd_values;
  std::vector<double> tf_values;
  std::vector<std::vector<GridCell>> cells;
  std::vector<InstanceSummary> instances;

  const GridCell& cell(double rdd, double tf) const { return cells[axis_pos(rdd_values, rdd)][axis_pos(tf_values, tf)]; }
  GridCell& cell(double rdd, double tf) { return cells[axis_pos(rdd_values, rdd)][axis_pos(tf_values, tf)]; }

 private:
  static std::size_t axis_pos(const std::vector<double>& axis, double v) {
    for (std::size_t i = 0; i < axis.size(); ++i)
      if (std::abs(axis[i] - v) < 1e-9) return i;
    throw usage_error("grid has no axis value " + std::to_string(v));
  }
};

inline DifficultyReport aggregate(const std::vector<InstanceSummary>& summaries) {
  DifficultyReport rep;
  auto add_axis = [](std::vector<double>& axis, double v) {
    for (double a : axis)
      if (std::abs(a - v) < 1e-9) return;
    axis.push_back(v);
  };
  for (const auto& s : summaries) {
    if (!s.rdd || !s.tf) throw usage_error("aggregate: " + s.label + " lacks RDD/TF metadata");
    add_axis(rep.rdd_values, *s.rdd);
    add_axis(rep.tf_values, *s.tf);
  }
  std::sort(rep.rdd_values.begin(), rep.rdd_values.end());
  std::sort(rep.tf_values.begin(), rep.tf_values.end());
  rep.cells.assign(rep.rdd_values.size(), std::vector<GridCell>(rep.tf_values.size()));
  for (const auto& s : summaries) {
    auto& c = rep.cell(*s.rdd, *s.tf);
    ++c.instances;
    if (s.solved) ++c.solved;
    if (s.mean_deviation) {
      c.deviation_sum += *s.mean_deviation;
      ++c.deviation_count;
    }
  }
  rep.instances = summaries;
  return rep;
}

}  // namespace smtwt
