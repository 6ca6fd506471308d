#pragma once

// Exhaustive oracles for small instances and enumeration of distinct optimal
// sequences.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "smtwt/model.hpp"
#include "smtwt/search.hpp"

namespace smtwt {

inline constexpr std::size_t kBruteForceMaxJobs = 12;

struct Optimum {
  Cost cost = 0;
  Permutation perm;
};

/// Minimum over all n! sequences; the lexicographically first argmin is
/// returned. Limited to n <= 12.
inline Optimum brute_force(const Instance& inst) {
  const std::size_t n = inst.size();
  if (n > kBruteForceMaxJobs)
    throw usage_error("brute_force: n = " + std::to_string(n) + " exceeds " + std::to_string(kBruteForceMaxJobs));
  std::vector<int> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  Optimum best{std::numeric_limits<Cost>::max(), {}};
  std::vector<int> arg;
  do {
    const Cost c = sequence_cost(seq, inst);
    if (c < best.cost) {
      best.cost = c;
      arg = seq;
    }
  } while (std::next_permutation(seq.begin(), seq.end()));
  best.perm = adopt_sequence(std::move(arg));
  return best;
}

struct OptimaSet {
  Cost optimum = 0;
  std::vector<Permutation> members;  // sorted, distinct
  bool truncated = false;            // more than `cap` optimal sequences exist
  std::size_t cap = 0;
  std::optional<std::uint64_t> total;  // number of optimal sequences, when counted
};

enum class PruneRule {
  none,       // plain enumeration of all n! sequences
  prefix,     // cost of the scheduled prefix exceeds the target
  lookahead,  // prefix cost plus each open job's tardiness if sequenced next
  memo,       // subset memoization, scheduling from the back (n <= 128)
};

namespace detail {

class OptimaDfs {
 public:
  OptimaDfs(const Instance& inst, Cost target, std::size_t cap, PruneRule rule)
      : inst_(inst), target_(target), cap_(cap), rule_(rule), used_(inst.size(), false) {
    prefix_.reserve(inst.size());
  }

  void run(OptimaSet& out) {
    out_ = &out;
    visit(0, 0);
  }

 private:
  // Every unscheduled job completes no earlier than t + p_j.
  Cost open_jobs_bound(Time t) const {
    Cost lb = 0;
    for (std::size_t j = 0; j < used_.size(); ++j)
      if (!used_[j]) lb += inst_.job_cost(j, t + inst_.processing(j));
    return lb;
  }

  // Returns false once enumeration must stop.
  bool visit(Time t, Cost partial) {
    const std::size_t n = inst_.size();
    if (prefix_.size() == n) {
      if (partial != target_) return true;
      if (out_->members.size() == cap_) {
        out_->truncated = true;
        return false;
      }
      out_->members.push_back(adopt_sequence(prefix_));
      return true;
    }
    if (rule_ == PruneRule::lookahead && partial + open_jobs_bound(t) > target_) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used_[j]) continue;
      const Time c = t + inst_.processing(j);
      const Cost next = partial + inst_.job_cost(j, c);
      if (rule_ != PruneRule::none && next > target_) continue;
      used_[j] = true;
      prefix_.push_back(static_cast<int>(j));
      const bool go_on = visit(c, next);
      prefix_.pop_back();
      used_[j] = false;
      if (!go_on) return false;
    }
    return true;
  }

  const Instance& inst_;
  Cost target_;
  std::size_t cap_;
  PruneRule rule_;
  std::vector<bool> used_;
  std::vector<int> prefix_;
  OptimaSet* out_ = nullptr;
};

}  // namespace detail

/// Optimal sequences of one instance, found by branch and bound over job
/// subsets. Jobs are placed from the last position backwards: the open jobs
/// always occupy [0, P(open)], so the best cost of completing a state
/// depends only on the open set and is memoized per set. Counts of optimal
/// completions are kept per state, which gives the number of optima without
/// listing them and lets samples be drawn uniformly.
class OptimalSequences {
 public:
  static constexpr std::size_t kMaxJobs = 128;
  static constexpr std::size_t kDefaultMaxStates = 20'000'000;

  /// Finds the optimum if it is <= `upper`. Throws usage_error when more
  /// than `max_states` subsets would have to be stored.
  OptimalSequences(const Instance& inst, Cost upper, std::size_t max_states = kDefaultMaxStates)
      : inst_(inst), max_states_(max_states) {
    if (inst.size() > kMaxJobs) throw usage_error("OptimalSequences: n exceeds 128");
    Key all{};
    for (std::size_t j = 0; j < inst.size(); ++j) all = with(all, j);
    all_ = all;
    const Cost r = solve(all_, inst.total_processing(), upper);
    if (r <= upper) optimum_ = r;
  }

  /// Empty when the optimum exceeds the bound given at construction.
  std::optional<Cost> optimum() const { return optimum_; }

  /// Number of optimal sequences, saturating at UINT64_MAX.
  std::uint64_t count() {
    if (!optimum_) return 0;
    return counted(all_, inst_.total_processing()).count;
  }

  std::size_t states() const { return memo_.size(); }

  /// q[j*n+k]: fraction of optimal sequences in which job j precedes job k.
  std::vector<double> precedence_fractions() {
    const std::size_t n = inst_.size();
    std::vector<double> q(n * n, 0.0);
    if (!optimum_) return q;
    count();
    std::vector<std::pair<int, Key>> order;
    for (const auto& [key, node] : nodes_)
      order.emplace_back(std::popcount(key[0]) + std::popcount(key[1]), key);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    // paths[S]: optimal ways to fill the positions after the open set S.
    std::unordered_map<Key, double, KeyHash> paths{{all_, 1.0}};
    for (const auto& [size, key] : order) {
      const auto it = paths.find(key);
      if (it == paths.end()) continue;
      const double ahead = it->second;
      const Node& node = nodes_.at(key);
      if (node.free) {
        // Each pair is ordered either way in half of the completions.
        for (int j : node.children)
          for (int k : node.children)
            if (j != k) q[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k)] += ahead * node.weight / 2;
        continue;
      }
      for (int k : node.children) {
        const Key child = without(key, static_cast<std::size_t>(k));
        const double through = ahead * nodes_.at(child).weight;
        paths[child] += ahead;
        // Jobs still open in `child` all precede k.
        for (std::size_t j = 0; j < n; ++j)
          if (has(child, j)) q[j * n + static_cast<std::size_t>(k)] += through;
      }
    }
    const double total = nodes_.at(all_).weight;
    for (auto& x : q) x /= total;
    return q;
  }

  /// Up to `limit` optimal sequences, in no particular order.
  std::vector<Permutation> enumerate(std::size_t limit) {
    std::vector<Permutation> out;
    if (!optimum_ || limit == 0) return out;
    std::vector<int> seq(inst_.size());
    list(all_, inst_.total_processing(), inst_.size(), seq, out, limit);
    return out;
  }

  /// `k` distinct optimal sequences drawn uniformly (all of them if there
  /// are at most `k`).
  std::vector<Permutation> sample(std::size_t k, std::uint64_t seed) {
    if (!optimum_) return {};
    if (count() <= k) return enumerate(k);
    Rng rng(seed);
    std::set<Permutation> seen;
    std::vector<Permutation> out;
    std::vector<int> seq(inst_.size());
    while (out.size() < k) {
      Key cur = all_;
      Time t = inst_.total_processing();
      for (std::size_t pos = inst_.size(); pos-- > 0;) {
        const auto& node = counted(cur, t);
        double x = rng.uniform01() * node.weight;
        int pick = node.children.back();
        for (int j : node.children) {
          const double wj = counted(without(cur, static_cast<std::size_t>(j)), t - inst_.processing(j)).weight;
          if (x < wj) {
            pick = j;
            break;
          }
          x -= wj;
        }
        seq[pos] = pick;
        cur = without(cur, static_cast<std::size_t>(pick));
        t -= inst_.processing(pick);
      }
      auto perm = adopt_sequence(seq);
      if (seen.insert(perm).second) out.push_back(std::move(perm));
    }
    return out;
  }

 private:
  using Key = std::array<std::uint64_t, 2>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return static_cast<std::size_t>(splitmix64(k[0] ^ splitmix64(k[1])));
    }
  };
  struct Entry {
    Cost value = 0;
    bool exact = false;  // otherwise `value` is a lower bound
  };
  struct Node {
    std::uint64_t count = 0;
    double weight = 0;  // count as a double, for sampling past 2^64
    std::vector<int> children;
    bool free = false;  // every order of the open jobs is optimal
  };

  static bool has(const Key& k, std::size_t j) { return (k[j / 64] >> (j % 64)) & 1u; }
  static Key with(Key k, std::size_t j) {
    k[j / 64] |= std::uint64_t{1} << (j % 64);
    return k;
  }
  static Key without(Key k, std::size_t j) {
    k[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    return k;
  }
  static bool empty(const Key& k) { return k[0] == 0 && k[1] == 0; }

  Cost last_cost(std::size_t j, Time t) const { return inst_.job_cost(j, t); }

  // No open job can be late, whatever the order.
  bool all_on_time(const Key& open, Time t) const {
    for (std::size_t j = 0; j < inst_.size(); ++j)
      if (has(open, j) && inst_.due(j) < t) return false;
    return true;
  }

  // Lower bound for sequencing the open set in [0, t].
  Cost bound(const Key& open, Time t) {
    ps_.clear();
    ds_.clear();
    Cost early = 0, best_last = std::numeric_limits<Cost>::max(), wmin = std::numeric_limits<Cost>::max();
    for (std::size_t j = 0; j < inst_.size(); ++j) {
      if (!has(open, j)) continue;
      const Cost e = inst_.job_cost(j, inst_.processing(j));
      early += e;
      best_last = std::min(best_last, inst_.job_cost(j, t) - e);
      wmin = std::min(wmin, inst_.weight(j));
      ps_.push_back(inst_.processing(j));
      ds_.push_back(inst_.due(j));
    }
    // Some job finishes at t; every job finishes no earlier than its p.
    const Cost last = early + best_last;
    // k-th completion is at least the k-th SPT completion; pair with EDD.
    std::sort(ps_.begin(), ps_.end());
    std::sort(ds_.begin(), ds_.end());
    Time c = 0;
    Cost tard = 0;
    for (std::size_t k = 0; k < ps_.size(); ++k) {
      c += ps_[k];
      tard += std::max<Time>(c - ds_[k], 0);
    }
    return std::max(last, wmin * tard);
  }

  // Best cost of the open set if it is <= budget, else a lower bound > budget.
  Cost solve(const Key& open, Time t, Cost budget) {
    if (empty(open)) return 0;
    auto it = memo_.find(open);
    if (it != memo_.end() && (it->second.exact || it->second.value > budget)) return it->second.value;
    if (all_on_time(open, t)) return store(open, 0, true);
    Cost known_lb = it != memo_.end() ? it->second.value : 0;
    const Cost lb = std::max(known_lb, bound(open, t));
    if (lb > budget) return store(open, lb, false);

    std::vector<std::pair<Cost, int>> order;
    for (std::size_t j = 0; j < inst_.size(); ++j)
      if (has(open, j)) order.emplace_back(last_cost(j, t), static_cast<int>(j));
    std::sort(order.begin(), order.end());

    constexpr Cost kInf = std::numeric_limits<Cost>::max();
    Cost best = kInf, lower = kInf;
    for (const auto& [c, j] : order) {
      const Cost limit = best == kInf ? budget : std::min(budget, best - 1);
      if (c > limit) {
        lower = std::min(lower, c);
        continue;
      }
      const Cost sub_budget = limit - c;
      const Cost r = solve(without(open, static_cast<std::size_t>(j)), t - inst_.processing(j), sub_budget);
      lower = std::min(lower, c + r);
      if (r <= sub_budget) best = c + r;
    }
    if (best <= budget) return store(open, best, true);
    return store(open, std::max(lower, budget + 1), false);
  }

  Cost store(const Key& open, Cost value, bool exact) {
    auto& e = memo_[open];
    e.value = exact ? value : std::max(e.value, value);
    e.exact = exact;
    if (memo_.size() > max_states_)
      throw usage_error("optimal sequence search exceeded " + std::to_string(max_states_) + " states");
    return e.value;
  }

  const Node& counted(const Key& open, Time t) {
    if (auto it = nodes_.find(open); it != nodes_.end()) return it->second;
    Node node;
    if (empty(open)) {
      node.count = 1;
      node.weight = 1;
    } else if (all_on_time(open, t)) {
      node.free = true;
      node.count = 1;
      node.weight = 1;
      std::uint64_t m = 0;
      for (std::size_t j = 0; j < inst_.size(); ++j) {
        if (!has(open, j)) continue;
        node.children.push_back(static_cast<int>(j));
        ++m;
        node.count = node.count > std::numeric_limits<std::uint64_t>::max() / m
                         ? std::numeric_limits<std::uint64_t>::max()
                         : node.count * m;
        node.weight *= static_cast<double>(m);
      }
    } else {
      const Cost g = memo_.at(open).value;
      for (std::size_t j = 0; j < inst_.size(); ++j) {
        if (!has(open, j)) continue;
        const Cost c = last_cost(j, t);
        if (c > g) continue;
        const Key child = without(open, j);
        const Time tc = t - inst_.processing(j);
        if (solve(child, tc, g - c) != g - c) continue;
        const Node& sub = counted(child, tc);
        node.children.push_back(static_cast<int>(j));
        node.count = sub.count > std::numeric_limits<std::uint64_t>::max() - node.count
                         ? std::numeric_limits<std::uint64_t>::max()
                         : node.count + sub.count;
        node.weight += sub.weight;
      }
    }
    return nodes_.emplace(open, std::move(node)).first->second;
  }

  bool list(const Key& open, Time t, std::size_t pos, std::vector<int>& seq, std::vector<Permutation>& out,
            std::size_t limit) {
    if (pos == 0) {
      out.push_back(adopt_sequence(seq));
      return out.size() < limit;
    }
    const std::vector<int> children = counted(open, t).children;
    for (int j : children) {
      seq[pos - 1] = j;
      if (!list(without(open, static_cast<std::size_t>(j)), t - inst_.processing(j), pos - 1, seq, out, limit))
        return false;
    }
    return true;
  }

  Instance inst_;
  std::size_t max_states_;
  Key all_{};
  std::optional<Cost> optimum_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
  std::unordered_map<Key, Node, KeyHash> nodes_;
  std::vector<Time> ps_, ds_;
};

/// Depth-first enumeration of every sequence whose cost equals `optimum`,
/// stopping after `cap` members. Tardiness contributions are nonnegative and
/// fixed once a job is placed, so pruning never discards an optimal sequence.
inline OptimaSet enumerate_optima(const Instance& inst, Cost optimum, std::size_t cap,
                                  PruneRule rule = PruneRule::memo) {
  if (cap == 0) throw usage_error("enumerate_optima: cap must be positive");
  OptimaSet out{optimum, {}, false, cap, std::nullopt};
  if (rule == PruneRule::memo && inst.size() <= OptimalSequences::kMaxJobs) {
    OptimalSequences all(inst, optimum);
    if (!all.optimum()) {
      out.total = 0;
      return out;
    }
    if (*all.optimum() < optimum)
      throw usage_error("enumerate_optima: target " + std::to_string(optimum) + " is above the optimum " +
                        std::to_string(*all.optimum()));
    out.total = all.count();
    out.members = all.enumerate(cap);
    out.truncated = *out.total > cap;
    std::sort(out.members.begin(), out.members.end());
    return out;
  }
  if (rule == PruneRule::memo) rule = PruneRule::lookahead;
  detail::OptimaDfs(inst, optimum, cap, rule).run(out);
  std::sort(out.members.begin(), out.members.end());
  return out;
}

/// Distinct final sequences of a multi-restart run that hit `optimum`. A
/// sample of the optimal set, not an enumeration.
inline OptimaSet collect_optima_by_search(const Instance& inst, Cost optimum, const AlgorithmConfig& cfg,
                                          std::size_t cap, unsigned threads = 1) {
  if (cap == 0) throw usage_error("collect_optima_by_search: cap must be positive");
  const auto stats = multistart(inst, cfg, std::nullopt, threads);
  std::unordered_set<Permutation, PermutationHash> seen;
  OptimaSet out{optimum, {}, false, cap, std::nullopt};
  for (const auto& run : stats.runs) {
    if (run.final_cost != optimum || seen.count(run.final_perm)) continue;
    if (seen.size() == cap) {
      out.truncated = true;
      break;
    }
    seen.insert(run.final_perm);
  }
  out.members.assign(seen.begin(), seen.end());
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace smtwt
