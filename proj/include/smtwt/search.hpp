#pragma once

// Best-improvement hillclimbing, variable neighborhood descent over an
// ordered operator list, and the multi-restart protocol.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "smtwt/deviation.hpp"
#include "smtwt/model.hpp"
#include "smtwt/neighborhood.hpp"
#include "smtwt/random.hpp"

namespace smtwt {

enum class AlgorithmKind { hillclimb, vnd };

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::hillclimb;
  std::vector<Operator> order{Operator::EX};
  std::size_t restarts = 100;
  std::uint64_t seed = 0;
  // 0 means unbounded.
  std::uint64_t iteration_cap = 0;

  static AlgorithmConfig hillclimb(Operator op, std::size_t restarts = 100, std::uint64_t seed = 0) {
    return {AlgorithmKind::hillclimb, {op}, restarts, seed, 0};
  }
  static AlgorithmConfig vnd(std::vector<Operator> order, std::size_t restarts = 100, std::uint64_t seed = 0) {
    return {AlgorithmKind::vnd, std::move(order), restarts, seed, 0};
  }

  void validate() const {
    if (order.empty()) throw usage_error("algorithm needs at least one operator");
    if (kind == AlgorithmKind::hillclimb && order.size() != 1)
      throw usage_error("hillclimb takes exactly one operator");
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b)
        if (order[a] == order[b]) throw usage_error("vnd operator list repeats " + std::string(to_string(order[a])));
    if (restarts < 1) throw usage_error("restarts must be at least 1");
  }

  /// `hillclimb:EX` or `vnd:BSH,FSH,EX`.
  std::string name() const {
    std::string s = kind == AlgorithmKind::hillclimb ? "hillclimb:" : "vnd:";
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k) s += ',';
      s += to_string(order[k]);
    }
    return s;
  }
};

/// Parses the `hillclimb:<OP>` / `vnd:<OP>,<OP>,...` grammar.
inline AlgorithmConfig parse_algorithm(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw usage_error("algorithm '" + std::string(spec) + "' lacks ':'");
  const auto head = spec.substr(0, colon);
  auto rest = spec.substr(colon + 1);
  AlgorithmConfig cfg;
  if (head == "hillclimb") {
    cfg.kind = AlgorithmKind::hillclimb;
  } else if (head == "vnd") {
    cfg.kind = AlgorithmKind::vnd;
  } else {
    throw usage_error("unknown algorithm '" + std::string(head) + "'");
  }
  cfg.order.clear();
  while (true) {
    const auto comma = rest.find(',');
    cfg.order.push_back(parse_operator(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  cfg.validate();
  return cfg;
}

struct RunRecord {
  std::size_t run_index = 0;
  std::uint64_t start_seed = 0;
  Permutation start;
  Cost start_cost = 0;
  Permutation final_perm;
  Cost final_cost = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t iterations = 0;
};

/// Optional hook receiving the cost after every accepted move.
using CostObserver = std::function<void(Cost)>;

namespace detail {

inline RunRecord descend(const Instance& inst, std::span<const Operator> order, const Permutation& start,
                         EvalCounter& counter, std::uint64_t iteration_cap, const CostObserver& observe) {
  check_dimensions(start, inst);
  std::vector<int> seq = start.vec();
  std::vector<Time> C;
  completion_times(seq, inst, C);
  Cost cost = sequence_cost(seq, inst);
  const std::uint64_t evals_before = counter.count;

  RunRecord rec;
  rec.start = start;
  rec.start_cost = cost;

  std::size_t k = 0;
  while (k < order.size()) {
    const auto best = scan_best(seq, C, inst, order[k]);
    counter.add(neighborhood_size(seq.size()));
    if (!best.found) {
      ++k;
      continue;
    }
    if (iteration_cap != 0 && rec.iterations >= iteration_cap)
      throw invariant_error("iteration cap of " + std::to_string(iteration_cap) + " reached");
    apply_in_place(order[k], best.a, best.b, seq);
    completion_times(seq, inst, C);
    const Cost updated = sequence_cost(seq, inst);
    if (updated != cost + best.delta)
      throw invariant_error("incremental delta " + std::to_string(best.delta) + " disagrees with re-evaluation (" +
                            std::to_string(cost) + " -> " + std::to_string(updated) + ")");
    cost = updated;
    ++rec.iterations;
    if (observe) observe(cost);
    k = 0;
  }

  rec.final_perm = adopt_sequence(std::move(seq));
  rec.final_cost = cost;
  rec.evaluations = counter.count - evals_before;
  return rec;
}

}  // namespace detail

/// Applies the best improving `op` move until none is left.
inline RunRecord hillclimb(const Instance& inst, Operator op, const Permutation& start, EvalCounter& counter,
                           const CostObserver& observe = {}) {
  const Operator order[1] = {op};
  return detail::descend(inst, order, start, counter, 0, observe);
}

/// Variable neighborhood descent: scan operator k; on improvement apply the
/// move and restart from the first operator, otherwise advance to k + 1.
/// Ends in a local optimum of every listed operator.
inline RunRecord vnd(const Instance& inst, std::span<const Operator> order, const Permutation& start,
                     EvalCounter& counter, const CostObserver& observe = {}) {
  AlgorithmConfig::vnd({order.begin(), order.end()}, 1).validate();
  return detail::descend(inst, order, start, counter, 0, observe);
}

/// Single trajectory of `cfg` from `start`, honoring its iteration cap.
inline RunRecord run_algorithm(const Instance& inst, const AlgorithmConfig& cfg, const Permutation& start,
                               EvalCounter& counter, const CostObserver& observe = {}) {
  return detail::descend(inst, cfg.order, start, counter, cfg.iteration_cap, observe);
}

struct RunStats {
  std::string algorithm;
  std::size_t restarts = 0;
  std::vector<RunRecord> runs;

  Cost best_cost = 0;
  Permutation best_perm;
  std::optional<Cost> reference;  // registered optimum / best-known value
  bool solved = false;            // best_cost == reference
  bool new_best = false;          // best_cost < reference
  std::size_t solved_runs = 0;

  double mean_cost = 0;
  double mean_evaluations = 0;
  double mean_iterations = 0;
  // Mean percent deviation over runs where it is defined.
  std::optional<double> mean_deviation;
  std::size_t zero_misses = 0;  // runs with reference 0 and a positive cost
};

/// Summary statistics over finished runs. Runs below the reference mark the
/// result as a new best and are excluded from the deviation mean.
inline RunStats summarize(std::string algorithm, std::vector<RunRecord> runs, std::optional<Cost> reference) {
  if (runs.empty()) throw usage_error("summarize: no runs");
  RunStats s;
  s.algorithm = std::move(algorithm);
  s.restarts = runs.size();
  s.reference = reference;
  s.best_cost = std::numeric_limits<Cost>::max();
  double sum_cost = 0, sum_evals = 0, sum_iters = 0, sum_dev = 0;
  std::size_t dev_count = 0;
  for (const auto& r : runs) {
    if (r.final_cost < s.best_cost) {
      s.best_cost = r.final_cost;
      s.best_perm = r.final_perm;
    }
    sum_cost += static_cast<double>(r.final_cost);
    sum_evals += static_cast<double>(r.evaluations);
    sum_iters += static_cast<double>(r.iterations);
    if (reference) {
      if (r.final_cost < *reference) {
        s.new_best = true;
        continue;
      }
      if (r.final_cost == *reference) ++s.solved_runs;
      const auto dev = deviation(r.final_cost, *reference);
      if (dev) {
        sum_dev += *dev;
        ++dev_count;
      } else {
        ++s.zero_misses;
      }
    }
  }
  const auto count = static_cast<double>(runs.size());
  s.mean_cost = sum_cost / count;
  s.mean_evaluations = sum_evals / count;
  s.mean_iterations = sum_iters / count;
  if (dev_count) s.mean_deviation = sum_dev / static_cast<double>(dev_count);
  s.solved = reference && s.best_cost == *reference;
  s.runs = std::move(runs);
  return s;
}

/// Runs cfg.restarts independent trajectories. Run r starts from a random
/// permutation drawn with seed derive_seed(cfg.seed, r); results do not depend
/// on `threads`.
inline RunStats multistart(const Instance& inst, const AlgorithmConfig& cfg, std::optional<Cost> reference = {},
                           unsigned threads = 1) {
  cfg.validate();
  std::vector<RunRecord> runs(cfg.restarts);
  auto one_run = [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(cfg.seed, r);
    Rng rng(seed);
    const auto start = random_permutation(inst.size(), rng);
    EvalCounter counter;
    auto rec = run_algorithm(inst, cfg, start, counter);
    rec.run_index = r;
    rec.start_seed = seed;
    runs[r] = std::move(rec);
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.restarts)));
  if (threads == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) one_run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < cfg.restarts;) {
          try {
            one_run(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return summarize(cfg.name(), std::move(runs), reference);
}

}  // namespace smtwt
