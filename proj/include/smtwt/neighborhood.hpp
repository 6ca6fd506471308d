#pragma once

// Exchange (EX), forward shift (FSH) and backward shift (BSH) neighborhoods
// with best-improvement scanning.
//
// Move positions are 1-based with i < j:
//   EX(i,j)   swaps the jobs at i and j,
//   FSH(i,j)  takes the job at i and reinserts it at j,
//   BSH(i,j)  takes the job at j and reinserts it at i.
//
// A scan evaluates every neighbor once. Costs are computed incrementally from
// the completion times of the current sequence; each neighbor still counts as
// one objective evaluation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smtwt/model.hpp"

namespace smtwt {

enum class Operator { EX, FSH, BSH };

inline constexpr Operator kAllOperators[3] = {Operator::EX, Operator::FSH, Operator::BSH};

inline std::string_view to_string(Operator op) {
  switch (op) {
    case Operator::EX: return "EX";
    case Operator::FSH: return "FSH";
    case Operator::BSH: return "BSH";
  }
  return "?";
}

inline Operator parse_operator(std::string_view name) {
  if (name == "EX") return Operator::EX;
  if (name == "FSH") return Operator::FSH;
  if (name == "BSH") return Operator::BSH;
  throw usage_error("unknown operator '" + std::string(name) + "' (expected EX, FSH or BSH)");
}

struct Move {
  Operator op = Operator::EX;
  int i = 1;
  int j = 2;
  Cost delta = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Objective evaluations performed; monotone within a run.
struct EvalCounter {
  std::uint64_t count = 0;
  void add(std::uint64_t k) noexcept { count += k; }
};

inline std::uint64_t neighborhood_size(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

namespace detail {

// 0-based positions a < b, no checks.
inline void apply_in_place(Operator op, std::size_t a, std::size_t b, std::vector<int>& seq) {
  switch (op) {
    case Operator::EX:
      std::swap(seq[a], seq[b]);
      break;
    case Operator::FSH:
      std::rotate(seq.begin() + a, seq.begin() + a + 1, seq.begin() + b + 1);
      break;
    case Operator::BSH:
      std::rotate(seq.begin() + a, seq.begin() + b, seq.begin() + b + 1);
      break;
  }
}

inline void completion_times(std::span<const int> seq, const Instance& inst, std::vector<Time>& completion) {
  completion.resize(seq.size());
  Time t = 0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    t += inst.processing(seq[k]);
    completion[k] = t;
  }
}

// Calls visit(a, b, delta) for every neighbor, 0-based a < b. The visiting
// order is operator specific; callers that need lexicographic tie-breaking
// must compare (a, b) themselves.
template <class Visit>
void for_each_delta(std::span<const int> seq, std::span<const Time> C, const Instance& inst, Operator op,
                    Visit&& visit) {
  const std::size_t n = seq.size();
  auto f = [&](std::size_t pos, Time completion) { return inst.job_cost(seq[pos], completion); };
  auto start = [&](std::size_t pos) { return pos == 0 ? Time{0} : C[pos - 1]; };

  switch (op) {
    case Operator::EX:
      for (std::size_t a = 0; a + 1 < n; ++a) {
        const int x = seq[a];
        const Time px = inst.processing(x);
        const Time sa = start(a);
        const Cost fx_old = f(a, C[a]);
        for (std::size_t b = a + 1; b < n; ++b) {
          const int y = seq[b];
          const Time py = inst.processing(y);
          const Time shift = py - px;
          Cost mid = 0;
          if (shift != 0) {
            for (std::size_t k = a + 1; k < b; ++k) mid += f(k, C[k] + shift) - f(k, C[k]);
          }
          const Cost delta = inst.job_cost(y, sa + py) - fx_old + mid + inst.job_cost(x, C[b]) - f(b, C[b]);
          visit(a, b, delta);
        }
      }
      break;
    case Operator::FSH:
      for (std::size_t a = 0; a + 1 < n; ++a) {
        const int x = seq[a];
        const Time px = inst.processing(x);
        const Cost fx_old = f(a, C[a]);
        Cost acc = 0;
        for (std::size_t b = a + 1; b < n; ++b) {
          acc += f(b, C[b] - px) - f(b, C[b]);
          visit(a, b, acc + inst.job_cost(x, C[b]) - fx_old);
        }
      }
      break;
    case Operator::BSH:
      for (std::size_t b = 1; b < n; ++b) {
        const int y = seq[b];
        const Time py = inst.processing(y);
        const Cost fy_old = f(b, C[b]);
        Cost acc = 0;
        for (std::size_t a = b; a-- > 0;) {
          acc += f(a, C[a] + py) - f(a, C[a]);
          visit(a, b, acc + inst.job_cost(y, start(a) + py) - fy_old);
        }
      }
      break;
  }
}

struct BestDelta {
  bool found = false;
  std::size_t a = 0;
  std::size_t b = 0;
  Cost delta = 0;
};

// Most negative delta; ties go to the lexicographically first (a, b).
inline BestDelta scan_best(std::span<const int> seq, std::span<const Time> C, const Instance& inst, Operator op) {
  BestDelta best;
  for_each_delta(seq, C, inst, op, [&](std::size_t a, std::size_t b, Cost delta) {
    if (delta >= 0) return;
    if (!best.found || delta < best.delta || (delta == best.delta && (a < best.a || (a == best.a && b < best.b)))) {
      best = {true, a, b, delta};
    }
  });
  return best;
}

inline void check_move(const Move& m, std::size_t n) {
  if (m.i < 1 || m.j < 1 || static_cast<std::size_t>(m.j) > n || static_cast<std::size_t>(m.i) > n)
    throw usage_error("move position out of range");
  if (m.i >= m.j) throw usage_error("move requires i < j");
}

}  // namespace detail

/// Neighbor of `perm` under `move`; `perm` is left untouched.
inline Permutation apply(const Move& move, const Permutation& perm) {
  detail::check_move(move, perm.size());
  std::vector<int> seq = perm.vec();
  detail::apply_in_place(move.op, static_cast<std::size_t>(move.i - 1), static_cast<std::size_t>(move.j - 1), seq);
  return adopt_sequence(std::move(seq));
}

/// All (i, j) with 1 <= i < j <= n, i ascending then j ascending. This order
/// fixes tie-breaking among equally good moves.
inline std::vector<Move> enumerate_moves(Operator op, std::size_t n) {
  std::vector<Move> moves;
  moves.reserve(neighborhood_size(n));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) moves.push_back({op, static_cast<int>(i), static_cast<int>(j), 0});
  return moves;
}

/// Every neighbor with its cost change, in enumeration order.
inline std::vector<Move> scan_moves(const Permutation& perm, const Instance& inst, Operator op, EvalCounter& counter) {
  check_dimensions(perm, inst);
  std::vector<Time> C;
  detail::completion_times(perm.jobs(), inst, C);
  const std::size_t n = perm.size();
  std::vector<Move> moves(neighborhood_size(n));
  // Row offset of pair (a, b) in lexicographic order.
  auto index = [n](std::size_t a, std::size_t b) { return a * (2 * n - a - 1) / 2 + (b - a - 1); };
  detail::for_each_delta(perm.jobs(), C, inst, op, [&](std::size_t a, std::size_t b, Cost delta) {
    moves[index(a, b)] = {op, static_cast<int>(a + 1), static_cast<int>(b + 1), delta};
  });
  counter.add(moves.size());
  return moves;
}

/// Best strictly improving move, or nothing at a local optimum. Adds
/// n(n-1)/2 to the counter.
inline std::optional<Move> best_move(const Permutation& perm, const Instance& inst, Operator op,
                                     EvalCounter& counter) {
  check_dimensions(perm, inst);
  std::vector<Time> C;
  detail::completion_times(perm.jobs(), inst, C);
  const auto best = detail::scan_best(perm.jobs(), C, inst, op);
  counter.add(neighborhood_size(perm.size()));
  if (!best.found) return std::nullopt;
  return Move{op, static_cast<int>(best.a + 1), static_cast<int>(best.b + 1), best.delta};
}

}  // namespace smtwt
