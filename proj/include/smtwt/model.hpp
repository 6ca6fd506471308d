#pragma once

// Single machine total weighted tardiness: instances, job sequences and the
// no-idle decoding of a sequence into a schedule.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smtwt/error.hpp"

namespace smtwt {

using Cost = std::int64_t;
using Time = std::int64_t;

/// Generator provenance attached to an instance, when known.
struct InstanceMeta {
  double rdd = 0.0;
  double tf = 0.0;
  std::string label;
};

/// n jobs with processing times, weights and due dates. Job j is stored at
/// index j - 1; due dates may be negative.
class Instance {
 public:
  Instance(std::vector<Time> processing, std::vector<Cost> weights, std::vector<Time> due,
           std::optional<InstanceMeta> meta = std::nullopt)
      : p_(std::move(processing)), w_(std::move(weights)), d_(std::move(due)), meta_(std::move(meta)) {
    if (p_.empty()) throw usage_error("instance must have at least one job");
    if (w_.size() != p_.size() || d_.size() != p_.size())
      throw usage_error("processing, weight and due-date arrays differ in length");
    for (std::size_t j = 0; j < p_.size(); ++j) {
      if (p_[j] < 1) throw usage_error("processing time of job " + std::to_string(j + 1) + " is not positive");
      if (w_[j] < 1) throw usage_error("weight of job " + std::to_string(j + 1) + " is not positive");
    }
  }

  std::size_t size() const noexcept { return p_.size(); }

  Time processing(std::size_t job) const { return p_[job]; }
  Cost weight(std::size_t job) const { return w_[job]; }
  Time due(std::size_t job) const { return d_[job]; }

  std::span<const Time> processing_times() const noexcept { return p_; }
  std::span<const Cost> weights() const noexcept { return w_; }
  std::span<const Time> due_dates() const noexcept { return d_; }

  /// Sum of all processing times (the makespan of every active schedule).
  Time total_processing() const { return std::accumulate(p_.begin(), p_.end(), Time{0}); }

  const std::optional<InstanceMeta>& meta() const noexcept { return meta_; }
  void set_meta(InstanceMeta meta) { meta_ = std::move(meta); }

  /// Weighted tardiness of `job` if it completes at `completion`.
  Cost job_cost(std::size_t job, Time completion) const {
    const Time late = completion - d_[job];
    return late > 0 ? w_[job] * late : 0;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.p_ == b.p_ && a.w_ == b.w_ && a.d_ == b.d_;
  }

 private:
  std::vector<Time> p_;
  std::vector<Cost> w_;
  std::vector<Time> d_;
  std::optional<InstanceMeta> meta_;
};

/// A processing sequence; a bijection on the job set. Internally jobs are
/// 0-based, externally (files, CLI, docs) 1-based.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n) {
    std::vector<int> seq(n);
    std::iota(seq.begin(), seq.end(), 0);
    return Permutation(std::move(seq), unchecked);
  }

  static Permutation from_zero_based(std::vector<int> seq) {
    validate(seq, 0);
    return Permutation(std::move(seq), unchecked);
  }

  static Permutation from_one_based(std::span<const int> seq) {
    std::vector<int> v(seq.begin(), seq.end());
    validate(v, 1);
    for (int& j : v) --j;
    return Permutation(std::move(v), unchecked);
  }

  std::vector<int> to_one_based() const {
    std::vector<int> out(seq_);
    for (int& j : out) ++j;
    return out;
  }

  std::size_t size() const noexcept { return seq_.size(); }
  int operator[](std::size_t pos) const { return seq_[pos]; }
  std::span<const int> jobs() const noexcept { return seq_; }
  const std::vector<int>& vec() const noexcept { return seq_; }

  auto operator<=>(const Permutation&) const = default;

 private:
  static constexpr struct Unchecked {} unchecked{};
  Permutation(std::vector<int> seq, Unchecked) : seq_(std::move(seq)) {}

  friend Permutation adopt_sequence(std::vector<int> seq);

  static void validate(const std::vector<int>& seq, int base) {
    const auto n = static_cast<int>(seq.size());
    std::vector<bool> seen(seq.size(), false);
    for (int job : seq) {
      const int idx = job - base;
      if (idx < 0 || idx >= n) throw usage_error("job index " + std::to_string(job) + " out of range");
      if (seen[idx]) throw usage_error("job index " + std::to_string(job) + " repeated");
      seen[idx] = true;
    }
  }

  std::vector<int> seq_;
};

// Wraps a sequence already known to be a bijection (produced by moves or
// shuffles inside the library). Only checked in debug builds.
inline Permutation adopt_sequence(std::vector<int> seq) {
#ifndef NDEBUG
  Permutation::validate(seq, 0);
#endif
  return Permutation(std::move(seq), Permutation::unchecked);
}

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int j : p.jobs()) {
      h ^= static_cast<std::size_t>(j) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Decoded active schedule. Per-job vectors are indexed by 0-based job id.
struct Schedule {
  std::vector<Time> start;
  std::vector<Time> completion;
  std::vector<Time> tardiness;
  Cost twt = 0;
};

inline void check_dimensions(const Permutation& perm, const Instance& inst) {
  if (perm.size() != inst.size())
    throw usage_error("permutation has " + std::to_string(perm.size()) + " jobs, instance has " +
                      std::to_string(inst.size()));
}

/// Start every job as early as possible in sequence order, from time 0.
inline Schedule decode(const Permutation& perm, const Instance& inst) {
  check_dimensions(perm, inst);
  const std::size_t n = inst.size();
  Schedule s{std::vector<Time>(n), std::vector<Time>(n), std::vector<Time>(n), 0};
  Time t = 0;
  for (int job : perm.jobs()) {
    s.start[job] = t;
    t += inst.processing(job);
    s.completion[job] = t;
    s.tardiness[job] = std::max<Time>(t - inst.due(job), 0);
    s.twt += inst.weight(job) * s.tardiness[job];
  }
  return s;
}

/// Total weighted tardiness of a raw 0-based sequence; no validation.
inline Cost sequence_cost(std::span<const int> seq, const Instance& inst) {
  Time t = 0;
  Cost total = 0;
  for (int job : seq) {
    t += inst.processing(job);
    total += inst.job_cost(job, t);
  }
  return total;
}

inline Cost evaluate(const Permutation& perm, const Instance& inst) {
  check_dimensions(perm, inst);
  return sequence_cost(perm.jobs(), inst);
}

}  // namespace smtwt
