#pragma once

// OR-Library weighted tardiness files, the random instance generator and the
// registry of optimal / best-known objective values.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smtwt/model.hpp"
#include "smtwt/random.hpp"

namespace smtwt {

struct BenchmarkSet {
  std::string name;
  std::size_t n = 0;
  std::vector<Instance> instances;

  std::size_t size() const noexcept { return instances.size(); }

  /// Stable identifier of the 1-based instance `index`, e.g. "wt50 #109".
  std::string label(std::size_t index) const {
    return (name.empty() ? std::string("set") : name) + " #" + std::to_string(index);
  }
};

namespace detail {

inline std::vector<std::int64_t> read_integers(std::istream& in, std::string_view what) {
  std::vector<std::int64_t> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      throw usage_error(std::string(what) + ": token '" + tok + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Instance i occupies 3n consecutive integers: n processing times, n
/// weights, n due dates.
inline BenchmarkSet parse_orlib(std::istream& in, std::size_t n, std::string name = {}) {
  if (n < 1) throw usage_error("parse_orlib: n must be at least 1");
  const auto tokens = detail::read_integers(in, "parse_orlib");
  if (tokens.size() % (3 * n) != 0)
    throw usage_error("parse_orlib: " + std::to_string(tokens.size()) + " integers is not a multiple of 3n = " +
                      std::to_string(3 * n));
  BenchmarkSet set{std::move(name), n, {}};
  const std::size_t count = tokens.size() / (3 * n);
  set.instances.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto* base = tokens.data() + 3 * n * i;
    std::vector<Time> p(base, base + n);
    std::vector<Cost> w(base + n, base + 2 * n);
    std::vector<Time> d(base + 2 * n, base + 3 * n);
    try {
      set.instances.emplace_back(std::move(p), std::move(w), std::move(d));
    } catch (const Error& e) {
      throw usage_error("parse_orlib: instance " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return set;
}

inline BenchmarkSet parse_orlib(std::string_view text, std::size_t n, std::string name = {}) {
  std::istringstream in{std::string(text)};
  return parse_orlib(in, n, std::move(name));
}

inline BenchmarkSet load_orlib(const std::string& path, std::size_t n, std::string name = {}) {
  auto in = detail::open_input(path);
  return parse_orlib(in, n, std::move(name));
}

inline void write_orlib(std::ostream& out, const BenchmarkSet& set) {
  constexpr std::size_t kPerLine = 20;
  auto emit = [&](auto values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << (k % kPerLine == 0 ? "" : " ") << values[k];
      if (k % kPerLine == kPerLine - 1 || k + 1 == values.size()) out << '\n';
    }
  };
  for (const auto& inst : set.instances) {
    emit(inst.processing_times());
    emit(inst.weights());
    emit(inst.due_dates());
  }
}

inline std::string write_orlib(const BenchmarkSet& set) {
  std::ostringstream out;
  write_orlib(out, set);
  return out.str();
}

// ---------------------------------------------------------------------------
// RDD / TF metadata

inline constexpr double kGridValues[5] = {0.2, 0.4, 0.6, 0.8, 1.0};

/// (RDD, TF) cell of the 1-based OR-Library instance index. The files hold
/// five instances per cell; RDD varies slowest, TF fastest, both ascending.
inline std::pair<double, double> orlib_grid_cell(std::size_t index) {
  if (index < 1) throw usage_error("instance index is 1-based");
  const std::size_t cell = ((index - 1) / 5) % 25;
  return {kGridValues[cell / 5], kGridValues[cell % 5]};
}

inline void attach_grid_metadata(BenchmarkSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto [rdd, tf] = orlib_grid_cell(i + 1);
    set.instances[i].set_meta({rdd, tf, set.label(i + 1)});
  }
}

/// CSV with header `index,rdd,tf`.
inline void apply_metadata_csv(BenchmarkSet& set, std::istream& in) {
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("index", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw usage_error("metadata csv: malformed row '" + line + "'");
    std::size_t index = 0;
    double rdd = 0, tf = 0;
    try {
      index = std::stoul(a);
      rdd = std::stod(b);
      tf = std::stod(c);
    } catch (const std::exception&) {
      throw usage_error("metadata csv: malformed row '" + line + "'");
    }
    if (index < 1 || index > set.size()) throw usage_error("metadata csv: index " + a + " out of range");
    set.instances[index - 1].set_meta({rdd, tf, set.label(index)});
  }
}

inline void write_metadata_csv(std::ostream& out, const BenchmarkSet& set) {
  out << "index,rdd,tf\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& m = set.instances[i].meta();
    if (!m) throw usage_error("instance " + std::to_string(i + 1) + " has no metadata");
    out << i + 1 << ',' << m->rdd << ',' << m->tf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Generator

struct GeneratorConfig {
  std::size_t n = 40;
  double rdd = 0.2;
  double tf = 0.2;
  std::uint64_t seed = 0;
  bool clamp_negative_due_dates = false;

  void validate() const {
    if (n < 1) throw usage_error("generator: n must be at least 1");
    if (!(rdd > 0.0 && rdd <= 1.0)) throw usage_error("generator: rdd must lie in (0, 1]");
    if (!(tf > 0.0 && tf <= 1.0)) throw usage_error("generator: tf must lie in (0, 1]");
  }
};

namespace detail {

// Products like P * 0.7 carry binary rounding noise; snap to the nearest
// integer when within 1e-9 relative before taking ceil/floor.
inline double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

}  // namespace detail

/// Integer due-date range {ceil(lo), ..., floor(hi)} for total processing P.
/// When the real interval contains no integer, the integer nearest its
/// midpoint is the only admissible value.
inline std::pair<Time, Time> due_date_range(Time total_processing, double rdd, double tf) {
  const double P = static_cast<double>(total_processing);
  const double lo = detail::snap(P * (1.0 - tf - rdd / 2.0));
  const double hi = detail::snap(P * (1.0 - tf + rdd / 2.0));
  auto a = static_cast<Time>(std::ceil(lo));
  auto b = static_cast<Time>(std::floor(hi));
  if (a > b) a = b = static_cast<Time>(std::llround((lo + hi) / 2.0));
  return {a, b};
}

/// p ~ U{1..100}, w ~ U{1..10}, d ~ U{due_date_range(P)}; deterministic in cfg.
inline Instance generate(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<Time> p(cfg.n);
  std::vector<Cost> w(cfg.n);
  std::vector<Time> d(cfg.n);
  for (auto& x : p) x = rng.uniform_int(1, 100);
  for (auto& x : w) x = rng.uniform_int(1, 10);
  Time P = 0;
  for (auto x : p) P += x;
  const auto [lo, hi] = due_date_range(P, cfg.rdd, cfg.tf);
  for (auto& x : d) {
    x = rng.uniform_int(lo, hi);
    if (cfg.clamp_negative_due_dates && x < 0) x = 0;
  }
  return Instance(std::move(p), std::move(w), std::move(d), InstanceMeta{cfg.rdd, cfg.tf, {}});
}

/// `per_cell` instances for every (RDD, TF) pair of the 5x5 grid, in OR-Library
/// order (RDD slowest). Instance k uses seed derive_seed(seed, k).
inline BenchmarkSet generate_grid(std::size_t n, std::size_t per_cell, std::uint64_t seed, std::string name = {},
                                  bool clamp = false) {
  BenchmarkSet set{std::move(name), n, {}};
  std::size_t k = 0;
  for (double rdd : kGridValues)
    for (double tf : kGridValues)
      for (std::size_t r = 0; r < per_cell; ++r, ++k) {
        set.instances.push_back(generate({n, rdd, tf, derive_seed(seed, k), clamp}));
        auto meta = *set.instances.back().meta();
        meta.label = set.label(k + 1);
        set.instances.back().set_meta(meta);
      }
  return set;
}

// ---------------------------------------------------------------------------
// Best-known registry

enum class Provenance { proven_optimal, best_known };

inline const char* to_string(Provenance p) {
  return p == Provenance::proven_optimal ? "proven-optimal" : "best-known";
}

struct BestKnown {
  Cost cost = 0;
  Provenance provenance = Provenance::best_known;
};

/// Default provenance by set name: wt40 and wt50 optima are proven.
inline Provenance default_provenance(std::string_view set_name) {
  return (set_name == "wt40" || set_name == "wt50") ? Provenance::proven_optimal : Provenance::best_known;
}

class BestKnownRegistry {
 public:
  void add(const std::string& set_name, std::size_t index, BestKnown value) {
    entries_[{set_name, index}] = value;
  }

  /// One integer per line; line i is the value for instance i.
  void load(const std::string& set_name, std::istream& in) { load(set_name, in, default_provenance(set_name)); }

  void load(const std::string& set_name, std::istream& in, Provenance provenance) {
    const auto values = detail::read_integers(in, "best-known file");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0) throw usage_error("best-known file: negative value on line " + std::to_string(i + 1));
      add(set_name, i + 1, {values[i], provenance});
    }
  }

  void load_file(const std::string& set_name, const std::string& path) {
    auto in = detail::open_input(path);
    load(set_name, in);
  }

  bool contains(const std::string& set_name, std::size_t index) const {
    return entries_.count({set_name, index}) != 0;
  }

  const BestKnown& lookup(const std::string& set_name, std::size_t index) const {
    auto it = entries_.find({set_name, index});
    if (it == entries_.end())
      throw usage_error("no best-known value for " + set_name + " #" + std::to_string(index));
    return it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::pair<std::string, std::size_t>, BestKnown> entries_;
};

}  // namespace smtwt
