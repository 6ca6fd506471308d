#pragma once

// Machine-readable exports (CSV, JSON lines, permutation lists) and the
// plain-text result tables.

#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smtwt/analysis.hpp"
#include "smtwt/exact.hpp"
#include "smtwt/search.hpp"

namespace smtwt {

inline constexpr const char* kStatsSchema = "# smtwt-stats v1";
inline constexpr const char* kRunsSchema = "# smtwt-runs v1";
inline constexpr const char* kOptimaSchema = "# smtwt-optima v1";

namespace detail {

inline std::string fmt_double(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') c = ' ';
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Quoted fields may contain commas; "" inside quotes is a literal quote.
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c != '"') {
        out.back() += c;
      } else if (k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  if (quoted) throw usage_error("csv: unterminated quote");
  return out;
}

// Rows of a CSV file with a header line, keyed by column name. Lines
// starting with '#' are ignored.
inline std::vector<std::map<std::string, std::string>> read_csv(std::istream& in) {
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) throw usage_error("csv: row has " + std::to_string(fields.size()) +
                                                          " fields, header has " + std::to_string(header.size()));
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = fields[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const std::string& field(const std::map<std::string, std::string>& row, const std::string& key) {
  auto it = row.find(key);
  if (it == row.end()) throw usage_error("csv: missing column '" + key + "'");
  return it->second;
}

inline std::optional<double> opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-instance statistics

inline void write_stats_header(std::ostream& out) {
  out << kStatsSchema << '\n'
      << "set,index,label,n,rdd,tf,algorithm,restarts,seed,reference,provenance,best_cost,solved,solved_runs,"
         "new_best,mean_cost,mean_evaluations,mean_iterations,mean_deviation,zero_misses\n";
}

inline void write_stats_row(std::ostream& out, const InstanceSummary& s) {
  using detail::csv_field;
  using detail::fmt_double;
  out << csv_field(s.set) << ',' << s.index << ',' << csv_field(s.label) << ',' << s.n << ','
      << (s.rdd ? fmt_double(*s.rdd, 2) : "") << ',' << (s.tf ? fmt_double(*s.tf, 2) : "") << ','
      << csv_field(s.algorithm) << ',' << s.restarts << ',' << s.seed << ','
      << (s.reference ? std::to_string(*s.reference) : "") << ',' << s.provenance << ',' << s.best_cost << ','
      << (s.solved ? 1 : 0) << ',' << s.solved_runs << ',' << (s.new_best ? 1 : 0) << ',' << fmt_double(s.mean_cost, 3)
      << ',' << fmt_double(s.mean_evaluations, 3) << ',' << fmt_double(s.mean_iterations, 3) << ','
      << (s.mean_deviation ? fmt_double(*s.mean_deviation) : "") << ',' << s.zero_misses << '\n';
}

inline std::vector<InstanceSummary> read_stats(std::istream& in) {
  std::vector<InstanceSummary> out;
  for (const auto& row : detail::read_csv(in)) {
    using detail::field;
    InstanceSummary s;
    try {
      s.set = field(row, "set");
      s.index = std::stoul(field(row, "index"));
      s.label = field(row, "label");
      s.n = std::stoul(field(row, "n"));
      s.rdd = detail::opt_double(field(row, "rdd"));
      s.tf = detail::opt_double(field(row, "tf"));
      s.algorithm = field(row, "algorithm");
      s.restarts = std::stoul(field(row, "restarts"));
      s.seed = std::stoull(field(row, "seed"));
      if (!field(row, "reference").empty()) s.reference = std::stoll(field(row, "reference"));
      s.provenance = field(row, "provenance");
      s.best_cost = std::stoll(field(row, "best_cost"));
      s.solved = field(row, "solved") == "1";
      s.solved_runs = std::stoul(field(row, "solved_runs"));
      s.new_best = field(row, "new_best") == "1";
      s.mean_cost = std::stod(field(row, "mean_cost"));
      s.mean_evaluations = std::stod(field(row, "mean_evaluations"));
      s.mean_iterations = std::stod(field(row, "mean_iterations"));
      s.mean_deviation = detail::opt_double(field(row, "mean_deviation"));
      s.zero_misses = std::stoul(field(row, "zero_misses"));
    } catch (const std::logic_error&) {
      throw usage_error("stats csv: malformed numeric field");
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run records

inline void write_runs_header(std::ostream& out) {
  out << kRunsSchema << '\n' << "label,run_index,final_cost,evaluations,iterations\n";
}

inline void write_runs_csv(std::ostream& out, const std::string& label, const RunStats& stats) {
  for (const auto& r : stats.runs)
    out << detail::csv_field(label) << ',' << r.run_index << ',' << r.final_cost << ',' << r.evaluations << ','
        << r.iterations << '\n';
}

inline void write_runs_jsonl(std::ostream& out, const std::string& label, const RunStats& stats) {
  for (const auto& r : stats.runs) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["algorithm"] = stats.algorithm;
    j["run_index"] = r.run_index;
    j["start_seed"] = r.start_seed;
    j["final_cost"] = r.final_cost;
    j["evaluations"] = r.evaluations;
    j["iterations"] = r.iterations;
    j["final_perm"] = r.final_perm.to_one_based();
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Permutation lists: one sequence per line, 1-based, space separated.

inline void write_permutations(std::ostream& out, const std::vector<Permutation>& perms) {
  for (const auto& p : perms) {
    const auto seq = p.to_one_based();
    for (std::size_t k = 0; k < seq.size(); ++k) out << (k ? " " : "") << seq[k];
    out << '\n';
  }
}

inline std::vector<Permutation> read_permutations(std::istream& in) {
  std::vector<Permutation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream row(line);
    std::vector<int> seq;
    std::string tok;
    while (row >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw usage_error("permutation list: bad token '" + tok + "'");
      seq.push_back(v);
    }
    out.push_back(Permutation::from_one_based(seq));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distinct-optima summaries

struct OptimaSummary {
  std::string label;
  std::size_t n = 0;
  std::optional<double> rdd;
  std::optional<double> tf;
  Cost optimum = 0;
  std::string mode;  // "enumerate" or "search"
  std::size_t count = 0;
  bool truncated = false;
  std::size_t cap = 0;
  double entropy = 0;
  double entropy_sample = 0;
  std::size_t sample_size = 0;
  std::uint64_t sample_seed = 0;
};

inline void write_optima_header(std::ostream& out) {
  out << kOptimaSchema << '\n'
      << "label,n,rdd,tf,optimum,mode,count,truncated,cap,entropy,entropy_sample,sample_size,sample_seed\n";
}

inline void write_optima_row(std::ostream& out, const OptimaSummary& s) {
  using detail::fmt_double;
  char e[32], es[32];
  std::snprintf(e, sizeof e, "%.6e", s.entropy);
  std::snprintf(es, sizeof es, "%.6e", s.entropy_sample);
  out << detail::csv_field(s.label) << ',' << s.n << ',' << (s.rdd ? fmt_double(*s.rdd, 2) : "") << ','
      << (s.tf ? fmt_double(*s.tf, 2) : "") << ',' << s.optimum << ',' << s.mode << ',' << s.count << ','
      << (s.truncated ? 1 : 0) << ',' << s.cap << ',' << e << ',' << es << ',' << s.sample_size << ','
      << s.sample_seed << '\n';
}

inline std::vector<OptimaSummary> read_optima(std::istream& in) {
  std::vector<OptimaSummary> out;
  for (const auto& row : detail::read_csv(in)) {
    using detail::field;
    OptimaSummary s;
    try {
      s.label = field(row, "label");
      s.n = std::stoul(field(row, "n"));
      s.rdd = detail::opt_double(field(row, "rdd"));
      s.tf = detail::opt_double(field(row, "tf"));
      s.optimum = std::stoll(field(row, "optimum"));
      s.mode = field(row, "mode");
      s.count = std::stoul(field(row, "count"));
      s.truncated = field(row, "truncated") == "1";
      s.cap = std::stoul(field(row, "cap"));
      s.entropy = std::stod(field(row, "entropy"));
      s.entropy_sample = std::stod(field(row, "entropy_sample"));
      s.sample_size = std::stoul(field(row, "sample_size"));
      s.sample_seed = std::stoull(field(row, "sample_seed"));
    } catch (const std::logic_error&) {
      throw usage_error("optima csv: malformed numeric field");
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text tables

namespace detail {

// Distinct values in first-seen order.
template <class F>
std::vector<std::string> distinct_keys(const std::vector<InstanceSummary>& rows, F key) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : rows)
    if (seen.insert(key(r)).second) out.push_back(key(r));
  return out;
}

inline std::string set_column(const InstanceSummary& s) { return s.set.empty() ? "n=" + std::to_string(s.n) : s.set; }

// Algorithms by rows, benchmark sets by columns, one number per cell.
template <class Cell>
void algorithm_by_set_table(std::ostream& out, const std::string& title, const std::vector<InstanceSummary>& rows,
                            Cell cell) {
  out << title << '\n';
  const auto algos = distinct_keys(rows, [](const auto& r) { return r.algorithm; });
  const auto sets = distinct_keys(rows, set_column);
  out << std::left << std::setw(22) << "Algorithm";
  for (const auto& s : sets) out << std::right << std::setw(12) << s;
  out << '\n';
  for (const auto& a : algos) {
    out << std::left << std::setw(22) << a;
    for (const auto& s : sets) {
      std::vector<InstanceSummary> sel;
      for (const auto& r : rows)
        if (r.algorithm == a && set_column(r) == s) sel.push_back(r);
      out << std::right << std::setw(12) << (sel.empty() ? std::string("-") : cell(sel));
    }
    out << '\n';
  }
}

template <class Cell>
void grid_block(std::ostream& out, const std::string& heading, const DifficultyReport& rep, Cell cell) {
  out << heading << '\n' << std::left << std::setw(10) << "RDD\\TF";
  for (double tf : rep.tf_values) out << std::right << std::setw(7) << fmt_double(tf, 1);
  out << '\n';
  for (std::size_t r = 0; r < rep.rdd_values.size(); ++r) {
    out << std::left << std::setw(10) << fmt_double(rep.rdd_values[r], 1);
    for (std::size_t t = 0; t < rep.tf_values.size(); ++t) out << std::right << std::setw(7) << cell(rep.cells[r][t]);
    out << '\n';
  }
}

inline std::string mean_of(const std::vector<InstanceSummary>& sel, double InstanceSummary::*member) {
  double sum = 0;
  for (const auto& r : sel) sum += r.*member;
  return fmt_double(sum / static_cast<double>(sel.size()), 0);
}

}  // namespace detail

/// Renders one of the result tables. Styles: solved (solved counts),
/// solved-grid (solved counts on the RDD/TF grid per algorithm), deviation
/// (mean deviation), evaluations (mean evaluations), deviation-grid (grid per
/// algorithm and set). Empty input yields the header only.
inline void render_table(std::ostream& out, const std::string& style, const std::vector<InstanceSummary>& rows) {
  using namespace detail;
  if (style == "solved") {
    algorithm_by_set_table(out, "Instances solved to the optimal/best known value", rows, [](const auto& sel) {
      std::size_t k = 0;
      for (const auto& r : sel) k += r.solved ? 1 : 0;
      return std::to_string(k);
    });
  } else if (style == "deviation") {
    algorithm_by_set_table(out, "Average deviation from the optimal/best known value (%)", rows, [](const auto& sel) {
      double sum = 0;
      std::size_t k = 0;
      for (const auto& r : sel)
        if (r.mean_deviation) {
          sum += *r.mean_deviation;
          ++k;
        }
      return k ? fmt_double(sum / static_cast<double>(k), 2) + "%" : std::string("-");
    });
  } else if (style == "evaluations") {
    algorithm_by_set_table(out, "Average number of evaluations per local search run", rows,
                           [](const auto& sel) { return mean_of(sel, &InstanceSummary::mean_evaluations); });
  } else if (style == "solved-grid") {
    out << "Instances solved by RDD and TF\n";
    for (const auto& a : distinct_keys(rows, [](const auto& r) { return r.algorithm; })) {
      std::vector<InstanceSummary> sel;
      for (const auto& r : rows)
        if (r.algorithm == a) sel.push_back(r);
      grid_block(out, a, aggregate(sel), [](const GridCell& c) { return std::to_string(c.solved); });
    }
  } else if (style == "deviation-grid") {
    out << "Average deviation (%) by RDD and TF\n";
    for (const auto& a : distinct_keys(rows, [](const auto& r) { return r.algorithm; }))
      for (const auto& s : distinct_keys(rows, set_column)) {
        std::vector<InstanceSummary> sel;
        for (const auto& r : rows)
          if (r.algorithm == a && set_column(r) == s) sel.push_back(r);
        if (sel.empty()) continue;
        grid_block(out, a + " / " + s, aggregate(sel), [](const GridCell& c) {
          const auto m = c.mean_deviation();
          return m ? fmt_double(*m, 1) : std::string("-");
        });
      }
  } else {
    throw usage_error("unknown table style '" + style + "'");
  }
}

/// Difficult-instance table: distinct optima counts and entropies.
inline void render_optima_table(std::ostream& out, const std::vector<OptimaSummary>& rows) {
  out << "Distinct optimal alternatives and precedence entropy\n"
      << std::left << std::setw(16) << "Instance" << std::right << std::setw(5) << "n" << std::setw(6) << "RDD"
      << std::setw(6) << "TF" << std::setw(16) << "Distinct opt." << std::setw(12) << "Entropy" << std::setw(14)
      << "Entropy(k)" << '\n';
  for (const auto& r : rows) {
    char e[32], es[32];
    std::snprintf(e, sizeof e, "%.2E", r.entropy);
    std::snprintf(es, sizeof es, "%.4f", r.entropy_sample);
    // A truncated enumeration without a full count reports the cap.
    const bool lower_bound = r.truncated && r.count <= r.cap;
    const std::string count = (lower_bound ? "> " : (r.mode == "search" ? ">= " : "")) + std::to_string(r.count);
    out << std::left << std::setw(16) << r.label << std::right << std::setw(5) << r.n << std::setw(6)
        << (r.rdd ? detail::fmt_double(*r.rdd, 1) : "-") << std::setw(6) << (r.tf ? detail::fmt_double(*r.tf, 1) : "-")
        << std::setw(16) << count << std::setw(12) << e << std::setw(14) << es << '\n';
  }
}

}  // namespace smtwt
