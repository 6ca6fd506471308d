// smtwt: command-line front end for instance generation, local search
// benchmarking, optima enumeration and result tables.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 internal invariant violation.
// Results go to files or stdout; progress goes to stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "smtwt/smtwt.hpp"

namespace fs = std::filesystem;
using namespace smtwt;

namespace {

constexpr const char* kDataDirEnv = "SMTWT_DATA_DIR";

// Output sink: a file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw io_error("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw io_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// Trailing digits of the set name, as in wt40 or syn100.
std::optional<std::size_t> jobs_from_name(const std::string& name) {
  static const std::regex re(R"((\d+)$)");
  std::smatch m;
  if (std::regex_search(name, m, re)) return std::stoul(m[1]);
  return std::nullopt;
}

struct LoadedSet {
  BenchmarkSet set;
  BestKnownRegistry registry;
  bool has_registry = false;
};

struct SetOptions {
  std::string set;
  std::size_t n = 0;
  std::string best;
  std::string meta;
  std::string data_dir;
};

void add_set_options(CLI::App* cmd, SetOptions& o) {
  cmd->add_option("--set", o.set,
                  "Benchmark set: a file path, or a name resolved as <data-dir>/<name>.txt (e.g. wt40)")
      ->required();
  cmd->add_option("--n", o.n, "Jobs per instance (inferred from names like wt40)");
  cmd->add_option("--best", o.best, "Best-known values file (default <data-dir>/<name>.best if present)");
  cmd->add_option("--meta", o.meta, "Metadata CSV index,rdd,tf (default <data-dir>/<name>.meta.csv if present)");
  cmd->add_option("--data-dir", o.data_dir, std::string("Data directory (default $") + kDataDirEnv + ")");
}

LoadedSet load_set(const SetOptions& o) {
  std::string dir = o.data_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv(kDataDirEnv)) dir = env;
  }
  fs::path path = o.set;
  std::string name = o.set;
  if (fs::exists(path) && fs::is_regular_file(path)) {
    name = path.stem().string();
  } else {
    if (dir.empty()) throw io_error("'" + o.set + "' is not a file and no data directory is set");
    path = fs::path(dir) / (o.set + ".txt");
  }
  std::size_t n = o.n;
  if (n == 0) {
    const auto guess = jobs_from_name(name);
    if (!guess) throw usage_error("cannot infer --n from '" + name + "'");
    n = *guess;
  }
  LoadedSet out{load_orlib(path.string(), n, name), {}, false};
  const fs::path base = path.parent_path();

  std::string meta = o.meta;
  if (meta.empty() && fs::exists(base / (name + ".meta.csv"))) meta = (base / (name + ".meta.csv")).string();
  if (!meta.empty()) {
    std::ifstream in(meta);
    if (!in) throw io_error("cannot open '" + meta + "'");
    apply_metadata_csv(out.set, in);
  } else if (out.set.size() % 125 == 0) {
    attach_grid_metadata(out.set);
  }
  for (std::size_t i = 0; i < out.set.size(); ++i) {
    auto& inst = out.set.instances[i];
    if (inst.meta() && inst.meta()->label.empty()) {
      auto m = *inst.meta();
      m.label = out.set.label(i + 1);
      inst.set_meta(m);
    }
  }

  std::string best = o.best;
  if (best.empty() && fs::exists(base / (name + ".best"))) best = (base / (name + ".best")).string();
  if (!best.empty()) {
    out.registry.load_file(name, best);
    out.has_registry = true;
  }
  return out;
}

// "3", "1-25", "1,4,9-12"; empty means every instance.
std::vector<std::size_t> parse_indices(const std::string& spec, std::size_t count) {
  std::vector<std::size_t> out;
  if (spec.empty()) {
    for (std::size_t k = 1; k <= count; ++k) out.push_back(k);
    return out;
  }
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t a = 0, b = 0;
    try {
      const auto dash = part.find('-');
      a = std::stoul(part.substr(0, dash));
      b = dash == std::string::npos ? a : std::stoul(part.substr(dash + 1));
    } catch (const std::exception&) {
      throw usage_error("bad index list '" + spec + "'");
    }
    if (a < 1 || b > count || a > b) throw usage_error("index range '" + part + "' outside 1.." + std::to_string(count));
    for (std::size_t k = a; k <= b; ++k) out.push_back(k);
  }
  return out;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

struct GenerateOptions {
  std::size_t n = 40;
  double rdd = 0.2;
  double tf = 0.2;
  std::size_t count = 5;
  std::uint64_t seed = 0;
  bool clamp = false;
  bool grid = false;
  std::string out = "-";
  std::string meta_out;
};

int cmd_generate(const GenerateOptions& o) {
  BenchmarkSet set{"generated", o.n, {}};
  if (o.grid) {
    set = generate_grid(o.n, o.count, o.seed, "generated", o.clamp);
  } else {
    for (std::size_t k = 0; k < o.count; ++k)
      set.instances.push_back(generate({o.n, o.rdd, o.tf, derive_seed(o.seed, k), o.clamp}));
  }
  Output out(o.out);
  write_orlib(out.stream(), set);
  out.finish();
  std::string meta_out = o.meta_out;
  if (meta_out.empty() && o.out != "-") {
    fs::path side(o.out);
    meta_out = (side.parent_path() / (side.stem().string() + ".meta.csv")).string();
  }
  if (!meta_out.empty()) {
    Output meta(meta_out);
    write_metadata_csv(meta.stream(), set);
    meta.finish();
  }
  std::cerr << "generated " << set.size() << " instances with n = " << o.n << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct RunOptions {
  std::string algo = "hillclimb:EX";
  std::size_t restarts = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::uint64_t iteration_cap = 0;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--algo", o.algo, "hillclimb:<OP> or vnd:<OP>,<OP>,... with OP in EX|FSH|BSH")->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "Independent runs per instance")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
  cmd->add_option("--iteration-cap", o.iteration_cap, "Fail a run after this many accepted moves (0 = none)");
}

AlgorithmConfig make_config(const RunOptions& o) {
  if (o.restarts < 1) throw usage_error("--restarts must be at least 1");
  auto cfg = parse_algorithm(o.algo);
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.iteration_cap = o.iteration_cap;
  return cfg;
}

struct BenchOptions {
  SetOptions set;
  RunOptions run;
  std::string indices;
  std::string out = "-";
  std::string runs_out;
  std::string format = "csv";
};

int cmd_bench(const BenchOptions& o) {
  auto loaded = load_set(o.set);
  const auto cfg = make_config(o.run);
  if (o.format != "csv" && o.format != "jsonl") throw usage_error("--format must be csv or jsonl");
  const unsigned threads = o.run.threads ? o.run.threads : default_threads();
  const auto indices = parse_indices(o.indices, loaded.set.size());

  Output out(o.out);
  write_stats_header(out.stream());
  std::unique_ptr<Output> runs;
  if (!o.runs_out.empty()) {
    runs = std::make_unique<Output>(o.runs_out);
    if (o.format == "csv") write_runs_header(runs->stream());
  }

  const auto& name = loaded.set.name;
  std::size_t solved = 0, with_reference = 0;
  double dev_sum = 0, eval_sum = 0;
  std::size_t dev_count = 0;
  for (std::size_t k : indices) {
    const auto& inst = loaded.set.instances[k - 1];
    std::optional<Cost> reference;
    std::string provenance;
    if (loaded.has_registry && loaded.registry.contains(name, k)) {
      const auto& bk = loaded.registry.lookup(name, k);
      reference = bk.cost;
      provenance = to_string(bk.provenance);
    }
    const auto stats = multistart(inst, cfg, reference, threads);
    const auto summary = summarize_instance(name, k, inst, stats, cfg.seed, provenance);
    write_stats_row(out.stream(), summary);
    if (runs) {
      if (o.format == "csv") {
        write_runs_csv(runs->stream(), summary.label, stats);
      } else {
        write_runs_jsonl(runs->stream(), summary.label, stats);
      }
    }
    if (reference) ++with_reference;
    if (stats.solved) ++solved;
    if (stats.new_best) std::cerr << "NEW BEST: " << summary.label << " reached " << stats.best_cost << " < " << *reference << '\n';
    if (stats.mean_deviation) {
      dev_sum += *stats.mean_deviation;
      ++dev_count;
    }
    eval_sum += stats.mean_evaluations;
    std::cerr << summary.label << ": best " << stats.best_cost << (reference ? " ref " + std::to_string(*reference) : "")
              << (stats.solved ? " solved" : "") << '\n';
  }
  out.finish();
  if (runs) runs->finish();
  std::cerr << cfg.name() << " on " << name << ": solved " << solved << " of " << with_reference
            << " instances with a reference value";
  if (dev_count) std::cerr << ", mean deviation " << detail::fmt_double(dev_sum / static_cast<double>(dev_count), 2) << '%';
  if (!indices.empty())
    std::cerr << ", mean evaluations/run " << detail::fmt_double(eval_sum / static_cast<double>(indices.size()), 0);
  std::cerr << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  SetOptions set;
  RunOptions run;
  std::size_t index = 1;
  std::string format = "text";
  std::string out = "-";
};

int cmd_solve(const SolveOptions& o) {
  auto loaded = load_set(o.set);
  if (o.index < 1 || o.index > loaded.set.size()) throw usage_error("--index out of range");
  const auto& inst = loaded.set.instances[o.index - 1];
  const auto cfg = make_config(o.run);
  std::optional<Cost> reference;
  if (loaded.has_registry && loaded.registry.contains(loaded.set.name, o.index))
    reference = loaded.registry.lookup(loaded.set.name, o.index).cost;
  const auto stats = multistart(inst, cfg, reference, o.run.threads ? o.run.threads : default_threads());
  const std::string label = loaded.set.label(o.index);

  Output out(o.out);
  auto& os = out.stream();
  if (o.format == "text") {
    os << "instance   " << label << '\n'
       << "algorithm  " << stats.algorithm << " x " << stats.restarts << " (seed " << cfg.seed << ")\n"
       << "best       " << stats.best_cost << '\n';
    if (reference) {
      os << "reference  " << *reference << (stats.solved ? " (reached)" : "") << '\n';
      if (stats.mean_deviation) os << "mean dev   " << detail::fmt_double(*stats.mean_deviation, 3) << "%\n";
    }
    os << "mean cost  " << detail::fmt_double(stats.mean_cost, 2) << '\n'
       << "mean evals " << detail::fmt_double(stats.mean_evaluations, 1) << '\n'
       << "sequence  ";
    for (int j : stats.best_perm.to_one_based()) os << ' ' << j;
    os << '\n';
  } else if (o.format == "csv") {
    write_runs_header(os);
    write_runs_csv(os, label, stats);
  } else if (o.format == "jsonl") {
    write_runs_jsonl(os, label, stats);
  } else {
    throw usage_error("--format must be text, csv or jsonl");
  }
  out.finish();
  return 0;
}

// ---------------------------------------------------------------------------

struct OptimaOptions {
  SetOptions set;
  RunOptions run;
  std::size_t index = 1;
  std::optional<Cost> optimum;
  std::string mode = "enumerate";
  std::size_t cap = 1'000'000;
  std::size_t sample = 100;
  std::uint64_t sample_seed = 1;
  std::string perms_out;
  std::string out = "-";
};

int cmd_optima(const OptimaOptions& o) {
  auto loaded = load_set(o.set);
  if (o.index < 1 || o.index > loaded.set.size()) throw usage_error("--index out of range");
  const auto& inst = loaded.set.instances[o.index - 1];
  Cost optimum = 0;
  if (o.optimum) {
    optimum = *o.optimum;
  } else if (loaded.has_registry && loaded.registry.contains(loaded.set.name, o.index)) {
    optimum = loaded.registry.lookup(loaded.set.name, o.index).cost;
  } else if (inst.size() <= kBruteForceMaxJobs) {
    optimum = brute_force(inst).cost;
  } else {
    throw usage_error("no optimum known for this instance; pass --optimum or --best");
  }

  OptimaSummary s;
  s.label = loaded.set.label(o.index);
  s.n = inst.size();
  if (inst.meta()) {
    s.rdd = inst.meta()->rdd;
    s.tf = inst.meta()->tf;
  }
  s.optimum = optimum;
  s.mode = o.mode;
  s.cap = o.cap;
  s.sample_seed = o.sample_seed;

  OptimaSet set;
  std::vector<Permutation> sub;
  if (o.mode == "enumerate" && inst.size() <= OptimalSequences::kMaxJobs) {
    // Counts, full entropy and the subsample cover every optimum even when
    // the listed members stop at --cap.
    if (o.cap == 0) throw usage_error("--cap must be positive");
    OptimalSequences all(inst, optimum);
    if (all.optimum() && *all.optimum() < optimum)
      throw usage_error("cost " + std::to_string(optimum) + " is not optimal: " + std::to_string(*all.optimum()) +
                        " is reachable");
    set.optimum = optimum;
    set.cap = o.cap;
    set.total = all.count();
    set.members = all.enumerate(o.cap);
    std::sort(set.members.begin(), set.members.end());
    set.truncated = *set.total > o.cap;
    if (*set.total > 0 && inst.size() >= 2) {
      s.entropy = entropy_of_fractions(inst.size(), all.precedence_fractions());
      sub = all.sample(o.sample, o.sample_seed);
    }
    std::cerr << s.label << ": " << all.states() << " subsets searched\n";
  } else if (o.mode == "enumerate" || o.mode == "search") {
    set = o.mode == "enumerate" ? enumerate_optima(inst, optimum, o.cap)
                                : collect_optima_by_search(inst, optimum, make_config(o.run), o.cap,
                                                           o.run.threads ? o.run.threads : default_threads());
    if (!set.members.empty() && inst.size() >= 2) {
      s.entropy = entropy(SolutionPool(set.members));
      sub = sample_distinct(set.members, o.sample, o.sample_seed);
    }
  } else {
    throw usage_error("--mode must be enumerate or search");
  }
  s.count = set.total ? static_cast<std::size_t>(*set.total) : set.members.size();
  s.truncated = set.truncated;
  if (!sub.empty()) {
    s.sample_size = sub.size();
    s.entropy_sample = entropy(SolutionPool(sub));
  }
  if (!o.perms_out.empty()) {
    Output perms(o.perms_out);
    write_permutations(perms.stream(), set.members);
    perms.finish();
  }
  Output out(o.out);
  write_optima_header(out.stream());
  write_optima_row(out.stream(), s);
  out.finish();
  std::cerr << s.label << ": " << (s.truncated && !set.total ? "> " : "") << s.count
            << " distinct sequences at cost " << optimum << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EntropyOptions {
  std::string pool;
  std::size_t sample = 0;
  std::uint64_t seed = 1;
};

int cmd_entropy(const EntropyOptions& o) {
  std::vector<Permutation> perms;
  if (o.pool == "-") {
    perms = read_permutations(std::cin);
  } else {
    std::ifstream in(o.pool);
    if (!in) throw io_error("cannot open '" + o.pool + "'");
    perms = read_permutations(in);
  }
  if (o.sample) perms = sample_distinct(perms, o.sample, o.seed);
  const SolutionPool pool(std::move(perms));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", entropy(pool));
  std::cout << "pool " << pool.mu() << " jobs " << pool.jobs() << " entropy " << buf << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string style = "solved";
  std::string out = "-";
};

int cmd_report(const ReportOptions& o) {
  Output out(o.out);
  if (o.style == "optima") {
    std::vector<OptimaSummary> rows;
    for (const auto& path : o.inputs) {
      std::ifstream in(path);
      if (!in) throw io_error("cannot open '" + path + "'");
      auto part = read_optima(in);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    render_optima_table(out.stream(), rows);
  } else {
    std::vector<InstanceSummary> rows;
    for (const auto& path : o.inputs) {
      std::ifstream in(path);
      if (!in) throw io_error("cannot open '" + path + "'");
      auto part = read_stats(in);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    render_table(out.stream(), o.style, rows);
  }
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single machine total weighted tardiness: local search experiments"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Generate random instances in OR-Library format");
  g->add_option("--n", gen.n, "Jobs per instance")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--rdd", gen.rdd, "Relative range of due dates, (0,1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  g->add_option("--tf", gen.tf, "Tardiness factor, (0,1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  g->add_option("--count", gen.count, "Instances (per grid cell with --grid)")->capture_default_str();
  g->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  g->add_flag("--clamp", gen.clamp, "Clamp negative due dates to 0");
  g->add_flag("--grid", gen.grid, "Cover the 5x5 RDD/TF grid, --count instances per cell");
  g->add_option("--out", gen.out, "Output file ('-' for stdout)");
  g->add_option("--meta-out", gen.meta_out, "Metadata CSV index,rdd,tf (default <out stem>.meta.csv when --out is a file)");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Multi-restart local search over a benchmark set");
  add_set_options(b, bench.set);
  add_run_options(b, bench.run);
  b->add_option("--indices", bench.indices, "Instance subset, e.g. 1-25,40");
  b->add_option("--out", bench.out, "Per-instance statistics CSV ('-' for stdout)");
  b->add_option("--runs", bench.runs_out, "Per-run records file");
  b->add_option("--format", bench.format, "Per-run records format: csv or jsonl")->capture_default_str();

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Multi-restart local search on one instance");
  add_set_options(s, solve.set);
  add_run_options(s, solve.run);
  s->add_option("--index", solve.index, "1-based instance index")->capture_default_str();
  s->add_option("--format", solve.format, "text, csv or jsonl")->capture_default_str();
  s->add_option("--out", solve.out, "Output file ('-' for stdout)");

  OptimaOptions opt;
  auto* o = app.add_subcommand("optima", "Enumerate or sample distinct optimal sequences");
  add_set_options(o, opt.set);
  add_run_options(o, opt.run);
  o->add_option("--index", opt.index, "1-based instance index")->capture_default_str();
  o->add_option("--optimum", opt.optimum, "Target cost (default: registry, or brute force for n <= 12)");
  o->add_option("--mode", opt.mode, "enumerate or search")->capture_default_str();
  o->add_option("--cap", opt.cap, "Stop after this many distinct optima")->capture_default_str();
  o->add_option("--sample", opt.sample, "Subsample size for the second entropy value")->capture_default_str();
  o->add_option("--sample-seed", opt.sample_seed, "Subsample seed")->capture_default_str();
  o->add_option("--perms", opt.perms_out, "Write the optimal sequences, one per line");
  o->add_option("--out", opt.out, "Summary CSV ('-' for stdout)");

  EntropyOptions ent;
  auto* e = app.add_subcommand("entropy", "Precedence entropy of a pool of sequences");
  e->add_option("--pool", ent.pool, "File with one 1-based sequence per line ('-' for stdin)")->required();
  e->add_option("--sample", ent.sample, "Use a random subset of this size");
  e->add_option("--seed", ent.seed, "Subset seed")->capture_default_str();

  ReportOptions rep;
  auto* r = app.add_subcommand("report", "Render result tables from bench/optima CSV files");
  r->add_option("--inputs", rep.inputs, "Statistics CSV files from bench, or optima CSV files for --style optima");
  r->add_option("--style", rep.style, "solved, solved-grid, deviation, evaluations, deviation-grid or optima")->capture_default_str();
  r->add_option("--out", rep.out, "Output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return static_cast<int>(ErrorKind::usage);
  }

  try {
    if (*g) {
      if (!gen.grid && (gen.rdd <= 0.0 || gen.tf <= 0.0)) throw usage_error("--rdd and --tf must be positive");
      return cmd_generate(gen);
    }
    if (*b) return cmd_bench(bench);
    if (*s) return cmd_solve(solve);
    if (*o) return cmd_optima(opt);
    if (*e) return cmd_entropy(ent);
    if (*r) return cmd_report(rep);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return static_cast<int>(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return static_cast<int>(ErrorKind::invariant);
  }
  return 0;
}
