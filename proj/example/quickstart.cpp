// Generate one instance, run both descent orders from 20 random starts and
// print the precedence entropy of the distinct final sequences.

#include <iostream>
#include <set>

#include "smtwt/smtwt.hpp"

int main() {
  using namespace smtwt;
  const Instance inst = generate({40, 0.6, 0.6, 2024, false});

  for (const char* spec : {"vnd:EX,FSH,BSH", "vnd:BSH,FSH,EX"}) {
    auto cfg = parse_algorithm(spec);
    cfg.restarts = 20;
    cfg.seed = 7;
    const RunStats stats = multistart(inst, cfg);

    std::set<Permutation> finals;
    for (const auto& run : stats.runs) finals.insert(run.final_perm);

    std::cout << spec << ": best " << stats.best_cost << ", mean " << stats.mean_cost << ", evaluations/run "
              << stats.mean_evaluations << ", " << finals.size() << " distinct local optima";
    if (finals.size() > 1) std::cout << ", entropy " << entropy(SolutionPool({finals.begin(), finals.end()}));
    std::cout << '\n';
  }
}
