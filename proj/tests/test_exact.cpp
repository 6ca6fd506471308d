#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "smtwt/analysis.hpp"
#include "smtwt/exact.hpp"

using namespace smtwt;

TEST(BruteForce, ThreeJobs) {
  // Oracle over all 6 orders: (3,1,2) is the unique optimum at cost 6.
  const Instance inst({3, 2, 1}, {2, 1, 3}, {2, 4, 3});
  const auto opt = brute_force(inst);
  EXPECT_EQ(opt.cost, 6);
  EXPECT_EQ(opt.perm.to_one_based(), (std::vector<int>{3, 1, 2}));
}

TEST(BruteForce, LooseDueDates) {
  const Instance inst({4, 9, 2, 7}, {3, 1, 8, 2}, {22, 30, 22, 25});
  EXPECT_EQ(brute_force(inst).cost, 0);
}

TEST(BruteForce, SingleJob) {
  EXPECT_EQ(brute_force(Instance({5}, {7}, {3})).cost, 14);
  EXPECT_EQ(brute_force(Instance({5}, {7}, {9})).cost, 0);
}

TEST(BruteForce, SizeGuard) {
  const auto inst = oracle::random_instance(13, 1);
  EXPECT_THROW(brute_force(inst), Error);
}

TEST(BruteForce, MatchesOracleMinimum) {
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto inst = oracle::random_instance(7, g());
    const auto truth = oracle::all_optima(oracle::raw(inst));
    const auto opt = brute_force(inst);
    EXPECT_EQ(opt.cost, truth.optimum);
    EXPECT_TRUE(truth.members.count(opt.perm.to_one_based()));
  }
}

TEST(EnumerateOptima, AllOrdersOptimalWhenNothingIsLate) {
  const Instance inst({4, 9, 2, 7}, {3, 1, 8, 2}, {22, 30, 22, 25});
  const auto set = enumerate_optima(inst, 0, 100);
  EXPECT_EQ(set.members.size(), 24u);
  EXPECT_FALSE(set.truncated);
}

TEST(EnumerateOptima, CapTruncates) {
  const Instance inst({4, 9, 2, 7}, {3, 1, 8, 2}, {22, 30, 22, 25});
  const auto set = enumerate_optima(inst, 0, 10);
  EXPECT_EQ(set.members.size(), 10u);
  EXPECT_TRUE(set.truncated);
  // Exactly as many optima as the cap is not a truncation.
  EXPECT_FALSE(enumerate_optima(inst, 0, 24).truncated);
  EXPECT_THROW(enumerate_optima(inst, 0, 0), Error);
}

TEST(EnumerateOptima, EqualsBruteForceSetWithEveryPruneRule) {
  std::mt19937_64 g(7);
  for (int rep = 0; rep < 12; ++rep) {
    // Equal processing times create ties, hence several optima.
    std::vector<Time> p(8);
    std::vector<Cost> w(8);
    std::vector<Time> d(8);
    for (auto& x : p) x = 1 + static_cast<Time>(g() % 3);
    for (auto& x : w) x = 1 + static_cast<Cost>(g() % 2);
    for (auto& x : d) x = static_cast<Time>(g() % 12);
    const Instance inst(p, w, d);
    const auto truth = oracle::all_optima(oracle::raw(inst));
    for (auto rule : {PruneRule::none, PruneRule::prefix, PruneRule::lookahead, PruneRule::memo}) {
      const auto set = enumerate_optima(inst, truth.optimum, 1'000'000, rule);
      EXPECT_FALSE(set.truncated);
      if (rule == PruneRule::memo) {
        EXPECT_EQ(set.total, truth.members.size());
      }
      std::set<std::vector<int>> got;
      for (const auto& m : set.members) {
        EXPECT_EQ(evaluate(m, inst), truth.optimum);
        got.insert(m.to_one_based());
      }
      EXPECT_EQ(got.size(), set.members.size());
      EXPECT_EQ(got, truth.members);
    }
  }
}

TEST(CollectBySearch, UniqueOptimumGivesAtMostOne) {
  const Instance inst({3, 2, 1}, {2, 1, 3}, {2, 4, 3});
  const auto set = collect_optima_by_search(inst, 6, AlgorithmConfig::hillclimb(Operator::EX, 30, 2), 100);
  EXPECT_LE(set.members.size(), 1u);
  for (const auto& m : set.members) EXPECT_EQ(evaluate(m, inst), 6);
}

TEST(CollectBySearch, ZeroObjectiveGrowsWithRestarts) {
  const Instance inst({4, 9, 2, 7, 3, 5}, {3, 1, 8, 2, 1, 1}, {40, 40, 40, 40, 40, 40});
  const auto few = collect_optima_by_search(inst, 0, AlgorithmConfig::hillclimb(Operator::EX, 5, 1), 1000);
  const auto many = collect_optima_by_search(inst, 0, AlgorithmConfig::hillclimb(Operator::EX, 200, 1), 1000);
  EXPECT_LE(few.members.size(), 5u);
  EXPECT_GT(many.members.size(), few.members.size());
  const auto capped = collect_optima_by_search(inst, 0, AlgorithmConfig::hillclimb(Operator::EX, 200, 1), 20);
  EXPECT_EQ(capped.members.size(), 20u);
  EXPECT_TRUE(capped.truncated);
}

TEST(CollectBySearch, SubsetOfTrueOptima) {
  std::mt19937_64 g(13);
  for (int rep = 0; rep < 6; ++rep) {
    const auto inst = oracle::random_instance(8, g());
    const auto truth = oracle::all_optima(oracle::raw(inst));
    const auto set = collect_optima_by_search(
        inst, truth.optimum, AlgorithmConfig::vnd({Operator::BSH, Operator::FSH, Operator::EX}, 50, g()), 1000);
    for (const auto& m : set.members) EXPECT_TRUE(truth.members.count(m.to_one_based()));
  }
}

TEST(OptimalSequences, OptimumMatchesBruteForce) {
  std::mt19937_64 g(21);
  for (std::size_t n : {1u, 2u, 5u, 9u, 10u}) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto inst = oracle::random_instance(n, g());
      const Cost truth = brute_force(inst).cost;
      OptimalSequences all(inst, std::numeric_limits<Cost>::max() / 4);
      ASSERT_TRUE(all.optimum().has_value());
      EXPECT_EQ(*all.optimum(), truth);
      for (const auto& m : all.enumerate(50)) EXPECT_EQ(evaluate(m, inst), truth);
    }
  }
}

TEST(OptimalSequences, CountsWithoutListing) {
  // Nothing can be late: every order is optimal, 20! of them.
  std::vector<Time> p(20, 3);
  std::vector<Cost> w(20, 2);
  std::vector<Time> d(20, 1000);
  OptimalSequences loose(Instance(p, w, d), 0);
  EXPECT_EQ(loose.count(), 2432902008176640000ull);
  EXPECT_EQ(loose.enumerate(7).size(), 7u);
  // 21! does not fit in 64 bits.
  p.push_back(3);
  w.push_back(2);
  d.push_back(1000);
  OptimalSequences bigger(Instance(p, w, d), 0);
  EXPECT_EQ(bigger.count(), std::numeric_limits<std::uint64_t>::max());
  EXPECT_NEAR(entropy_of_fractions(21, bigger.precedence_fractions()), 1.0, 1e-12);
}

TEST(OptimalSequences, TargetOutsideOptimum) {
  const Instance inst({3, 2, 1}, {2, 1, 3}, {2, 4, 3});
  OptimalSequences below(inst, 5);
  EXPECT_FALSE(below.optimum().has_value());
  EXPECT_EQ(below.count(), 0u);
  EXPECT_EQ(enumerate_optima(inst, 5, 10).total, 0u);
  EXPECT_TRUE(enumerate_optima(inst, 5, 10).members.empty());
  EXPECT_THROW(enumerate_optima(inst, 7, 10), Error);
}

TEST(OptimalSequences, ExactEntropyMatchesPool) {
  std::mt19937_64 g(22);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Time> p(8), d(8);
    std::vector<Cost> w(8);
    for (auto& x : p) x = 1 + static_cast<Time>(g() % 3);
    for (auto& x : w) x = 1 + static_cast<Cost>(g() % 2);
    for (auto& x : d) x = static_cast<Time>(g() % 14);
    const Instance inst(p, w, d);
    const auto truth = oracle::all_optima(oracle::raw(inst));
    OptimalSequences all(inst, truth.optimum);
    const auto members = all.enumerate(1'000'000);
    ASSERT_EQ(members.size(), truth.members.size());
    EXPECT_NEAR(entropy_of_fractions(8, all.precedence_fractions()), entropy(SolutionPool(members)), 1e-12);
  }
}

TEST(OptimalSequences, SamplesUniformly) {
  // Two late jobs go first in either order, then six never-late jobs in any
  // order: 1440 optima.
  const Instance inst({1, 1, 1, 1, 1, 1, 5, 5}, {1, 1, 1, 1, 1, 1, 1, 1}, {100, 100, 100, 100, 100, 100, 0, 0});
  OptimalSequences all(inst, 1000);
  const std::uint64_t total = all.count();
  ASSERT_EQ(total, 2u * 720u * 1u);
  // Fraction of draws where job 7 precedes job 8 should be one half.
  std::size_t before = 0, draws = 0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto s = all.sample(1, seed);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(evaluate(s[0], inst), *all.optimum());
    const auto seq = s[0].vec();
    before += std::find(seq.begin(), seq.end(), 6) < std::find(seq.begin(), seq.end(), 7);
    ++draws;
  }
  EXPECT_NEAR(static_cast<double>(before) / static_cast<double>(draws), 0.5, 0.03);
  const auto many = all.sample(100, 9);
  EXPECT_EQ(std::set<Permutation>(many.begin(), many.end()).size(), 100u);
}

TEST(OptimalSequences, StateGuard) {
  const auto inst = oracle::random_instance(30, 4);
  EXPECT_THROW(OptimalSequences(inst, std::numeric_limits<Cost>::max() / 4, 10), Error);
}
