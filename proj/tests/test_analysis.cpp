#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "smtwt/analysis.hpp"
#include "smtwt/instance_io.hpp"

using namespace smtwt;

namespace {

Permutation one_based(std::vector<int> v) { return Permutation::from_one_based(v); }

// Straight count from the definition, for cross-checking.
std::size_t naive_omega(const std::vector<Permutation>& pool, int j, int k) {
  std::size_t count = 0;
  for (const auto& p : pool) {
    const auto seq = p.vec();
    const auto pj = std::find(seq.begin(), seq.end(), j) - seq.begin();
    const auto pk = std::find(seq.begin(), seq.end(), k) - seq.begin();
    count += pj < pk;
  }
  return count;
}

std::vector<Permutation> random_pool(Rng& rng, std::size_t n, std::size_t mu) {
  std::vector<Permutation> pool;
  for (std::size_t k = 0; k < mu; ++k) pool.push_back(random_permutation(n, rng));
  return pool;
}

}  // namespace

TEST(Precedence, SingleMember) {
  const auto c = precedence_counts(SolutionPool({one_based({1, 2, 3})}));
  EXPECT_EQ(c(0, 1), 1u);
  EXPECT_EQ(c(0, 2), 1u);
  EXPECT_EQ(c(1, 2), 1u);
  EXPECT_EQ(c(1, 0), 0u);
  EXPECT_EQ(c(2, 0), 0u);
  EXPECT_EQ(c(2, 1), 0u);
}

TEST(Precedence, ReversedPair) {
  const auto c = precedence_counts(SolutionPool({one_based({1, 2}), one_based({2, 1})}));
  EXPECT_EQ(c(0, 1), 1u);
  EXPECT_EQ(c(1, 0), 1u);
}

TEST(Precedence, EmptyPoolRejected) { EXPECT_THROW(SolutionPool({}), Error); }

TEST(Precedence, MatchesNaiveCountAndSumsToMu) {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto pool = random_pool(rng, 9, 1 + static_cast<std::size_t>(rng.uniform_int(0, 40)));
    const auto c = precedence_counts(SolutionPool(pool));
    for (int j = 0; j < 9; ++j)
      for (int k = 0; k < 9; ++k) {
        if (j == k) continue;
        EXPECT_EQ(c(j, k), naive_omega(pool, j, k));
        EXPECT_EQ(c(j, k) + c(k, j), pool.size());
      }
  }
}

TEST(Entropy, IdenticalPoolIsZero) {
  const auto p = one_based({4, 2, 5, 1, 3});
  EXPECT_EQ(entropy(SolutionPool({p, p, p, p})), 0.0);
}

TEST(Entropy, ReversedPairIsOne) {
  EXPECT_EQ(entropy(SolutionPool({one_based({1, 2}), one_based({2, 1})})), 1.0);
}

TEST(Entropy, PermutationAndReverseIsOne) {
  // Every precedence is split half/half.
  EXPECT_NEAR(entropy(SolutionPool({one_based({3, 1, 4, 2, 5}), one_based({5, 2, 4, 1, 3})})), 1.0, 1e-12);
}

TEST(Entropy, NeedsTwoJobs) { EXPECT_THROW(entropy(SolutionPool({one_based({1})})), Error); }

TEST(Entropy, BoundedProperty) {
  Rng rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 12));
    const auto pool = random_pool(rng, n, 1 + static_cast<std::size_t>(rng.uniform_int(0, 30)));
    const double e = entropy(SolutionPool(pool));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0 + 1e-12);
  }
}

TEST(Entropy, RelabelingInvariance) {
  Rng rng(78);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 10));
    const auto pool = random_pool(rng, n, 1 + static_cast<std::size_t>(rng.uniform_int(0, 20)));
    const auto relabel = random_permutation(n, rng);
    std::vector<Permutation> mapped;
    for (const auto& p : pool) {
      std::vector<int> seq;
      for (int j : p.jobs()) seq.push_back(relabel[static_cast<std::size_t>(j)]);
      mapped.push_back(Permutation::from_zero_based(seq));
    }
    EXPECT_NEAR(entropy(SolutionPool(pool)), entropy(SolutionPool(mapped)), 1e-12);
  }
}

TEST(Entropy, RandomPoolNearOne) {
  Rng rng(79);
  EXPECT_GE(entropy(SolutionPool(random_pool(rng, 10, 1000))), 0.95);
}

TEST(Entropy, SmallPerturbationsGiveSmallEntropy) {
  // Pool of single adjacent swaps of one base sequence.
  std::vector<Permutation> pool;
  std::vector<int> base(40);
  for (int k = 0; k < 40; ++k) base[k] = k;
  for (int k = 0; k + 1 < 40; ++k) {
    auto s = base;
    std::swap(s[k], s[k + 1]);
    pool.push_back(Permutation::from_zero_based(s));
  }
  const double e = entropy(SolutionPool(pool));
  EXPECT_GT(e, 0.0);
  EXPECT_LT(e, 0.01);
}

TEST(Sample, DistinctAndSeeded) {
  Rng rng(3);
  std::vector<Permutation> members;
  for (int k = 0; k < 50; ++k) members.push_back(random_permutation(6, rng));
  const auto a = sample_distinct(members, 10, 42);
  const auto b = sample_distinct(members, 10, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(sample_distinct(members, 500, 1).size(), 50u);
}

namespace {

InstanceSummary summary(double rdd, double tf, bool solved, std::optional<double> dev) {
  InstanceSummary s;
  s.label = "x";
  s.algorithm = "hillclimb:EX";
  s.rdd = rdd;
  s.tf = tf;
  s.solved = solved;
  s.mean_deviation = dev;
  return s;
}

}  // namespace

TEST(Aggregate, AllSolvedFillsEveryCell) {
  std::vector<InstanceSummary> rows;
  for (std::size_t k = 1; k <= 125; ++k) {
    const double rdd = kGridValues[((k - 1) / 5) / 5 % 5];
    const double tf = kGridValues[((k - 1) / 5) % 5];
    rows.push_back(summary(rdd, tf, true, 0.0));
  }
  const auto rep = aggregate(rows);
  ASSERT_EQ(rep.rdd_values.size(), 5u);
  ASSERT_EQ(rep.tf_values.size(), 5u);
  for (const auto& row : rep.cells)
    for (const auto& c : row) {
      EXPECT_EQ(c.solved, 5u);
      EXPECT_EQ(c.instances, 5u);
      EXPECT_EQ(c.mean_deviation(), 0.0);
    }
}

TEST(Aggregate, NoneSolvedGivesZeroGrid) {
  std::vector<InstanceSummary> rows{summary(0.2, 0.4, false, 3.0), summary(0.2, 0.4, false, 5.0),
                                    summary(1.0, 0.6, false, std::nullopt)};
  const auto rep = aggregate(rows);
  for (const auto& row : rep.cells)
    for (const auto& c : row) EXPECT_EQ(c.solved, 0u);
  EXPECT_DOUBLE_EQ(*rep.cell(0.2, 0.4).mean_deviation(), 4.0);
  EXPECT_FALSE(rep.cell(1.0, 0.6).mean_deviation().has_value());
  EXPECT_EQ(rep.cell(1.0, 0.4).instances, 0u);
}

TEST(Aggregate, MissingMetadataRejected) {
  InstanceSummary s;
  s.label = "bare";
  EXPECT_THROW(aggregate({s}), Error);
}
