#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracle.hpp"
#include "smtwt/neighborhood.hpp"
#include "smtwt/random.hpp"

using namespace smtwt;

namespace {

Permutation p1234() { return Permutation::from_one_based(std::vector<int>{1, 2, 3, 4}); }

int oracle_op(Operator op) { return op == Operator::EX ? 0 : op == Operator::FSH ? 1 : 2; }

}  // namespace

TEST(Apply, Definitions) {
  EXPECT_EQ(apply({Operator::EX, 1, 3, 0}, p1234()).to_one_based(), (std::vector<int>{3, 2, 1, 4}));
  EXPECT_EQ(apply({Operator::FSH, 1, 3, 0}, p1234()).to_one_based(), (std::vector<int>{2, 3, 1, 4}));
  EXPECT_EQ(apply({Operator::BSH, 1, 3, 0}, p1234()).to_one_based(), (std::vector<int>{3, 1, 2, 4}));
}

TEST(Apply, InputUntouched) {
  const auto p = p1234();
  (void)apply({Operator::FSH, 2, 4, 0}, p);
  EXPECT_EQ(p, p1234());
}

TEST(Apply, RejectsBadPositions) {
  EXPECT_THROW(apply({Operator::EX, 3, 3, 0}, p1234()), Error);
  EXPECT_THROW(apply({Operator::EX, 3, 2, 0}, p1234()), Error);
  EXPECT_THROW(apply({Operator::BSH, 0, 2, 0}, p1234()), Error);
  EXPECT_THROW(apply({Operator::FSH, 1, 5, 0}, p1234()), Error);
}

TEST(Apply, InverseAndInvolutionProperties) {
  Rng rng(4);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 20));
    const auto p = random_permutation(n, rng);
    const int i = static_cast<int>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 1));
    const int j = static_cast<int>(rng.uniform_int(i + 1, static_cast<std::int64_t>(n)));
    EXPECT_EQ(apply({Operator::EX, i, j, 0}, apply({Operator::EX, i, j, 0}, p)), p);
    EXPECT_EQ(apply({Operator::BSH, i, j, 0}, apply({Operator::FSH, i, j, 0}, p)), p);
    EXPECT_EQ(apply({Operator::FSH, i, j, 0}, apply({Operator::BSH, i, j, 0}, p)), p);
    for (Operator op : kAllOperators) {
      // Result must be a bijection and match the erase/insert definition.
      const auto q = apply({op, i, j, 0}, p);
      EXPECT_NO_THROW(Permutation::from_zero_based(q.vec()));
      EXPECT_EQ(q.to_one_based(), oracle::neighbor(oracle_op(op), i, j, p.to_one_based()));
    }
  }
}

TEST(Enumerate, LexicographicOrder) {
  const auto moves = enumerate_moves(Operator::EX, 3);
  ASSERT_EQ(moves.size(), 3u);
  EXPECT_EQ(moves[0].i, 1);
  EXPECT_EQ(moves[0].j, 2);
  EXPECT_EQ(moves[1].i, 1);
  EXPECT_EQ(moves[1].j, 3);
  EXPECT_EQ(moves[2].i, 2);
  EXPECT_EQ(moves[2].j, 3);
  const auto two = enumerate_moves(Operator::FSH, 2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0], (Move{Operator::FSH, 1, 2, 0}));
  for (std::size_t n = 1; n < 30; ++n)
    for (Operator op : kAllOperators) EXPECT_EQ(enumerate_moves(op, n).size(), n * (n - 1) / 2);
}

TEST(Scan, DeltasEqualFullReevaluationExhaustively) {
  std::mt19937_64 g(17);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 6; ++rep) {
      const auto inst = oracle::random_instance(n, g());
      const auto r = oracle::raw(inst);
      Rng rng(g());
      const auto perm = random_permutation(n, rng);
      const auto seq = perm.to_one_based();
      const long long base = oracle::twt(seq, r);
      for (Operator op : kAllOperators) {
        EvalCounter counter;
        const auto moves = scan_moves(perm, inst, op, counter);
        const auto order = enumerate_moves(op, n);
        ASSERT_EQ(moves.size(), order.size());
        EXPECT_EQ(counter.count, n * (n - 1) / 2);
        for (std::size_t k = 0; k < moves.size(); ++k) {
          ASSERT_EQ(moves[k].i, order[k].i);
          ASSERT_EQ(moves[k].j, order[k].j);
          const long long expected =
              oracle::twt(oracle::neighbor(oracle_op(op), moves[k].i, moves[k].j, seq), r) - base;
          ASSERT_EQ(moves[k].delta, expected) << to_string(op) << " n=" << n << " (" << moves[k].i << ","
                                              << moves[k].j << ")";
        }
      }
    }
  }
}

TEST(BestMove, MatchesBruteForceMinimum) {
  std::mt19937_64 g(23);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = oracle::random_instance(8, g());
    const auto r = oracle::raw(inst);
    Rng rng(g());
    const auto perm = random_permutation(8, rng);
    for (Operator op : kAllOperators) {
      EvalCounter counter;
      const auto best = best_move(perm, inst, op, counter);
      EXPECT_EQ(counter.count, 28u);
      const long long expected = oracle::best_delta(oracle_op(op), perm.to_one_based(), r);
      if (expected < 0) {
        ASSERT_TRUE(best.has_value());
        EXPECT_EQ(best->delta, expected);
        EXPECT_EQ(evaluate(apply(*best, perm), inst) - evaluate(perm, inst), best->delta);
      } else {
        EXPECT_FALSE(best.has_value());
      }
    }
  }
}

TEST(BestMove, TiesGoToFirstEnumeratedMove) {
  Rng rng(8);
  int checked = 0;
  for (int rep = 0; rep < 400; ++rep) {
    // Unit processing times and small weights produce many equal deltas.
    const std::size_t n = 6;
    std::vector<Time> p(n, 1), d(n);
    std::vector<Cost> w(n);
    for (auto& x : w) x = rng.uniform_int(1, 2);
    for (auto& x : d) x = rng.uniform_int(0, 3);
    const Instance inst(p, w, d);
    const auto perm = random_permutation(n, rng);
    for (Operator op : kAllOperators) {
      EvalCounter c1, c2;
      const auto best = best_move(perm, inst, op, c1);
      const auto all = scan_moves(perm, inst, op, c2);
      std::optional<Move> first;
      for (const auto& m : all)
        if (m.delta < 0 && (!first || m.delta < first->delta)) first = m;
      EXPECT_EQ(best, first);
      if (first) {
        std::size_t ties = 0;
        for (const auto& m : all) ties += m.delta == first->delta;
        checked += ties > 1;
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(BestMove, NoImprovementWhenNothingIsLate) {
  const Instance inst({4, 9, 2, 7}, {3, 1, 8, 2}, {22, 30, 22, 25});
  for (Operator op : kAllOperators) {
    EvalCounter counter;
    EXPECT_FALSE(best_move(p1234(), inst, op, counter).has_value());
    EXPECT_EQ(counter.count, 6u);
  }
}

TEST(BestMove, SingleJobHasEmptyNeighborhood) {
  const Instance inst({3}, {2}, {1});
  EvalCounter counter;
  EXPECT_FALSE(best_move(Permutation::identity(1), inst, Operator::EX, counter).has_value());
  EXPECT_EQ(counter.count, 0u);
}

TEST(Operators, ParseAndPrint) {
  for (Operator op : kAllOperators) EXPECT_EQ(parse_operator(to_string(op)), op);
  EXPECT_THROW(parse_operator("ex"), Error);
  EXPECT_THROW(parse_operator("SWAP"), Error);
}
