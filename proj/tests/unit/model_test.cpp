#include <gtest/gtest.h>

#include <random>

#include "discbal/model.hpp"
#include "discbal/strategies.hpp"
#include "reference.hpp"

namespace discbal {
namespace {

TEST(SparseColumn, CanonicalizesAndValidates) {
  SparseColumn c({3, 0, 2}, 4);
  EXPECT_EQ(std::vector<RowIndex>(c.support().begin(), c.support().end()), (std::vector<RowIndex>{0, 2, 3}));
  EXPECT_TRUE(c.contains(2));
  EXPECT_FALSE(c.contains(1));
  EXPECT_THROW(SparseColumn({1, 1}, 4), std::invalid_argument);
  EXPECT_THROW(SparseColumn({4}, 4), std::out_of_range);
  EXPECT_THROW(SparseColumn({}, 4), std::invalid_argument);
}

TEST(Instance, RejectsColumnsOfWrongSparsity) {
  Instance inst(5, 2);
  inst.push_back(SparseColumn({0, 4}, 5));
  EXPECT_THROW(inst.push_back(SparseColumn({1}, 5)), std::invalid_argument);
  EXPECT_THROW(inst.push_back(SparseColumn({1, 6}, 7)), std::out_of_range);
  EXPECT_EQ(inst.columns(), 1u);
  EXPECT_THROW(Instance(0, 1), std::invalid_argument);
  EXPECT_THROW(Instance(3, 4), std::invalid_argument);
}

TEST(Instance, RowSupportsAreDerivedFromColumns) {
  Instance inst(3, 1, {SparseColumn({0}, 3), SparseColumn({2}, 3), SparseColumn({0}, 3)});
  EXPECT_EQ(inst.row_support(0), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(inst.row_support(1), (std::vector<std::size_t>{}));
  EXPECT_EQ(inst.row_support_counts(), (std::vector<std::size_t>{2, 0, 1}));
}

TEST(RowLedger, NewLedgerIsZero) {
  RowLedger a(4, 2.0);
  EXPECT_EQ(std::vector<Partial>(a.partials().begin(), a.partials().end()), (std::vector<Partial>{0, 0, 0, 0}));
  EXPECT_EQ(a.exceptional_count(), 0u);
  EXPECT_EQ(a.time(), 0u);
  EXPECT_EQ(a.corrected_count(), 0u);

  RowLedger b(1, 0.5);
  EXPECT_EQ(b.partial(0), 0);
  EXPECT_EQ(b.exceptional_count(), 0u);
}

TEST(RowLedger, RejectsBadParameters) {
  EXPECT_THROW(RowLedger(0, 1.0), std::invalid_argument);
  EXPECT_THROW(RowLedger(3, 0.0), std::invalid_argument);
  EXPECT_THROW(RowLedger(3, -1.0), std::invalid_argument);
}

TEST(RowLedger, ThresholdCrossingAddsRow) {
  RowLedger l(2, 2.0);
  const SparseColumn c0({0}, 2);
  l.apply(c0.support(), +1);
  EXPECT_FALSE(l.is_exceptional(0));
  l.apply(c0.support(), +1);
  EXPECT_EQ(l.partial(0), 2);
  EXPECT_EQ(l.partial(1), 0);
  EXPECT_TRUE(l.is_exceptional(0));
  EXPECT_EQ(l.entry_time(0), 2);
}

TEST(RowLedger, ExceptionalRowsStayExceptional) {
  RowLedger l(2, 2.0);
  const SparseColumn c0({0}, 2);
  l.apply(c0.support(), +1);
  l.apply(c0.support(), +1);
  l.apply(c0.support(), -1);
  EXPECT_EQ(l.partial(0), 1);
  EXPECT_TRUE(l.is_exceptional(0));
  EXPECT_EQ(l.exceptional_rows(), (std::vector<RowIndex>{0}));
}

TEST(RowLedger, BelowThresholdStaysOut) {
  RowLedger l(2, 5.0);
  const SparseColumn c({0, 1}, 2);
  l.apply(c.support(), -1);
  EXPECT_EQ(l.partial(0), -1);
  EXPECT_EQ(l.partial(1), -1);
  EXPECT_EQ(l.exceptional_count(), 0u);
}

TEST(RowLedger, OutOfRangeIndexLeavesStateUntouched) {
  RowLedger l(2, 5.0);
  const std::vector<RowIndex> bad{0, 2};
  EXPECT_THROW(l.apply(bad, +1), std::out_of_range);
  EXPECT_EQ(l.time(), 0u);
  EXPECT_EQ(l.partial(0), 0);
}

TEST(RowLedger, InfiniteTauNeverFires) {
  RowLedger l(1, kInfiniteTau);
  const SparseColumn c({0}, 1);
  for (int i = 0; i < 1000; ++i) l.apply(c.support(), +1);
  EXPECT_EQ(l.exceptional_count(), 0u);
  EXPECT_EQ(l.partial(0), 1000);
}

Trace run_signs(const Instance& inst, const std::vector<Sign>& signs) {
  StrategyParams p{StrategyKind::random, kDefaultCAlg, kInfiniteTau, inst.rows()};
  return run_online(inst, p, signs).trace;
}

TEST(PrefixDisc, SameRowTwice) {
  Instance inst(1, 1, {SparseColumn({0}, 1), SparseColumn({0}, 1)});
  EXPECT_EQ(prefix_disc(run_signs(inst, {1, 1})), 2);
}

TEST(PrefixDisc, CancellationKeepsPrefixMax) {
  Instance inst(2, 2, {SparseColumn({0, 1}, 2), SparseColumn({0, 1}, 2)});
  EXPECT_EQ(prefix_disc(run_signs(inst, {1, -1})), 1);
}

TEST(PrefixDisc, EmptyTraceIsZero) { EXPECT_EQ(prefix_disc(Trace{}), 0); }

// Incremental partials and exceptional set against a from-scratch recount,
// over 10^4+ random steps.
TEST(RowLedgerProperty, ReconstructionAndMonotonicity) {
  std::mt19937_64 gen(2024);
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; steps < 12000; ++seed) {
    const std::size_t n = 1 + gen() % 12;
    const std::size_t d = 1 + gen() % n;
    const std::size_t T = 50 + gen() % 100;
    const double tau = 1.0 + static_cast<double>(gen() % 4);
    const Instance inst = reference::random_instance(n, d, T, seed);
    const auto signs = reference::random_signs(T, seed + 7);

    RowLedger ledger(n, tau);
    std::vector<std::int64_t> dense(n, 0);
    std::vector<bool> was_exceptional(n, false);
    std::size_t last_size = 0;
    for (std::size_t t = 0; t < T; ++t, ++steps) {
      ledger.apply(inst.column(t), signs[t]);
      for (RowIndex r : inst.column(t)) dense[r] += signs[t];
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_EQ(ledger.partial(static_cast<RowIndex>(i)), dense[i]);
        if (std::abs(static_cast<double>(dense[i])) >= tau) was_exceptional[i] = true;
        ASSERT_EQ(ledger.is_exceptional(static_cast<RowIndex>(i)), was_exceptional[i]);
      }
      ASSERT_GE(ledger.exceptional_count(), last_size);
      last_size = ledger.exceptional_count();
    }
  }
}

TEST(TraceProperty, PrefixDiscMatchesBruteForceOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const std::size_t d = 1 + (seed / 8) % n;
    const std::size_t T = seed % 9;
    const Instance inst = reference::random_instance(n, d, T, seed);
    const auto signs = reference::random_signs(T, seed ^ 0xABCD);
    StrategyParams p{StrategyKind::random, kDefaultCAlg, kInfiniteTau, n};
    const RunResult run = run_online(inst, p, signs);
    ASSERT_EQ(run.trace.max_prefix_disc(), reference::brute_prefix_disc(inst, signs)) << "seed " << seed;
  }
}

TEST(TraceProperty, MaxPrefixDiscIsNondecreasing) {
  const Instance inst = reference::random_instance(10, 3, 200, 5);
  const auto signs = reference::random_signs(200, 6);
  StrategyParams p{StrategyKind::random, kDefaultCAlg, kInfiniteTau, 10};
  StrategyState state(p, signs);
  Trace trace;
  Partial last = 0;
  for (std::size_t t = 0; t < inst.columns(); ++t) {
    const auto out = state.step(inst.column(t));
    trace.record(out.sign, out.column_peak);
    ASSERT_GE(trace.max_prefix_disc(), last);
    last = trace.max_prefix_disc();
  }
}

}  // namespace
}  // namespace discbal
