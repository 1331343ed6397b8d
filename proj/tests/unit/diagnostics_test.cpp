#include <gtest/gtest.h>

#include <random>

#include "discbal/diagnostics.hpp"
#include "discbal/sampler.hpp"
#include "discbal/strategies.hpp"
#include "reference.hpp"

namespace discbal {
namespace {

TEST(BestSpread, AllZeroIsTrivialSpread) {
  const std::vector<Partial> p(10, 0);
  const auto s = best_spread(p, 0);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->ell, 0);
  EXPECT_EQ(s->r, 0);
  EXPECT_EQ(s->size, 5u);
}

TEST(BestSpread, HandEnumeratedCase) {
  // Pairs with width >= 1: (-1,0) size 1, (0,1) size 1, (-1,1) size 1, (-1,2)... none.
  // Ties break toward the widest pair.
  const std::vector<Partial> p{1, 1, -1, 0};
  const auto s = best_spread(p, 1);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->size, 1u);
  EXPECT_EQ(s->ell, -1);
  EXPECT_EQ(s->r, 1);
  EXPECT_EQ(s->width(), 2);
}

TEST(BestSpread, NoRowAtOrBelowZero) {
  const std::vector<Partial> p{2, 2, 2};
  EXPECT_FALSE(best_spread(p, 1));
  EXPECT_FALSE(best_spread(std::vector<Partial>{}, 0));
}

TEST(BestSpreadProperty, AgreesWithPairwiseEnumeration) {
  std::mt19937_64 gen(77);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::size_t len = 1 + gen() % 64;
    const int spread = 1 + static_cast<int>(gen() % 6);
    std::vector<Partial> p(len);
    for (auto& v : p) v = static_cast<Partial>(static_cast<int>(gen() % (2 * spread + 1)) - spread);
    const Partial q = static_cast<Partial>(gen() % 5);
    const auto fast = best_spread(p, q);
    const auto slow = reference::pairwise_spread(p, q);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      ASSERT_EQ(fast->size, slow->size);
      ASSERT_EQ(fast->ell, slow->ell);
      ASSERT_EQ(fast->r, slow->r);
    }
  }
}

// Expected values from an independent 50-digit evaluation of
// k_1 = ceil(n / (ln n)^e) and s_1 = ceil(n / (ln n)^3).
TEST(SpreadSchedule, MatchesHighPrecisionValues) {
  EXPECT_EQ(spread_schedule(1'000'000, 5), (std::vector<ScheduleEntry>{{1, 795, 380}}));
  EXPECT_EQ(spread_schedule(1u << 20, 5), (std::vector<ScheduleEntry>{{1, 826, 394}}));
  EXPECT_EQ(schedule_entry(1'000'000'000, 1), (ScheduleEntry{1, 263935, 112364}));
  EXPECT_EQ(schedule_entry(1'000'000, 2), (ScheduleEntry{2, 796, 1}));
}

TEST(SpreadSchedule, EdgeCases) {
  EXPECT_TRUE(spread_schedule(1'000'000, 0).empty());
  EXPECT_TRUE(spread_schedule(16, 3).empty());
  EXPECT_THROW(spread_schedule(15, 1), std::invalid_argument);
}

TEST(SpreadSchedule, SizesShrinkAndTimesGrow) {
  for (std::uint64_t n : {1'000'000ULL, 1ULL << 30, 1ULL << 40}) {
    std::uint64_t last_s = ~0ULL, last_k = 0;
    for (std::size_t q = 1; q <= 4; ++q) {
      const auto e = schedule_entry(n, q);
      if (last_s > 1) EXPECT_LT(e.s, last_s);
      EXPECT_LE(e.s, last_s);
      EXPECT_GT(e.k, last_k);
      last_s = e.s;
      last_k = e.k;
    }
  }
}

TEST(Categories, EmptyRunLeavesRowsUncategorized) {
  const Instance inst(5, 2);
  const auto rep = compute_categories(inst, {}, {}, 2.0, 3);
  EXPECT_EQ(rep.categorized(), 0u);
  EXPECT_EQ(rep.sizes(), (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(Categories, SeedWalkCrossingHalfThreshold) {
  // tau = 2: category 0 needs |seed sum| > 1, first reached at s = 2.
  Instance inst(1, 1, {SparseColumn({0}, 1), SparseColumn({0}, 1), SparseColumn({0}, 1)});
  const std::vector<Sign> seed{1, 1, 1};
  const auto rep = compute_categories(inst, seed, seed, 2.0, 2);
  ASSERT_TRUE(rep.rows[0]);
  EXPECT_EQ(rep.rows[0]->w, 0u);
  EXPECT_EQ(rep.rows[0]->entry_time, 2u);
}

TEST(Categories, RejectsInconsistentLengths) {
  const Instance inst = sample_instance(10, 2, 5, SeedSpec{1});
  const std::vector<Sign> five(5, 1), four(4, 1);
  EXPECT_THROW(compute_categories(inst, five, four, 2.0, 2), std::invalid_argument);
  EXPECT_THROW(compute_categories(inst, four, five, 2.0, 2), std::invalid_argument);
}

void expect_matches_naive(std::size_t n, std::size_t d, std::size_t T, double tau, std::size_t w_max,
                          std::uint64_t seed_value) {
  const SeedSpec seed{seed_value};
  const Instance inst = sample_instance(n, d, T, seed);
  const RunResult run = run_online(inst, StrategyParams{StrategyKind::alg1, kDefaultCAlg, tau, n}, seed);
  const auto rep = compute_categories(inst, run.sigma_tilde, run.trace.signs(), tau, w_max);
  const auto naive = reference::naive_categories(inst, run.sigma_tilde, tau, w_max);
  ASSERT_EQ(rep.entry, naive) << "seed " << seed_value;
}

TEST(Categories, MatchesNaiveDefinitionN64) { expect_matches_naive(64, 3, 64, 2.0, 6, 2024); }

TEST(CategoriesProperty, MatchesNaiveDefinitionOnRandomInstances) {
  for (std::uint64_t s = 0; s < 25; ++s) expect_matches_naive(8 + s % 13, 2 + s % 3, 10 + s % 20, 1.0 + s % 4, 4, s);
}

TEST(CategoriesProperty, WitnessesPrecedeEntry) {
  const SeedSpec seed{99};
  const std::size_t n = 300, T = 600;
  const double tau = 4.0;
  const Instance inst = sample_instance(n, 3, T, seed);
  const RunResult run = run_online(inst, StrategyParams{StrategyKind::alg1, kDefaultCAlg, tau, n}, seed);
  const auto rep = compute_categories(inst, run.sigma_tilde, run.trace.signs(), tau, 5);
  ASSERT_GT(rep.sizes()[0], 0u);
  ASSERT_GT(rep.sizes()[1], 0u);
  for (std::size_t w = 1; w < rep.entry.size(); ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = rep.entry[w][i];
      if (e < 0) continue;
      std::size_t witnesses = 0;
      for (std::size_t j : inst.row_support(static_cast<RowIndex>(i))) {
        if (static_cast<std::int64_t>(j + 1) > e) break;
        for (RowIndex other : inst.column(j)) {
          const auto pe = rep.entry[w - 1][other];
          if (other != i && pe >= 0 && pe <= static_cast<std::int64_t>(j)) {
            ++witnesses;
            break;
          }
        }
      }
      EXPECT_GE(witnesses, 2u);
    }
  }
}

TEST(MSet, ThresholdArithmetic) {
  const std::vector<Partial> peaks{6, 5, 0};
  EXPECT_EQ(count_m_set(peaks, 3.0, 1), 1u);
  EXPECT_EQ(count_m_set(peaks, 3.0, 0), 2u);
  EXPECT_EQ(count_m_set(std::vector<Partial>(10, 0), 0.5, 0), 0u);
}

TEST(MSetProperty, NestedInKAndMatchesHistory) {
  const SeedSpec seed{5};
  const std::size_t n = 50, T = 400;
  const Instance inst = sample_instance(n, 2, T, seed);
  const RunResult run = run_online(inst, StrategyParams{StrategyKind::random, kDefaultCAlg, 100.0, n}, seed);
  const std::vector<Sign> signs(run.trace.signs().begin(), run.trace.signs().end());
  std::vector<std::int64_t> peak(n, 0);
  for (std::size_t s = 0; s <= T; ++s) {
    const auto p = reference::partials_at(inst, signs, s);
    for (std::size_t i = 0; i < n; ++i) peak[i] = std::max<std::int64_t>(peak[i], std::llabs(p[i]));
  }
  const double base = 2.0;
  std::size_t last = n + 1;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto c = count_m_set(run.ledger.peaks(), base, k);
    std::size_t expected = 0;
    for (auto v : peak) expected += static_cast<double>(v) >= base + 3.0 * static_cast<double>(k);
    EXPECT_EQ(c, expected);
    EXPECT_LE(c, last);
    last = c;
  }
}

TEST(MSet, BaseFormula) {
  EXPECT_DOUBLE_EQ(m_set_base(28.0, 1u << 20), 29.0 * std::log(std::log(static_cast<double>(1u << 20))));
}

TEST(UntouchedRows, Basics) {
  Instance single(3, 1, {SparseColumn({0}, 3)});
  single.push_back(SparseColumn({0}, 3));
  EXPECT_EQ(count_untouched_rows(single, 0, 2), 2u);

  Instance mixed(3, 1, {SparseColumn({0}, 3), SparseColumn({1}, 3)});
  EXPECT_EQ(count_untouched_rows(mixed, 0, 2), 1u);
  EXPECT_EQ(count_untouched_rows(mixed, 1, 1), 3u);
  EXPECT_EQ(count_untouched_rows(mixed, 1, 2), 2u);
  EXPECT_THROW(count_untouched_rows(mixed, 2, 1), std::out_of_range);
  EXPECT_THROW(count_untouched_rows(mixed, 0, 3), std::out_of_range);
}

TEST(ExceptionalStats, InfiniteTauKeepsEmpty) {
  const SeedSpec seed{8};
  const Instance inst = sample_instance(100, 3, 1000, seed);
  TraceOptions opts;
  opts.sample_times = {100, 500, 900};
  const RunResult run = run_online(inst, StrategyParams{StrategyKind::alg1, kDefaultCAlg, kInfiniteTau, 100}, seed, opts);
  const auto series = exceptional_stats(run.trace);
  ASSERT_EQ(series.size(), 4u);
  for (const auto& s : series) EXPECT_EQ(s.exceptional, 0u);
}

TEST(ExceptionalStats, SizesAreNondecreasing) {
  const SeedSpec seed{9};
  const Instance inst = sample_instance(100, 3, 1000, seed);
  TraceOptions opts;
  for (std::size_t t = 0; t <= 1000; t += 50) opts.sample_times.push_back(t);
  const RunResult run = run_online(inst, StrategyParams{StrategyKind::alg1, kDefaultCAlg, 3.0, 100}, seed, opts);
  const auto series = exceptional_stats(run.trace);
  ASSERT_FALSE(series.empty());
  for (std::size_t i = 1; i < series.size(); ++i) {
    EXPECT_GE(series[i].exceptional, series[i - 1].exceptional);
    EXPECT_GE(series[i].corrected, series[i - 1].corrected);
  }
  EXPECT_EQ(series.back().exceptional, run.ledger.exceptional_count());
  EXPECT_GT(series.back().exceptional, 0u);
}

}  // namespace
}  // namespace discbal
