#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discbal/model.hpp"
#include "discbal/sampler.hpp"

namespace discbal {

enum class StrategyKind { alg1, random, greedy, majority };

/// Stable CLI-facing identifier: alg1 | random | greedy | majority.
std::string_view to_string(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

inline constexpr double kDefaultCAlg = 28.0;

struct StrategyParams {
  StrategyKind kind = StrategyKind::alg1;
  double c_alg = kDefaultCAlg;
  std::optional<double> tau_override;
  std::size_t n = 0;

  /// tau_override if set, else c_alg * ln(ln n). Throws when n < 16 and no
  /// override is given, or when the resulting tau is not positive.
  double resolved_tau() const;
};

/// What a single step decided, for accounting and inline checks.
struct StepOutcome {
  Sign sign = 1;
  Sign seed_sign = 1;
  bool corrected = false;
  RowIndex target = 0;
  Partial target_before = 0;
  Partial target_after = 0;
  Partial column_peak = 0;
};

/// Ledger plus a cursor into the pre-sampled seed signs. A step sees only
/// the seed, the ledger (i.e. past columns and signs) and the current column.
class StrategyState {
 public:
  StrategyState(StrategyParams params, std::vector<Sign> sigma_tilde);

  /// Resumes from an existing ledger; the cursor is ledger.time(). Throws if
  /// the ledger's tau differs from params' resolved tau.
  StrategyState(StrategyParams params, RowLedger ledger, std::vector<Sign> sigma_tilde);

  const StrategyParams& params() const noexcept { return params_; }
  const RowLedger& ledger() const noexcept { return ledger_; }
  RowLedger release_ledger() && { return std::move(ledger_); }
  std::size_t cursor() const noexcept { return ledger_.time(); }
  std::span<const Sign> sigma_tilde() const noexcept { return sigma_tilde_; }

  /// Next unread seed sign. Throws if the seed is exhausted.
  Sign seed_sign() const;

  /// Dispatches on params().kind.
  StepOutcome step(ColumnView column);

  StepOutcome commit(ColumnView column, Sign sign, bool corrected, RowIndex target);

 private:
  StrategyParams params_;
  RowLedger ledger_;
  std::vector<Sign> sigma_tilde_;
};

/// alg1: if exactly one row of the column is exceptional, sign
/// against that row's partial (sign(0) = +1); otherwise use sigma~_t.
StepOutcome alg1_step(StrategyState& state, ColumnView column);

/// Always sigma~_t.
StepOutcome random_step(StrategyState& state, ColumnView column);

/// Minimizes max over the support of |partial + sign|; ties go to +1.
StepOutcome greedy_step(StrategyState& state, ColumnView column);

/// -sign(sum of support partials); sigma~_t when the sum is zero.
StepOutcome majority_step(StrategyState& state, ColumnView column);

struct TraceOptions {
  /// Times (number of consumed columns) at which to copy the partials.
  std::vector<std::size_t> snapshot_times;
  /// Times at which to sample (|E_t|, corrected_count_t). Time T is always
  /// sampled when this is non-empty or record_final_sample is set.
  std::vector<std::size_t> sample_times;
  bool record_final_sample = false;
};

struct RunResult {
  Trace trace;
  RowLedger ledger;
  std::vector<Sign> sigma_tilde;
};

/// Runs one strategy over the instance in column order. sigma~ is drawn
/// from seeds' sigma_tilde stream; params.n is taken from the instance.
RunResult run_online(const Instance& instance, StrategyParams params, const SeedSpec& seeds,
                     const TraceOptions& options = {});

/// Same, with an explicit seed sign sequence of length >= T.
RunResult run_online(const Instance& instance, StrategyParams params, std::vector<Sign> sigma_tilde,
                     const TraceOptions& options = {});

}  // namespace discbal
