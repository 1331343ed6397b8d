#include "discbal/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discbal {

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::alg1: return "alg1";
    case StrategyKind::random: return "random";
    case StrategyKind::greedy: return "greedy";
    case StrategyKind::majority: return "majority";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
  for (auto k : {StrategyKind::alg1, StrategyKind::random, StrategyKind::greedy, StrategyKind::majority})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

double StrategyParams::resolved_tau() const {
  if (tau_override) {
    if (!(*tau_override > 0)) throw std::invalid_argument("tau_override must be positive");
    return *tau_override;
  }
  if (n < 16) throw std::invalid_argument("c_alg * ln ln n needs n >= 16 (or an explicit tau_override)");
  if (!(c_alg > 0)) throw std::invalid_argument("c_alg must be positive");
  return c_alg * std::log(std::log(static_cast<double>(n)));
}

StrategyState::StrategyState(StrategyParams params, std::vector<Sign> sigma_tilde)
    : params_(params), ledger_(params.n, params.resolved_tau()), sigma_tilde_(std::move(sigma_tilde)) {}

StrategyState::StrategyState(StrategyParams params, RowLedger ledger, std::vector<Sign> sigma_tilde)
    : params_(params), ledger_(std::move(ledger)), sigma_tilde_(std::move(sigma_tilde)) {
  if (params_.n != ledger_.rows()) throw std::invalid_argument("StrategyState: params.n differs from ledger rows");
  if (params_.resolved_tau() != ledger_.tau())
    throw std::invalid_argument("StrategyState: ledger tau differs from resolved tau");
}

Sign StrategyState::seed_sign() const {
  if (cursor() >= sigma_tilde_.size()) throw std::out_of_range("StrategyState: sigma~ exhausted");
  return sigma_tilde_[cursor()];
}

StepOutcome StrategyState::step(ColumnView column) {
  switch (params_.kind) {
    case StrategyKind::alg1: return alg1_step(*this, column);
    case StrategyKind::random: return random_step(*this, column);
    case StrategyKind::greedy: return greedy_step(*this, column);
    case StrategyKind::majority: return majority_step(*this, column);
  }
  throw std::logic_error("unknown strategy");
}

StepOutcome StrategyState::commit(ColumnView column, Sign sign, bool corrected, RowIndex target) {
  StepOutcome out;
  out.seed_sign = seed_sign();
  out.sign = sign;
  out.corrected = corrected;
  out.target = target;
  if (corrected) out.target_before = ledger_.partial(target);
  out.column_peak = ledger_.apply(column, sign);
  if (corrected) {
    out.target_after = ledger_.partial(target);
    ledger_.note_correction();
  }
  return out;
}

StepOutcome alg1_step(StrategyState& state, ColumnView column) {
  const RowLedger& ledger = state.ledger();
  std::size_t hits = 0;
  RowIndex target = 0;
  for (RowIndex r : column) {
    if (ledger.is_exceptional(r)) {
      target = r;
      if (++hits > 1) break;
    }
  }
  if (hits == 1) {
    const Sign sign = static_cast<Sign>(-sign_of(ledger.partial(target)));
    return state.commit(column, sign, true, target);
  }
  return state.commit(column, state.seed_sign(), false, 0);
}

StepOutcome random_step(StrategyState& state, ColumnView column) {
  return state.commit(column, state.seed_sign(), false, 0);
}

StepOutcome greedy_step(StrategyState& state, ColumnView column) {
  const RowLedger& ledger = state.ledger();
  Partial worst_plus = 0;
  Partial worst_minus = 0;
  for (RowIndex r : column) {
    const Partial p = ledger.partial(r);
    worst_plus = std::max(worst_plus, std::abs(p + 1));
    worst_minus = std::max(worst_minus, std::abs(p - 1));
  }
  const Sign sign = worst_minus < worst_plus ? Sign{-1} : Sign{1};
  return state.commit(column, sign, false, 0);
}

StepOutcome majority_step(StrategyState& state, ColumnView column) {
  const RowLedger& ledger = state.ledger();
  std::int64_t sum = 0;
  for (RowIndex r : column) sum += ledger.partial(r);
  const Sign sign = sum == 0 ? state.seed_sign() : static_cast<Sign>(-sign_of(sum));
  return state.commit(column, sign, false, 0);
}

namespace {

bool contains_sorted(const std::vector<std::size_t>& v, std::size_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void sample_into(Trace& trace, const RowLedger& ledger) {
  trace.add_sample({ledger.time(), ledger.exceptional_count(), ledger.corrected_count()});
}

}  // namespace

RunResult run_online(const Instance& instance, StrategyParams params, const SeedSpec& seeds,
                     const TraceOptions& options) {
  return run_online(instance, params, sample_sigma_tilde(instance.columns(), seeds), options);
}

RunResult run_online(const Instance& instance, StrategyParams params, std::vector<Sign> sigma_tilde,
                     const TraceOptions& options) {
  const std::size_t T = instance.columns();
  if (sigma_tilde.size() < T) throw std::invalid_argument("run_online: sigma~ shorter than the instance");
  params.n = instance.rows();

  auto snapshots = options.snapshot_times;
  auto samples = options.sample_times;
  std::sort(snapshots.begin(), snapshots.end());
  std::sort(samples.begin(), samples.end());

  StrategyState state(params, std::move(sigma_tilde));
  Trace trace;
  trace.reserve(T);

  auto observe = [&](const RowLedger& ledger) {
    const std::size_t t = ledger.time();
    if (contains_sorted(snapshots, t)) {
      auto p = ledger.partials();
      trace.add_snapshot({t, std::vector<Partial>(p.begin(), p.end())});
    }
    if (contains_sorted(samples, t) && t != T) sample_into(trace, ledger);
  };

  observe(state.ledger());
  for (std::size_t t = 0; t < T; ++t) {
    const ColumnView column = instance.column(t);
    const StepOutcome out = state.step(column);
    trace.record(out.sign, out.column_peak);
    if (out.sign != out.seed_sign) trace.note_divergence();
    if (out.corrected && out.target_before != 0 &&
        std::abs(out.target_after) != std::abs(out.target_before) - 1)
      trace.note_correction_violation();
    if (!snapshots.empty() || !samples.empty()) observe(state.ledger());
  }
  if (!samples.empty() || options.record_final_sample) sample_into(trace, state.ledger());

  auto seed = std::vector<Sign>(state.sigma_tilde().begin(), state.sigma_tilde().end());
  return RunResult{std::move(trace), std::move(state).release_ledger(), std::move(seed)};
}

}  // namespace discbal
