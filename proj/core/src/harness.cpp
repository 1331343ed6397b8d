#include "discbal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace discbal {

StrategyParams ExperimentConfig::strategy_params() const {
  StrategyParams p;
  p.kind = strategy;
  p.c_alg = c_alg;
  p.tau_override = tau_override;
  p.n = n;
  return p;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw ConfigError("$.n", "must be a positive integer");
  if (n > std::numeric_limits<RowIndex>::max()) throw ConfigError("$.n", "too large");
  if (d == 0 || d > n) throw ConfigError("$.d", "must lie in [1, n]");
  if (trials == 0) throw ConfigError("$.trials", "must be a positive integer");
  if (!(c_alg > 0) || !std::isfinite(c_alg)) throw ConfigError("$.c_alg", "must be a positive real");
  if (tau_override && !(*tau_override > 0)) throw ConfigError("$.tau_override", "must be positive");
  if (!tau_override && n < 16) throw ConfigError("$.tau_override", "required when n < 16 (ln ln n must exceed 1)");
  if (threads && *threads == 0) throw ConfigError("$.threads", "must be positive");
  const std::size_t T = horizon();
  for (std::size_t i = 0; i < record.snapshot_times.size(); ++i)
    if (record.snapshot_times[i] > T)
      throw ConfigError("$.record.snapshot_times[" + std::to_string(i) + "]", "exceeds T");
  for (std::size_t i = 0; i < record.stats_times.size(); ++i)
    if (record.stats_times[i] > T) throw ConfigError("$.record.stats_times[" + std::to_string(i) + "]", "exceeds T");
  if (record.spread_q_max > 0 && n < 16) throw ConfigError("$.record.spread_q_max", "spread schedule needs n >= 16");
  if (record.m_sets && !record.m_base && n < 16) throw ConfigError("$.record.m_sets.base", "required when n < 16");
  if (record.category_depth && *record.category_depth == 0)
    throw ConfigError("$.record.categories.depth", "must be positive");
}

bool in_proven_regime(std::size_t n, std::size_t d, std::size_t T) {
  if (T != n || d < 2 || n < 16) return false;
  const double lnln = std::log(std::log(static_cast<double>(n)));
  const double lnlnln = std::log(lnln);
  if (!(lnlnln > 0)) return false;
  return static_cast<double>(d) <= lnln * lnln / lnlnln;
}

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  m.min = *lo;
  m.max = *hi;
  double sum = 0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const SeedSpec seed{config.master_seed, trial_index, Stream::columns};
  const std::size_t T = config.horizon();
  const RecordOptions& rec = config.record;

  const Instance instance = sample_instance(config.n, config.d, T, seed);
  const StrategyParams params = config.strategy_params();

  std::vector<ScheduleEntry> schedule;
  if (rec.spread_q_max > 0) schedule = spread_schedule(config.n, rec.spread_q_max);

  TraceOptions options;
  options.snapshot_times = rec.snapshot_times;
  for (const auto& e : schedule)
    if (e.k <= T) options.snapshot_times.push_back(static_cast<std::size_t>(e.k));
  options.sample_times = rec.stats_times;
  options.record_final_sample = !rec.stats_times.empty();

  const RunResult run = run_online(instance, params, seed, options);

  TrialRecord r;
  r.trial_index = trial_index;
  r.master_seed = config.master_seed;
  r.column_seed = seed.with(Stream::columns).key();
  r.sigma_seed = seed.with(Stream::sigma_tilde).key();
  r.n = config.n;
  r.d = config.d;
  r.T = T;
  r.strategy = config.strategy;
  r.tau = run.ledger.tau();
  r.final_disc = run.ledger.current_norm();
  r.max_prefix_disc = run.trace.max_prefix_disc();
  r.e_size_final = run.ledger.exceptional_count();
  r.corrected_columns = run.ledger.corrected_count();
  r.sign_divergence_count = run.trace.divergence_count();
  r.correction_violations = run.trace.correction_violations();
  r.proven_regime = in_proven_regime(config.n, config.d, T);

  TrialDiagnostics diag;
  auto snapshot_at = [&](std::size_t t) -> const Snapshot* {
    for (const auto& s : run.trace.snapshots())
      if (s.time == t) return &s;
    return nullptr;
  };
  for (std::size_t t : rec.snapshot_times) {
    const Snapshot* s = snapshot_at(t);
    SnapshotSummary summary{t, 0, 0};
    for (Partial p : s->partials) {
      summary.norm = std::max(summary.norm, std::abs(p));
      if (p != 0) ++summary.nonzero;
    }
    diag.snapshots.push_back(summary);
  }
  for (const auto& e : schedule) {
    SpreadDiagnostic sd{e, std::nullopt, false};
    if (e.k <= T) {
      const Snapshot* s = snapshot_at(static_cast<std::size_t>(e.k));
      sd.spread = best_spread(s->partials, static_cast<Partial>(e.q), s->time);
      sd.reached = sd.spread && sd.spread->size >= e.s;
    }
    diag.spreads.push_back(sd);
  }
  if (rec.categories) {
    const std::size_t depth = rec.category_depth.value_or(default_category_depth(config.n));
    const auto report = compute_categories(instance, run.sigma_tilde, run.trace.signs(), r.tau, depth);
    diag.categories = CategoryDiagnostic{depth, report.sizes(), report.categorized(),
                                         uncovered_exceptional(run.ledger, report)};
  }
  if (rec.m_sets) {
    const double base = rec.m_base.value_or(m_set_base(config.c_alg, config.n));
    diag.m_base = base;
    for (std::size_t k : rec.m_k) diag.m_sets.push_back({k, count_m_set(run.ledger.peaks(), base, k)});
  }
  if (rec.untouched_rows) diag.untouched_rows = count_untouched_rows(instance, 0, T);
  diag.exceptional_series = exceptional_stats(run.trace);
  if (!diag.empty()) r.diagnostics = std::move(diag);

  if (config.output.timing)
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::size_t resolve_threads(const ExperimentConfig& config) {
  if (config.threads) return *config.threads;
  if (const char* env = std::getenv("DISCBAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  result.records.resize(config.trials);

  const std::size_t workers = std::min(resolve_threads(config), config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      try {
        result.records[i] = run_trial(config, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  result.summary = summarize(result.records);
  return result;
}

AggregateSummary summarize(const std::vector<TrialRecord>& records) {
  AggregateSummary s;
  s.trials = records.size();
  if (records.empty()) return s;
  std::vector<double> prefix, final_disc, e_size, untouched;
  std::size_t nonempty = 0, corrected = 0;
  for (const auto& r : records) {
    prefix.push_back(r.max_prefix_disc);
    final_disc.push_back(r.final_disc);
    e_size.push_back(static_cast<double>(r.e_size_final));
    nonempty += r.e_size_final > 0;
    corrected += r.corrected_columns > 0;
    if (!r.diagnostics) continue;
    const auto& d = *r.diagnostics;
    if (s.spread_reached.size() < d.spreads.size()) s.spread_reached.resize(d.spreads.size(), 0.0);
    for (std::size_t q = 0; q < d.spreads.size(); ++q) s.spread_reached[q] += d.spreads[q].reached;
    if (s.m_set_nonempty.size() < d.m_sets.size()) s.m_set_nonempty.resize(d.m_sets.size(), 0.0);
    for (std::size_t k = 0; k < d.m_sets.size(); ++k) s.m_set_nonempty[k] += d.m_sets[k].count > 0;
    if (d.untouched_rows) untouched.push_back(static_cast<double>(*d.untouched_rows));
  }
  const auto count = static_cast<double>(records.size());
  s.max_prefix_disc = moments(prefix);
  s.final_disc = moments(final_disc);
  s.e_size_final = moments(e_size);
  s.frac_exceptional_nonempty = static_cast<double>(nonempty) / count;
  s.frac_corrected = static_cast<double>(corrected) / count;
  for (auto& v : s.spread_reached) v /= count;
  for (auto& v : s.m_set_nonempty) v /= count;
  if (!untouched.empty()) s.untouched_rows = moments(untouched);
  return s;
}

}  // namespace discbal
