#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "discbal/diagnostics.hpp"
#include "discbal/model.hpp"
#include "discbal/sampler.hpp"
#include "discbal/strategies.hpp"

namespace discbal {

inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kCsvHeader =
    "trial,seed,n,d,T,strategy,tau,final_disc,max_prefix_disc,e_size,corrected,divergence,wall_ms";

/// Invalid configuration; `path()` names the offending field, e.g. "$.record.m_sets.k[1]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// File-system failure while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RecordOptions {
  std::vector<std::size_t> snapshot_times;
  /// Spread diagnostics at schedule times k_q for q = 1..spread_q_max (0 = off).
  std::size_t spread_q_max = 0;
  bool categories = false;
  std::optional<std::size_t> category_depth;
  bool m_sets = false;
  std::optional<double> m_base;  ///< defaults to (c_alg + 1) ln ln n
  std::vector<std::size_t> m_k;
  bool untouched_rows = false;
  std::vector<std::size_t> stats_times;
};

struct OutputOptions {
  std::string path;  ///< empty: stdout
  OutputFormat format = OutputFormat::csv;
  /// When false, wall_ms is written as 0 so outputs are byte-stable.
  bool timing = false;
};

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t d = 0;
  std::optional<std::size_t> T;
  StrategyKind strategy = StrategyKind::alg1;
  double c_alg = kDefaultCAlg;
  std::optional<double> tau_override;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> threads;
  RecordOptions record;
  OutputOptions output;

  std::size_t horizon() const noexcept { return T.value_or(n); }
  StrategyParams strategy_params() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// True when 2 <= d <= (ln ln n)^2 / ln ln ln n and T = n.
bool in_proven_regime(std::size_t n, std::size_t d, std::size_t T);

struct SpreadDiagnostic {
  ScheduleEntry entry;
  std::optional<SpreadReport> spread;
  bool reached = false;  ///< spread size >= s_q at time k_q

  friend bool operator==(const SpreadDiagnostic&, const SpreadDiagnostic&) = default;
};

struct CategoryDiagnostic {
  std::size_t depth = 0;
  std::vector<std::size_t> sizes;
  std::size_t categorized = 0;
  std::size_t uncovered_exceptional = 0;

  friend bool operator==(const CategoryDiagnostic&, const CategoryDiagnostic&) = default;
};

struct MSetDiagnostic {
  std::size_t k = 0;
  std::size_t count = 0;

  friend bool operator==(const MSetDiagnostic&, const MSetDiagnostic&) = default;
};

struct SnapshotSummary {
  std::size_t time = 0;
  Partial norm = 0;
  std::size_t nonzero = 0;

  friend bool operator==(const SnapshotSummary&, const SnapshotSummary&) = default;
};

struct TrialDiagnostics {
  std::vector<SnapshotSummary> snapshots;
  std::vector<SpreadDiagnostic> spreads;
  std::optional<CategoryDiagnostic> categories;
  std::optional<double> m_base;
  std::vector<MSetDiagnostic> m_sets;
  std::optional<std::size_t> untouched_rows;
  std::vector<ExceptionalSample> exceptional_series;

  bool empty() const noexcept {
    return snapshots.empty() && spreads.empty() && !categories && m_sets.empty() && !untouched_rows &&
           exceptional_series.empty();
  }

  friend bool operator==(const TrialDiagnostics&, const TrialDiagnostics&) = default;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t column_seed = 0;  ///< key of the trial's column stream
  std::uint64_t sigma_seed = 0;   ///< key of the trial's sigma~ stream
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t T = 0;
  StrategyKind strategy = StrategyKind::alg1;
  double tau = 0;
  Partial final_disc = 0;
  Partial max_prefix_disc = 0;
  std::size_t e_size_final = 0;
  std::size_t corrected_columns = 0;
  std::size_t sign_divergence_count = 0;
  std::size_t correction_violations = 0;
  bool proven_regime = false;
  double wall_time_ms = 0;
  std::optional<TrialDiagnostics> diagnostics;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Moments {
  double mean = 0;
  double min = 0;
  double max = 0;
  double stddev = 0;  ///< sample standard deviation (n - 1)

  friend bool operator==(const Moments&, const Moments&) = default;
};

Moments moments(const std::vector<double>& values);

struct AggregateSummary {
  std::size_t trials = 0;
  Moments max_prefix_disc;
  Moments final_disc;
  Moments e_size_final;
  double frac_exceptional_nonempty = 0;
  double frac_corrected = 0;
  std::vector<double> spread_reached;  ///< per q, fraction of trials
  std::vector<double> m_set_nonempty;  ///< per k in record.m_k
  std::optional<Moments> untouched_rows;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  AggregateSummary summary;
};

/// One trial, a pure function of (config, trial_index).
TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index);

/// Worker count: config.threads, else DISCBAL_THREADS, else hardware threads.
std::size_t resolve_threads(const ExperimentConfig& config);

/// All trials, fanned out over worker threads; records are in trial order.
SweepResult run_sweep(const ExperimentConfig& config);

AggregateSummary summarize(const std::vector<TrialRecord>& records);

// Configuration files ------------------------------------------------------

ExperimentConfig parse_config(std::string_view json_text);

/// A sweep file is a config whose n, d, T, strategy, c_alg and tau_override
/// fields may be arrays; the grid expands in that field order.
std::vector<ExperimentConfig> parse_sweep(std::string_view json_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Export -------------------------------------------------------------------

std::string format_real(double v);

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_json(const std::vector<TrialRecord>& records, const std::optional<AggregateSummary>& summary,
                std::ostream& out);
std::vector<TrialRecord> parse_records_json(std::string_view json_text);

std::string summary_json(const AggregateSummary& summary);

// Instance files -----------------------------------------------------------

/// {"schema_version", "n", "d", "T", "columns": [[1-based rows], ...]}
void write_instance_json(const Instance& instance, std::ostream& out);
Instance parse_instance_json(std::string_view json_text);

}  // namespace discbal
