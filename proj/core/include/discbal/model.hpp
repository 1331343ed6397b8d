#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace discbal {

/// Zero-based row index. Files and CLI output use 1-based rows.
using RowIndex = std::uint32_t;

/// A column sign, always -1 or +1.
using Sign = std::int8_t;

/// Signed running inner product of one row with the sign vector.
using Partial = std::int32_t;

inline constexpr double kInfiniteTau = std::numeric_limits<double>::infinity();

/// Sign convention used throughout: sign(0) = +1.
constexpr Sign sign_of(std::int64_t v) noexcept { return v < 0 ? Sign{-1} : Sign{1}; }

/// Support of a d-sparse binary column. Indices are strictly increasing.
class SparseColumn {
 public:
  SparseColumn() = default;

  /// Validates against n. Unsorted input is canonicalized; duplicates and
  /// out-of-range indices throw.
  SparseColumn(std::vector<RowIndex> support, std::size_t n);

  std::span<const RowIndex> support() const noexcept { return support_; }
  std::size_t size() const noexcept { return support_.size(); }
  bool contains(RowIndex row) const noexcept;

  friend bool operator==(const SparseColumn&, const SparseColumn&) = default;

 private:
  std::vector<RowIndex> support_;
};

/// Read-only view of a column stored inside an Instance.
using ColumnView = std::span<const RowIndex>;

/// n x T binary matrix with exactly d ones per column, stored column-major
/// as a flat array of supports.
class Instance {
 public:
  Instance(std::size_t n, std::size_t d);
  Instance(std::size_t n, std::size_t d, const std::vector<SparseColumn>& columns);

  std::size_t rows() const noexcept { return n_; }
  std::size_t sparsity() const noexcept { return d_; }
  std::size_t columns() const noexcept { return d_ == 0 ? 0 : entries_.size() / d_; }
  bool empty() const noexcept { return entries_.empty(); }

  ColumnView column(std::size_t t) const;
  void push_back(const SparseColumn& column);

  /// Appends an already-canonical support. Used by the sampler's hot path.
  void push_back_unchecked(std::span<const RowIndex> support);

  /// Number of columns touching each row.
  std::vector<std::size_t> row_support_counts() const;

  /// Column indices (0-based) whose support contains `row`, ascending.
  std::vector<std::size_t> row_support(RowIndex row) const;

  void reserve(std::size_t columns) { entries_.reserve(columns * d_); }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<RowIndex> entries_;
};

/// Running prefix inner products <row_i(A), sigma>_[t] plus the monotone
/// exceptional set E_t = rows whose |partial| has ever reached tau.
class RowLedger {
 public:
  RowLedger(std::size_t n, double tau);

  std::size_t rows() const noexcept { return partial_.size(); }
  std::size_t time() const noexcept { return t_; }
  double tau() const noexcept { return tau_; }

  std::span<const Partial> partials() const noexcept { return partial_; }
  Partial partial(RowIndex row) const { return partial_.at(row); }

  /// Running max over s <= t of |partial-at-s[i]|, one entry per row.
  std::span<const Partial> peaks() const noexcept { return peak_; }

  bool is_exceptional(RowIndex row) const { return entry_time_.at(row) != kNever; }
  std::size_t exceptional_count() const noexcept { return exceptional_count_; }

  /// Time at which the row entered E, or kNever.
  std::int64_t entry_time(RowIndex row) const { return entry_time_.at(row); }
  std::vector<RowIndex> exceptional_rows() const;

  std::size_t corrected_count() const noexcept { return corrected_count_; }
  void note_correction() noexcept { ++corrected_count_; }

  /// Consumes one column with the given sign; returns the largest |partial|
  /// over the column's support after the update.
  Partial apply(ColumnView column, Sign sign);

  /// max_i |partial[i]| at the current time. O(n).
  Partial current_norm() const noexcept;

  static constexpr std::int64_t kNever = -1;

 private:
  bool reaches_tau(Partial v) const noexcept;

  std::size_t t_ = 0;
  double tau_;
  std::vector<Partial> partial_;
  std::vector<Partial> peak_;
  std::vector<std::int64_t> entry_time_;
  std::size_t exceptional_count_ = 0;
  std::size_t corrected_count_ = 0;
};

struct Snapshot {
  std::size_t time = 0;
  std::vector<Partial> partials;
};

struct ExceptionalSample {
  std::size_t time = 0;
  std::size_t exceptional = 0;
  std::size_t corrected = 0;

  friend bool operator==(const ExceptionalSample&, const ExceptionalSample&) = default;
};

/// Per-run record: signs, running prefix discrepancy, opt-in snapshots.
class Trace {
 public:
  std::span<const Sign> signs() const noexcept { return signs_; }
  std::size_t size() const noexcept { return signs_.size(); }

  /// max over s <= t of ||sum_{j<=s} sigma_j col_j||_inf.
  Partial max_prefix_disc() const noexcept { return max_prefix_disc_; }

  const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }
  const std::vector<ExceptionalSample>& exceptional_series() const noexcept { return series_; }

  /// Steps where the sign differs from the seed sign sigma~_t.
  std::size_t divergence_count() const noexcept { return divergence_; }

  /// Correction steps with nonzero target partial whose |partial| did not
  /// drop by exactly one. Always zero for a correct alg1 step.
  std::size_t correction_violations() const noexcept { return correction_violations_; }

  void record(Sign sign, Partial column_peak);
  void add_snapshot(Snapshot s) { snapshots_.push_back(std::move(s)); }
  void add_sample(ExceptionalSample s) { series_.push_back(s); }
  void note_divergence() noexcept { ++divergence_; }
  void note_correction_violation() noexcept { ++correction_violations_; }
  void reserve(std::size_t steps) { signs_.reserve(steps); }

 private:
  std::vector<Sign> signs_;
  Partial max_prefix_disc_ = 0;
  std::vector<Snapshot> snapshots_;
  std::vector<ExceptionalSample> series_;
  std::size_t divergence_ = 0;
  std::size_t correction_violations_ = 0;
};

/// max_prefix_disc of the trace; 0 for an empty trace.
inline Partial prefix_disc(const Trace& trace) noexcept { return trace.max_prefix_disc(); }

}  // namespace discbal
