#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "discbal/model.hpp"

namespace discbal {

// Lower-bound side ---------------------------------------------------------

/// An (ell, r)-spread at some time: `size` rows with partial == ell and
/// `size` other rows with partial == r, ell <= 0 <= r.
struct SpreadReport {
  std::size_t time = 0;
  Partial ell = 0;
  Partial r = 0;
  std::size_t size = 0;
  Partial width() const noexcept { return r - ell; }

  friend bool operator==(const SpreadReport&, const SpreadReport&) = default;
};

/// Largest spread with r - ell >= min_width. Ties prefer the wider pair,
/// then the smaller |ell|. For ell == r == 0 the size is count(0) / 2.
/// Returns nullopt when no qualifying pair has size >= 1.
std::optional<SpreadReport> best_spread(std::span<const Partial> partials, Partial min_width,
                                        std::size_t time = 0);

struct ScheduleEntry {
  std::size_t q = 0;
  std::uint64_t k = 0;  ///< sum_{u=1..q} ceil(n / (ln n)^(e^u))
  std::uint64_t s = 0;  ///< ceil(n / (ln n)^(3^q))

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

inline constexpr double kSpreadGrowth = 3.0;

/// (k_q, s_q) for one q, with no cap on q. n >= 16.
ScheduleEntry schedule_entry(std::uint64_t n, std::size_t q);

/// Entries for q = 1 .. min(q_max, floor(ln ln n / (2 ln 3))). Throws for n < 16.
std::vector<ScheduleEntry> spread_schedule(std::uint64_t n, std::size_t q_max);

/// Rows untouched by columns from+1 .. to (0 <= from <= to <= T).
std::size_t count_untouched_rows(const Instance& instance, std::size_t from, std::size_t to);

// Upper-bound side ---------------------------------------------------------

struct RowCategory {
  std::size_t w = 0;
  std::size_t entry_time = 0;  ///< first t with the row in C_{t,w}

  friend bool operator==(const RowCategory&, const RowCategory&) = default;
};

struct CategoryReport {
  /// entry[w][i]: first t with row i in C_{t,w}, or kNever.
  std::vector<std::vector<std::int64_t>> entry;
  /// Smallest category per row, with its entry time.
  std::vector<std::optional<RowCategory>> rows;

  /// |C_{T,w}| for every computed w.
  std::vector<std::size_t> sizes() const;
  std::size_t categorized() const;

  static constexpr std::int64_t kNever = -1;
};

/// Default category depth: ceil(6 ln ln n), at least 1.
std::size_t default_category_depth(std::size_t n);

/// Categories of exceptional rows. C_{t,0}: rows with
/// |<row_i, sigma~>_[s]| > tau/2 for some s <= t. C_{t,w}: rows with two
/// distinct columns j <= t in their support, each containing some other row
/// already in C_{j-1,w-1}. Computes w = 0..w_max in O(w_max * T * d).
CategoryReport compute_categories(const Instance& instance, std::span<const Sign> sigma_tilde,
                                  std::span<const Sign> signs, double tau, std::size_t w_max);

/// |M(t,k)| = #{i : peak[i] >= base + 3k}, where peak is the running max of
/// |partial| (RowLedger::peaks()).
std::size_t count_m_set(std::span<const Partial> peaks, double base, std::size_t k);

/// (C_alg + 1) ln ln n, the default M-set base.
double m_set_base(double c_alg, std::size_t n);

/// (t, |E_t|, corrected_count_t) samples recorded by run_online, ending
/// with the final state when sampling was enabled.
std::vector<ExceptionalSample> exceptional_stats(const Trace& trace);

/// Exceptional rows that no category covers. Nonzero values flag runs where
/// E_T is not contained in the union of the categories.
std::size_t uncovered_exceptional(const RowLedger& ledger, const CategoryReport& categories);

}  // namespace discbal
