#include "discbal/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace discbal {

SparseColumn::SparseColumn(std::vector<RowIndex> support, std::size_t n) : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("SparseColumn: empty support");
  std::sort(support_.begin(), support_.end());
  if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("SparseColumn: duplicate row index");
  if (support_.back() >= n)
    throw std::out_of_range("SparseColumn: row index " + std::to_string(support_.back() + 1) +
                            " outside [1, " + std::to_string(n) + "]");
}

bool SparseColumn::contains(RowIndex row) const noexcept {
  return std::binary_search(support_.begin(), support_.end(), row);
}

Instance::Instance(std::size_t n, std::size_t d) : n_(n), d_(d) {
  if (n == 0) throw std::invalid_argument("Instance: n must be positive");
  if (d == 0 || d > n) throw std::invalid_argument("Instance: d must lie in [1, n]");
}

Instance::Instance(std::size_t n, std::size_t d, const std::vector<SparseColumn>& columns) : Instance(n, d) {
  reserve(columns.size());
  for (const auto& c : columns) push_back(c);
}

ColumnView Instance::column(std::size_t t) const {
  if (t >= columns()) throw std::out_of_range("Instance: column index out of range");
  return ColumnView(entries_).subspan(t * d_, d_);
}

void Instance::push_back(const SparseColumn& column) {
  if (column.size() != d_)
    throw std::invalid_argument("Instance: column has " + std::to_string(column.size()) + " entries, expected " +
                                std::to_string(d_));
  if (column.support().back() >= n_) throw std::out_of_range("Instance: row index out of range");
  push_back_unchecked(column.support());
}

void Instance::push_back_unchecked(std::span<const RowIndex> support) {
  entries_.insert(entries_.end(), support.begin(), support.end());
}

std::vector<std::size_t> Instance::row_support_counts() const {
  std::vector<std::size_t> counts(n_, 0);
  for (RowIndex r : entries_) ++counts[r];
  return counts;
}

std::vector<std::size_t> Instance::row_support(RowIndex row) const {
  std::vector<std::size_t> out;
  const std::size_t T = columns();
  for (std::size_t t = 0; t < T; ++t) {
    auto col = column(t);
    if (std::binary_search(col.begin(), col.end(), row)) out.push_back(t);
  }
  return out;
}

RowLedger::RowLedger(std::size_t n, double tau) : tau_(tau) {
  if (n == 0) throw std::invalid_argument("RowLedger: n must be positive");
  if (!(tau > 0)) throw std::invalid_argument("RowLedger: tau must be positive");
  partial_.assign(n, 0);
  peak_.assign(n, 0);
  entry_time_.assign(n, kNever);
}

bool RowLedger::reaches_tau(Partial v) const noexcept {
  return static_cast<double>(v < 0 ? -v : v) >= tau_;
}

Partial RowLedger::apply(ColumnView column, Sign sign) {
  for (RowIndex r : column)
    if (r >= partial_.size()) throw std::out_of_range("RowLedger: row index out of range");
  ++t_;
  Partial column_peak = 0;
  for (RowIndex r : column) {
    Partial& p = partial_[r];
    p += sign;
    const Partial mag = p < 0 ? -p : p;
    column_peak = std::max(column_peak, mag);
    peak_[r] = std::max(peak_[r], mag);
    // Only rows in the support changed, so only they can newly cross tau.
    if (entry_time_[r] == kNever && reaches_tau(p)) {
      entry_time_[r] = static_cast<std::int64_t>(t_);
      ++exceptional_count_;
    }
  }
  return column_peak;
}

Partial RowLedger::current_norm() const noexcept {
  Partial m = 0;
  for (Partial p : partial_) m = std::max(m, p < 0 ? -p : p);
  return m;
}

std::vector<RowIndex> RowLedger::exceptional_rows() const {
  std::vector<RowIndex> rows;
  rows.reserve(exceptional_count_);
  for (std::size_t i = 0; i < entry_time_.size(); ++i)
    if (entry_time_[i] != kNever) rows.push_back(static_cast<RowIndex>(i));
  return rows;
}

void Trace::record(Sign sign, Partial column_peak) {
  signs_.push_back(sign);
  max_prefix_disc_ = std::max(max_prefix_disc_, column_peak);
}

}  // namespace discbal
