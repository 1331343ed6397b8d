#include "discbal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace discbal {

std::optional<SpreadReport> best_spread(std::span<const Partial> partials, Partial min_width, std::size_t time) {
  if (partials.empty() || min_width < 0) return std::nullopt;
  Partial range = 0;
  for (Partial p : partials) range = std::max(range, std::abs(p));
  // histogram[v + range] = #{i : partial[i] == v}
  std::vector<std::size_t> histogram(2 * static_cast<std::size_t>(range) + 1, 0);
  for (Partial p : partials) ++histogram[static_cast<std::size_t>(p + range)];
  auto count = [&](Partial v) { return histogram[static_cast<std::size_t>(v + range)]; };

  std::optional<SpreadReport> best;
  for (Partial ell = 0; ell >= -range; --ell) {
    const std::size_t left = count(ell);
    if (left == 0) continue;
    for (Partial r = std::max<Partial>(0, ell + min_width); r <= range; ++r) {
      const std::size_t size = (ell == r) ? left / 2 : std::min(left, count(r));
      if (size == 0) continue;
      SpreadReport cand{time, ell, r, size};
      const bool better = !best || size > best->size ||
                          (size == best->size && (cand.width() > best->width() ||
                                                  (cand.width() == best->width() && -ell < -best->ell)));
      if (better) best = cand;
    }
  }
  return best;
}

ScheduleEntry schedule_entry(std::uint64_t n, std::size_t q) {
  if (n < 16) throw std::invalid_argument("spread schedule needs n >= 16");
  if (q == 0) throw std::invalid_argument("spread schedule starts at q = 1");
  const long double ln_n = std::log(static_cast<long double>(n));
  const long double nn = static_cast<long double>(n);
  ScheduleEntry e{q, 0, 0};
  for (std::size_t u = 1; u <= q; ++u)
    e.k += static_cast<std::uint64_t>(std::ceil(nn / std::pow(ln_n, std::exp(static_cast<long double>(u)))));
  e.s = static_cast<std::uint64_t>(
      std::ceil(nn / std::pow(ln_n, std::pow(static_cast<long double>(kSpreadGrowth), static_cast<long double>(q)))));
  return e;
}

std::vector<ScheduleEntry> spread_schedule(std::uint64_t n, std::size_t q_max) {
  if (n < 16) throw std::invalid_argument("spread schedule needs n >= 16");
  const double lnln = std::log(std::log(static_cast<double>(n)));
  const auto q_cap = static_cast<std::size_t>(std::floor(lnln / (2.0 * std::log(kSpreadGrowth))));
  std::vector<ScheduleEntry> out;
  for (std::size_t q = 1; q <= std::min(q_max, q_cap); ++q) out.push_back(schedule_entry(n, q));
  return out;
}

std::size_t count_untouched_rows(const Instance& instance, std::size_t from, std::size_t to) {
  if (from > to || to > instance.columns())
    throw std::out_of_range("count_untouched_rows: need 0 <= from <= to <= T");
  std::vector<std::uint8_t> touched(instance.rows(), 0);
  for (std::size_t t = from; t < to; ++t)
    for (RowIndex r : instance.column(t)) touched[r] = 1;
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), std::uint8_t{0}));
}

std::vector<std::size_t> CategoryReport::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(entry.size());
  for (const auto& level : entry)
    out.push_back(static_cast<std::size_t>(std::count_if(level.begin(), level.end(), [](auto e) { return e != kNever; })));
  return out;
}

std::size_t CategoryReport::categorized() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.has_value(); }));
}

std::size_t default_category_depth(std::size_t n) {
  if (n < 16) return 1;
  const double lnln = std::log(std::log(static_cast<double>(n)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(6.0 * lnln)));
}

CategoryReport compute_categories(const Instance& instance, std::span<const Sign> sigma_tilde,
                                  std::span<const Sign> signs, double tau, std::size_t w_max) {
  const std::size_t n = instance.rows();
  const std::size_t T = instance.columns();
  if (signs.size() != T) throw std::invalid_argument("compute_categories: signs length differs from T");
  if (sigma_tilde.size() < T) throw std::invalid_argument("compute_categories: sigma~ shorter than T");
  if (!(tau > 0)) throw std::invalid_argument("compute_categories: tau must be positive");

  constexpr auto never = CategoryReport::kNever;
  CategoryReport report;
  report.entry.assign(w_max + 1, std::vector<std::int64_t>(n, never));

  // Category 0: the seed walk alone exceeds tau / 2.
  {
    const double half = tau / 2.0;
    std::vector<std::int64_t> seed_partial(n, 0);
    auto& level = report.entry[0];
    for (std::size_t t = 0; t < T; ++t) {
      for (RowIndex r : instance.column(t)) {
        seed_partial[r] += sigma_tilde[t];
        if (level[r] == never && static_cast<double>(std::llabs(seed_partial[r])) > half)
          level[r] = static_cast<std::int64_t>(t + 1);
      }
    }
  }

  // Category w: two distinct witnessing columns j, each holding another row
  // that entered category w-1 by time j-1.
  std::vector<std::uint8_t> witnesses(n);
  for (std::size_t w = 1; w <= w_max; ++w) {
    const auto& prev = report.entry[w - 1];
    auto& level = report.entry[w];
    if (std::all_of(prev.begin(), prev.end(), [](auto e) { return e == never; })) break;
    std::fill(witnesses.begin(), witnesses.end(), 0);
    for (std::size_t t = 0; t < T; ++t) {
      const auto j = static_cast<std::int64_t>(t + 1);
      const ColumnView col = instance.column(t);
      std::size_t members = 0;
      for (RowIndex r : col)
        if (prev[r] != never && prev[r] <= j - 1) ++members;
      if (members == 0) continue;
      for (RowIndex r : col) {
        const bool self = prev[r] != never && prev[r] <= j - 1;
        if (members - (self ? 1 : 0) == 0) continue;
        if (witnesses[r] < 2 && ++witnesses[r] == 2) level[r] = j;
      }
    }
  }

  report.rows.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t w = 0; w <= w_max; ++w) {
      if (report.entry[w][i] != never) {
        report.rows[i] = RowCategory{w, static_cast<std::size_t>(report.entry[w][i])};
        break;
      }
    }
  }
  return report;
}

std::size_t count_m_set(std::span<const Partial> peaks, double base, std::size_t k) {
  const double threshold = base + 3.0 * static_cast<double>(k);
  return static_cast<std::size_t>(
      std::count_if(peaks.begin(), peaks.end(), [&](Partial p) { return static_cast<double>(p) >= threshold; }));
}

double m_set_base(double c_alg, std::size_t n) {
  if (n < 16) throw std::invalid_argument("m_set_base: needs n >= 16");
  return (c_alg + 1.0) * std::log(std::log(static_cast<double>(n)));
}

std::vector<ExceptionalSample> exceptional_stats(const Trace& trace) { return trace.exceptional_series(); }

std::size_t uncovered_exceptional(const RowLedger& ledger, const CategoryReport& categories) {
  std::size_t out = 0;
  for (RowIndex r : ledger.exceptional_rows())
    if (r >= categories.rows.size() || !categories.rows[r]) ++out;
  return out;
}

}  // namespace discbal
