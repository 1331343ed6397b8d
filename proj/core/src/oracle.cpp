#include "discbal/oracle.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace discbal {

Partial eval_disc(const Instance& instance, std::span<const Sign> signs) {
  const std::size_t T = instance.columns();
  if (signs.size() != T)
    throw std::invalid_argument("eval_disc: " + std::to_string(signs.size()) + " signs for " + std::to_string(T) +
                                " columns");
  std::vector<Partial> sum(instance.rows(), 0);
  for (std::size_t t = 0; t < T; ++t)
    for (RowIndex r : instance.column(t)) sum[r] += signs[t];
  Partial m = 0;
  for (Partial v : sum) m = std::max(m, std::abs(v));
  return m;
}

OfflineResult offline_min_disc(const Instance& instance, const OracleOptions& options) {
  const std::size_t T = instance.columns();
  if (T == 0) throw std::invalid_argument("offline_min_disc: empty instance");
  if (T > options.max_columns && !options.force)
    throw std::length_error("offline_min_disc: T = " + std::to_string(T) + " exceeds cap " +
                            std::to_string(options.max_columns) + "; pass force to search anyway");
  if (T > 63) throw std::length_error("offline_min_disc: T > 63 cannot be enumerated");

  const std::size_t n = instance.rows();
  std::vector<Partial> sum(n, 0);
  for (std::size_t t = 0; t < T; ++t)
    for (RowIndex r : instance.column(t)) ++sum[r];

  // Any row with odd support count has odd sum under every assignment.
  Partial lower_bound = 0;
  for (Partial v : sum)
    if (v % 2 != 0) lower_bound = 1;

  std::vector<std::size_t> histogram(T + 1, 0);
  Partial norm = 0;
  for (Partial v : sum) {
    ++histogram[static_cast<std::size_t>(v)];
    norm = std::max(norm, v);
  }

  std::vector<Sign> signs(T, Sign{1});
  Partial best = norm;
  std::uint64_t best_code = 0;
  std::uint64_t code = 0;
  const std::uint64_t states = std::uint64_t{1} << (T - 1);

  for (std::uint64_t k = 1; k < states && best > lower_bound; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    code ^= std::uint64_t{1} << bit;
    const std::size_t col = bit + 1;
    const Partial delta = static_cast<Partial>(-2 * signs[col]);
    signs[col] = static_cast<Sign>(-signs[col]);
    for (RowIndex r : instance.column(col)) {
      --histogram[static_cast<std::size_t>(std::abs(sum[r]))];
      sum[r] += delta;
      const Partial mag = std::abs(sum[r]);
      ++histogram[static_cast<std::size_t>(mag)];
      norm = std::max(norm, mag);
    }
    while (histogram[static_cast<std::size_t>(norm)] == 0) --norm;
    if (norm < best) {
      best = norm;
      best_code = code;
    }
  }

  OfflineResult result;
  result.value = best;
  result.witness.assign(T, Sign{1});
  for (std::size_t b = 0; b + 1 < T; ++b)
    if ((best_code >> b) & 1U) result.witness[b + 1] = -1;
  return result;
}

}  // namespace discbal
