#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "discbal/model.hpp"

namespace discbal {

inline constexpr std::size_t kOracleDefaultCap = 26;

struct OfflineResult {
  Partial value = 0;
  std::vector<Sign> witness;
};

struct OracleOptions {
  std::size_t max_columns = kOracleDefaultCap;
  /// Lifts the column cap. The search is still exponential in T.
  bool force = false;
};

/// Exact min over sigma in {-1,+1}^T of ||sum_j sigma_j col_j||_inf.
/// Fixes sigma_1 = +1 and walks the remaining 2^(T-1) assignments in
/// Gray-code order, flipping one sign per state with O(d) norm upkeep.
/// Throws std::invalid_argument for T = 0 and std::length_error for T over
/// the cap (unless forced).
OfflineResult offline_min_disc(const Instance& instance, const OracleOptions& options = {});

/// ||sum_j signs_j col_j||_inf. Throws on a length mismatch.
Partial eval_disc(const Instance& instance, std::span<const Sign> signs);

}  // namespace discbal
