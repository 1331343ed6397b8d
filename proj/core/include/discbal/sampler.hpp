#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "discbal/model.hpp"

namespace discbal {

enum class Stream : std::uint32_t { columns = 0, sigma_tilde = 1, strategy_aux = 2 };

/// Identifies one independent random stream of one trial.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  Stream stream = Stream::columns;

  SeedSpec with(Stream s) const noexcept { return {master_seed, trial_index, s}; }

  /// 64-bit key the stream's generator is keyed with.
  std::uint64_t key() const noexcept;
};

/// Counter-based generator: output k is a SplitMix64 finalizer applied to
/// key + k * golden-gamma. Copyable, no shared state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  explicit CounterRng(const SeedSpec& seed) noexcept : key_(seed.key()) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Uniform integer in [0, bound). bound must be nonzero. Exact (Lemire
  /// multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Draws uniformly random d-subsets of {0, ..., n-1} in canonical order.
/// Holds an index pool of size n that is restored after every draw, so each
/// draw costs O(d) (O(n) when d > n/2, via the complement).
class ColumnSampler {
 public:
  ColumnSampler(std::size_t n, std::size_t d);

  /// Writes the sorted support into `out` (resized to d).
  void draw(CounterRng& rng, std::vector<RowIndex>& out);
  SparseColumn draw(CounterRng& rng);

  std::size_t rows() const noexcept { return n_; }
  std::size_t sparsity() const noexcept { return d_; }

 private:
  void partial_shuffle(CounterRng& rng, std::size_t k);
  void restore(std::size_t k);

  std::size_t n_;
  std::size_t d_;
  std::vector<RowIndex> pool_;
  std::vector<RowIndex> swaps_;
  std::vector<std::uint8_t> mark_;
};

SparseColumn sample_column(std::size_t n, std::size_t d, CounterRng& rng);

/// T i.i.d. columns from the uniform d-sparse measure, drawn from the
/// `columns` stream of (master_seed, trial_index) regardless of seed.stream.
Instance sample_instance(std::size_t n, std::size_t d, std::size_t T, const SeedSpec& seed);

/// T i.i.d. uniform signs from the `sigma_tilde` stream of the seed.
std::vector<Sign> sample_sigma_tilde(std::size_t T, const SeedSpec& seed);

}  // namespace discbal
