#include "discbal/sampler.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace discbal {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SeedSpec::key() const noexcept {
  std::uint64_t k = mix64(master_seed + kGamma);
  k = mix64(k ^ (trial_index * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
  k = mix64(k ^ ((static_cast<std::uint64_t>(stream) + 1) * 0x8CB92BA72F3D8DD7ULL));
  return k;
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

ColumnSampler::ColumnSampler(std::size_t n, std::size_t d) : n_(n), d_(d) {
  if (n == 0) throw std::invalid_argument("ColumnSampler: n must be positive");
  if (d == 0 || d > n) throw std::invalid_argument("ColumnSampler: d must lie in [1, n]");
  pool_.resize(n);
  for (std::size_t i = 0; i < n; ++i) pool_[i] = static_cast<RowIndex>(i);
  swaps_.reserve(std::min(d, n - d) + 1);
}

void ColumnSampler::partial_shuffle(CounterRng& rng, std::size_t k) {
  swaps_.clear();
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n_ - i));
    std::swap(pool_[i], pool_[j]);
    swaps_.push_back(static_cast<RowIndex>(j));
  }
}

void ColumnSampler::restore(std::size_t k) {
  for (std::size_t i = k; i-- > 0;) std::swap(pool_[i], pool_[swaps_[i]]);
}

void ColumnSampler::draw(CounterRng& rng, std::vector<RowIndex>& out) {
  out.clear();
  if (2 * d_ <= n_) {
    partial_shuffle(rng, d_);
    out.assign(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(d_));
    restore(d_);
    std::sort(out.begin(), out.end());
    return;
  }
  const std::size_t excluded = n_ - d_;
  partial_shuffle(rng, excluded);
  mark_.assign(n_, 0);
  for (std::size_t i = 0; i < excluded; ++i) mark_[pool_[i]] = 1;
  restore(excluded);
  out.reserve(d_);
  for (std::size_t r = 0; r < n_; ++r)
    if (!mark_[r]) out.push_back(static_cast<RowIndex>(r));
}

SparseColumn ColumnSampler::draw(CounterRng& rng) {
  std::vector<RowIndex> out;
  draw(rng, out);
  return SparseColumn(std::move(out), n_);
}

SparseColumn sample_column(std::size_t n, std::size_t d, CounterRng& rng) {
  ColumnSampler sampler(n, d);
  return sampler.draw(rng);
}

Instance sample_instance(std::size_t n, std::size_t d, std::size_t T, const SeedSpec& seed) {
  Instance instance(n, d);
  if (T == 0) return instance;
  instance.reserve(T);
  ColumnSampler sampler(n, d);
  CounterRng rng(seed.with(Stream::columns));
  std::vector<RowIndex> support;
  for (std::size_t t = 0; t < T; ++t) {
    sampler.draw(rng, support);
    instance.push_back_unchecked(support);
  }
  return instance;
}

std::vector<Sign> sample_sigma_tilde(std::size_t T, const SeedSpec& seed) {
  std::vector<Sign> signs(T);
  CounterRng rng(seed.with(Stream::sigma_tilde));
  std::uint64_t bits = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (t % 64 == 0) bits = rng();
    signs[t] = (bits & 1) ? Sign{1} : Sign{-1};
    bits >>= 1;
  }
  return signs;
}

}  // namespace discbal
