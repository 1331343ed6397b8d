#pragma once

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cstddef>
#include <map>
#include <vector>

namespace discbal::stats {

struct ChiSquare {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

/// Pearson chi-square of observed counts against a uniform expectation over
/// `cells` categories (missing categories count as zero).
template <typename Key>
ChiSquare uniform_chi_square(const std::map<Key, std::size_t>& observed, std::size_t cells, std::size_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  ChiSquare out;
  std::size_t seen = 0;
  for (const auto& [_, count] : observed) {
    const double diff = static_cast<double>(count) - expected;
    out.statistic += diff * diff / expected;
    ++seen;
  }
  out.statistic += static_cast<double>(cells - seen) * expected;
  out.dof = static_cast<double>(cells - 1);
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

/// One-sided sign test: P(Binomial(m, 1/2) >= wins), ties excluded by the caller.
inline double sign_test_p(std::size_t wins, std::size_t m) {
  if (m == 0) return 1.0;
  if (wins == 0) return 1.0;
  boost::math::binomial dist(static_cast<double>(m), 0.5);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(wins) - 1.0));
}

}  // namespace discbal::stats
