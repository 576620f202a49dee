#ifndef ORLICZ_SRC_PAIRS_HPP
#define ORLICZ_SRC_PAIRS_HPP

#include "orlicz/grid.hpp"
#include "orlicz/modulars.hpp"

namespace orlicz::detail {

/// Visits each unordered pair i < j of the region once. Interior nodes are
/// numbered first, so the region tests reduce to index comparisons.
template <class F>
void for_each_pair(const DiscreteDomain& d, PairRegion region, F&& f) {
  const std::size_t n = d.size();
  const std::size_t ni = d.interior_count();
  const std::size_t i_end = region == PairRegion::full ? n : ni;
  for (std::size_t i = 0; i < i_end; ++i) {
    const std::size_t j_end = region == PairRegion::regional ? ni : n;
    for (std::size_t j = i + 1; j < j_end; ++j) f(i, j);
  }
}

/// g(|t|) sgn(t), zero at t = 0.
template <class Y>
double odd_g(const Y& young, double t) {
  if (t > 0.0) return young.g(t);
  if (t < 0.0) return -young.g(-t);
  return 0.0;
}

}  // namespace orlicz::detail

#endif  // ORLICZ_SRC_PAIRS_HPP
