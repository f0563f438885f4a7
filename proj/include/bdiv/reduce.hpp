#pragma once

#include <cstddef>
#include <span>

namespace bdiv {

namespace detail {
inline constexpr std::size_t kPairwiseBlock = 64;
}

/// Sums term(i) for i in [begin, end) with a fixed pairwise tree: blocks of
/// 64 are summed left to right, larger ranges split in halves. The order
/// depends only on the range, so results are bit-identical across runs.
template <class Term>
double pairwise_accumulate(std::size_t begin, std::size_t end, const Term& term) {
  if (end - begin <= detail::kPairwiseBlock) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_accumulate(begin, mid, term) + pairwise_accumulate(mid, end, term);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_accumulate(0, xs.size(), [&](std::size_t i) { return xs[i]; });
}

inline double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  return pairwise_accumulate(0, a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace bdiv
