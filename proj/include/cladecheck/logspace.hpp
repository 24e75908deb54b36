#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace cladecheck {

/// log(sum(exp(x))) with the max-term shift. Summation order is the input
/// order, so equal inputs give bit-identical results.
template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> x) {
  using std::exp;
  using std::log;
  if (x.empty()) return -std::numeric_limits<Scalar>::infinity();
  const Scalar top = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(top)) return top;
  Scalar sum(0);
  for (Scalar v : x) sum += exp(v - top);
  return top + log(sum);
}

}  // namespace cladecheck
