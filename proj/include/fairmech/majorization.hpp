#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fairmech/rational.hpp"

namespace fairmech {

using WeightSequence = std::vector<Rational>;

namespace detail {
inline WeightSequence sorted_descending(WeightSequence values) {
  std::sort(values.begin(), values.end(), std::greater<Rational>());
  return values;
}
}  // namespace detail

/// True iff the sequences have equal totals and, for every k < n, the sum of
/// the k largest entries of x is at least beta times the sum of the k
/// largest entries of y. Invariant under permutation of either sequence.
inline bool beta_majorizes(const WeightSequence& x, const WeightSequence& y,
                           const Rational& beta) {
  if (x.size() != y.size())
    throw std::invalid_argument("beta_majorizes: sequence lengths differ");
  if (x.empty()) throw std::invalid_argument("beta_majorizes: empty sequences");
  if (beta.sign() <= 0) throw std::invalid_argument("beta_majorizes: beta must be positive");

  WeightSequence xs = detail::sorted_descending(x);
  WeightSequence ys = detail::sorted_descending(y);
  Rational x_prefix, y_prefix;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    x_prefix += xs[k];
    y_prefix += ys[k];
    if (x_prefix < beta * y_prefix) return false;
  }
  x_prefix += xs.back();
  y_prefix += ys.back();
  return x_prefix == y_prefix;
}

/// Evaluates the weighted-sum transfer bound
///   sum_i v_i x_(i)  >=  beta * sum_i v_i y_(i)
/// with both sequences sorted non-increasing. The multipliers v must be
/// sorted non-increasing and non-negative. This is the executable form of
/// the guarantee that beta-majorization survives weighting by any sorted
/// non-negative multiplier sequence.
inline bool weighted_sum_bound_holds(const WeightSequence& x, const WeightSequence& y,
                                     const Rational& beta, const std::vector<Rational>& v) {
  if (x.size() != y.size() || x.size() != v.size())
    throw std::invalid_argument("weighted_sum_bound_holds: sequence lengths differ");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].sign() < 0)
      throw std::invalid_argument("weighted_sum_bound_holds: negative multiplier");
    if (i + 1 < v.size() && v[i] < v[i + 1])
      throw std::invalid_argument("weighted_sum_bound_holds: multipliers not sorted");
  }
  WeightSequence xs = detail::sorted_descending(x);
  WeightSequence ys = detail::sorted_descending(y);
  Rational lhs, rhs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    lhs += v[i] * xs[i];
    rhs += v[i] * ys[i];
  }
  return lhs >= beta * rhs;
}

}  // namespace fairmech
