#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "fairmech/core.hpp"

namespace fairmech {

namespace detail {
/// Good indices ordered by weight descending, ties by lower index.
inline std::vector<int> goods_by_weight_desc(const std::vector<Rational>& weights) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[b] < weights[a]; });
  return order;
}
}  // namespace detail

/// Deals the goods, heaviest first (ties by lower index), to bundles
/// 0, 1, ..., n-1, 0, 1, ... in a fixed cycle. The result is always EF1
/// under the public weights: each bundle trails any other by at most that
/// bundle's first (heaviest) good.
inline Partition round_robin_partition(const std::vector<Rational>& weights, int n) {
  if (n < 1) throw std::invalid_argument("round_robin_partition: need at least one bundle");
  Partition partition;
  partition.bundles.assign(n, {});
  std::vector<int> order = detail::goods_by_weight_desc(weights);
  for (std::size_t k = 0; k < order.size(); ++k)
    partition.bundles[k % n].push_back(order[k]);
  for (Bundle& bundle : partition.bundles) std::sort(bundle.begin(), bundle.end());
  return partition;
}

/// Bid-oblivious EF1 partition for welfare maximization under EF1
/// constraints. Any EF1 partition works; round-robin is fixed for
/// determinism. Bound to agents downstream by the sorted allocation rule,
/// the welfare is at least half the EF1-constrained optimum.
inline Partition solve_fa_ef1(const Instance& instance) {
  return round_robin_partition(instance.weights, instance.num_agents());
}

}  // namespace fairmech
