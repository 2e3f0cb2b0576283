#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "fairmech/core.hpp"
#include "fairmech/ef1.hpp"

namespace fairmech {

inline constexpr SizeGuard kNswGuard{14, 5};

namespace detail {

/// Enumerates every unordered partition of the goods into at most
/// max_blocks nonempty blocks, exactly once. Goods are consumed in the
/// given order; each block is identified by the first good placed in it.
/// The visitor sees (block_sizes_count k, per-good block labels).
template <typename Visit>
void enumerate_block_labelings(int num_goods, int max_blocks, Visit&& visit) {
  std::vector<int> label(num_goods, 0);
  auto rec = [&](auto&& self, int g, int used) -> void {
    if (g == num_goods) {
      visit(used, label);
      return;
    }
    int limit = std::min(used + 1, max_blocks);
    for (int b = 0; b < limit; ++b) {
      label[g] = b;
      self(self, g + 1, std::max(used, b + 1));
    }
  };
  if (num_goods == 0) {
    visit(0, label);
    return;
  }
  rec(rec, 0, 0);
}

/// Rebuilds a Partition from block labels over goods listed in `order`,
/// padded with empty bundles up to n.
inline Partition partition_from_labels(const std::vector<int>& order,
                                       const std::vector<int>& label, int blocks, int n) {
  Partition partition;
  partition.bundles.assign(n, {});
  for (std::size_t k = 0; k < order.size(); ++k)
    partition.bundles[label[k]].push_back(order[k]);
  for (Bundle& bundle : partition.bundles) std::sort(bundle.begin(), bundle.end());
  (void)blocks;
  return partition;
}

inline bool lex_greater(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// Partition maximizing the product of bundle weights over all n-partitions,
/// by exhaustive search over unordered partitions (bundles are
/// interchangeable before agents enter). Ties broken by lexicographically
/// largest sorted weight sequence, then first found. Desk scale only.
inline Partition exact_nsw_partition(const std::vector<Rational>& weights, int n,
                                     SizeGuard guard = kNswGuard) {
  if (n < 1) throw std::invalid_argument("exact_nsw_partition: need at least one agent");
  int m = static_cast<int>(weights.size());
  if (!guard.admits(m, n)) throw SizeGuardError("exact_nsw_partition", m, n, guard);

  std::vector<int> order = detail::goods_by_weight_desc(weights);
  bool have_best = false;
  Rational best_product;
  std::vector<Rational> best_seq;
  std::vector<int> best_label;

  std::vector<Rational> block_weight(n);
  detail::enumerate_block_labelings(m, n, [&](int blocks, const std::vector<int>& label) {
    for (int b = 0; b < n; ++b) block_weight[b] = Rational();
    for (int k = 0; k < m; ++k) block_weight[label[k]] += weights[order[k]];
    Rational product(1);
    for (int b = 0; b < n; ++b) {
      if (b >= blocks)
        product = Rational(0);  // empty bundle forced
      else
        product *= block_weight[b];
      if (product.is_zero()) break;
    }
    if (have_best && product < best_product) return;
    std::vector<Rational> seq(block_weight.begin(), block_weight.end());
    std::sort(seq.begin(), seq.end(), std::greater<Rational>());
    if (have_best && product == best_product && !detail::lex_greater(seq, best_seq)) return;
    have_best = true;
    best_product = product;
    best_seq = std::move(seq);
    best_label = label;
  });

  return detail::partition_from_labels(order, best_label, n, n);
}

/// Bid-oblivious Nash-welfare partition: the product objective never reads
/// bids (positive scalings of the bids cannot change the maximizer), so the
/// exact partition stands in for any approximation scheme at desk scale.
inline Partition solve_fa_nsw(const Instance& instance, SizeGuard guard = kNswGuard) {
  return exact_nsw_partition(instance.weights, instance.num_agents(), guard);
}

}  // namespace fairmech
