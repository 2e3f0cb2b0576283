#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairmech/core.hpp"
#include "fairmech/ef1.hpp"
#include "fairmech/mechanism.hpp"
#include "fairmech/mms.hpp"

namespace fairmech {

inline constexpr SizeGuard kOracleGuard{12, 5};

/// Streams every ordered n-partition of [m] (n^m assignment vectors) through
/// the visitor, exactly once, in lexicographic assignment order. The visited
/// Partition is a scratch object, valid only during the call.
template <typename Visit>
void enumerate_partitions(int m, int n, Visit&& visit, SizeGuard guard = kOracleGuard) {
  if (n < 1) throw std::invalid_argument("enumerate_partitions: need at least one bundle");
  if (!guard.admits(m, n)) throw SizeGuardError("enumerate_partitions", m, n, guard);
  Partition scratch;
  scratch.bundles.assign(n, {});
  auto rec = [&](auto&& self, int g) -> void {
    if (g == m) {
      visit(static_cast<const Partition&>(scratch));
      return;
    }
    for (int b = 0; b < n; ++b) {
      scratch.bundles[b].push_back(g);
      self(self, g + 1);
      scratch.bundles[b].pop_back();
    }
  };
  rec(rec, 0);
}

/// Every ordered partition that satisfies EF1 under the instance weights.
inline std::vector<Partition> enumerate_ef1_partitions(const Instance& instance,
                                                       SizeGuard guard = kOracleGuard) {
  std::vector<Partition> result;
  enumerate_partitions(
      instance.num_goods(), instance.num_agents(),
      [&](const Partition& partition) {
        if (is_ef1(instance.weights, partition)) result.push_back(partition);
      },
      guard);
  return result;
}

namespace detail {

/// Walks every unordered partition of the goods into at most n nonempty
/// blocks with incrementally maintained block weights. Goods are consumed
/// heaviest-first, so a block's first good is its maximum. The leaf callback
/// sees (blocks_used, labels over the descending good order, block weights,
/// block maxima).
template <typename Leaf>
void scan_unordered_partitions(const std::vector<Rational>& weights,
                               const std::vector<int>& order, int n, Leaf&& leaf) {
  int m = static_cast<int>(order.size());
  std::vector<int> label(m);
  std::vector<Rational> block_weight(n), block_max(n);
  auto rec = [&](auto&& self, int k, int used) -> void {
    if (k == m) {
      leaf(used, label, block_weight, block_max);
      return;
    }
    const Rational& w = weights[order[k]];
    int limit = std::min(used + 1, n);
    for (int b = 0; b < limit; ++b) {
      label[k] = b;
      block_weight[b] += w;
      bool fresh = (b == used);
      if (fresh) block_max[b] = w;
      self(self, k + 1, used + (fresh ? 1 : 0));
      if (fresh) block_max[b] = Rational();
      block_weight[b] -= w;
    }
  };
  if (m == 0) {
    leaf(0, label, block_weight, block_max);
    return;
  }
  rec(rec, 0, 0);
}

/// Best-candidate tracker for the welfare oracles. Welfare decides; ties go
/// to the lexicographically largest sorted weight sequence, then to the
/// lexicographically smallest good -> bid-rank assignment vector. The last
/// key pins down weight-invisible (zero-weight) goods, completing the
/// exchange-argument canonical form.
class CanonicalOptimum {
 public:
  CanonicalOptimum(const std::vector<Rational>& weights, const std::vector<int>& order, int n)
      : weights_(weights), order_(order), n_(n) {}

  bool empty() const { return !have_; }
  const Rational& welfare() const { return welfare_; }
  const std::vector<int>& labels() const { return labels_; }
  int blocks_used() const { return used_; }

  void offer(const Rational& welfare, const std::vector<Rational>& seq,
             const std::vector<int>& labels, int used) {
    if (have_) {
      if (welfare < welfare_) return;
      if (welfare == welfare_) {
        if (lex_less(seq, seq_)) return;
        if (seq == seq_) {
          std::vector<int> ranks = rank_vector(labels, used);
          if (!rank_vec_computed_) {
            best_ranks_ = rank_vector(labels_, used_);
            rank_vec_computed_ = true;
          }
          if (!std::lexicographical_compare(ranks.begin(), ranks.end(), best_ranks_.begin(),
                                            best_ranks_.end()))
            return;
          best_ranks_ = std::move(ranks);
          welfare_ = welfare;
          seq_ = seq;
          labels_ = labels;
          used_ = used;
          return;
        }
      }
    }
    have_ = true;
    rank_vec_computed_ = false;
    welfare_ = welfare;
    seq_ = seq;
    labels_ = labels;
    used_ = used;
  }

  Partition partition() const {
    Partition partition;
    partition.bundles.assign(n_, {});
    for (std::size_t k = 0; k < order_.size(); ++k)
      partition.bundles[labels_[k]].push_back(order_[k]);
    for (Bundle& bundle : partition.bundles) std::sort(bundle.begin(), bundle.end());
    return partition;
  }

 private:
  static bool lex_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

  /// Per original good, the bid rank of the block holding it under the
  /// sorted allocation (heaviest block -> rank 0; block ties by lower index).
  std::vector<int> rank_vector(const std::vector<int>& labels, int used) const {
    std::vector<Rational> totals(n_);
    for (std::size_t k = 0; k < order_.size(); ++k) totals[labels[k]] += weights_[order_[k]];
    std::vector<int> block_order(n_);
    for (int b = 0; b < n_; ++b) block_order[b] = b;
    std::stable_sort(block_order.begin(), block_order.end(),
                     [&](int a, int b) { return totals[b] < totals[a]; });
    std::vector<int> rank_of_block(n_);
    for (int j = 0; j < n_; ++j) rank_of_block[block_order[j]] = j;
    std::vector<int> ranks(weights_.size());
    for (std::size_t k = 0; k < order_.size(); ++k)
      ranks[order_[k]] = rank_of_block[labels[k]];
    (void)used;
    return ranks;
  }

  const std::vector<Rational>& weights_;
  const std::vector<int>& order_;
  int n_;
  bool have_ = false;
  bool rank_vec_computed_ = false;
  Rational welfare_;
  std::vector<Rational> seq_;
  std::vector<int> labels_;
  std::vector<int> best_ranks_;
  int used_ = 0;
};

inline std::vector<Rational> sorted_desc(std::vector<Rational> values) {
  std::sort(values.begin(), values.end(), std::greater<Rational>());
  return values;
}

/// Welfare of the sorted assignment: descending block weights (padded with
/// empties) dotted with descending bids.
inline Rational sorted_welfare(const std::vector<Rational>& seq_desc,
                               const std::vector<Rational>& bids_desc) {
  Rational total;
  for (std::size_t j = 0; j < bids_desc.size() && j < seq_desc.size(); ++j)
    total += bids_desc[j] * seq_desc[j];
  return total;
}

}  // namespace detail

struct Ef1Optimum {
  Allocation allocation;
  Rational welfare;
};

/// Maximum social welfare over all allocations whose partition is EF1.
/// Correct because EF1 depends only on the partition and, for a fixed
/// partition, the sorted assignment maximizes welfare over all n!
/// assignments, so unordered partitions plus sorted assignment cover every
/// allocation. Tie-breaking is canonical and deterministic.
inline Ef1Optimum brute_force_opt_ef1(const Instance& instance, SizeGuard guard = kOracleGuard) {
  int m = instance.num_goods();
  int n = instance.num_agents();
  if (n < 1) throw std::invalid_argument("brute_force_opt_ef1: need at least one agent");
  if (!guard.admits(m, n)) throw SizeGuardError("brute_force_opt_ef1", m, n, guard);

  std::vector<int> order = detail::goods_by_weight_desc(instance.weights);
  std::vector<Rational> bids_desc = detail::sorted_desc(instance.bids);
  detail::CanonicalOptimum best(instance.weights, order, n);

  std::vector<Rational> seq(n);
  detail::scan_unordered_partitions(
      instance.weights, order, n,
      [&](int used, const std::vector<int>& label, const std::vector<Rational>& block_weight,
          const std::vector<Rational>& block_max) {
        Rational lightest;  // empty padding bundles weigh zero
        if (used == n) {
          lightest = block_weight[0];
          for (int b = 1; b < n; ++b)
            if (block_weight[b] < lightest) lightest = block_weight[b];
        }
        for (int b = 0; b < used; ++b)
          if (lightest < block_weight[b] - block_max[b]) return;

        for (int b = 0; b < n; ++b) seq[b] = b < used ? block_weight[b] : Rational();
        std::sort(seq.begin(), seq.end(), std::greater<Rational>());
        best.offer(detail::sorted_welfare(seq, bids_desc), seq, label, used);
      });

  Partition partition = best.partition();
  Allocation allocation = sorted_allocation(instance.weights, partition, instance.bids);
  return {std::move(allocation), best.welfare()};
}

struct MmsOptimum {
  Allocation allocation;
  Rational welfare;
  Rational maximin_share;
};

/// Maximum social welfare over allocations in which every bundle reaches the
/// exact maximin share. Feasibility is guaranteed by the share-achieving
/// partition itself. The canonical tie-breaking realizes the exchange
/// argument: in the returned optimum every bundle except the top-ranked one
/// lies entirely below or entirely at-or-above the share threshold.
inline MmsOptimum brute_force_opt_mms(const Instance& instance, SizeGuard guard = kOracleGuard) {
  int m = instance.num_goods();
  int n = instance.num_agents();
  if (n < 1) throw std::invalid_argument("brute_force_opt_mms: need at least one agent");
  if (!guard.admits(m, n)) throw SizeGuardError("brute_force_opt_mms", m, n, guard);

  SizeGuard exact_guard{std::max(guard.max_goods, kExactMmsGuard.max_goods),
                        std::max(guard.max_agents, kExactMmsGuard.max_agents)};
  Rational share = exact_mms(instance.weights, n, exact_guard);

  std::vector<int> order = detail::goods_by_weight_desc(instance.weights);
  std::vector<Rational> bids_desc = detail::sorted_desc(instance.bids);
  detail::CanonicalOptimum best(instance.weights, order, n);

  std::vector<Rational> seq(n);
  detail::scan_unordered_partitions(
      instance.weights, order, n,
      [&](int used, const std::vector<int>& label, const std::vector<Rational>& block_weight,
          const std::vector<Rational>&) {
        if (used < n && share.sign() > 0) return;  // an empty bundle misses the share
        for (int b = 0; b < used; ++b)
          if (block_weight[b] < share) return;

        for (int b = 0; b < n; ++b) seq[b] = b < used ? block_weight[b] : Rational();
        std::sort(seq.begin(), seq.end(), std::greater<Rational>());
        best.offer(detail::sorted_welfare(seq, bids_desc), seq, label, used);
      });

  Partition partition = best.partition();
  Allocation allocation = sorted_allocation(instance.weights, partition, instance.bids);
  return {std::move(allocation), best.welfare(), std::move(share)};
}

/// True iff some allocation with every bundle weight at least alpha times
/// the exact maximin share achieves social welfare at least `threshold`.
inline bool brute_force_amms_check(const Instance& instance, const Rational& alpha,
                                   const Rational& threshold, SizeGuard guard = kOracleGuard) {
  int m = instance.num_goods();
  int n = instance.num_agents();
  if (n < 1) throw std::invalid_argument("brute_force_amms_check: need at least one agent");
  if (!guard.admits(m, n)) throw SizeGuardError("brute_force_amms_check", m, n, guard);

  SizeGuard exact_guard{std::max(guard.max_goods, kExactMmsGuard.max_goods),
                        std::max(guard.max_agents, kExactMmsGuard.max_agents)};
  Rational floor = alpha * exact_mms(instance.weights, n, exact_guard);

  std::vector<int> order = detail::goods_by_weight_desc(instance.weights);
  std::vector<Rational> bids_desc = detail::sorted_desc(instance.bids);
  bool found = false;

  std::vector<Rational> seq(n);
  detail::scan_unordered_partitions(
      instance.weights, order, n,
      [&](int used, const std::vector<int>&, const std::vector<Rational>& block_weight,
          const std::vector<Rational>&) {
        if (found) return;
        if (used < n && floor.sign() > 0) return;
        for (int b = 0; b < used; ++b)
          if (block_weight[b] < floor) return;
        for (int b = 0; b < n; ++b) seq[b] = b < used ? block_weight[b] : Rational();
        std::sort(seq.begin(), seq.end(), std::greater<Rational>());
        if (detail::sorted_welfare(seq, bids_desc) >= threshold) found = true;
      });
  return found;
}

}  // namespace fairmech
