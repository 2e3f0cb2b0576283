#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairmech/core.hpp"
#include "fairmech/ef1.hpp"

namespace fairmech {

inline constexpr SizeGuard kExactMmsGuard{16, 5};

/// Raised when bicriteria_mms_partition runs out of high-valued goods, the
/// structural symptom of an estimate above the true maximin share.
class InvalidEstimateError : public std::runtime_error {
 public:
  explicit InvalidEstimateError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

struct MaximinSearch {
  const std::vector<Rational>& goods;  // positive weights, descending
  std::vector<Rational> suffix;        // suffix[k] = sum of goods[k..]
  int bundles;
  Rational cap;  // total / n, unbeatable upper bound
  Rational best{-1};
  std::vector<Rational> loads;
  std::vector<std::set<std::vector<Rational>>> visited;
  std::size_t memo_budget = 1u << 21;

  explicit MaximinSearch(const std::vector<Rational>& goods_desc, int n)
      : goods(goods_desc), bundles(n), loads(n) {
    suffix.assign(goods.size() + 1, Rational());
    for (int k = static_cast<int>(goods.size()) - 1; k >= 0; --k)
      suffix[k] = suffix[k + 1] + goods[k];
    cap = suffix[0] / Rational(n);
    visited.resize(goods.size());
  }

  void run(std::size_t k) {
    if (best == cap) return;
    if (k == goods.size()) {
      Rational lo = loads[0];
      for (const Rational& l : loads)
        if (l < lo) lo = l;
      if (lo > best) best = lo;
      return;
    }
    Rational lo = loads[0];
    for (const Rational& l : loads)
      if (l < lo) lo = l;
    if (lo + suffix[k] <= best) return;

    std::vector<Rational> key = loads;
    std::sort(key.begin(), key.end());
    if (memo_budget > 0) {
      auto [it, inserted] = visited[k].insert(std::move(key));
      if (!inserted) return;
      --memo_budget;
    }

    // Try destination bundles poorest-first; identical loads are symmetric.
    std::vector<int> order(bundles);
    for (int i = 0; i < bundles; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return loads[a] < loads[b]; });
    for (int idx = 0; idx < bundles; ++idx) {
      int i = order[idx];
      if (idx > 0 && loads[i] == loads[order[idx - 1]]) continue;
      loads[i] += goods[k];
      run(k + 1);
      loads[i] -= goods[k];
      if (best == cap) return;
    }
  }
};

}  // namespace detail

/// Exact maximin share: the maximum over n-partitions of the minimum bundle
/// weight. Exhaustive search over bundle assignments with symmetry and bound
/// pruning plus deduplication of revisited load states. Desk scale only.
inline Rational exact_mms(const std::vector<Rational>& weights, int n,
                          SizeGuard guard = kExactMmsGuard) {
  if (n < 1) throw std::invalid_argument("exact_mms: need at least one agent");
  int m = static_cast<int>(weights.size());
  if (!guard.admits(m, n))
    throw SizeGuardError("exact_mms (use estimate_mms beyond the guard)", m, n, guard);

  std::vector<Rational> goods;
  for (const Rational& w : weights)
    if (w.sign() > 0) goods.push_back(w);
  if (static_cast<int>(goods.size()) < n) return Rational(0);
  std::sort(goods.begin(), goods.end(), std::greater<Rational>());
  if (n == 1) {
    Rational total;
    for (const Rational& w : goods) total += w;
    return total;
  }
  detail::MaximinSearch search(goods, n);
  search.run(0);
  return search.best;
}

/// A maximin-share estimate: value is guaranteed to lie in
/// [(1 - epsilon) * mms, mms]; exact marks the case value == mms.
struct MmsEstimate {
  Rational value;
  Rational epsilon;
  bool exact = false;
};

namespace detail {

/// Max over assignments of the rounded big goods to n bundles of
/// sum_i min(load_i, target), with early exit once `needed` is reached.
struct CoverageSearch {
  const std::vector<Rational>& goods;  // rounded values, descending
  std::vector<Rational> suffix;
  int bundles;
  Rational target;
  Rational needed;
  Rational best{0};
  std::vector<Rational> loads;
  std::vector<std::set<std::vector<Rational>>> visited;
  std::size_t memo_budget = 1u << 21;

  CoverageSearch(const std::vector<Rational>& goods_desc, int n, Rational target_level,
                 Rational needed_score)
      : goods(goods_desc), bundles(n), target(std::move(target_level)),
        needed(std::move(needed_score)), loads(n) {
    suffix.assign(goods.size() + 1, Rational());
    for (int k = static_cast<int>(goods.size()) - 1; k >= 0; --k)
      suffix[k] = suffix[k + 1] + goods[k];
    visited.resize(goods.size());
  }

  Rational capped(const Rational& load) const { return load < target ? load : target; }

  void run(std::size_t k) {
    if (best >= needed) return;
    Rational score, headroom;
    for (const Rational& l : loads) {
      score += capped(l);
      headroom += target - capped(l);
    }
    if (k == goods.size()) {
      if (score > best) best = score;
      return;
    }
    Rational gain = suffix[k] < headroom ? suffix[k] : headroom;
    if (score + gain <= best) return;

    std::vector<Rational> key(bundles);
    for (int i = 0; i < bundles; ++i) key[i] = capped(loads[i]);
    std::sort(key.begin(), key.end());
    if (memo_budget > 0) {
      auto [it, inserted] = visited[k].insert(std::move(key));
      if (!inserted) return;
      --memo_budget;
    }

    std::vector<int> order(bundles);
    for (int i = 0; i < bundles; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return loads[a] < loads[b]; });
    for (int idx = 0; idx < bundles; ++idx) {
      int i = order[idx];
      if (idx > 0 && capped(loads[i]) == capped(loads[order[idx - 1]])) continue;
      loads[i] += goods[k];
      run(k + 1);
      loads[i] -= goods[k];
      if (best >= needed) return;
    }
  }
};

/// All achievable subset sums of `weights` that do not exceed `bound`.
/// Sorted ascending; always contains 0.
inline std::vector<Rational> subset_sums_up_to(const std::vector<Rational>& weights,
                                               const Rational& bound) {
  std::set<Rational> sums{Rational(0)};
  for (const Rational& w : weights) {
    if (w.sign() <= 0) continue;  // zero weights never change a sum
    std::vector<Rational> grown;
    grown.reserve(sums.size());
    for (const Rational& s : sums) {
      Rational t = s + w;
      if (t <= bound) grown.push_back(std::move(t));
    }
    sums.insert(grown.begin(), grown.end());
  }
  return {sums.begin(), sums.end()};
}

/// Relaxed cover-feasibility test for the estimator. Accepting t certifies a
/// partition with minimum bundle weight >= (1 - eps) * t; every t at or
/// below the true maximin share is accepted.
inline bool cover_feasible(const std::vector<Rational>& weights, int n, const Rational& t,
                           const Rational& eps) {
  if (t.sign() <= 0) return true;
  Rational half_eps = eps / Rational(2);
  Rational theta = half_eps * t;              // big/tiny split
  Rational grid = half_eps * half_eps * t;    // rounding grid for big goods
  Rational target = (Rational(1) - half_eps) * t;

  std::vector<Rational> rounded;
  Rational tiny_total;
  for (const Rational& w : weights) {
    if (w < theta) {
      tiny_total += w;
    } else {
      Rational capped = w < t ? w : t;
      rounded.push_back(floor_to_multiple(capped, grid));
    }
  }
  Rational needed = Rational(n) * target - tiny_total;
  if (needed.sign() <= 0) return true;
  std::sort(rounded.begin(), rounded.end(), std::greater<Rational>());
  CoverageSearch search(rounded, n, target, needed);
  search.run(0);
  return search.best >= needed;
}

}  // namespace detail

/// Maximin-share estimate with (1 - epsilon) * mms <= value <= mms, for
/// epsilon in (0, 1/2). Inside the size guard the exact solver is used
/// (exact estimates strengthen every downstream guarantee). Beyond it, a
/// configuration-rounding scheme runs: binary-search a threshold t over the
/// achievable subset sums bounded by w([m])/n, testing relaxed cover
/// feasibility with big goods rounded onto a grid and tiny goods packed
/// greedily. Accepted thresholds certify (1 - epsilon) * t; the largest
/// accepted candidate is at least the true share since every t <= mms passes.
inline MmsEstimate estimate_mms(const std::vector<Rational>& weights, int n,
                                const Rational& epsilon, SizeGuard guard = kExactMmsGuard) {
  if (n < 1) throw std::invalid_argument("estimate_mms: need at least one agent");
  if (!(epsilon > Rational(0) && epsilon < Rational(1, 2)))
    throw std::invalid_argument("estimate_mms: epsilon must lie in (0, 1/2)");
  int m = static_cast<int>(weights.size());
  if (guard.admits(m, n)) return {exact_mms(weights, n, guard), epsilon, true};

  Rational total;
  for (const Rational& w : weights) total += w;
  std::vector<Rational> candidates = detail::subset_sums_up_to(weights, total / Rational(n));

  auto accept = [&](const Rational& t) { return detail::cover_feasible(weights, n, t, epsilon); };
  std::size_t lo = 0;  // candidates[0] == 0, always accepted
  std::size_t hi = candidates.size() - 1;
  if (accept(candidates[hi])) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (accept(candidates[mid]))
        lo = mid;
      else
        hi = mid;
    }
  }
  return {(Rational(1) - epsilon) * candidates[lo], epsilon, false};
}

enum class GoodClass { High, Medium, Tiny };

/// Execution record of the bi-criteria partition algorithm: which return
/// fired (1, 2 or 4; 0 for the degenerate zero-estimate fallback), the
/// bundle counts after the medium and tiny phases, the goods set aside
/// before the high phase, and the classification of every good.
struct BicriteriaTrace {
  int phase_reached = 0;
  bool degenerate = false;
  int medium_singletons = 0;  // singleton bundles formed from medium goods
  int low_bundles = 0;        // nonempty bundles after the tiny phase
  std::vector<int> leftover;  // deficient tail bundle set aside as E
  std::vector<GoodClass> classes;
};

namespace detail {

inline Partition first_bundles_plus_rest(const std::vector<Bundle>& formed, int n, int m) {
  Partition partition;
  std::vector<char> used(m, 0);
  for (int i = 0; i < n - 1; ++i) {
    partition.bundles.push_back(formed[i]);
    for (int g : formed[i]) used[g] = 1;
  }
  Bundle rest;
  for (int g = 0; g < m; ++g)
    if (!used[g]) rest.push_back(g);
  partition.bundles.push_back(std::move(rest));
  return partition;
}

}  // namespace detail

/// Four-phase bi-criteria partition. Given an estimate in (0, mms], returns
/// an n-partition in which every bundle weighs at least estimate/2 and the
/// last bundle is a heaviest one. Phases: classify goods against the
/// estimate; make singletons of medium goods; fill bundles from tiny goods
/// to level estimate/2, setting aside a deficient tail; make singletons of
/// the lightest high goods; give the last bundle the tail plus the remaining
/// high goods. Early returns hand back the first n-1 bundles plus the rest.
/// An estimate above the true share can exhaust the high goods in the third
/// phase, which is reported as InvalidEstimateError. A zero estimate (fewer
/// positive-weight goods than agents) falls back to round-robin with a
/// flagged trace, every allocation being vacuously fair there.
inline std::pair<Partition, BicriteriaTrace> bicriteria_mms_partition(
    const std::vector<Rational>& weights, int n, const Rational& estimate) {
  if (n < 1) throw std::invalid_argument("bicriteria_mms_partition: need at least one agent");
  if (estimate.sign() < 0)
    throw std::invalid_argument("bicriteria_mms_partition: negative estimate");
  int m = static_cast<int>(weights.size());

  BicriteriaTrace trace;
  trace.classes.resize(m);

  if (estimate.is_zero()) {
    // Fewer positive-weight goods than agents: the share is zero, every
    // allocation is vacuously fair, and only the all-in-one-bundle partition
    // keeps the sorted allocation welfare-dominant over the (unconstrained)
    // optimum. The whole set goes to the last bundle, which stays heaviest.
    for (int g = 0; g < m; ++g) trace.classes[g] = GoodClass::High;
    trace.degenerate = true;
    trace.phase_reached = 0;
    Partition degenerate;
    degenerate.bundles.assign(n, {});
    for (int g = 0; g < m; ++g) degenerate.bundles[n - 1].push_back(g);
    return {std::move(degenerate), std::move(trace)};
  }

  Rational half = estimate / Rational(2);
  std::vector<int> mediums, tinies, highs;
  for (int g : detail::goods_by_weight_desc(weights)) {
    if (weights[g] >= estimate) {
      trace.classes[g] = GoodClass::High;
      highs.push_back(g);
    } else if (weights[g] < half) {
      trace.classes[g] = GoodClass::Tiny;
      tinies.push_back(g);
    } else {
      trace.classes[g] = GoodClass::Medium;
      mediums.push_back(g);
    }
  }

  std::vector<Bundle> formed;
  for (int g : mediums) formed.push_back({g});
  trace.medium_singletons = static_cast<int>(formed.size());
  if (trace.medium_singletons >= n) {
    trace.phase_reached = 1;
    trace.low_bundles = trace.medium_singletons;
    return {detail::first_bundles_plus_rest(formed, n, m), std::move(trace)};
  }

  Bundle open;
  Rational open_weight;
  for (int g : tinies) {
    open.push_back(g);
    open_weight += weights[g];
    if (open_weight >= half) {
      std::sort(open.begin(), open.end());
      formed.push_back(std::move(open));
      open.clear();
      open_weight = Rational();
    }
  }
  std::sort(open.begin(), open.end());
  Bundle tail = std::move(open);  // deficient remainder, possibly empty

  trace.low_bundles = static_cast<int>(formed.size());
  trace.leftover = tail;
  if (trace.low_bundles >= n) {
    trace.phase_reached = 2;
    return {detail::first_bundles_plus_rest(formed, n, m), std::move(trace)};
  }

  std::sort(highs.begin(), highs.end(), [&](int a, int b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    return a < b;
  });
  int singles = n - trace.low_bundles - 1;
  if (static_cast<int>(highs.size()) < singles)
    throw InvalidEstimateError(
        "bicriteria_mms_partition: too few high-valued goods; the estimate exceeds "
        "the maximin share");
  for (int i = 0; i < singles; ++i) formed.push_back({highs[i]});

  Bundle last = std::move(tail);
  for (std::size_t i = static_cast<std::size_t>(singles); i < highs.size(); ++i)
    last.push_back(highs[i]);
  std::sort(last.begin(), last.end());
  if (bundle_weight(weights, last) < half)
    throw InvalidEstimateError(
        "bicriteria_mms_partition: no high-valued good left for the final deficient "
        "bundle; the estimate exceeds the maximin share");
  formed.push_back(std::move(last));

  trace.phase_reached = 4;
  Partition partition;
  partition.bundles = std::move(formed);
  return {std::move(partition), std::move(trace)};
}

struct MmsSolution {
  Partition partition;
  MmsEstimate estimate;
  BicriteriaTrace trace;
};

/// Bid-oblivious partition for welfare maximization under maximin-share
/// constraints: estimate the share, then run the bi-criteria partition.
/// Bound to agents by the sorted allocation rule, every agent receives at
/// least ((1 - epsilon)/2) times her maximin share and the welfare is at
/// least the constrained optimum.
inline MmsSolution solve_fa_mms(const Instance& instance, const Rational& epsilon,
                                SizeGuard guard = kExactMmsGuard) {
  MmsEstimate estimate =
      estimate_mms(instance.weights, instance.num_agents(), epsilon, guard);
  auto [partition, trace] =
      bicriteria_mms_partition(instance.weights, instance.num_agents(), estimate.value);
  return {std::move(partition), std::move(estimate), std::move(trace)};
}

}  // namespace fairmech
