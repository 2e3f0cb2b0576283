#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairmech/rational.hpp"

namespace fairmech {

/// A fair-auction instance: m public good weights and n reported bids.
/// Weights are the public summarization of the goods; agent i values a
/// bundle S at bids[i] * (sum of weights over S) when truthful.
struct Instance {
  std::vector<Rational> weights;
  std::vector<Rational> bids;

  int num_goods() const { return static_cast<int>(weights.size()); }
  int num_agents() const { return static_cast<int>(bids.size()); }
};

/// A bundle is a set of good indices, kept sorted ascending.
using Bundle = std::vector<int>;

/// An n-partition of the goods: disjoint bundles covering all good indices.
/// Empty bundles are legal (needed whenever m < n). The partition alone
/// carries no agent identity; fairness predicates depend only on it.
struct Partition {
  std::vector<Bundle> bundles;

  int num_bundles() const { return static_cast<int>(bundles.size()); }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.bundles == b.bundles;
  }
};

/// A partition bound to agents: assignment[agent] is the bundle index that
/// agent receives. The assignment is a bijection on agents.
struct Allocation {
  Partition partition;
  std::vector<int> assignment;

  const Bundle& bundle_of(int agent) const { return partition.bundles[assignment[agent]]; }
};

/// Caps on instance sizes for the exhaustive solvers and oracles.
struct SizeGuard {
  int max_goods;
  int max_agents;

  bool admits(int m, int n) const { return m <= max_goods && n <= max_agents; }
};

class SizeGuardError : public std::runtime_error {
 public:
  SizeGuardError(const std::string& what_op, int m, int n, SizeGuard guard)
      : std::runtime_error(what_op + ": instance size m=" + std::to_string(m) +
                           ", n=" + std::to_string(n) + " exceeds guard m<=" +
                           std::to_string(guard.max_goods) +
                           ", n<=" + std::to_string(guard.max_agents)) {}
};

/// Checks instance well-formedness. Returns an empty list when the instance
/// is valid, otherwise one message per violation.
inline std::vector<std::string> validate(const Instance& instance) {
  std::vector<std::string> violations;
  for (int g = 0; g < instance.num_goods(); ++g)
    if (instance.weights[g].sign() < 0)
      violations.push_back("negative weight at index " + std::to_string(g));
  for (int i = 0; i < instance.num_agents(); ++i)
    if (instance.bids[i].sign() < 0)
      violations.push_back("negative bid at index " + std::to_string(i));
  if (instance.num_agents() == 0) violations.push_back("instance has no agents");
  return violations;
}

/// Structural check that `partition` is an n-partition of [m].
inline bool is_valid_partition(const Partition& partition, int num_goods, int num_agents) {
  if (partition.num_bundles() != num_agents) return false;
  std::vector<char> seen(num_goods, 0);
  for (const Bundle& bundle : partition.bundles)
    for (int g : bundle) {
      if (g < 0 || g >= num_goods || seen[g]) return false;
      seen[g] = 1;
    }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

inline Rational bundle_weight(const std::vector<Rational>& weights, const Bundle& bundle) {
  Rational total;
  for (int g : bundle) {
    if (g < 0 || g >= static_cast<int>(weights.size()))
      throw std::out_of_range("bundle_weight: good index " + std::to_string(g) +
                              " outside [0, " + std::to_string(weights.size()) + ")");
    total += weights[g];
  }
  return total;
}

inline Rational bundle_weight(const Instance& instance, const Bundle& bundle) {
  return bundle_weight(instance.weights, bundle);
}

inline std::vector<Rational> bundle_weights(const std::vector<Rational>& weights,
                                            const Partition& partition) {
  std::vector<Rational> result;
  result.reserve(partition.bundles.size());
  for (const Bundle& bundle : partition.bundles) result.push_back(bundle_weight(weights, bundle));
  return result;
}

/// Envy-freeness up to one good, under the public weights. True iff for every
/// ordered bundle pair (i, j) with bundle j nonempty there is a good in j
/// whose removal kills the envy: w(P_i) >= w(P_j) - max_{g in P_j} w(g).
/// Pairs against empty bundles hold vacuously. Assignment-independent.
inline bool is_ef1(const std::vector<Rational>& weights, const Partition& partition) {
  int n = partition.num_bundles();
  std::vector<Rational> totals = bundle_weights(weights, partition);
  std::vector<Rational> max_good(n);
  for (int j = 0; j < n; ++j)
    for (int g : partition.bundles[j])
      if (weights[g] > max_good[j]) max_good[j] = weights[g];

  Rational min_total;
  bool have_min = false;
  for (int i = 0; i < n; ++i)
    if (!have_min || totals[i] < min_total) {
      min_total = totals[i];
      have_min = true;
    }
  for (int j = 0; j < n; ++j) {
    if (partition.bundles[j].empty()) continue;
    if (min_total < totals[j] - max_good[j]) return false;
  }
  return true;
}

inline bool is_ef1(const Instance& instance, const Partition& partition) {
  return is_ef1(instance.weights, partition);
}

/// min over ordered pairs (i, j) with bundle j nonempty of
/// w(A_i) - (w(A_j) - max good of A_j). Nonnegative iff the partition is
/// EF1. nullopt when no such pair exists (n = 1 or every bundle empty),
/// i.e. the +infinity sentinel.
inline std::optional<Rational> ef1_slack(const std::vector<Rational>& weights,
                                         const Partition& partition) {
  int n = partition.num_bundles();
  std::vector<Rational> totals = bundle_weights(weights, partition);
  std::optional<Rational> slack;
  for (int j = 0; j < n; ++j) {
    if (partition.bundles[j].empty()) continue;
    Rational max_good;
    for (int g : partition.bundles[j])
      if (weights[g] > max_good) max_good = weights[g];
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      Rational gap = totals[i] - (totals[j] - max_good);
      if (!slack || gap < *slack) slack = gap;
    }
  }
  return slack;
}

/// Sum over agents of bid_i * w(assigned bundle), exact.
inline Rational social_welfare(const Instance& instance, const Allocation& allocation) {
  Rational total;
  for (int i = 0; i < instance.num_agents(); ++i)
    total += instance.bids[i] * bundle_weight(instance.weights, allocation.bundle_of(i));
  return total;
}

/// Product of bundle weights. Comparing products is equivalent to comparing
/// geometric means, so the n-th root is omitted to stay in exact arithmetic.
/// Any empty bundle (more generally, any zero-weight bundle) gives 0.
inline Rational nsw_objective(const std::vector<Rational>& weights, const Partition& partition) {
  Rational product(1);
  for (const Bundle& bundle : partition.bundles) {
    product *= bundle_weight(weights, bundle);
    if (product.is_zero()) return product;
  }
  return product;
}

inline Rational nsw_objective(const Instance& instance, const Partition& partition) {
  return nsw_objective(instance.weights, partition);
}

/// Fairness diagnostics attached to a mechanism outcome. ef1_slack is
/// nullopt for the vacuous (+infinity) case; mms_ratio is only present when
/// the exact maximin share was computable and positive.
struct FairnessMargins {
  std::optional<Rational> ef1_slack;
  std::optional<Rational> mms_ratio;
};

}  // namespace fairmech
