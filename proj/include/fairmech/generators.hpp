#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairmech/core.hpp"

namespace fairmech {

namespace detail {
/// Unbiased draw from [0, bound) via rejection; mt19937_64 output is
/// bit-exact across platforms, unlike the standard distributions.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  std::uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod bound
  std::uint64_t draw = engine();
  while (draw < reject_below) draw = engine();
  return draw % bound;
}
}  // namespace detail

/// Reproducible random instance: integer weights in [0, max_weight] and
/// integer bids in [0, max_bid], identical across runs and platforms for a
/// fixed seed.
inline Instance random_instance(int m, int n, long long max_weight, long long max_bid,
                                std::uint64_t seed) {
  if (m < 0 || n < 1) throw std::invalid_argument("random_instance: need m >= 0, n >= 1");
  if (max_weight < 1 || max_bid < 1)
    throw std::invalid_argument("random_instance: bounds must be positive");
  std::mt19937_64 engine(seed);
  Instance instance;
  instance.weights.reserve(m);
  instance.bids.reserve(n);
  for (int g = 0; g < m; ++g)
    instance.weights.emplace_back(static_cast<long long>(
        detail::uniform_below(engine, static_cast<std::uint64_t>(max_weight) + 1)));
  for (int i = 0; i < n; ++i)
    instance.bids.emplace_back(static_cast<long long>(
        detail::uniform_below(engine, static_cast<std::uint64_t>(max_bid) + 1)));
  return instance;
}

struct Ef1HardnessInstance {
  Instance instance;
  Rational welfare_threshold;
};

/// Two-agent instance from a multiset of positive integers summing to 2B:
/// the integers become goods plus one extra good of weight B + eps, bids are
/// (v, v - eps), and the returned threshold is 3Bv + eps*v - eps*B. The EF1
/// welfare optimum reaches the threshold iff the integers admit a balanced
/// 2-partition.
inline Ef1HardnessInstance ef1_hardness_instance(const std::vector<long long>& integers,
                                                 const Rational& v, const Rational& eps) {
  if (integers.empty()) throw std::invalid_argument("ef1_hardness_instance: empty multiset");
  long long sum = 0;
  long long largest = 0;
  for (long long a : integers) {
    if (a <= 0) throw std::invalid_argument("ef1_hardness_instance: integers must be positive");
    sum += a;
    largest = std::max(largest, a);
  }
  if (sum % 2 != 0)
    throw std::invalid_argument("ef1_hardness_instance: integer sum must be even");
  Rational b_half(sum / 2);
  if (eps.sign() <= 0) throw std::invalid_argument("ef1_hardness_instance: eps must be positive");
  if (!(b_half + eps > Rational(largest)))
    throw std::invalid_argument("ef1_hardness_instance: need B + eps > max integer");
  if (!(v > eps)) throw std::invalid_argument("ef1_hardness_instance: need v > eps");

  Ef1HardnessInstance result;
  for (long long a : integers) result.instance.weights.emplace_back(a);
  result.instance.weights.push_back(b_half + eps);
  result.instance.bids = {v, v - eps};
  result.welfare_threshold = Rational(3) * b_half * v + eps * v - eps * b_half;
  return result;
}

struct AmmsHardnessInstance {
  Instance instance;
  Rational alpha;
  Rational welfare_threshold;
};

/// Three-agent instance from a multiset of positive integers with T = sum/2:
/// the integers become goods plus three extra goods (3T, 3T, 4T); bids are
/// (1, 0, 0). With alpha = 1/4, welfare >= 10T is achievable under the
/// alpha-approximate maximin constraint iff the integers admit a balanced
/// 2-partition.
inline AmmsHardnessInstance amms_hardness_instance(const std::vector<long long>& integers) {
  if (integers.empty()) throw std::invalid_argument("amms_hardness_instance: empty multiset");
  long long sum = 0;
  for (long long a : integers) {
    if (a <= 0) throw std::invalid_argument("amms_hardness_instance: integers must be positive");
    sum += a;
  }
  Rational half_sum(sum, 2);

  AmmsHardnessInstance result;
  for (long long a : integers) result.instance.weights.emplace_back(a);
  result.instance.weights.push_back(Rational(3) * half_sum);
  result.instance.weights.push_back(Rational(3) * half_sum);
  result.instance.weights.push_back(Rational(4) * half_sum);
  result.instance.bids = {Rational(1), Rational(0), Rational(0)};
  result.alpha = Rational(1, 4);
  result.welfare_threshold = Rational(10) * half_sum;
  return result;
}

/// Heterogeneous additive valuations: one list per agent over the goods.
/// Outside the single-parameter model; quarantined to the generators and
/// their desk-scale checkers.
struct HetInstance {
  std::vector<std::vector<Rational>> valuations;  // [agent][good]

  int num_agents() const { return static_cast<int>(valuations.size()); }
  int num_goods() const {
    return valuations.empty() ? 0 : static_cast<int>(valuations.front().size());
  }
};

/// Instance family tying heterogeneous-EF1 welfare to independent sets:
/// goods are the vertices; agent 0 values every good at 1; one agent per
/// edge values its two endpoints at 1/(2 n^2) and everything else at 0.
inline HetInstance het_ef1_instance(const std::vector<std::pair<int, int>>& edges,
                                    int num_vertices) {
  if (num_vertices < 0) throw std::invalid_argument("het_ef1_instance: negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
      throw std::invalid_argument("het_ef1_instance: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("het_ef1_instance: self-loop");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw std::invalid_argument("het_ef1_instance: multi-edge");
  }
  int n = static_cast<int>(edges.size()) + 1;
  Rational tiny(1, 2LL * n * n);

  HetInstance het;
  het.valuations.assign(n, std::vector<Rational>(num_vertices, Rational(0)));
  for (int g = 0; g < num_vertices; ++g) het.valuations[0][g] = Rational(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    het.valuations[e + 1][edges[e].first] = tiny;
    het.valuations[e + 1][edges[e].second] = tiny;
  }
  return het;
}

/// EF1 under heterogeneous valuations: every agent i weakly prefers her own
/// bundle to any other bundle minus that bundle's most i-valuable good.
inline bool het_is_ef1(const HetInstance& het, const std::vector<Bundle>& bundles) {
  int n = het.num_agents();
  if (static_cast<int>(bundles.size()) != n)
    throw std::invalid_argument("het_is_ef1: one bundle per agent required");
  for (int i = 0; i < n; ++i) {
    Rational own;
    for (int g : bundles[i]) own += het.valuations[i][g];
    for (int j = 0; j < n; ++j) {
      if (j == i || bundles[j].empty()) continue;
      Rational other, top;
      for (int g : bundles[j]) {
        other += het.valuations[i][g];
        if (het.valuations[i][g] > top) top = het.valuations[i][g];
      }
      if (own < other - top) return false;
    }
  }
  return true;
}

inline constexpr SizeGuard kHetGuard{6, 16};

/// Exhaustive maximum welfare over heterogeneous-EF1 allocations. Valuations
/// are scaled to a common denominator so the inner loop runs on integers;
/// desk scale only.
inline Rational het_max_ef1_welfare(const HetInstance& het, SizeGuard guard = kHetGuard) {
  int n = het.num_agents();
  int m = het.num_goods();
  if (n < 1) throw std::invalid_argument("het_max_ef1_welfare: need at least one agent");
  if (!guard.admits(m, n)) throw SizeGuardError("het_max_ef1_welfare", m, n, guard);

  BigInt common_den(1);
  for (const auto& row : het.valuations)
    for (const Rational& v : row) {
      if (v.sign() < 0)
        throw std::invalid_argument("het_max_ef1_welfare: negative valuation");
      common_den = boost::multiprecision::lcm(common_den, v.denominator());
    }
  std::vector<std::vector<long long>> value(n, std::vector<long long>(m));
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < m; ++g) {
      BigInt scaled = het.valuations[i][g].numerator() *
                      (common_den / het.valuations[i][g].denominator());
      if (scaled > std::numeric_limits<long long>::max() / (m + 1))
        throw std::invalid_argument("het_max_ef1_welfare: valuations too large to scale");
      value[i][g] = scaled.convert_to<long long>();
    }

  std::vector<Bundle> bundles(n);
  std::vector<std::vector<long long>> held(n, std::vector<long long>(n, 0));  // held[i][j] = v_i(S_j)
  long long best = -1;

  auto ef1_scaled = [&]() {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || bundles[j].empty()) continue;
        long long top = 0;
        for (int g : bundles[j]) top = std::max(top, value[i][g]);
        if (held[i][i] < held[i][j] - top) return false;
      }
    return true;
  };

  auto rec = [&](auto&& self, int g) -> void {
    if (g == m) {
      long long welfare = 0;
      for (int i = 0; i < n; ++i) welfare += held[i][i];
      if (welfare > best && ef1_scaled()) best = welfare;
      return;
    }
    for (int b = 0; b < n; ++b) {
      bundles[b].push_back(g);
      for (int i = 0; i < n; ++i) held[i][b] += value[i][g];
      self(self, g + 1);
      for (int i = 0; i < n; ++i) held[i][b] -= value[i][g];
      bundles[b].pop_back();
    }
  };
  rec(rec, 0);
  if (best < 0) throw std::logic_error("het_max_ef1_welfare: no EF1 allocation found");
  return Rational(BigInt(best), common_den);
}

/// Size of a maximum independent set, by bitmask enumeration.
inline int max_independent_set(const std::vector<std::pair<int, int>>& edges, int num_vertices) {
  if (num_vertices < 0 || num_vertices > 25)
    throw std::invalid_argument("max_independent_set: vertex count out of range");
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << num_vertices); ++mask) {
    bool independent = true;
    for (auto [u, v] : edges)
      if ((mask >> u & 1u) && (mask >> v & 1u)) {
        independent = false;
        break;
      }
    if (independent) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace fairmech
