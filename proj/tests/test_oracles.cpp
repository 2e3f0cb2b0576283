#include "fairmech/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "fairmech/generators.hpp"
#include "test_util.hpp"

namespace fairmech {
namespace {

using testing::make_instance;
using testing::make_partition;
using testing::rationals;

/// Second, independently coded enumerator: walks assignment vectors as a
/// base-n counter and recomputes every quantity from scratch.
template <typename Fn>
void counter_enumeration(int m, int n, Fn&& fn) {
  std::vector<int> owner(m, 0);
  while (true) {
    Partition partition;
    partition.bundles.assign(n, {});
    for (int g = 0; g < m; ++g) partition.bundles[owner[g]].push_back(g);
    fn(partition);
    int g = 0;
    while (g < m && owner[g] == n - 1) owner[g++] = 0;
    if (g == m) break;
    ++owner[g];
  }
}

Rational counter_opt_ef1(const Instance& instance) {
  Rational best(-1);
  counter_enumeration(instance.num_goods(), instance.num_agents(), [&](const Partition& p) {
    if (!is_ef1(instance, p)) return;
    Rational welfare =
        social_welfare(instance, sorted_allocation(instance.weights, p, instance.bids));
    if (welfare > best) best = welfare;
  });
  return best;
}

TEST(EnumeratePartitions, Counts) {
  int count = 0;
  enumerate_partitions(2, 2, [&](const Partition&) { ++count; });
  EXPECT_EQ(count, 4);
  count = 0;
  enumerate_partitions(0, 2, [&](const Partition&) { ++count; });
  EXPECT_EQ(count, 1);
  count = 0;
  enumerate_partitions(3, 2, [&](const Partition&) { ++count; });
  EXPECT_EQ(count, 8);
}

TEST(EnumeratePartitions, GuardAndValidity) {
  EXPECT_THROW(enumerate_partitions(13, 2, [](const Partition&) {}), SizeGuardError);
  enumerate_partitions(3, 2, [](const Partition& p) { EXPECT_TRUE(is_valid_partition(p, 3, 2)); });
}

TEST(BruteForceEf1, SpecInstanceOptimumIsNinetyFive) {
  Instance instance = make_instance({5, 4, 3, 2}, {10, 1});
  Ef1Optimum optimum = brute_force_opt_ef1(instance);
  EXPECT_EQ(optimum.welfare, Rational(95));
  EXPECT_TRUE(is_ef1(instance, optimum.allocation.partition));
  EXPECT_EQ(social_welfare(instance, optimum.allocation), optimum.welfare);
  EXPECT_EQ(counter_opt_ef1(instance), Rational(95));
}

TEST(BruteForceEf1, EqualBidsMakeAssignmentIrrelevant) {
  Instance instance = make_instance({7, 3, 2}, {4, 4});
  Ef1Optimum optimum = brute_force_opt_ef1(instance);
  std::vector<int> assignment = optimum.allocation.assignment;
  std::sort(assignment.begin(), assignment.end());
  do {
    Allocation shuffled{optimum.allocation.partition, assignment};
    EXPECT_EQ(social_welfare(instance, shuffled), optimum.welfare);
  } while (std::next_permutation(assignment.begin(), assignment.end()));
}

TEST(BruteForceEf1, SingleAgentTakesAll) {
  Instance instance = make_instance({5, 2}, {3});
  EXPECT_EQ(brute_force_opt_ef1(instance).welfare, Rational(21));
}

TEST(BruteForceEf1, AgreesWithCounterEnumerationOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Instance instance = random_instance(1 + seed % 6, 1 + seed % 3, 15, 7, 7700 + seed);
    EXPECT_EQ(brute_force_opt_ef1(instance).welfare, counter_opt_ef1(instance))
        << "seed " << seed;
  }
}

TEST(BruteForceMms, RunningExample) {
  Instance instance = make_instance({10, 6, 5, 1, 1, 1}, {3, 2, 1});
  MmsOptimum optimum = brute_force_opt_mms(instance);
  EXPECT_EQ(optimum.welfare, Rational(51));
  EXPECT_EQ(optimum.maximin_share, Rational(7));
  EXPECT_EQ(optimum.maximin_share, exact_mms(instance.weights, 3));
}

TEST(BruteForceMms, TrivialCases) {
  Instance single = make_instance({4, 2}, {3});
  MmsOptimum optimum = brute_force_opt_mms(single);
  EXPECT_EQ(optimum.welfare, Rational(18));
  EXPECT_EQ(optimum.maximin_share, Rational(6));

  Instance pair = make_instance({1, 1}, {1, 1});
  MmsOptimum both = brute_force_opt_mms(pair);
  EXPECT_EQ(both.welfare, Rational(2));
  EXPECT_EQ(both.maximin_share, Rational(1));
}

TEST(BruteForceMms, AgreesWithCounterEnumerationOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance instance = random_instance(1 + seed % 6, 1 + seed % 3, 12, 6, 88000 + seed);
    MmsOptimum optimum = brute_force_opt_mms(instance);
    Rational share = optimum.maximin_share;
    Rational expected(-1);
    counter_enumeration(instance.num_goods(), instance.num_agents(), [&](const Partition& p) {
      for (const Bundle& b : p.bundles)
        if (bundle_weight(instance, b) < share) return;
      Rational welfare =
          social_welfare(instance, sorted_allocation(instance.weights, p, instance.bids));
      if (welfare > expected) expected = welfare;
    });
    EXPECT_EQ(optimum.welfare, expected) << "seed " << seed;
    for (const Bundle& b : optimum.allocation.partition.bundles)
      EXPECT_GE(bundle_weight(instance, b), share) << "seed " << seed;
  }
}

TEST(BruteForceMms, CanonicalOptimumSplitsLowAndHighGoods) {
  // In the canonicalized optimum, every bundle except the top-ranked one
  // lies entirely below the share or entirely at-or-above it. Zero-weight
  // goods are the delicate case the assignment tie-break settles.
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Instance instance = random_instance(2 + seed % 6, 2 + seed % 3, 6, 4, 93000 + seed);
    MmsOptimum optimum = brute_force_opt_mms(instance);
    const Rational& share = optimum.maximin_share;
    if (share.is_zero()) continue;
    std::vector<int> agents_by_rank(instance.num_agents());
    for (int i = 0; i < instance.num_agents(); ++i) agents_by_rank[i] = i;
    std::stable_sort(agents_by_rank.begin(), agents_by_rank.end(), [&](int a, int b) {
      return instance.bids[b] < instance.bids[a];
    });
    for (std::size_t rank = 1; rank < agents_by_rank.size(); ++rank) {
      const Bundle& bundle = optimum.allocation.bundle_of(agents_by_rank[rank]);
      bool any_low = false, any_high = false;
      for (int g : bundle)
        (instance.weights[g] < share ? any_low : any_high) = true;
      EXPECT_FALSE(any_low && any_high) << "seed " << seed << " rank " << rank;
    }
  }
}

TEST(AmmsCheck, ReductionExamples) {
  Instance one = make_instance({1, 1, 3, 3, 4}, {1, 0, 0});
  EXPECT_TRUE(brute_force_amms_check(one, Rational(1, 4), Rational(10)));
  EXPECT_TRUE(brute_force_amms_check(one, Rational(1, 4), Rational(0)));

  Instance odd{testing::rationals({1, 1, 1}), testing::rationals({1, 0, 0})};
  odd.weights.emplace_back(9, 2);   // 3T
  odd.weights.emplace_back(9, 2);   // 3T
  odd.weights.emplace_back(6);      // 4T
  EXPECT_FALSE(brute_force_amms_check(odd, Rational(1, 4), Rational(15)));
}

TEST(EnumerateEf1Partitions, SpecExamples) {
  Instance two = make_instance({1, 1}, {1, 1});
  std::vector<Partition> partitions = enumerate_ef1_partitions(two);
  ASSERT_EQ(partitions.size(), 2u);
  EXPECT_EQ(partitions[0], make_partition({{0}, {1}}));
  EXPECT_EQ(partitions[1], make_partition({{1}, {0}}));

  Instance lone = make_instance({7}, {1, 1});
  EXPECT_EQ(enumerate_ef1_partitions(lone).size(), 2u);

  Instance skew = make_instance({5, 5, 1}, {1, 1});
  std::vector<Partition> kept = enumerate_ef1_partitions(skew);
  EXPECT_EQ(kept.size(), 4u);
  Partition bad = make_partition({{0, 1}, {2}});
  EXPECT_TRUE(std::find(kept.begin(), kept.end(), bad) == kept.end());
}

TEST(Oracles, DeterministicAcrossRuns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance instance = random_instance(2 + seed % 6, 2 + seed % 3, 9, 5, 123000 + seed);
    Ef1Optimum a = brute_force_opt_ef1(instance);
    Ef1Optimum b = brute_force_opt_ef1(instance);
    EXPECT_EQ(a.allocation.partition, b.allocation.partition);
    EXPECT_EQ(a.allocation.assignment, b.allocation.assignment);
    MmsOptimum c = brute_force_opt_mms(instance);
    MmsOptimum d = brute_force_opt_mms(instance);
    EXPECT_EQ(c.allocation.partition, d.allocation.partition);
  }
}

}  // namespace
}  // namespace fairmech
