#include "fairmech/core.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fairmech/generators.hpp"
#include "test_util.hpp"

namespace fairmech {
namespace {

using testing::make_instance;
using testing::make_partition;
using testing::R;

TEST(Validate, WellFormedInstancePasses) {
  EXPECT_TRUE(validate(make_instance({1, 2}, {3, 1})).empty());
}

TEST(Validate, ReportsNegativeWeight) {
  auto violations = validate(make_instance({-1}, {1}));
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0], "negative weight at index 0");
}

TEST(Validate, EmptyGoodsIsLegal) {
  EXPECT_TRUE(validate(make_instance({}, {1, 1})).empty());
}

TEST(Validate, ReportsNegativeBidAndMissingAgents) {
  EXPECT_EQ(validate(make_instance({1}, {-2}))[0], "negative bid at index 0");
  EXPECT_EQ(validate(Instance{{}, {}})[0], "instance has no agents");
}

TEST(BundleWeight, SumsSelectedGoods) {
  Instance instance = make_instance({5, 4, 3, 2}, {1});
  EXPECT_EQ(bundle_weight(instance, {0, 2}), Rational(8));
  EXPECT_EQ(bundle_weight(instance, {}), Rational(0));
}

TEST(BundleWeight, ExactOnRationals) {
  Instance instance{{R("1/2"), R("1/3")}, {Rational(1)}};
  EXPECT_EQ(bundle_weight(instance, {0, 1}), R("5/6"));
}

TEST(BundleWeight, RejectsOutOfRangeIndex) {
  Instance instance = make_instance({1, 2}, {1});
  EXPECT_THROW(bundle_weight(instance, {2}), std::out_of_range);
  EXPECT_THROW(bundle_weight(instance, {-1}), std::out_of_range);
}

TEST(IsEf1, SpecExamples) {
  EXPECT_TRUE(is_ef1(make_instance({5, 4, 3, 2}, {1, 1}), make_partition({{0, 2}, {1, 3}})));
  EXPECT_TRUE(is_ef1(make_instance({10, 1}, {1, 1}), make_partition({{0}, {1}})));
  EXPECT_FALSE(is_ef1(make_instance({5, 5, 1}, {1, 1}), make_partition({{0, 1}, {2}})));
}

TEST(IsEf1, VacuousCases) {
  EXPECT_TRUE(is_ef1(make_instance({}, {1, 1}), make_partition({{}, {}})));
  EXPECT_TRUE(is_ef1(make_instance({3, 1}, {1}), make_partition({{0, 1}})));
  // Versus an empty bundle only the empty side is vacuous.
  EXPECT_FALSE(is_ef1(make_instance({1, 1}, {1, 1}), make_partition({{0, 1}, {}})));
}

TEST(IsEf1, MatchesPairwiseScanOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance instance = random_instance(1 + seed % 8, 2 + seed % 3, 9, 5, 900 + seed);
    int n = instance.num_agents();
    Partition partition;
    partition.bundles.assign(n, {});
    for (int g = 0; g < instance.num_goods(); ++g)
      partition.bundles[(g * 7 + static_cast<int>(seed)) % n].push_back(g);
    for (auto& b : partition.bundles) std::sort(b.begin(), b.end());

    bool expected = true;
    for (int i = 0; i < n && expected; ++i)
      for (int j = 0; j < n && expected; ++j) {
        if (i == j || partition.bundles[j].empty()) continue;
        Rational wi = bundle_weight(instance, partition.bundles[i]);
        bool pair_ok = false;
        for (int g : partition.bundles[j])
          if (wi >= bundle_weight(instance, partition.bundles[j]) - instance.weights[g]) {
            pair_ok = true;
            break;
          }
        expected = pair_ok;
      }
    EXPECT_EQ(is_ef1(instance, partition), expected) << "seed " << seed;
  }
}

TEST(IsEf1, AssignmentIndependent) {
  Instance instance = make_instance({7, 5, 2, 1, 1}, {1, 1, 1});
  Partition partition = make_partition({{0}, {1, 4}, {2, 3}});
  bool base = is_ef1(instance, partition);
  std::vector<int> perm = {0, 1, 2};
  do {
    Partition shuffled;
    for (int b : perm) shuffled.bundles.push_back(partition.bundles[b]);
    EXPECT_EQ(is_ef1(instance, shuffled), base);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Ef1Slack, SignMatchesPredicate) {
  Instance good = make_instance({5, 4, 3, 2}, {1, 1});
  auto slack = ef1_slack(good.weights, make_partition({{0, 2}, {1, 3}}));
  ASSERT_TRUE(slack.has_value());
  EXPECT_GE(slack->sign(), 0);

  Instance bad = make_instance({5, 5, 1}, {1, 1});
  auto neg = ef1_slack(bad.weights, make_partition({{0, 1}, {2}}));
  ASSERT_TRUE(neg.has_value());
  EXPECT_LT(neg->sign(), 0);

  EXPECT_FALSE(ef1_slack(std::vector<Rational>{}, make_partition({{}, {}})).has_value());
  std::vector<Rational> two_goods = {Rational(3), Rational(1)};
  EXPECT_FALSE(ef1_slack(two_goods, make_partition({{0, 1}})).has_value());
}

TEST(SocialWelfare, Examples) {
  Instance instance = make_instance({3, 1}, {5, 2});
  Allocation allocation{make_partition({{0}, {1}}), {0, 1}};
  EXPECT_EQ(social_welfare(instance, allocation), Rational(17));

  Instance zeros = make_instance({3, 1}, {0, 0});
  EXPECT_EQ(social_welfare(zeros, allocation), Rational(0));

  Instance bigger = make_instance({10, 6, 5, 1, 1, 1}, {3, 2, 1});
  Allocation sorted{make_partition({{0, 3, 4, 5}, {1}, {2}}), {0, 1, 2}};
  EXPECT_EQ(social_welfare(bigger, sorted), Rational(56));
}

TEST(NswObjective, Examples) {
  EXPECT_EQ(nsw_objective(make_instance({4, 3, 2, 1}, {1, 1}), make_partition({{0, 3}, {1, 2}})),
            Rational(25));
  EXPECT_EQ(nsw_objective(make_instance({4, 3}, {1, 1}), make_partition({{0, 1}, {}})),
            Rational(0));
  EXPECT_EQ(nsw_objective(make_instance({2, 3}, {1}), make_partition({{0, 1}})), Rational(5));
}

TEST(NswObjective, PermutationInvariant) {
  Instance instance = make_instance({6, 4, 3, 2, 1}, {1, 1, 1});
  Partition partition = make_partition({{0}, {1, 4}, {2, 3}});
  Rational base = nsw_objective(instance, partition);
  std::vector<int> perm = {0, 1, 2};
  do {
    Partition shuffled;
    for (int b : perm) shuffled.bundles.push_back(partition.bundles[b]);
    EXPECT_EQ(nsw_objective(instance, shuffled), base);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Partition, WeightsSumToTotalOnRandomPartitions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance instance = random_instance(1 + seed % 10, 1 + seed % 4, 30, 5, seed);
    int n = instance.num_agents();
    Partition partition;
    partition.bundles.assign(n, {});
    for (int g = 0; g < instance.num_goods(); ++g)
      partition.bundles[(g + static_cast<int>(seed)) % n].push_back(g);
    Rational total = std::accumulate(instance.weights.begin(), instance.weights.end(), Rational());
    Rational parts;
    for (const Rational& w : bundle_weights(instance.weights, partition)) parts += w;
    EXPECT_EQ(parts, total);
    EXPECT_TRUE(is_valid_partition(partition, instance.num_goods(), n));
  }
}

TEST(SortedWelfare, SortedAssignmentMaximizesOverAllAssignments) {
  // Rearrangement: for a fixed partition the sorted assignment is optimal.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Instance instance = random_instance(2 + seed % 7, 2 + seed % 4, 20, 9, 7000 + seed);
    int n = instance.num_agents();
    Partition partition;
    partition.bundles.assign(n, {});
    for (int g = 0; g < instance.num_goods(); ++g)
      partition.bundles[(2 * g + 1) % n].push_back(g);

    std::vector<Rational> totals = bundle_weights(instance.weights, partition);
    std::vector<Rational> bids = instance.bids;
    std::sort(totals.begin(), totals.end(), std::greater<Rational>());
    std::sort(bids.begin(), bids.end(), std::greater<Rational>());
    Rational sorted_value;
    for (int i = 0; i < n; ++i) sorted_value += totals[i] * bids[i];

    std::vector<int> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);
    do {
      Allocation allocation{partition, assignment};
      EXPECT_LE(social_welfare(instance, allocation), sorted_value);
    } while (std::next_permutation(assignment.begin(), assignment.end()));
  }
}

}  // namespace
}  // namespace fairmech
