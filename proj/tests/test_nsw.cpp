#include "fairmech/nsw.hpp"

#include <gtest/gtest.h>

#include "fairmech/generators.hpp"
#include "fairmech/oracles.hpp"
#include "test_util.hpp"

namespace fairmech {
namespace {

using testing::make_instance;
using testing::make_partition;
using testing::rationals;

TEST(ExactNsw, SpecExamples) {
  Partition best = exact_nsw_partition(rationals({4, 3, 2, 1}), 2);
  EXPECT_EQ(nsw_objective(rationals({4, 3, 2, 1}), best), Rational(25));
  EXPECT_EQ(best, make_partition({{0, 3}, {1, 2}}));

  Partition forced = exact_nsw_partition(rationals({1, 1, 1}), 3);
  EXPECT_EQ(nsw_objective(rationals({1, 1, 1}), forced), Rational(1));
  EXPECT_EQ(forced, make_partition({{0}, {1}, {2}}));

  Partition starved = exact_nsw_partition(rationals({5}), 2);
  EXPECT_EQ(nsw_objective(rationals({5}), starved), Rational(0));
}

TEST(ExactNsw, GuardError) {
  std::vector<Rational> big(15, Rational(1));
  EXPECT_THROW(exact_nsw_partition(big, 2), SizeGuardError);
  EXPECT_THROW(exact_nsw_partition(rationals({1}), 0), std::invalid_argument);
}

TEST(ExactNsw, Deterministic) {
  std::vector<Rational> weights = rationals({2, 2, 2, 2});
  EXPECT_EQ(exact_nsw_partition(weights, 2), exact_nsw_partition(weights, 2));
  EXPECT_EQ(exact_nsw_partition(weights, 2), make_partition({{0, 1}, {2, 3}}));
}

TEST(ExactNsw, MatchesUnprunedOrderedEnumeration) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Instance instance = random_instance(1 + seed % 7, 1 + seed % 4, 12, 5, 8200 + seed);
    Partition best = exact_nsw_partition(instance.weights, instance.num_agents());
    Rational product = nsw_objective(instance.weights, best);
    Rational expected(-1);
    enumerate_partitions(instance.num_goods(), instance.num_agents(),
                         [&](const Partition& partition) {
                           Rational p = nsw_objective(instance.weights, partition);
                           if (p > expected) expected = p;
                         });
    EXPECT_EQ(product, expected) << "seed " << seed;
  }
}

TEST(SolveFaNsw, BidOblivious) {
  Instance instance = make_instance({4, 3, 2, 1}, {7, 2});
  Partition partition = solve_fa_nsw(instance);
  EXPECT_EQ(nsw_objective(instance, partition), Rational(25));

  Instance permuted = make_instance({4, 3, 2, 1}, {2, 7});
  EXPECT_EQ(solve_fa_nsw(permuted), partition);
  Instance scaled = make_instance({4, 3, 2, 1}, {700, 200});
  EXPECT_EQ(solve_fa_nsw(scaled), partition);
}

}  // namespace
}  // namespace fairmech
