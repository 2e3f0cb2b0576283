#include "fairmech/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "fairmech/generators.hpp"
#include "test_util.hpp"

namespace fairmech {
namespace {

using testing::make_instance;
using testing::R;

TEST(RationalJson, AcceptsStringsAndIntegersRejectsFloats) {
  EXPECT_EQ(rational_from_json(Json("5/7")), R("5/7"));
  EXPECT_EQ(rational_from_json(Json(42)), Rational(42));
  EXPECT_EQ(rational_from_json(Json(-3)), Rational(-3));
  EXPECT_THROW(rational_from_json(Json(1.5)), std::invalid_argument);
  EXPECT_THROW(rational_from_json(Json(nullptr)), std::invalid_argument);
  EXPECT_THROW(rational_from_json(Json("x")), std::invalid_argument);
}

TEST(InstanceJson, RoundTripIsExact) {
  InstanceFile file;
  file.instance.weights = {R("22/7"), Rational(0), R("123456789123456789/2")};
  file.instance.bids = {R("1/3"), Rational(5)};
  file.values = std::vector<Rational>{R("2/3"), Rational(4)};
  file.epsilon = R("1/10");
  file.metadata = {{"kind", "test"}};

  Json j = instance_to_json(file);
  InstanceFile back = instance_from_json(j);
  EXPECT_EQ(back.instance.weights, file.instance.weights);
  EXPECT_EQ(back.instance.bids, file.instance.bids);
  EXPECT_EQ(*back.values, *file.values);
  EXPECT_EQ(*back.epsilon, *file.epsilon);
  EXPECT_EQ(back.metadata.at("kind"), "test");
}

TEST(InstanceJson, RandomRoundTripSweep) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    InstanceFile file;
    file.instance = random_instance(1 + seed % 10, 1 + seed % 5, 50, 20, 4000 + seed);
    InstanceFile back = instance_from_json(instance_to_json(file));
    EXPECT_EQ(back.instance.weights, file.instance.weights);
    EXPECT_EQ(back.instance.bids, file.instance.bids);
  }
}

TEST(InstanceJson, MissingFieldsError) {
  EXPECT_THROW(instance_from_json(Json::object()), std::invalid_argument);
  EXPECT_THROW(instance_from_json(Json{{"weights", Json::array()}}), std::invalid_argument);
  EXPECT_THROW(instance_from_json(Json{{"weights", {0.5}}, {"bids", {1}}}),
               std::invalid_argument);
}

TEST(OutcomeJson, CarriesAllocationPaymentsAndDiagnostics) {
  Instance instance = make_instance({5, 4, 3, 2}, {10, 1});
  MechanismOutcome outcome = run_auction(instance, MechanismKind::Ef1);
  Json j = outcome_to_json(outcome);
  EXPECT_EQ(j.at("mechanism"), "ef1");
  EXPECT_EQ(j.at("welfare"), "86");
  EXPECT_EQ(j.at("allocation")[0], Json({0, 2}));
  EXPECT_EQ(j.at("allocation")[1], Json({1, 3}));
  EXPECT_EQ(j.at("payments")[0], "2");
  EXPECT_EQ(j.at("payments")[1], "0");
  EXPECT_EQ(j.at("diagnostics").at("ef1_slack"), "3");
  EXPECT_EQ(j.at("diagnostics").at("mu"), "7");
  EXPECT_EQ(j.at("diagnostics").at("mms_ratio"), "6/7");

  OutcomeFile back = outcome_from_json(j);
  EXPECT_EQ(back.welfare, outcome.welfare);
  EXPECT_EQ(back.payments, outcome.payments);
  ASSERT_EQ(back.bundles.size(), 2u);
  EXPECT_EQ(back.bundles[0], outcome.allocation.bundle_of(0));
  EXPECT_EQ(back.bundles[1], outcome.allocation.bundle_of(1));
}

TEST(OutcomeJson, MmsDiagnostics) {
  Instance instance = make_instance({10, 6, 5, 1, 1, 1}, {3, 2, 1});
  MechanismOutcome outcome = run_auction(instance, MechanismKind::Mms, R("1/10"));
  Json j = outcome_to_json(outcome);
  EXPECT_EQ(j.at("diagnostics").at("mu_bar"), "7");
  EXPECT_EQ(j.at("diagnostics").at("phase_reached"), 4);
  EXPECT_EQ(j.at("diagnostics").at("mms_ratio"), "5/7");
}

TEST(OutcomeJson, VacuousSlackSerializesAsInf) {
  Instance instance = make_instance({3, 1}, {4});
  MechanismOutcome outcome = run_auction(instance, MechanismKind::Ef1);
  Json j = outcome_to_json(outcome);
  EXPECT_EQ(j.at("diagnostics").at("ef1_slack"), "inf");
}

TEST(FileIo, WriteThenReadInstanceFile) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fairmech-io-test";
  fs::create_directories(dir);
  std::string path = (dir / "instance.json").string();

  InstanceFile file;
  file.instance = make_instance({5, 4, 3, 2}, {10, 1});
  file.epsilon = R("1/10");
  write_json_file(path, instance_to_json(file));
  InstanceFile back = instance_from_json(read_json_file(path));
  EXPECT_EQ(back.instance.weights, file.instance.weights);
  EXPECT_EQ(*back.epsilon, R("1/10"));
  std::remove(path.c_str());

  EXPECT_THROW(read_json_file((dir / "missing.json").string()), std::runtime_error);
}

TEST(HetJson, RoundTrip) {
  HetInstance het = het_ef1_instance({{0, 1}, {1, 2}}, 3);
  Json j = het_to_json(het, Json{{"kind", "het-ef1"}});
  HetInstance back = het_from_json(j);
  EXPECT_EQ(back.valuations, het.valuations);
}

TEST(GraphJson, ParsesVerticesAndEdges) {
  Json j = {{"num_vertices", 3}, {"edges", {{0, 1}, {1, 2}, {0, 2}}}};
  GraphSpec graph = graph_from_json(j);
  EXPECT_EQ(graph.num_vertices, 3);
  ASSERT_EQ(graph.edges.size(), 3u);
  EXPECT_EQ(graph.edges[0], (std::pair<int, int>{0, 1}));

  Json no_edges = {{"num_vertices", 2}};
  EXPECT_TRUE(graph_from_json(no_edges).edges.empty());
}

}  // namespace
}  // namespace fairmech
