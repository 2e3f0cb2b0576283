#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fairmech/core.hpp"
#include "fairmech/generators.hpp"
#include "fairmech/mechanism.hpp"

namespace fairmech {

using Json = nlohmann::json;

/// Rationals travel as "p" / "p/q" strings (plain JSON integers are accepted
/// on input); floating point is rejected so round-trips stay bit-exact.
inline Json rational_to_json(const Rational& q) { return q.to_string(); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_unsigned()) return Rational(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_number_float())
    throw std::invalid_argument("rationals must be integers or \"p/q\" strings, not floats");
  throw std::invalid_argument("expected a rational as integer or \"p/q\" string");
}

inline std::vector<Rational> rational_list_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  std::vector<Rational> values;
  values.reserve(j.size());
  for (const Json& item : j) values.push_back(rational_from_json(item));
  return values;
}

inline Json rational_list_to_json(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const Rational& v : values) arr.push_back(rational_to_json(v));
  return arr;
}

/// On-disk instance: weights and bids, plus optional true values (for
/// audits; defaults to the bids), an optional epsilon, and free-form
/// metadata written by the generators.
struct InstanceFile {
  Instance instance;
  std::optional<std::vector<Rational>> values;
  std::optional<Rational> epsilon;
  Json metadata;
};

inline InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance file must be a JSON object");
  if (!j.contains("weights") || !j.contains("bids"))
    throw std::invalid_argument("instance file needs 'weights' and 'bids'");
  InstanceFile file;
  file.instance.weights = rational_list_from_json(j.at("weights"));
  file.instance.bids = rational_list_from_json(j.at("bids"));
  if (j.contains("values")) file.values = rational_list_from_json(j.at("values"));
  if (j.contains("epsilon")) file.epsilon = rational_from_json(j.at("epsilon"));
  if (j.contains("metadata")) file.metadata = j.at("metadata");
  return file;
}

inline Json instance_to_json(const InstanceFile& file) {
  Json j;
  j["weights"] = rational_list_to_json(file.instance.weights);
  j["bids"] = rational_list_to_json(file.instance.bids);
  if (file.values) j["values"] = rational_list_to_json(*file.values);
  if (file.epsilon) j["epsilon"] = rational_to_json(*file.epsilon);
  if (!file.metadata.is_null()) j["metadata"] = file.metadata;
  return j;
}

/// Outcome file: agent-ordered bundles, payments, welfare and diagnostics.
inline Json outcome_to_json(const MechanismOutcome& outcome) {
  Json j;
  j["mechanism"] = to_string(outcome.kind);
  Json bundles = Json::array();
  for (std::size_t i = 0; i < outcome.payments.size(); ++i)
    bundles.push_back(outcome.allocation.bundle_of(static_cast<int>(i)));
  j["allocation"] = std::move(bundles);
  j["payments"] = rational_list_to_json(outcome.payments);
  j["welfare"] = rational_to_json(outcome.welfare);

  Json diag;
  diag["ef1_slack"] =
      outcome.fairness.ef1_slack ? rational_to_json(*outcome.fairness.ef1_slack) : Json("inf");
  if (outcome.fairness.mms_ratio) diag["mms_ratio"] = rational_to_json(*outcome.fairness.mms_ratio);
  if (outcome.maximin_share) diag["mu"] = rational_to_json(*outcome.maximin_share);
  if (outcome.estimate) {
    diag["mu_bar"] = rational_to_json(outcome.estimate->value);
    diag["epsilon"] = rational_to_json(outcome.estimate->epsilon);
    diag["estimate_exact"] = outcome.estimate->exact;
  }
  if (outcome.trace) diag["phase_reached"] = outcome.trace->phase_reached;
  j["diagnostics"] = std::move(diag);
  return j;
}

/// Reads back the fields an outcome file carries. The allocation comes back
/// with the identity assignment over agent-ordered bundles, preserving every
/// agent's bundle and all values exactly.
struct OutcomeFile {
  std::string mechanism;
  std::vector<Bundle> bundles;  // bundles[i] = goods of agent i
  std::vector<Rational> payments;
  Rational welfare;
  Json diagnostics;
};

inline OutcomeFile outcome_from_json(const Json& j) {
  OutcomeFile file;
  file.mechanism = j.at("mechanism").get<std::string>();
  for (const Json& bundle : j.at("allocation")) {
    Bundle b;
    for (const Json& g : bundle) b.push_back(g.get<int>());
    file.bundles.push_back(std::move(b));
  }
  file.payments = rational_list_from_json(j.at("payments"));
  file.welfare = rational_from_json(j.at("welfare"));
  if (j.contains("diagnostics")) file.diagnostics = j.at("diagnostics");
  return file;
}

/// Heterogeneous instance file (the het-ef1 generator's output).
inline Json het_to_json(const HetInstance& het, Json metadata = {}) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : het.valuations) rows.push_back(rational_list_to_json(row));
  j["valuations"] = std::move(rows);
  if (!metadata.is_null()) j["metadata"] = std::move(metadata);
  return j;
}

inline HetInstance het_from_json(const Json& j) {
  HetInstance het;
  for (const Json& row : j.at("valuations"))
    het.valuations.push_back(rational_list_from_json(row));
  return het;
}

struct GraphSpec {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

inline GraphSpec graph_from_json(const Json& j) {
  GraphSpec graph;
  graph.num_vertices = j.at("num_vertices").get<int>();
  if (j.contains("edges"))
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("graph edges must be [u, v] pairs");
      graph.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  return graph;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  Json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace fairmech
