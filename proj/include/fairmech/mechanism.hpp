#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairmech/core.hpp"
#include "fairmech/ef1.hpp"
#include "fairmech/mms.hpp"
#include "fairmech/nsw.hpp"

namespace fairmech {

enum class MechanismKind { Ef1, Mms, Nsw };

inline const char* to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::Ef1: return "ef1";
    case MechanismKind::Mms: return "mms";
    case MechanismKind::Nsw: return "nsw";
  }
  return "?";
}

/// Assigns the j-th heaviest bundle to the j-th highest bidder. Bundle ties
/// break toward the lower bundle index, bid ties toward the lower agent
/// index; both rules are fixed so the allocation rule is deterministic and
/// monotone in each agent's own bid.
inline Allocation sorted_allocation(const std::vector<Rational>& weights,
                                    const Partition& partition,
                                    const std::vector<Rational>& bids) {
  int n = static_cast<int>(bids.size());
  if (partition.num_bundles() != n)
    throw std::invalid_argument("sorted_allocation: bundle count differs from bidder count");
  std::vector<Rational> totals = bundle_weights(weights, partition);

  std::vector<int> bundle_order(n), agent_order(n);
  for (int i = 0; i < n; ++i) bundle_order[i] = agent_order[i] = i;
  std::stable_sort(bundle_order.begin(), bundle_order.end(),
                   [&](int a, int b) { return totals[b] < totals[a]; });
  std::stable_sort(agent_order.begin(), agent_order.end(),
                   [&](int a, int b) { return bids[b] < bids[a]; });

  Allocation allocation;
  allocation.partition = partition;
  allocation.assignment.resize(n);
  for (int j = 0; j < n; ++j) allocation.assignment[agent_order[j]] = bundle_order[j];
  return allocation;
}

/// Piecewise-constant bundle-weight curve of one agent's bid. levels has one
/// entry more than breakpoints and is non-decreasing. Breakpoints may repeat
/// when several rivals share a bid. agent_wins_tie records, per breakpoint,
/// whether the level above it already applies at the breakpoint itself
/// (the agent outranks that rival at an exact tie) or only strictly beyond.
struct StepFunction {
  std::vector<Rational> breakpoints;
  std::vector<Rational> levels;
  std::vector<bool> agent_wins_tie;

  /// The bundle weight actually received at this bid, ties included.
  Rational level_at(const Rational& bid) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < breakpoints.size(); ++j)
      if (breakpoints[j] < bid || (breakpoints[j] == bid && agent_wins_tie[j])) ++idx;
    return levels[idx];
  }
};

/// The weight of the bundle `agent` receives under the sorted allocation as
/// a function of her own bid, with the other bids fixed. other_bids lists
/// the remaining agents' bids in original agent order with `agent` removed.
inline StepFunction allocation_curve(const std::vector<Rational>& weights,
                                     const Partition& partition, int agent,
                                     const std::vector<Rational>& other_bids) {
  int n = partition.num_bundles();
  if (static_cast<int>(other_bids.size()) != n - 1)
    throw std::invalid_argument("allocation_curve: expected n-1 rival bids");

  std::vector<Rational> totals = bundle_weights(weights, partition);
  std::sort(totals.begin(), totals.end());  // levels, lightest first

  // Crossing rival t's bid lifts the agent one rank. At an exact tie the
  // lower agent index wins, so the lift applies at the breakpoint itself
  // only when the rival's index is higher.
  std::vector<std::pair<Rational, bool>> crossings;
  crossings.reserve(other_bids.size());
  for (int t = 0; t < n - 1; ++t) {
    int rival = t < agent ? t : t + 1;
    crossings.emplace_back(other_bids[t], rival > agent);
  }
  std::sort(crossings.begin(), crossings.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second && !b.second;  // at equal bids, won ties cross first
  });

  StepFunction curve;
  curve.levels = std::move(totals);
  curve.breakpoints.reserve(crossings.size());
  curve.agent_wins_tie.reserve(crossings.size());
  for (auto& [bid, wins] : crossings) {
    curve.breakpoints.push_back(std::move(bid));
    curve.agent_wins_tie.push_back(wins);
  }
  return curve;
}

/// The unique payment making the sorted allocation truthful: the sum of
/// breakpoint * level-jump over the breakpoints the bid has crossed (a
/// breakpoint exactly at the bid counts only if the agent wins that tie,
/// matching the bundle actually received).
inline Rational myerson_payment(const StepFunction& curve, const Rational& bid) {
  if (bid.sign() < 0) throw std::invalid_argument("myerson_payment: negative bid");
  Rational payment;
  for (std::size_t j = 0; j < curve.breakpoints.size(); ++j) {
    const Rational& z = curve.breakpoints[j];
    if (z < bid || (z == bid && curve.agent_wins_tie[j]))
      payment += z * (curve.levels[j + 1] - curve.levels[j]);
  }
  return payment;
}

struct MechanismOutcome {
  MechanismKind kind;
  Allocation allocation;
  std::vector<Rational> payments;
  Rational welfare;
  FairnessMargins fairness;
  std::optional<MmsEstimate> estimate;    // present for MMS runs
  std::optional<BicriteriaTrace> trace;   // present for MMS runs
  std::optional<Rational> maximin_share;  // exact share, when computable
};

struct RunOptions {
  SizeGuard mms_guard = kExactMmsGuard;
  SizeGuard nsw_guard = kNswGuard;
  /// Compute the exact maximin share for diagnostics when the instance is
  /// inside mms_guard (fills maximin_share and fairness.mms_ratio).
  bool share_diagnostics = true;
};

namespace detail {

inline Partition partition_for(const Instance& instance, MechanismKind kind,
                               const std::optional<Rational>& epsilon, const RunOptions& opts,
                               std::optional<MmsEstimate>* estimate_out,
                               std::optional<BicriteriaTrace>* trace_out) {
  switch (kind) {
    case MechanismKind::Ef1:
      return solve_fa_ef1(instance);
    case MechanismKind::Mms: {
      if (!epsilon) throw std::invalid_argument("mms mechanism requires epsilon");
      MmsSolution solution = solve_fa_mms(instance, *epsilon, opts.mms_guard);
      if (estimate_out) *estimate_out = solution.estimate;
      if (trace_out) *trace_out = solution.trace;
      return solution.partition;
    }
    case MechanismKind::Nsw:
      return solve_fa_nsw(instance, opts.nsw_guard);
  }
  throw std::logic_error("unknown mechanism kind");
}

inline std::vector<Rational> bids_without(const std::vector<Rational>& bids, int agent) {
  std::vector<Rational> others;
  others.reserve(bids.size() - 1);
  for (int j = 0; j < static_cast<int>(bids.size()); ++j)
    if (j != agent) others.push_back(bids[j]);
  return others;
}

}  // namespace detail

/// Runs the full auction: bid-oblivious partition, sorted allocation,
/// per-agent Myerson payments, and fairness diagnostics.
inline MechanismOutcome run_auction(const Instance& instance, MechanismKind kind,
                                    std::optional<Rational> epsilon = {},
                                    RunOptions opts = {}) {
  std::vector<std::string> problems = validate(instance);
  if (!problems.empty()) throw std::invalid_argument("run_auction: " + problems.front());

  MechanismOutcome outcome;
  outcome.kind = kind;
  Partition partition =
      detail::partition_for(instance, kind, epsilon, opts, &outcome.estimate, &outcome.trace);
  outcome.allocation = sorted_allocation(instance.weights, partition, instance.bids);

  int n = instance.num_agents();
  outcome.payments.resize(n);
  for (int i = 0; i < n; ++i) {
    StepFunction curve = allocation_curve(instance.weights, partition, i,
                                          detail::bids_without(instance.bids, i));
    outcome.payments[i] = myerson_payment(curve, instance.bids[i]);
  }
  outcome.welfare = social_welfare(instance, outcome.allocation);
  outcome.fairness.ef1_slack = ef1_slack(instance.weights, partition);

  if (opts.share_diagnostics &&
      opts.mms_guard.admits(instance.num_goods(), n)) {
    Rational share = exact_mms(instance.weights, n, opts.mms_guard);
    outcome.maximin_share = share;
    if (share.sign() > 0) {
      std::vector<Rational> totals = bundle_weights(instance.weights, partition);
      Rational lightest = totals.front();
      for (const Rational& t : totals)
        if (t < lightest) lightest = t;
      outcome.fairness.mms_ratio = lightest / share;
    }
  }
  return outcome;
}

struct AuditViolation {
  enum class Kind { Monotonicity, Deviation, IndividualRationality };
  Kind kind;
  int agent;
  std::optional<Rational> deviation;
  Rational gap;  // exact size of the violation
};

struct AuditReport {
  int agents_checked = 0;
  std::size_t deviations_checked = 0;
  std::vector<AuditViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks dominant-strategy truthfulness on a bid grid. For every agent the
/// grid is augmented with all of her curve's breakpoints and points a small
/// offset on either side, which pins down every piece of the piecewise-
/// constant utility. Also checks curve monotonicity and that truthful
/// utility is nonnegative. `values` are the agents' true per-unit values and
/// default to the reported bids.
inline AuditReport truthfulness_audit(const Instance& instance, MechanismKind kind,
                                      std::optional<Rational> epsilon,
                                      const std::vector<Rational>& deviations,
                                      std::optional<std::vector<Rational>> values = {},
                                      RunOptions opts = {}) {
  for (const Rational& d : deviations)
    if (d.sign() < 0) throw std::invalid_argument("truthfulness_audit: negative deviation");
  std::vector<Rational> true_values = values ? std::move(*values) : instance.bids;
  if (static_cast<int>(true_values.size()) != instance.num_agents())
    throw std::invalid_argument("truthfulness_audit: one value per agent required");

  Partition partition = detail::partition_for(instance, kind, epsilon, opts, nullptr, nullptr);

  AuditReport report;
  int n = instance.num_agents();
  report.agents_checked = n;
  for (int i = 0; i < n; ++i) {
    StepFunction curve = allocation_curve(instance.weights, partition, i,
                                          detail::bids_without(instance.bids, i));
    for (std::size_t j = 0; j + 1 < curve.levels.size(); ++j)
      if (curve.levels[j + 1] < curve.levels[j])
        report.violations.push_back({AuditViolation::Kind::Monotonicity, i, std::nullopt,
                                     curve.levels[j] - curve.levels[j + 1]});

    const Rational& v = true_values[i];
    Rational truthful_utility = v * curve.level_at(v) - myerson_payment(curve, v);
    if (truthful_utility.sign() < 0)
      report.violations.push_back(
          {AuditViolation::Kind::IndividualRationality, i, std::nullopt, -truthful_utility});

    // Breakpoint-aware grid: every breakpoint, straddled both sides.
    std::vector<Rational> grid = deviations;
    std::vector<Rational> distinct = curve.breakpoints;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Rational offset(1, 2);
    Rational prev(0);
    for (const Rational& z : distinct) {
      Rational gap = z - prev;
      if (gap.sign() > 0 && gap / Rational(2) < offset) offset = gap / Rational(2);
      prev = z;
    }
    for (const Rational& z : distinct) {
      grid.push_back(z);
      grid.push_back(z + offset);
      Rational below = z - offset;
      if (below.sign() >= 0) grid.push_back(below);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    for (const Rational& b : grid) {
      ++report.deviations_checked;
      Rational utility = v * curve.level_at(b) - myerson_payment(curve, b);
      if (utility > truthful_utility)
        report.violations.push_back(
            {AuditViolation::Kind::Deviation, i, b, utility - truthful_utility});
    }
  }
  return report;
}

}  // namespace fairmech
