// Command-line front end: run the fair auctions on instance files, verify
// the oracle-backed properties, generate random and hardness instances, and
// batch-audit truthfulness.
//
// Exit codes: 0 all good, 1 input error, 2 size-guard exceeded,
// 3 property violation.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fairmech/core.hpp"
#include "fairmech/ef1.hpp"
#include "fairmech/generators.hpp"
#include "fairmech/io.hpp"
#include "fairmech/majorization.hpp"
#include "fairmech/mechanism.hpp"
#include "fairmech/mms.hpp"
#include "fairmech/nsw.hpp"
#include "fairmech/oracles.hpp"

namespace {

using namespace fairmech;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitGuard = 2;
constexpr int kExitViolation = 3;

struct Guards {
  SizeGuard oracle = kOracleGuard;
  SizeGuard exact = kExactMmsGuard;
  SizeGuard nsw = kNswGuard;
};

Guards guards_from_env() {
  Guards guards;
  if (const char* s = std::getenv("FAIRMECH_GUARD_M")) {
    int v = std::stoi(s);
    guards.oracle.max_goods = guards.exact.max_goods = guards.nsw.max_goods = v;
  }
  if (const char* s = std::getenv("FAIRMECH_GUARD_N")) {
    int v = std::stoi(s);
    guards.oracle.max_agents = guards.exact.max_agents = guards.nsw.max_agents = v;
  }
  return guards;
}

Rational parse_rational_arg(const std::string& text, const std::string& flag) {
  try {
    return Rational::from_string(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected an integer or p/q rational, got '" + text + "'");
  }
}

MechanismKind kind_from_string(const std::string& name) {
  if (name == "ef1") return MechanismKind::Ef1;
  if (name == "mms") return MechanismKind::Mms;
  if (name == "nsw") return MechanismKind::Nsw;
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

int fail_input(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitInput;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  int spawn = std::min(threads, count);
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// solve

int run_solve(const std::string& mechanism, const std::string& input,
              const std::string& output, const std::string& epsilon_arg) {
  Guards guards = guards_from_env();
  InstanceFile file;
  try {
    file = instance_from_json(read_json_file(input));
  } catch (const std::exception& e) {
    return fail_input(e.what());
  }
  std::vector<std::string> problems = validate(file.instance);
  if (!problems.empty()) return fail_input("invalid instance: " + problems.front());

  MechanismKind kind = kind_from_string(mechanism);
  std::optional<Rational> epsilon;
  if (!epsilon_arg.empty())
    epsilon = Rational::from_string(epsilon_arg);
  else if (file.epsilon)
    epsilon = file.epsilon;
  if (kind == MechanismKind::Mms && !epsilon)
    return fail_input("the mms mechanism needs --epsilon (or an 'epsilon' field in the file); "
                      "usage: solve --mechanism mms --epsilon 1/10 --input ... --output ...");

  RunOptions options;
  options.mms_guard = guards.exact;
  options.nsw_guard = guards.nsw;
  MechanismOutcome outcome;
  try {
    outcome = run_auction(file.instance, kind, epsilon, options);
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    return fail_input(e.what());
  }

  if (!output.empty()) write_json_file(output, outcome_to_json(outcome));

  Rational total_payment;
  for (const Rational& p : outcome.payments) total_payment += p;
  std::cout << "mechanism=" << to_string(kind) << " welfare=" << outcome.welfare
            << " ef1_slack="
            << (outcome.fairness.ef1_slack ? outcome.fairness.ef1_slack->to_string() : "inf");
  if (outcome.fairness.mms_ratio) std::cout << " mms_ratio=" << *outcome.fairness.mms_ratio;
  if (outcome.estimate) std::cout << " mu_bar=" << outcome.estimate->value;
  std::cout << " payments=" << total_payment << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify / audit

struct CheckResult {
  std::string name;
  bool pass = false;
  bool guard_error = false;
  Json details;
};

std::vector<Rational> deviation_grid(const Instance& instance,
                                     const std::optional<std::vector<Rational>>& values,
                                     const Rational& step) {
  Rational top;
  for (const Rational& b : instance.bids)
    if (b > top) top = b;
  if (values)
    for (const Rational& v : *values)
      if (v > top) top = v;
  Rational limit = Rational(2) * top + step;
  std::vector<Rational> grid;
  for (Rational z; z <= limit; z += step) grid.push_back(z);
  return grid;
}

CheckResult check_ef1_approx(const Instance& instance, const Guards& guards) {
  CheckResult result{"ef1-approx"};
  Partition partition = solve_fa_ef1(instance);
  Rational welfare =
      social_welfare(instance, sorted_allocation(instance.weights, partition, instance.bids));
  Ef1Optimum oracle = brute_force_opt_ef1(instance, guards.oracle);
  result.pass = Rational(2) * welfare >= oracle.welfare;
  result.details["welfare"] = rational_to_json(welfare);
  result.details["optimal_welfare"] = rational_to_json(oracle.welfare);
  return result;
}

CheckResult check_mms_fairness(const Instance& instance, const Rational& epsilon,
                               const Guards& guards) {
  CheckResult result{"mms-fairness"};
  MmsSolution solution = solve_fa_mms(instance, epsilon, guards.exact);
  Rational share = exact_mms(instance.weights, instance.num_agents(), guards.exact);
  std::vector<Rational> totals = bundle_weights(instance.weights, solution.partition);
  Rational lightest = totals.empty() ? Rational(0) : totals.front();
  for (const Rational& t : totals)
    if (t < lightest) lightest = t;
  bool half_estimate = true;
  for (const Rational& t : totals)
    if (Rational(2) * t < solution.estimate.value) half_estimate = false;
  Rational required = (Rational(1) - epsilon) / Rational(2) * share;
  result.pass = half_estimate && lightest >= required;
  result.details["mu"] = rational_to_json(share);
  result.details["mu_bar"] = rational_to_json(solution.estimate.value);
  result.details["min_bundle"] = rational_to_json(lightest);
  result.details["required"] = rational_to_json(required);
  return result;
}

CheckResult check_mms_welfare(const Instance& instance, const Rational& epsilon,
                              const Guards& guards) {
  CheckResult result{"mms-welfare"};
  MmsSolution solution = solve_fa_mms(instance, epsilon, guards.exact);
  Rational welfare = social_welfare(
      instance, sorted_allocation(instance.weights, solution.partition, instance.bids));
  MmsOptimum oracle = brute_force_opt_mms(instance, guards.oracle);
  result.pass = welfare >= oracle.welfare;
  result.details["alg_welfare"] = rational_to_json(welfare);
  result.details["optimal_welfare"] = rational_to_json(oracle.welfare);
  result.details["mu"] = rational_to_json(oracle.maximin_share);
  return result;
}

CheckResult check_truthful(const Instance& instance,
                           const std::optional<std::vector<Rational>>& values,
                           const std::vector<std::string>& mechanisms, const Rational& epsilon,
                           const Rational& grid_step, const Guards& guards) {
  CheckResult result{"truthful"};
  result.pass = true;
  RunOptions options;
  options.mms_guard = guards.exact;
  options.nsw_guard = guards.nsw;
  options.share_diagnostics = false;
  std::vector<Rational> grid = deviation_grid(instance, values, grid_step);
  Json per_mechanism = Json::object();
  for (const std::string& name : mechanisms) {
    MechanismKind kind = kind_from_string(name);
    std::optional<Rational> eps;
    if (kind == MechanismKind::Mms) eps = epsilon;
    AuditReport report = truthfulness_audit(instance, kind, eps, grid, values, options);
    Json entry;
    entry["deviations_checked"] = report.deviations_checked;
    entry["violations"] = Json::array();
    for (const AuditViolation& v : report.violations) {
      Json item;
      item["type"] = v.kind == AuditViolation::Kind::Monotonicity          ? "monotonicity"
                     : v.kind == AuditViolation::Kind::IndividualRationality ? "individual-rationality"
                                                                             : "deviation";
      item["agent"] = v.agent;
      if (v.deviation) item["deviation"] = rational_to_json(*v.deviation);
      item["gap"] = rational_to_json(v.gap);
      entry["violations"].push_back(std::move(item));
    }
    if (!report.ok()) result.pass = false;
    per_mechanism[name] = std::move(entry);
  }
  result.details = std::move(per_mechanism);
  return result;
}

CheckResult check_majorization(const Instance& instance, const Guards& guards) {
  CheckResult result{"majorization"};
  result.pass = true;
  std::vector<std::vector<Rational>> sequences;
  for (const Partition& partition : enumerate_ef1_partitions(instance, guards.oracle)) {
    std::vector<Rational> seq = bundle_weights(instance.weights, partition);
    std::sort(seq.begin(), seq.end(), std::greater<Rational>());
    if (std::find(sequences.begin(), sequences.end(), seq) == sequences.end())
      sequences.push_back(std::move(seq));
  }
  result.details["ef1_weight_sequences"] = sequences.size();
  for (const auto& p : sequences) {
    for (const auto& q : sequences) {
      if (!beta_majorizes(p, q, Rational(1, 2))) {
        result.pass = false;
        result.details["witness_p"] = rational_list_to_json(p);
        result.details["witness_q"] = rational_list_to_json(q);
        return result;
      }
    }
  }
  return result;
}

struct VerifySelection {
  bool ef1_approx = false;
  bool mms_fairness = false;
  bool mms_welfare = false;
  bool truthful = false;
  bool majorization = false;
};

Json verify_one(const std::string& path, const VerifySelection& selection,
                const std::vector<std::string>& mechanisms, const Rational& epsilon,
                const Rational& grid_step, const Guards& guards, bool* violation,
                bool* guard_hit, bool* input_error) {
  Json report;
  report["instance"] = path;
  report["checks"] = Json::array();
  InstanceFile file;
  try {
    file = instance_from_json(read_json_file(path));
    std::vector<std::string> problems = validate(file.instance);
    if (!problems.empty()) throw std::invalid_argument("invalid instance: " + problems.front());
  } catch (const std::exception& e) {
    report["error"] = e.what();
    *input_error = true;
    return report;
  }

  auto run_check = [&](auto&& fn) {
    CheckResult result;
    try {
      result = fn();
    } catch (const SizeGuardError& e) {
      result.guard_error = true;
      result.details["error"] = e.what();
    }
    Json entry;
    entry["name"] = result.name;
    if (result.guard_error) {
      entry["guard_exceeded"] = true;
      *guard_hit = true;
    } else {
      entry["pass"] = result.pass;
      if (!result.pass) *violation = true;
    }
    entry["details"] = std::move(result.details);
    report["checks"].push_back(std::move(entry));
  };

  if (selection.ef1_approx) run_check([&] { return check_ef1_approx(file.instance, guards); });
  if (selection.mms_fairness)
    run_check([&] { return check_mms_fairness(file.instance, epsilon, guards); });
  if (selection.mms_welfare)
    run_check([&] { return check_mms_welfare(file.instance, epsilon, guards); });
  if (selection.truthful)
    run_check([&] {
      return check_truthful(file.instance, file.values, mechanisms, epsilon, grid_step, guards);
    });
  if (selection.majorization) run_check([&] { return check_majorization(file.instance, guards); });
  return report;
}

int run_verify(const std::vector<std::string>& inputs, const VerifySelection& selection,
               const std::vector<std::string>& mechanisms, const std::string& epsilon_arg,
               const std::string& grid_step_arg, int parallel, const std::string& output) {
  Guards guards = guards_from_env();
  Rational epsilon = parse_rational_arg(epsilon_arg, "--epsilon");
  Rational grid_step = parse_rational_arg(grid_step_arg, "--grid-step");
  if (grid_step.sign() <= 0) return fail_input("--grid-step must be positive");

  bool violation = false, guard_hit = false, input_error = false;
  std::vector<Json> reports(inputs.size());
  parallel_for(static_cast<int>(inputs.size()), parallel, [&](int i) {
    reports[i] = verify_one(inputs[i], selection, mechanisms, epsilon, grid_step, guards,
                            &violation, &guard_hit, &input_error);
  });

  Json full;
  full["reports"] = Json::array();
  for (Json& r : reports) full["reports"].push_back(std::move(r));
  full["pass"] = !violation && !guard_hit && !input_error;
  if (!output.empty()) write_json_file(output, full);
  std::cout << full.dump(2) << '\n';
  if (input_error) return kExitInput;
  if (violation) return kExitViolation;
  if (guard_hit) return kExitGuard;
  return kExitOk;
}

int run_audit(const std::vector<std::string>& inputs, const std::vector<std::string>& mechanisms,
              const std::string& epsilon_arg, const std::string& grid_step_arg, int parallel,
              const std::string& output) {
  VerifySelection selection;
  selection.truthful = true;
  return run_verify(inputs, selection, mechanisms, epsilon_arg, grid_step_arg, parallel, output);
}

// ---------------------------------------------------------------------------
// gen

std::string indexed_path(const std::string& base, int index, int count) {
  if (count <= 1) return base;
  auto dot = base.rfind('.');
  std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  std::string ext = dot == std::string::npos ? "" : base.substr(dot);
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "-%03d", index);
  return stem + suffix + ext;
}

int run_gen(const std::string& kind, int m, int n, long long max_weight, long long max_bid,
            std::uint64_t seed, int count, const std::string& integers_arg,
            const std::string& v_arg, const std::string& eps_arg, const std::string& graph_path,
            const std::string& output) {
  try {
    if (kind == "random") {
      if (m < 0 || n < 1) return fail_input("gen random needs --m >= 0 and --n >= 1");
      for (int i = 0; i < count; ++i) {
        InstanceFile file;
        file.instance = random_instance(m, n, max_weight, max_bid, seed + i);
        file.metadata = {{"kind", "random"}, {"seed", seed + i}};
        write_json_file(indexed_path(output, i, count), instance_to_json(file));
      }
      return kExitOk;
    }

    std::vector<long long> integers;
    if (!integers_arg.empty()) {
      std::size_t pos = 0;
      while (pos < integers_arg.size()) {
        std::size_t comma = integers_arg.find(',', pos);
        if (comma == std::string::npos) comma = integers_arg.size();
        integers.push_back(std::stoll(integers_arg.substr(pos, comma - pos)));
        pos = comma + 1;
      }
    }

    if (kind == "ef1-hardness") {
      if (integers.empty()) return fail_input("gen ef1-hardness needs --integers");
      Rational v = parse_rational_arg(v_arg.empty() ? "10" : v_arg, "--v");
      Rational eps = parse_rational_arg(eps_arg.empty() ? "1/2" : eps_arg, "--eps");
      Ef1HardnessInstance hard = ef1_hardness_instance(integers, v, eps);
      InstanceFile file;
      file.instance = hard.instance;
      file.metadata = {{"kind", "ef1-hardness"},
                       {"tau", hard.welfare_threshold.to_string()},
                       {"integers", integers}};
      write_json_file(output, instance_to_json(file));
      return kExitOk;
    }
    if (kind == "amms-hardness") {
      if (integers.empty()) return fail_input("gen amms-hardness needs --integers");
      AmmsHardnessInstance hard = amms_hardness_instance(integers);
      InstanceFile file;
      file.instance = hard.instance;
      file.metadata = {{"kind", "amms-hardness"},
                       {"alpha", hard.alpha.to_string()},
                       {"threshold", hard.welfare_threshold.to_string()},
                       {"integers", integers}};
      write_json_file(output, instance_to_json(file));
      return kExitOk;
    }
    if (kind == "het-ef1") {
      if (graph_path.empty()) return fail_input("gen het-ef1 needs --graph");
      GraphSpec graph = graph_from_json(read_json_file(graph_path));
      HetInstance het = het_ef1_instance(graph.edges, graph.num_vertices);
      Json edges = Json::array();
      for (auto [u, v] : graph.edges) edges.push_back({u, v});
      Json metadata = {{"kind", "het-ef1"},
                       {"num_vertices", graph.num_vertices},
                       {"edges", std::move(edges)}};
      write_json_file(output, het_to_json(het, std::move(metadata)));
      return kExitOk;
    }
    return fail_input("unknown --kind '" + kind + "'");
  } catch (const std::exception& e) {
    return fail_input(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairmech: truthful welfare-maximizing auctions for fair division "
               "(EF1, MMS, NSW) with exact rational arithmetic"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // solve
  auto* solve = app.add_subcommand("solve", "run an auction on an instance file");
  std::string mechanism, input, output, epsilon_arg;
  solve->add_option("--mechanism", mechanism, "ef1 | mms | nsw")
      ->required()
      ->check(CLI::IsMember({"ef1", "mms", "nsw"}));
  solve->add_option("--input", input, "instance JSON file")->required();
  solve->add_option("--output", output, "outcome JSON file to write");
  solve->add_option("--epsilon", epsilon_arg, "estimator accuracy for mms, e.g. 1/10");
  solve->callback([&] { exit_code = run_solve(mechanism, input, output, epsilon_arg); });

  // verify
  auto* verify = app.add_subcommand("verify", "run oracle-backed property checks");
  std::vector<std::string> verify_inputs;
  VerifySelection selection;
  std::vector<std::string> mechanisms = {"ef1", "mms", "nsw"};
  std::string verify_eps = "1/10", grid_step = "1/4", verify_output;
  int parallel = 1;
  verify->add_option("--input", verify_inputs, "instance JSON file(s)")
      ->required()
      ->take_all();
  verify->add_flag("--ef1-approx", selection.ef1_approx,
                   "round-robin welfare is at least half the EF1 optimum");
  verify->add_flag("--mms-fairness", selection.mms_fairness,
                   "every bundle reaches mu_bar/2 and ((1-eps)/2) mu");
  verify->add_flag("--mms-welfare", selection.mms_welfare,
                   "partition welfare is at least the constrained optimum");
  verify->add_flag("--truthful", selection.truthful, "grid audit of DSIC and IR");
  verify->add_flag("--majorization", selection.majorization,
                   "all EF1 partitions pairwise 1/2-majorize");
  verify->add_option("--mechanism", mechanisms, "mechanisms audited by --truthful")
      ->check(CLI::IsMember({"ef1", "mms", "nsw"}));
  verify->add_option("--epsilon", verify_eps, "estimator accuracy (default 1/10)");
  verify->add_option("--grid-step", grid_step, "deviation grid step (default 1/4)");
  verify->add_option("--parallel", parallel, "instances verified concurrently");
  verify->add_option("--output", verify_output, "write the JSON report here too");
  verify->callback([&] {
    if (!(selection.ef1_approx || selection.mms_fairness || selection.mms_welfare ||
          selection.truthful || selection.majorization)) {
      exit_code = fail_input("verify needs at least one check flag (--ef1-approx, "
                             "--mms-fairness, --mms-welfare, --truthful, --majorization)");
      return;
    }
    exit_code = run_verify(verify_inputs, selection, mechanisms, verify_eps, grid_step,
                           parallel, verify_output);
  });

  // audit
  auto* audit = app.add_subcommand("audit", "batch truthfulness audit");
  std::vector<std::string> audit_inputs;
  std::vector<std::string> audit_mechanisms = {"ef1", "mms", "nsw"};
  std::string audit_eps = "1/10", audit_grid = "1/4", audit_output;
  int audit_parallel = 1;
  audit->add_option("--input", audit_inputs, "instance JSON file(s)")->required()->take_all();
  audit->add_option("--mechanism", audit_mechanisms, "mechanisms to audit")
      ->check(CLI::IsMember({"ef1", "mms", "nsw"}));
  audit->add_option("--epsilon", audit_eps, "estimator accuracy (default 1/10)");
  audit->add_option("--grid-step", audit_grid, "deviation grid step (default 1/4)");
  audit->add_option("--parallel", audit_parallel, "instances audited concurrently");
  audit->add_option("--output", audit_output, "write the JSON report here too");
  audit->callback([&] {
    exit_code = run_audit(audit_inputs, audit_mechanisms, audit_eps, audit_grid, audit_parallel,
                          audit_output);
  });

  // gen
  auto* gen = app.add_subcommand("gen", "generate instance files");
  std::string gen_kind, gen_integers, gen_v, gen_eps, gen_graph, gen_output;
  int gen_m = 8, gen_n = 3, gen_count = 1;
  long long gen_max_weight = 50, gen_max_bid = 20;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "random | ef1-hardness | amms-hardness | het-ef1")
      ->required()
      ->check(CLI::IsMember({"random", "ef1-hardness", "amms-hardness", "het-ef1"}));
  gen->add_option("--m", gen_m, "number of goods (random)");
  gen->add_option("--n", gen_n, "number of agents (random)");
  gen->add_option("--max-weight", gen_max_weight, "weight bound (random)");
  gen->add_option("--max-bid", gen_max_bid, "bid bound (random)");
  gen->add_option("--seed", gen_seed, "PRNG seed (random)");
  gen->add_option("--count", gen_count, "number of files (random)");
  gen->add_option("--integers", gen_integers, "comma-separated multiset for the reductions");
  gen->add_option("--v", gen_v, "valuation parameter for ef1-hardness");
  gen->add_option("--eps", gen_eps, "epsilon for ef1-hardness");
  gen->add_option("--graph", gen_graph, "graph JSON file for het-ef1");
  gen->add_option("--output", gen_output, "output file path")->required();
  gen->callback([&] {
    exit_code = run_gen(gen_kind, gen_m, gen_n, gen_max_weight, gen_max_bid, gen_seed, gen_count,
                        gen_integers, gen_v, gen_eps, gen_graph, gen_output);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  return exit_code;
}
