#include "auction/dynamics.hpp"
#include "auction/experiments.hpp"
#include "auction/scenario.hpp"
#include "auction/strategies.hpp"
#include "auction/trace_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace auction;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

int usage_error(const std::string& what) {
  std::cout << json{{"status", "error"}, {"error", what}}.dump() << '\n';
  std::cerr << "auction_lab: " << what << '\n';
  return kUsage;
}

std::string default_summary_path(const std::string& trace_path) {
  std::filesystem::path p(trace_path);
  p.replace_extension(".csv");
  return p.string();
}

int cmd_run(const std::string& scenario_path, std::string trace_path, std::string summary_path) {
  Scenario s;
  try {
    s = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    return usage_error(e.what());
  }
  if (trace_path.empty() && s.trace_path) trace_path = *s.trace_path;
  if (summary_path.empty() && s.summary_path) summary_path = *s.summary_path;
  if (summary_path.empty() && !trace_path.empty()) summary_path = default_summary_path(trace_path);

  Trace trace;
  try {
    trace = run(s.instance, s.config);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }

  json scenario = serialize_scenario(s);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) return usage_error(trace_path + ": cannot write");
    write_trace_jsonl(out, trace, scenario);
  }
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out) return usage_error(summary_path + ": cannot write");
    write_summary_csv(out, trace);
  }
  const auto& last = trace.outcome(trace.length());
  json status{{"status", "ok"}, {"steps", trace.length()}, {"final_sw", to_string(last.sw)},
              {"final_dw", to_string(last.dw)}};
  if (!trace_path.empty()) status["trace"] = trace_path;
  if (!summary_path.empty()) status["summary"] = summary_path;
  if (trace_path.empty()) status["scenario"] = scenario;
  std::cout << status.dump() << '\n';
  return kOk;
}

int cmd_verify(const std::string& trace_path, const std::string& theorem, const std::string& beta_text,
               bool verbose) {
  std::ifstream in(trace_path);
  if (!in) return usage_error(trace_path + ": cannot open file");
  LoadedTrace loaded;
  try {
    loaded = read_trace_jsonl(in);
  } catch (const TraceFormatError& e) {
    std::cout << json{{"status", "error"}, {"error", e.what()}, {"line", e.line()}}.dump() << '\n';
    std::cerr << "auction_lab: " << trace_path << ": " << e.what() << '\n';
    return kUsage;
  }
  const Trace& trace = loaded.trace;

  ValidationReport v = validate_trace(trace);
  if (!v.clean) {
    json j{{"status", "fail"}, {"theorem", theorem}, {"reason", "trace replay mismatch"}, {"issues", v.issues}};
    j["first_bad_step"] = v.first_bad_step ? json(*v.first_bad_step) : json(nullptr);
    std::cout << j.dump() << '\n';
    return kViolation;
  }
  if (trace.instance->m() > 14) return usage_error("verify needs m <= 14 for the exact optimum");

  BoundReport report;
  try {
    if (theorem == "safety") {
      std::optional<Value> beta;
      if (!beta_text.empty()) beta = parse_rational(beta_text);
      SafetyReport s = check_safety(trace, beta ? *beta : Value(1));
      report.id = "safety";
      report.param("feasible", s.feasible ? "true" : "false");
      report.param("sup_ratio", s.sup_ratio);
      if (s.feasible) report.param("beta_min", s.beta_min);
      if (s.worst_t) report.param("worst_t", std::to_string(*s.worst_t));
      if (s.worst_bidder) report.param("worst_bidder", std::to_string(*s.worst_bidder + 1));
      if (beta) {
        report.param("beta", *beta);
        report.check_true("beta-safe", s.worst_t.value_or(0), s.holds);
      } else {
        report.check_true("finite beta", s.worst_t.value_or(0), s.feasible);
      }
    } else {
      OptResult opt = compute_opt(*trace.instance);
      if (theorem == "pointwise") {
        report = check_pointwise(trace, opt.value);
      } else if (theorem == "average") {
        report = check_average(trace, opt.value);
      } else {
        report.id = "lemmas";
        report.param("opt", opt.value);
        if (trace.schedule == ScheduleKind::round_robin)
          report.absorb(check_round_lemmas(trace, opt.value), "");
        else
          report.note("schedule is " + to_string(trace.schedule) + ": round-window lemmas skipped");
        report.absorb(check_prefix_lemmas(trace, opt), "");
      }
    }
  } catch (const std::domain_error& e) {
    std::cout << json{{"status", "not_applicable"}, {"theorem", theorem}, {"error", e.what()}}.dump() << '\n';
    std::cerr << "auction_lab: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }

  json j = report.to_json(verbose);
  j["status"] = report.pass ? "pass" : "fail";
  j["theorem"] = theorem;
  if (const BoundCheck* f = report.first_failure()) j["first_bad_step"] = f->t;
  std::cout << j.dump() << '\n';
  return report.pass ? kOk : kViolation;
}

void print_human(const std::string& name, const BoundReport& r) {
  std::cout << name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.checks.size() << " checks, " << r.failures
            << " failures)\n";
  for (const auto& [k, v] : r.params) std::cout << "  " << k << " = " << v << '\n';
  if (r.worst_ratio) std::cout << "  worst_ratio = " << to_string(*r.worst_ratio) << '\n';
  for (const auto& note : r.notes) std::cout << "  note: " << note << '\n';
  if (const BoundCheck* f = r.first_failure())
    std::cout << "  first failure: " << f->label << " at t=" << f->t << ": " << to_string(f->lhs) << ' '
              << f->relation << ' ' << to_string(f->rhs) << '\n';
}

int cmd_reproduce(const std::string& name, const std::vector<std::string>& raw_params, bool all, bool as_json) {
  if (all == !name.empty()) return usage_error("reproduce needs exactly one of --name or --all");
  ExperimentParams params;
  for (const auto& kv : raw_params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) return usage_error("--param expects key=value, got \"" + kv + "\"");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (all && !params.empty()) return usage_error("--param cannot be combined with --all");

  std::vector<std::string> names;
  if (all)
    for (const auto& e : list_experiments()) names.push_back(e.name);
  else
    names.push_back(name);

  struct Job {
    std::optional<BoundReport> report;
    std::string error;
  };
  auto jobs = parallel_map(names.size(), [&](std::size_t i) {
    Job job;
    try {
      job.report = run_named_experiment(names[i], params).report;
    } catch (const std::invalid_argument& e) {
      job.error = e.what();
    }
    return job;
  });

  int code = kOk;
  json out = json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!jobs[i].report) return usage_error(jobs[i].error);
    const BoundReport& r = *jobs[i].report;
    if (!r.pass) code = kViolation;
    json j = r.to_json();
    j["name"] = names[i];
    if (as_json || !r.pass) out.push_back(j);
    if (!as_json) print_human(names[i], r);
  }
  if (!out.empty()) std::cout << (all ? out.dump() : out[0].dump()) << '\n';
  return code;
}

int cmd_list() {
  for (const auto& e : list_experiments()) std::cout << e.name << '\t' << e.description << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-response dynamics in simultaneous second-price auctions"};
  app.require_subcommand(1);

  std::string scenario_path, trace_out, summary_out;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write the trace");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--trace", trace_out, "JSON-lines trace output");
  run_cmd->add_option("--summary", summary_out, "CSV summary output (default: trace path with .csv)");

  std::string trace_in, theorem, beta;
  bool verbose = false;
  auto* verify_cmd = app.add_subcommand("verify", "Replay a trace and check a bound");
  verify_cmd->add_option("--trace", trace_in, "JSON-lines trace")->required();
  verify_cmd->add_option("--theorem", theorem, "Bound to check")
      ->required()
      ->check(CLI::IsMember({"pointwise", "average", "lemmas", "safety"}));
  verify_cmd->add_option("--beta", beta, "Safety level for --theorem safety (default: any finite beta)");
  verify_cmd->add_flag("--verbose", verbose, "List passing checks too");

  std::string name;
  std::vector<std::string> params;
  bool all = false, as_json = false;
  auto* repro_cmd = app.add_subcommand("reproduce", "Run a named experiment");
  repro_cmd->add_option("--name", name, "Experiment name (see list)");
  repro_cmd->add_option("--param", params, "key=value override")->allow_extra_args(false);
  repro_cmd->add_flag("--all", all, "Run every experiment with default parameters");
  repro_cmd->add_flag("--json", as_json, "Print the report as JSON");

  app.add_subcommand("list", "List named experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run_cmd) return cmd_run(scenario_path, trace_out, summary_out);
  if (*verify_cmd) return cmd_verify(trace_in, theorem, beta, verbose);
  if (*repro_cmd) return cmd_reproduce(name, params, all, as_json);
  return cmd_list();
}
