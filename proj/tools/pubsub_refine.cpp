// pubsub-refine: fuzzing, replay, enumeration and fault injection for the
// Floodnet to Broadcastnet refinement checkers.
//
// Exit codes: 0 all obligations pass, 1 counterexample found, 2 usage or
// input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pubsub/harness/enumerate.hpp"
#include "pubsub/harness/faults.hpp"
#include "pubsub/harness/generator.hpp"
#include "pubsub/harness/json_io.hpp"
#include "pubsub/harness/report.hpp"

namespace {

using namespace pubsub;
using namespace pubsub::harness;

constexpr int kOk = 0;
constexpr int kCounterexample = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("PUBSUB_REFINE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(env, &used);
    if (used == std::string(env).size() && env[0] != '-') return seed;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("PUBSUB_REFINE_SEED=\"") + env + "\" is not a non-negative integer");
}

void write_report(const std::string& path, const CheckReport& r) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write report to " + path);
  out << emit_report(r);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_counterexample(const CheckReport& r) {
  if (!r.counterexample) return;
  json dump = report_to_json(r, false)["counterexample"];
  std::cout << "counterexample:\n" << dump.dump(2) << "\n";
}

int finish(const CheckReport& r, const std::string& report_path) {
  write_report(report_path, r);
  std::cout << summarize(r) << "\n";
  print_counterexample(r);
  return r.ok() ? kOk : kCounterexample;
}

std::string matches(const StepRecord& rec) {
  std::string out;
  for (bn::Step k : rec.bn_match) {
    if (!out.empty()) out += "|";
    out += bn::step_name(k);
  }
  return out.empty() ? "none" : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refinement checker for the Floodnet and Broadcastnet pubsub models"};
  app.require_subcommand(1);

  FuzzConfig fuzz;
  std::string weights;
  std::string report_path;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Generate random traces and check WFS1-3 on every step");
  fuzz_cmd->add_option("--steps", fuzz.gen.steps, "Steps per trace")->capture_default_str();
  fuzz_cmd->add_option("--traces", fuzz.traces, "Number of traces")->capture_default_str();
  fuzz_cmd->add_option("--max-peers", fuzz.gen.max_peers)->capture_default_str();
  fuzz_cmd->add_option("--max-topics", fuzz.gen.max_topics)->capture_default_str();
  fuzz_cmd->add_option("--max-messages", fuzz.gen.max_messages)->capture_default_str();
  auto* seed_opt = fuzz_cmd->add_option("--seed", fuzz.gen.seed, "Defaults to $PUBSUB_REFINE_SEED or 0");
  fuzz_cmd->add_flag("--static", fuzz.gen.static_mode, "No subscription changes, joins or leaves");
  fuzz_cmd->add_option("--weights", weights, "Transition weights, e.g. forward=6,join=0");
  fuzz_cmd->add_option("--report", report_path, "Write the JSON report here");

  std::string scenario_path;
  auto* run_cmd = app.add_subcommand("run", "Replay a scenario file and check it");
  run_cmd->add_option("scenario", scenario_path)->required();
  run_cmd->add_option("--report", report_path, "Write the JSON report here");

  Bounds bounds;
  EnumerateOptions enum_opts;
  auto* enum_cmd = app.add_subcommand("enumerate", "Exhaustive check over all small states");
  enum_cmd->add_option("--peers", bounds.peers)->required();
  enum_cmd->add_option("--topics", bounds.topics)->required();
  enum_cmd->add_option("--messages", bounds.messages)->required();
  enum_cmd->add_option("--cap", enum_opts.cap, "Maximum states per system")->capture_default_str();
  enum_cmd->add_option("--report", report_path, "Write the JSON report here");

  std::string fault_name_arg;
  auto* mutate_cmd = app.add_subcommand("mutate", "Inject a fault into the example run; expects detection");
  std::string fault_help = "One of:";
  for (Fault f : all_faults()) fault_help += " " + std::string(fault_name(f));
  mutate_cmd->add_option("--fault", fault_name_arg, fault_help)->required();
  mutate_cmd->add_option("--report", report_path, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fuzz_cmd->parsed()) {
      if (seed_opt->count() == 0) fuzz.gen.seed = default_seed();
      try {
        fuzz.gen.weights = parse_weights(weights, fuzz.gen.weights);
        fuzz.gen.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return finish(run_fuzz(fuzz), report_path);
    }
    if (run_cmd->parsed()) {
      const Scenario sc = parse_scenario(read_file(scenario_path));
      const std::vector<fn::State> states = run_trace(sc.initial, sc.events);
      CheckReport r = check_trace_refinement(states);
      r.config = {{"mode", "run"}, {"scenario", scenario_path}};
      for (const StepRecord& rec : r.steps) {
        if (!rec.fn_kind) continue;
        std::cout << "step " << rec.index << ": " << fn::step_name(*rec.fn_kind) << " -> "
                  << matches(rec) << "\n";
      }
      return finish(r, report_path);
    }
    if (enum_cmd->parsed()) {
      CheckReport r = enumerate_oracle(bounds, enum_opts);
      std::cout << r.stats.dump() << "\n";
      return finish(r, report_path);
    }
    if (mutate_cmd->parsed()) {
      auto f = parse_fault(fault_name_arg);
      if (!f) throw UsageError("unknown fault \"" + fault_name_arg + "\"; " + fault_help);
      return finish(run_mutation(*f), report_path);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kUsage;
  } catch (const EventError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
