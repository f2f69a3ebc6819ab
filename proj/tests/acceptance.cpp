// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "pubsub/harness/enumerate.hpp"
#include "pubsub/harness/faults.hpp"
#include "pubsub/harness/generator.hpp"
#include "pubsub/harness/json_io.hpp"
#include "pubsub/harness/report.hpp"

namespace {

using namespace pubsub;
using namespace pubsub::harness;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return std::string(PUBSUB_TEST_DATA) + "/" + name; }

int cli(const std::string& args) {
  const int status = std::system((std::string(PUBSUB_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir && *dir ? dir : "/tmp") + "/pubsub_acceptance_" + name;
}

std::string totals(const CheckReport& r) {
  return std::to_string(r.totals.pass) + " passed, " + std::to_string(r.totals.fail) + " failed, " +
         std::to_string(r.totals.error) + " errors";
}

Outcome wfs_fuzz() {
  FuzzConfig cfg;
  cfg.gen.max_peers = 8;
  cfg.gen.max_topics = 4;
  cfg.gen.max_messages = 6;
  cfg.gen.steps = 1;
  cfg.gen.seed = 2024;
  cfg.traces = 10000;
  const CheckReport r = run_fuzz(cfg);
  std::size_t wfs3 = 0;
  for (const StepRecord& rec : r.steps) wfs3 += rec.wfs[2].has_value();
  const double seconds = r.elapsed_ms / 1000.0;
  std::ostringstream os;
  os << wfs3 << " instances, " << totals(r) << ", " << seconds << " s";
  return {r.ok() && wfs3 == 10000 && seconds < 300.0, os.str()};
}

Outcome exhaustive() {
  const CheckReport r = enumerate_oracle({2, 1, 1});
  std::ostringstream os;
  os << r.stats["floodnet"]["states"] << " Floodnet and " << r.stats["broadcastnet"]["states"]
     << " Broadcastnet states, " << totals(r);
  return {r.ok() && r.totals.pass > 0, os.str()};
}

Outcome three_node() {
  const Scenario sc = parse_scenario(read_text(data("three_node.json")));
  const std::vector<fn::State> states = run_trace(sc.initial, sc.events);
  const json golden = json::parse(read_text(data("three_node_states.json")));
  const json mapped = json::parse(read_text(data("three_node_mapped.json")));
  bool dumps = states.size() == golden.size() && states.size() == mapped.size();
  for (std::size_t i = 0; dumps && i < states.size(); ++i) {
    dumps = to_json(states[i]) == golden[i] && to_json(refine::f2b(states[i])) == mapped[i];
  }
  const CheckReport r = check_trace_refinement(states);
  const std::vector<bn::Step> expected{bn::Step::skip, bn::Step::skip, bn::Step::leave,
                                       bn::Step::unsubscribe, bn::Step::unsubscribe,
                                       bn::Step::broadcast_partial};
  std::string seq;
  bool matches = r.steps.size() == expected.size() + 1;
  for (std::size_t i = 0; i < expected.size() && i < r.steps.size(); ++i) {
    const auto& got = r.steps[i].bn_match;
    const bn::Step first = got.empty() ? bn::Step::skip : got.front();
    matches = matches && !got.empty() && first == expected[i];
    if (!seq.empty()) seq += ",";
    seq += got.empty() ? "none" : std::string(bn::step_name(first));
  }
  // The final witness delivers m to exactly the receivers of the mapped final state.
  const Message m{"m", Topic("t"), PeerId{1}};
  const bn::State w = refine::f2b(states[5]);
  const refine::Verdict v = refine::check_wfs3(states[5], w, states[6]);
  const auto want = bn::receivers(m, refine::f2b(states[6]));
  const bool receivers = v.passed() && v.witness && v.witness->is_bn() &&
                         bn::receivers(m, v.witness->bn()) == want &&
                         v.witness->bn() == bn::broadcast_partial(m, want, w);
  std::ostringstream os;
  os << states.size() << " states, dumps " << (dumps ? "match" : "differ") << ", matches " << seq
     << ", final receivers " << want.size() << ", " << totals(r);
  return {dumps && matches && receivers && r.ok(), os.str()};
}

Outcome forward_property() {
  GeneratorConfig cfg;
  cfg.max_peers = 8;
  cfg.max_topics = 4;
  cfg.max_messages = 6;
  Rng rng(7);
  std::size_t instances = 0, failures = 0, attempts = 0;
  while (instances < 5000 && attempts < 1000000) {
    ++attempts;
    auto inst = gen_forward_instance(cfg, rng);
    if (!inst) continue;
    const fn::State u = fn::forward(inst->peer, inst->message, inst->state);
    if (fn::pending_messages(u) != fn::pending_messages(inst->state)) continue;
    ++instances;
    failures += refine::f2b(u) != refine::f2b(inst->state);
  }
  std::ostringstream os;
  os << instances << " instances satisfying the hypothesis (" << attempts << " drawn), "
     << failures << " failures";
  return {instances == 5000 && failures == 0, os.str()};
}

Outcome static_equivalence() {
  Rng rng(11);
  std::size_t failures = 0, refinement_failures = 0, total_hops = 0;
  for (int i = 0; i < 1000; ++i) {
    const StaticInstance inst = gen_static_instance(6, 3, rng);
    const Message& m = inst.message;
    if (!topic_connected(inst.state, m) || !fn::produce_pre(m, inst.state)) {
      ++failures;
      continue;
    }
    std::vector<fn::State> states{inst.state, fn::produce(m, inst.state)};
    std::vector<fn::State> hops;
    try {
      hops = flood(states.back(), m);
    } catch (const std::runtime_error&) {
      ++failures;
      continue;
    }
    total_hops += hops.size();
    states.insert(states.end(), hops.begin(), hops.end());
    const bn::State final_map = refine::f2b(states.back());
    const bn::State expected = bn::broadcast(m, refine::f2b(inst.state));
    if (bn::receivers(m, final_map) != bn::receivers(m, expected)) ++failures;
    if (!check_trace_refinement(states).ok()) ++refinement_failures;
  }
  std::ostringstream os;
  os << "1000 configurations, " << total_hops << " forwards, " << failures
     << " recipient mismatches, " << refinement_failures << " refinement failures";
  return {failures == 0 && refinement_failures == 0, os.str()};
}

Outcome fault_injection() {
  std::size_t caught = 0, faults = 0;
  bool control = false;
  std::string missed;
  for (Fault f : all_faults()) {
    const std::string name(fault_name(f));
    const std::string report = tmp("mutate_" + name + ".json");
    const int code = cli("mutate --fault " + name + " --report " + report);
    json r = json::object();
    try {
      r = json::parse(read_text(report));
    } catch (const json::exception&) {
    }
    std::remove(report.c_str());
    const bool dumped = r.contains("counterexample") && r["counterexample"].is_object() &&
                        !r["counterexample"]["states"].empty();
    if (f == Fault::none) {
      control = code == 0 && r.contains("counterexample") && r["counterexample"].is_null();
      continue;
    }
    ++faults;
    if (code != 0 && dumped) {
      ++caught;
    } else {
      missed += " " + name;
    }
  }
  std::ostringstream os;
  os << caught << "/" << faults << " faults caught, control " << (control ? "clean" : "FAILED");
  if (!missed.empty()) os << ", missed:" << missed;
  return {caught == 6 && faults == 6 && control, os.str()};
}

Outcome determinism() {
  const std::string args =
      "fuzz --steps 20 --traces 200 --max-peers 8 --max-topics 4 --max-messages 6 --seed 77 --report ";
  const std::string a = tmp("det_a.json"), b = tmp("det_b.json");
  const int ca = cli(args + a);
  const int cb = cli(args + b);
  json ja, jb;
  try {
    ja = json::parse(read_text(a));
    jb = json::parse(read_text(b));
  } catch (const json::exception&) {
    return {false, "report missing or unreadable"};
  }
  std::remove(a.c_str());
  std::remove(b.c_str());
  ja.erase("elapsed_ms");
  jb.erase("elapsed_ms");
  const std::string da = ja.dump(2), db = jb.dump(2);
  std::ostringstream os;
  os << "exit " << ca << "/" << cb << ", " << da.size() << " bytes, "
     << (da == db ? "identical" : "different");
  return {ca == 0 && cb == 0 && da == db && !ja["steps"].empty(), os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 WFS fuzz suite (10000 instances, 8 peers, 4 topics, 6 messages)", wfs_fuzz},
      {"2 exhaustive oracle (2 peers, 1 topic, 1 message)", exhaustive},
      {"3 three-node golden trace", three_node},
      {"4 forward property (5000 instances)", forward_property},
      {"5 static-configuration equivalence (1000 configurations)", static_equivalence},
      {"6 fault-injection completeness", fault_injection},
      {"7 determinism of fuzz reports", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("[%s] criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
