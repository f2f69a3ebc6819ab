#include "pubsub/harness/report.hpp"

#include <sstream>

#include "pubsub/harness/json_io.hpp"

namespace pubsub::harness {

namespace {

json step_to_json(const StepRecord& rec) {
  json wfs = json::object();
  for (std::size_t k = 0; k < rec.wfs.size(); ++k) {
    if (!rec.wfs[k]) continue;
    wfs[std::string(refine::obligation_name(static_cast<refine::Obligation>(k)))] =
        std::string(refine::status_name(*rec.wfs[k]));
  }
  json bn = json::array();
  for (bn::Step k : rec.bn_match) bn.push_back(std::string(bn::step_name(k)));
  json out = {{"trace", rec.trace}, {"index", rec.index}, {"wfs", std::move(wfs)},
              {"bn_match", std::move(bn)}};
  out["fn_step"] = rec.fn_kind ? json(std::string(fn::step_name(*rec.fn_kind))) : json(nullptr);
  if (!rec.audit.empty()) out["audit"] = rec.audit;
  return out;
}

}  // namespace

json report_to_json(const CheckReport& r, bool with_steps) {
  json out = json::object();
  out["config"] = r.config;
  out["stats"] = r.stats;
  if (with_steps) {
    json steps = json::array();
    for (const StepRecord& rec : r.steps) steps.push_back(step_to_json(rec));
    out["steps"] = std::move(steps);
  }
  if (r.counterexample) {
    const Counterexample& cx = *r.counterexample;
    json states = json::array();
    for (const auto& [name, st] : cx.states) {
      json entry = to_json(st);
      entry["name"] = name;
      states.push_back(std::move(entry));
    }
    out["counterexample"] = {{"check", cx.check}, {"trace", cx.trace}, {"index", cx.index},
                             {"diagnostics", cx.diagnostics}, {"states", std::move(states)}};
  } else {
    out["counterexample"] = nullptr;
  }
  out["totals"] = {{"pass", r.totals.pass}, {"fail", r.totals.fail}, {"error", r.totals.error}};
  out["elapsed_ms"] = r.elapsed_ms;
  return out;
}

std::string emit_report(const CheckReport& r, bool with_steps) {
  return report_to_json(r, with_steps).dump(2) + "\n";
}

std::string summarize(const CheckReport& r) {
  std::ostringstream os;
  os << (r.ok() ? "OK" : "FAIL") << ": " << r.totals.pass << " passed, " << r.totals.fail
     << " failed, " << r.totals.error << " errors";
  if (r.counterexample) {
    const Counterexample& cx = *r.counterexample;
    os << "; first counterexample: " << cx.check << " at trace " << cx.trace << " step "
       << cx.index << ": " << cx.diagnostics;
  }
  return os.str();
}

}  // namespace pubsub::harness
