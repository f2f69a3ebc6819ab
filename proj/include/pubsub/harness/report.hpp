#ifndef PUBSUB_HARNESS_REPORT_HPP_
#define PUBSUB_HARNESS_REPORT_HPP_

#include <string>

#include "json.hpp"
#include "pubsub/harness/trace.hpp"

namespace pubsub::harness {

/**
 * Report document:
 *   {"config", "stats", "steps": [{"trace", "index", "fn_step", "wfs", "bn_match", "audit"}],
 *    "counterexample": null | {"check", "trace", "index", "diagnostics", "states"},
 *    "totals": {"pass", "fail", "error"}, "elapsed_ms"}
 * `with_steps` = false drops the per-step records.
 */
nlohmann::json report_to_json(const CheckReport& r, bool with_steps = true);
std::string emit_report(const CheckReport& r, bool with_steps = true);

/// One-line human summary.
std::string summarize(const CheckReport& r);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_REPORT_HPP_
