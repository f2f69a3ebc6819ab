#ifndef PUBSUB_HARNESS_TRACE_HPP_
#define PUBSUB_HARNESS_TRACE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pubsub/floodnet.hpp"
#include "pubsub/refinement.hpp"

namespace pubsub::harness {

/// One Floodnet transition with its arguments. Unused fields stay empty.
struct Event {
  fn::Step kind = fn::Step::skip;
  std::optional<PeerId> peer;
  std::optional<Message> message;
  std::vector<Topic> topics;
  TopicSet pubs;
  TopicSet subs;
  PeerSet nbrs;

  friend bool operator==(const Event&, const Event&) = default;
};

struct TraceEvent {
  std::size_t index = 0;
  Event event;
  std::string pre_digest;
  std::string post_digest;
};

/// An event is not enabled in the state it is applied to.
class EventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Applies `e` to `s`, enforcing the guards of the corresponding step relation:
 * forwards must come from the first forwarder in key order and leaving peers
 * must have nothing pending.
 */
fn::State apply_event(const fn::State& s, const Event& e);

/// Replays `events` from `s0`, verifying any digests they carry. Returns
/// s0..sn; throws EventError naming the first disabled step.
std::vector<fn::State> run_trace(const fn::State& s0,
                                 std::span<const TraceEvent> events);

/// Forwards `m` (always from the first forwarder) until it is nowhere
/// pending. Returns the intermediate states, excluding `s`.
std::vector<fn::State> flood(const fn::State& s, const Message& m,
                             std::size_t max_steps = 10000);

// Refinement checking over traces.

struct StepRecord {
  std::size_t trace = 0;
  std::size_t index = 0;
  /// First disjunct of the Floodnet step relation accepting (s_i, s_i+1).
  std::optional<fn::Step> fn_kind;
  /// WFS1..WFS3; WFS3 is absent on the final state of a trace.
  std::array<std::optional<refine::Status>, 3> wfs;
  /// Disjuncts of the Broadcastnet step relation accepting (f2b(s_i), v).
  std::vector<bn::Step> bn_match;
  /// Empty unless the state or the step failed the good-state / step audit.
  std::string audit;
};

struct Counterexample {
  std::string check;
  std::size_t trace = 0;
  std::size_t index = 0;
  std::string diagnostics;
  std::vector<std::pair<std::string, refine::Borf>> states;
};

struct Totals {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t error = 0;

  friend bool operator==(const Totals&, const Totals&) = default;
};

struct CheckReport {
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json stats = nlohmann::json::object();
  std::vector<StepRecord> steps;
  std::optional<Counterexample> counterexample;
  Totals totals;
  double elapsed_ms = 0;

  bool ok() const { return !counterexample && totals.fail == 0 && totals.error == 0; }
  /// Appends `other`'s records and totals; keeps the first counterexample.
  void merge(CheckReport other);
};

/**
 * For every state s_i: WFS1 on s_i and WFS2 on (s_i, f2b(s_i)); for every
 * step: WFS3 on (s_i, f2b(s_i), s_i+1). Each state is audited against the
 * good-state invariants and each step against the Floodnet step relation.
 * Failed obligations count as failures, unmet hypotheses and audit findings
 * as errors; the first of either becomes the counterexample.
 */
CheckReport check_trace_refinement(std::span<const fn::State> states,
                                   const refine::CheckOptions& opts = {},
                                   std::size_t trace_id = 0);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_TRACE_HPP_
