#include "pubsub/harness/faults.hpp"

#include <algorithm>
#include <array>
#include <chrono>

namespace pubsub::harness {

namespace {

constexpr std::array<std::pair<Fault, std::string_view>, 7> kNames{{
    {Fault::none, "none"},
    {Fault::drop_receiver, "drop-receiver"},
    {Fault::skip_good_state_check, "skip-good-state-check"},
    {Fault::forward_to_self, "forward-to-self"},
    {Fault::leave_with_pending, "leave-with-pending"},
    {Fault::duplicate_seen, "duplicate-seen"},
    {Fault::unsorted_seen, "unsorted-seen"},
}};

const Topic& topic_t() {
  static const Topic t("t");
  return t;
}

Message message_m() { return Message{"m", topic_t(), PeerId{1}}; }

Event ev(fn::Step kind, std::optional<PeerId> p = std::nullopt,
         std::optional<Message> m = std::nullopt, std::vector<Topic> topics = {}) {
  Event e;
  e.kind = kind;
  e.peer = p;
  e.message = std::move(m);
  e.topics = std::move(topics);
  return e;
}

// Drops the last seen entry of the highest peer that has one. In the example
// run only the final forward delivers anything, so this removes a receiver
// from its broadcast-partial witness.
void drop_last_receiver(refine::Borf& v) {
  if (!v.is_bn()) return;
  bn::PeerState* target = nullptr;
  v.bn().for_each_value([&](PeerId, bn::PeerState& pst) {
    if (!pst.seen.empty()) target = &pst;
  });
  if (target == nullptr) return;
  std::vector<Message> seen = target->seen.elements();
  seen.pop_back();
  target->seen = MessageSet::unchecked(std::move(seen));
}

void push_seen(fn::State& s, PeerId p, const Message& m) {
  fn::PeerState& pst = *s.find(p);
  std::vector<Message> seen = pst.seen.elements();
  seen.push_back(m);
  pst.seen = MessageSet::unchecked(std::move(seen));
}

}  // namespace

std::string_view fault_name(Fault f) {
  for (const auto& [k, name] : kNames) {
    if (k == f) return name;
  }
  return "?";
}

std::optional<Fault> parse_fault(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<Fault> all_faults() {
  std::vector<Fault> out;
  for (const auto& [k, _] : kNames) out.push_back(k);
  return out;
}

Scenario three_node_scenario() {
  const Topic& t = topic_t();
  fn::State s;
  s.set(PeerId{1}, fn::PeerState{TopicSet{t}, {}, fn::TopicPeers{{t, PeerSet{PeerId{3}}}}, {}, {}});
  s.set(PeerId{2}, fn::PeerState{{}, TopicSet{t}, fn::TopicPeers{{t, PeerSet{PeerId{3}}}}, {}, {}});
  s.set(PeerId{3}, fn::PeerState{{}, TopicSet{t}, fn::TopicPeers{{t, PeerSet{PeerId{2}}}}, {}, {}});

  const std::vector<Event> events{
      ev(fn::Step::produce, std::nullopt, message_m()),
      ev(fn::Step::forward, PeerId{1}, message_m()),
      ev(fn::Step::leave, PeerId{1}),
      ev(fn::Step::unsubscribe, PeerId{2}, std::nullopt, {t}),
      ev(fn::Step::unsubscribe, PeerId{3}, std::nullopt, {t}),
      ev(fn::Step::forward, PeerId{3}, message_m()),
  };
  Scenario out{s, {}};
  fn::State cur = s;
  for (std::size_t i = 0; i < events.size(); ++i) {
    fn::State next = apply_event(cur, events[i]);
    out.events.push_back(TraceEvent{i, events[i], digest(cur), digest(next)});
    cur = std::move(next);
  }
  return out;
}

CheckReport run_mutation(Fault f) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario sc = three_node_scenario();
  refine::CheckOptions opts;
  std::vector<fn::State> states;

  switch (f) {
    case Fault::none:
      states = run_trace(sc.initial, sc.events);
      break;
    case Fault::drop_receiver:
      states = run_trace(sc.initial, sc.events);
      opts.tamper_witness = drop_last_receiver;
      break;
    case Fault::skip_good_state_check: {
      // Peer 3 tracks itself, and the checkers stop screening bad states.
      fn::State bad = sc.initial;
      fn::PeerState& p3 = *bad.find(PeerId{3});
      p3.nsubs.set(topic_t(), insert_unique(PeerId{3}, p3.nsubs.at(topic_t())));
      std::vector<TraceEvent> events = sc.events;
      for (TraceEvent& te : events) te.pre_digest = te.post_digest = {};
      states = run_trace(bad, events);
      opts.check_preconditions = false;
      break;
    }
    case Fault::forward_to_self:
      // The first forward also redelivers m to the forwarder.
      states = run_trace(sc.initial, sc.events);
      states[2].find(PeerId{1})->pending.insert(states[2].find(PeerId{1})->pending.begin(),
                                                message_m());
      break;
    case Fault::leave_with_pending: {
      states = {sc.initial};
      states.push_back(fn::produce(message_m(), states.back()));
      states.push_back(fn::leave(PeerId{1}, states.back()));
      break;
    }
    case Fault::duplicate_seen:
      states = run_trace(sc.initial, sc.events);
      push_seen(states.back(), PeerId{3}, message_m());
      break;
    case Fault::unsorted_seen:
      states = run_trace(sc.initial, sc.events);
      push_seen(states.back(), PeerId{3}, Message{"a", topic_t(), PeerId{1}});
      break;
  }

  CheckReport r = check_trace_refinement(states, opts);
  r.config = {{"mode", "mutate"}, {"fault", std::string(fault_name(f))}};
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace pubsub::harness
