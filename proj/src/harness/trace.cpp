#include "pubsub/harness/trace.hpp"

#include <algorithm>

#include "pubsub/harness/json_io.hpp"

namespace pubsub::harness {

namespace {

PeerId need_peer(const Event& e) {
  if (!e.peer) throw EventError(std::string(fn::step_name(e.kind)) + " event without a peer");
  return *e.peer;
}

const Message& need_message(const Event& e) {
  if (!e.message) {
    throw EventError(std::string(fn::step_name(e.kind)) + " event without a message");
  }
  return *e.message;
}

const fn::PeerState& need_present(const fn::State& s, PeerId p, std::string_view what) {
  const fn::PeerState* pst = s.find(p);
  if (pst == nullptr) {
    throw EventError(std::string(what) + ": peer " + to_string(p) + " is not in the network");
  }
  return *pst;
}

void record(CheckReport& r, StepRecord& rec, const refine::Verdict& v) {
  rec.wfs[static_cast<std::size_t>(v.obligation)] = v.status;
  switch (v.status) {
    case refine::Status::pass: ++r.totals.pass; return;
    case refine::Status::fail: ++r.totals.fail; break;
    case refine::Status::not_applicable: ++r.totals.error; break;
  }
  if (r.counterexample) return;
  Counterexample cx{std::string(refine::obligation_name(v.obligation)), rec.trace, rec.index,
                    std::string(refine::status_name(v.status)) + ": " + v.diagnostics,
                    v.subjects};
  if (v.witness) cx.states.emplace_back("v", *v.witness);
  r.counterexample = std::move(cx);
}

void audit(CheckReport& r, StepRecord& rec, std::string check, std::string finding,
           std::vector<std::pair<std::string, refine::Borf>> states) {
  ++r.totals.error;
  if (!rec.audit.empty()) rec.audit += "; ";
  rec.audit += finding;
  if (!r.counterexample) {
    r.counterexample =
        Counterexample{std::move(check), rec.trace, rec.index, std::move(finding), std::move(states)};
  }
}

}  // namespace

fn::State apply_event(const fn::State& s, const Event& e) {
  const std::string what(fn::step_name(e.kind));
  try {
    switch (e.kind) {
      case fn::Step::skip:
        return s;
      case fn::Step::produce: {
        const Message& m = need_message(e);
        if (auto pre = fn::check_produce_pre(m, s); pre != fn::ProducePre::ok) {
          throw EventError("produce " + to_string(m) + ": " + std::string(fn::describe(pre)));
        }
        return fn::produce(m, s);
      }
      case fn::Step::forward: {
        const PeerId p = need_peer(e);
        const Message& m = need_message(e);
        const fn::PeerState& pst = need_present(s, p, what);
        if (std::find(pst.pending.begin(), pst.pending.end(), m) == pst.pending.end()) {
          throw EventError("forward: " + to_string(m) + " is not pending at peer " + to_string(p));
        }
        if (PeerId first = fn::find_forwarder(s, m); first != p) {
          throw EventError("forward: " + to_string(m) + " must be forwarded by peer " +
                           to_string(first) + ", the first peer holding it");
        }
        return fn::forward(p, m, s);
      }
      case fn::Step::subscribe:
      case fn::Step::unsubscribe: {
        const PeerId p = need_peer(e);
        need_present(s, p, what);
        const bool sub = e.kind == fn::Step::subscribe;
        return sub ? fn::subscribe(p, e.topics, s) : fn::unsubscribe(p, e.topics, s);
      }
      case fn::Step::join: {
        const PeerId p = need_peer(e);
        if (s.contains(p)) throw EventError("join: peer " + to_string(p) + " is already in the network");
        if (e.nbrs.contains(p)) throw EventError("join: peer " + to_string(p) + " lists itself as a neighbor");
        return fn::join(p, e.pubs, e.subs, e.nbrs, s);
      }
      case fn::Step::leave: {
        const PeerId p = need_peer(e);
        if (!need_present(s, p, what).pending.empty()) {
          throw EventError("leave: peer " + to_string(p) + " still has pending messages");
        }
        return fn::leave(p, s);
      }
    }
  } catch (const ContractError& err) {
    throw EventError(err.what());
  }
  throw EventError("unknown event kind");
}

std::vector<fn::State> run_trace(const fn::State& s0, std::span<const TraceEvent> events) {
  std::vector<fn::State> states{s0};
  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& te = events[i];
    const std::string where = "step " + std::to_string(i) + " (" +
                              std::string(fn::step_name(te.event.kind)) + "): ";
    if (!te.pre_digest.empty() && te.pre_digest != digest(states.back())) {
      throw EventError(where + "pre-state digest mismatch");
    }
    try {
      states.push_back(apply_event(states.back(), te.event));
    } catch (const EventError& e) {
      throw EventError(where + e.what());
    }
    if (!te.post_digest.empty() && te.post_digest != digest(states.back())) {
      throw EventError(where + "post-state digest mismatch");
    }
  }
  return states;
}

std::vector<fn::State> flood(const fn::State& s, const Message& m, std::size_t max_steps) {
  std::vector<fn::State> out;
  fn::State cur = s;
  while (fn::pending_messages(cur).contains(m)) {
    if (out.size() == max_steps) {
      throw std::runtime_error("flood of " + to_string(m) + " did not terminate");
    }
    cur = fn::forward(fn::find_forwarder(cur, m), m, cur);
    out.push_back(cur);
  }
  return out;
}

void CheckReport::merge(CheckReport other) {
  steps.insert(steps.end(), std::make_move_iterator(other.steps.begin()),
               std::make_move_iterator(other.steps.end()));
  totals.pass += other.totals.pass;
  totals.fail += other.totals.fail;
  totals.error += other.totals.error;
  if (!counterexample && other.counterexample) counterexample = std::move(other.counterexample);
}

CheckReport check_trace_refinement(std::span<const fn::State> states,
                                   const refine::CheckOptions& opts, std::size_t trace_id) {
  CheckReport r;
  for (std::size_t i = 0; i < states.size(); ++i) {
    StepRecord rec;
    rec.trace = trace_id;
    rec.index = i;
    const fn::State& s = states[i];
    const refine::Borf mapped = refine::f2b(s);

    record(r, rec, refine::check_wfs1(s, opts));
    record(r, rec, refine::check_wfs2(s, mapped, opts));
    if (i + 1 < states.size()) {
      const fn::State& u = states[i + 1];
      rec.fn_kind = fn::match_step(s, u).first();
      refine::Verdict v3 = refine::check_wfs3(s, mapped, u, opts);
      if (v3.witness && v3.witness->is_bn()) {
        rec.bn_match = bn::match_step(mapped.bn(), v3.witness->bn()).members();
      }
      record(r, rec, v3);
    }

    if (!fn::no_self_tracking(s)) {
      audit(r, rec, "good-state", "state " + std::to_string(i) +
                                      " violates invariant 1: a peer tracks its own subscriptions",
            {{"s", s}});
    }
    if (!fn::seen_ordered(s)) {
      audit(r, rec, "good-state",
            "state " + std::to_string(i) + " violates invariant 2: a seen set is not ordered",
            {{"s", s}});
    }
    if (i + 1 < states.size() && !rec.fn_kind) {
      audit(r, rec, "step-relation",
            "step " + std::to_string(i) + " is not a Floodnet transition",
            {{"s", s}, {"u", states[i + 1]}});
    }
    r.steps.push_back(std::move(rec));
  }
  return r;
}

}  // namespace pubsub::harness
