#include "pubsub/refinement.hpp"

namespace pubsub::refine {

namespace {

Borf empty_like(const Borf& tag_source) {
  if (tag_source.is_bn()) return bn::State{};
  return fn::State{};
}

bn::State exists_v1_unchecked(const fn::State& s, const fn::State& u) {
  if (fn::rel_skip(s, u)) return f2b(s);
  bn::State before = f2b(s);
  bn::State after = f2b(u);
  if (fn::rel_forward(s, u) && before != after) {
    auto m = bn::broadcast_witness(before, after);
    if (!m) throw ContractError("exists-v1: forward changed the mapped state without a new message");
    return bn::broadcast_partial(*m, bn::receivers(*m, after), std::move(before));
  }
  return after;
}

// Case split of the witness construction; tags resolve what the untyped
// version decides with recognizers.
Borf exists_v_unchecked(const Borf& s, const Borf& u, const Borf& w) {
  if (s.empty()) {
    if (u.empty()) return empty_like(w);
    if (w.is_fn()) return u;
    if (u.is_fn()) return exists_v1_unchecked(s.is_fn() ? s.fn() : fn::State{}, u.fn());
    return u;
  }
  if (s.is_bn() && w.is_bn()) return u;
  if (s.is_fn() && w.is_bn()) {
    if (!u.is_fn()) throw ContractError("exists-v: Floodnet state steps to a Broadcastnet state");
    return exists_v1_unchecked(s.fn(), u.fn());
  }
  if (s.is_fn() && w.is_fn()) return u;
  throw ContractError("exists-v: Broadcastnet state related to a Floodnet state");
}

Verdict make(Obligation o) { return Verdict{o, Status::pass, std::nullopt, {}, {}}; }

}  // namespace

bn::PeerState map_peer(const fn::PeerState& ps, const MessageSet& pending) {
  return bn::PeerState{ps.pubs, ps.subs,
                       MessageSet::unchecked(set_difference(ps.seen.view(), pending.view()))};
}

bn::State f2b(const fn::State& s) {
  const MessageSet pending = fn::pending_messages(s);
  bn::State out;
  for (const auto& [p, pst] : s) out.set(p, map_peer(pst, pending));
  return out;
}

bool rel_wf(const Borf& x, const Borf& y) {
  return x.is_fn() && y.is_bn() && fn::good_state(x.fn()) && y.bn() == f2b(x.fn());
}

bool rel_b(const Borf& x, const Borf& y) { return rel_wf(x, y) || x == y; }

bool good_rel_step_fn(const fn::State& s, const fn::State& u) {
  return fn::good_state(s) && fn::good_state(u) && fn::rel_step(s, u);
}

bool rel_step(const Borf& s, const Borf& u) {
  if (s.is_fn() && u.is_fn()) return good_rel_step_fn(s.fn(), u.fn());
  if (s.is_bn() && u.is_bn()) return bn::rel_step(s.bn(), u.bn());
  return false;
}

Borf label(const Borf& s) {
  if (s.is_bn()) return s;
  return f2b(s.fn());
}

bn::State exists_v1(const fn::State& s, const fn::State& u) {
  if (!fn::good_state(s)) throw ContractError("exists-v1: state is not good");
  return exists_v1_unchecked(s, u);
}

Borf exists_v(const Borf& s, const Borf& u, const Borf& w) {
  if (!rel_b(s, w)) throw ContractError("exists-v: s and w are not related");
  if (!rel_step(s, u)) throw ContractError("exists-v: s does not step to u");
  return exists_v_unchecked(s, u, w);
}

std::string_view obligation_name(Obligation o) {
  switch (o) {
    case Obligation::wfs1: return "WFS1";
    case Obligation::wfs2: return "WFS2";
    case Obligation::wfs3: return "WFS3";
  }
  return "?";
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not-applicable";
  }
  return "?";
}

Verdict check_wfs1(const fn::State& s, const CheckOptions& opts) {
  Verdict v = make(Obligation::wfs1);
  const Borf mapped = f2b(s);
  if (opts.check_preconditions && !fn::good_state(s)) {
    v.status = Status::not_applicable;
    v.diagnostics = "hypothesis good-s-fnp(s) does not hold";
  } else if (!rel_b(s, mapped)) {
    v.status = Status::fail;
    v.diagnostics = fn::good_state(s) ? "rel-B(s, f2b(s)) is false"
                                      : "rel-B(s, f2b(s)) is false: s is not a good state";
  }
  if (!v.passed()) v.subjects = {{"s", s}, {"w", mapped}};
  return v;
}

Verdict check_wfs2(const Borf& s, const Borf& w, const CheckOptions& opts) {
  Verdict v = make(Obligation::wfs2);
  if (opts.check_preconditions && !rel_b(s, w)) {
    v.status = Status::not_applicable;
    v.diagnostics = "hypothesis rel-B(s, w) does not hold";
  } else if (label(s) != label(w)) {
    v.status = Status::fail;
    v.diagnostics = "L(s) != L(w)";
  }
  if (!v.passed()) v.subjects = {{"s", s}, {"w", w}};
  return v;
}

Verdict check_wfs3(const Borf& s, const Borf& w, const Borf& u,
                   const CheckOptions& opts) {
  Verdict v = make(Obligation::wfs3);
  if (opts.check_preconditions) {
    if (!rel_b(s, w)) {
      v.status = Status::not_applicable;
      v.diagnostics = "hypothesis rel-B(s, w) does not hold";
    } else if (!rel_step(s, u)) {
      v.status = Status::not_applicable;
      v.diagnostics = "hypothesis rel->(s, u) does not hold";
    }
  }
  if (v.passed()) {
    try {
      Borf witness = exists_v_unchecked(s, u, w);
      if (opts.tamper_witness) opts.tamper_witness(witness);
      const bool steps = rel_step(w, witness);
      const bool related = rel_b(u, witness);
      if (!steps || !related) {
        v.status = Status::fail;
        v.diagnostics = !steps ? "rel->(w, v) is false" : "rel-B(u, v) is false";
        if (!steps && !related) v.diagnostics += "; rel-B(u, v) is false";
      }
      v.witness = std::move(witness);
    } catch (const ContractError& e) {
      v.status = Status::fail;
      v.diagnostics = std::string("witness construction failed: ") + e.what();
    }
  }
  if (!v.passed()) v.subjects = {{"s", s}, {"u", u}, {"w", w}};
  return v;
}

}  // namespace pubsub::refine
