#include "pubsub/floodnet.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace pubsub::fn {

namespace {

constexpr std::array<std::string_view, kStepCount> kStepNames = {
    "skip", "produce", "forward", "subscribe", "unsubscribe", "leave", "join"};

bool in(const Message& m, const std::vector<Message>& ms) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

bool tracks(const PeerState& pst, PeerId p) {
  return std::any_of(pst.nsubs.begin(), pst.nsubs.end(),
                     [&](const auto& e) { return e.second.contains(p); });
}

PeerState& expect_peer(State& s, PeerId p, std::string_view op) {
  PeerState* pst = s.find(p);
  if (pst == nullptr) {
    throw ContractError(std::string(op) + ": peer " + to_string(p) + " not in state");
  }
  return *pst;
}

}  // namespace

std::string_view step_name(Step k) {
  return kStepNames[static_cast<std::size_t>(k)];
}

std::optional<Step> parse_step(std::string_view name) {
  for (std::size_t i = 0; i < kStepNames.size(); ++i) {
    if (kStepNames[i] == name) return static_cast<Step>(i);
  }
  return std::nullopt;
}

std::string_view describe(ProducePre pre) {
  switch (pre) {
    case ProducePre::ok: return "ok";
    case ProducePre::stale_message: return "message already pending or seen";
    case ProducePre::missing_origin: return "origin peer not in state";
    case ProducePre::not_publisher: return "origin does not publish the message topic";
  }
  return "?";
}

MessageSet pending_messages(const State& s) {
  std::vector<Message> all;
  for (const auto& [p, pst] : s) {
    all.insert(all.end(), pst.pending.begin(), pst.pending.end());
  }
  return MessageSet::from_range(std::move(all));
}

bool new_message(const Message& m, const State& s) {
  return std::none_of(s.begin(), s.end(), [&](const auto& e) {
    return e.second.seen.contains(m) || in(m, e.second.pending);
  });
}

ProducePre check_produce_pre(const Message& m, const State& s) {
  if (!new_message(m, s)) return ProducePre::stale_message;
  const PeerState* origin = s.find(m.origin);
  if (origin == nullptr) return ProducePre::missing_origin;
  if (!origin->pubs.contains(m.topic)) return ProducePre::not_publisher;
  return ProducePre::ok;
}

PeerState add_pending(const Message& m, PeerState pst) {
  if (in(m, pst.pending) || pst.seen.contains(m)) return pst;
  pst.pending.insert(pst.pending.begin(), m);
  return pst;
}

State produce(const Message& m, State s) {
  if (auto pre = check_produce_pre(m, s); pre != ProducePre::ok) {
    throw ContractError("produce " + to_string(m) + ": " + std::string(describe(pre)));
  }
  PeerState& origin = *s.find(m.origin);
  origin = add_pending(m, std::move(origin));
  return s;
}

PeerState forwarder_state(PeerState pst, const Message& m) {
  std::erase(pst.pending, m);
  pst.seen = insert_unique(m, pst.seen);
  return pst;
}

State forward(PeerId p, const Message& m, State s) {
  PeerState& forwarder = expect_peer(s, p, "forward");
  if (!in(m, forwarder.pending)) {
    throw ContractError("forward: " + to_string(m) + " not pending at peer " +
                        to_string(p));
  }
  PeerSet targets;
  if (const PeerSet* nbrs = forwarder.nsubs.find(m.topic)) targets = *nbrs;
  forwarder = forwarder_state(std::move(forwarder), m);
  s.for_each_value([&](PeerId q, PeerState& qst) {
    if (targets.contains(q)) qst = add_pending(m, std::move(qst));
  });
  return s;
}

PeerId find_forwarder(const State& s, const Message& m) {
  if (!pending_messages(s).contains(m)) {
    throw ContractError("find-forwarder: " + to_string(m) + " is not pending anywhere");
  }
  auto entries = s.entries();
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    if (in(m, entries[i].second.pending)) return entries[i].first;
  }
  return entries.back().first;
}

State subscribe(PeerId p, std::span<const Topic> topics, State s) {
  PeerState& pst = expect_peer(s, p, "subscribe");
  const TopicSet added = set_difference(TopicSet::from_range({topics.begin(), topics.end()}), pst.subs);
  pst.subs = union_set(pst.subs, added);
  s.for_each_value([&](PeerId q, PeerState& qst) {
    if (q == p || !tracks(qst, p)) return;
    for (const Topic& tp : added) {
      const PeerSet* cur = qst.nsubs.find(tp);
      qst.nsubs.set(tp, insert_unique(p, cur ? *cur : PeerSet{}));
    }
  });
  return s;
}

State unsubscribe(PeerId p, std::span<const Topic> topics, State s) {
  PeerState& pst = expect_peer(s, p, "unsubscribe");
  std::vector<Topic> removed;
  for (const Topic& tp : pst.subs) {
    if (std::find(topics.begin(), topics.end(), tp) != topics.end()) removed.push_back(tp);
  }
  pst.subs = TopicSet::unchecked(set_difference<Topic>(pst.subs.view(), removed));
  s.for_each_value([&](PeerId q, PeerState& qst) {
    if (q == p || !tracks(qst, p)) return;
    for (const Topic& tp : removed) {
      const PeerSet* cur = qst.nsubs.find(tp);
      if (cur == nullptr) continue;
      auto rest = PeerSet::unchecked(set_difference<PeerId>(cur->view(), std::span(&p, 1)));
      if (rest.empty()) {
        qst.nsubs.erase(tp);
      } else {
        qst.nsubs.set(tp, std::move(rest));
      }
    }
  });
  return s;
}

PeerSet effective_neighbors(const PeerSet& nbrs, const State& s) {
  std::vector<PeerId> out;
  for (PeerId q : nbrs) {
    const PeerState* qst = s.find(q);
    if (qst != nullptr && !qst->subs.empty()) out.push_back(q);
  }
  return PeerSet::unchecked(std::move(out));
}

PeerState joinee_state(TopicSet pubs, TopicSet subs, const PeerSet& nbrs,
                       const State& s) {
  PeerState out{std::move(pubs), std::move(subs), {}, {}, {}};
  for (PeerId q : effective_neighbors(nbrs, s)) {
    for (const Topic& tp : s.at(q).subs) {
      const PeerSet* cur = out.nsubs.find(tp);
      out.nsubs.set(tp, insert_unique(q, cur ? *cur : PeerSet{}));
    }
  }
  return out;
}

State join(PeerId p, TopicSet pubs, TopicSet subs, const PeerSet& nbrs, State s) {
  if (s.contains(p)) {
    throw ContractError("join: peer " + to_string(p) + " already in state");
  }
  if (nbrs.contains(p)) {
    throw ContractError("join: peer " + to_string(p) + " listed among its own neighbors");
  }
  const PeerSet linked = effective_neighbors(nbrs, s);
  PeerState joinee = joinee_state(std::move(pubs), subs, nbrs, s);
  for (PeerId q : linked) {
    PeerState& qst = *s.find(q);
    for (const Topic& tp : subs) {
      const PeerSet* cur = qst.nsubs.find(tp);
      qst.nsubs.set(tp, insert_unique(p, cur ? *cur : PeerSet{}));
    }
  }
  s.set(p, std::move(joinee));
  return s;
}

State leave(PeerId p, State s) {
  if (!s.erase(p)) {
    throw ContractError("leave: peer " + to_string(p) + " not in state");
  }
  return s;
}

PeerSet neighbors_of(const TopicPeers& nsubs) {
  std::vector<PeerId> all;
  for (const auto& [tp, peers] : nsubs) {
    all.insert(all.end(), peers.begin(), peers.end());
  }
  return PeerSet::from_range(std::move(all));
}

std::optional<std::pair<PeerId, PeerState>> join_witness(const State& s,
                                                         const State& u) {
  auto se = s.entries();
  auto ue = u.entries();
  std::size_t i = 0;
  for (; i < se.size() && i < ue.size(); ++i) {
    if (se[i].first != ue[i].first) return ue[i];
  }
  if (i == se.size() && i < ue.size()) return ue[i];
  return std::nullopt;
}

std::optional<std::pair<PeerId, std::vector<Topic>>> topics_witness(
    const State& s, const State& u) {
  auto se = s.entries();
  auto ue = u.entries();
  for (std::size_t i = 0; i < se.size() && i < ue.size(); ++i) {
    if (se[i].first != ue[i].first) return std::nullopt;
    if (se[i].second.subs == ue[i].second.subs) continue;
    auto diff = set_difference(ue[i].second.subs.view(), se[i].second.subs.view());
    if (diff.empty()) return std::nullopt;
    return std::pair{se[i].first, std::move(diff)};
  }
  return std::nullopt;
}

bool rel_skip(const State& s, const State& u) { return u == s; }

bool rel_produce(const State& s, const State& u) {
  for (const Message& m : pending_messages(u)) {
    if (produce_pre(m, s) && u == produce(m, s)) return true;
  }
  return false;
}

bool rel_forward(const State& s, const State& u) {
  for (const Message& m : pending_messages(s)) {
    if (u == forward(find_forwarder(s, m), m, s)) return true;
  }
  return false;
}

bool rel_subscribe(const State& s, const State& u) {
  auto w = topics_witness(s, u);
  return w && s.contains(w->first) && u == subscribe(w->first, w->second, s);
}

bool rel_unsubscribe(const State& s, const State& u) {
  auto w = topics_witness(u, s);
  return w && s.contains(w->first) && u == unsubscribe(w->first, w->second, s);
}

bool rel_leave(const State& s, const State& u) {
  auto w = join_witness(u, s);
  if (!w) return false;
  const PeerState* pst = s.find(w->first);
  // Graceful exit: nothing in flight is lost with the leaving peer.
  return pst != nullptr && pst->pending.empty() && u == leave(w->first, s);
}

bool rel_join(const State& s, const State& u) {
  auto w = join_witness(s, u);
  if (!w) return false;
  const auto& [p, pst] = *w;
  const PeerSet nbrs = neighbors_of(pst.nsubs);
  return !s.contains(p) && !nbrs.contains(p) &&
         u == join(p, pst.pubs, pst.subs, nbrs, s);
}

StepMatch match_step(const State& s, const State& u) {
  StepMatch out;
  if (rel_skip(s, u)) out.insert(Step::skip);
  if (rel_produce(s, u)) out.insert(Step::produce);
  if (rel_forward(s, u)) out.insert(Step::forward);
  if (rel_subscribe(s, u)) out.insert(Step::subscribe);
  if (rel_unsubscribe(s, u)) out.insert(Step::unsubscribe);
  if (rel_leave(s, u)) out.insert(Step::leave);
  if (rel_join(s, u)) out.insert(Step::join);
  return out;
}

bool rel_step(const State& s, const State& u) {
  return rel_skip(s, u) || rel_produce(s, u) || rel_forward(s, u) ||
         rel_subscribe(s, u) || rel_unsubscribe(s, u) || rel_leave(s, u) ||
         rel_join(s, u);
}

bool no_self_tracking(const State& s) {
  return std::none_of(s.begin(), s.end(),
                      [](const auto& e) { return tracks(e.second, e.first); });
}

bool seen_ordered(const State& s) {
  return std::all_of(s.begin(), s.end(),
                     [](const auto& e) { return e.second.seen.is_ordered(); });
}

}  // namespace pubsub::fn
