#include "pubsub/broadcastnet.hpp"

#include <algorithm>
#include <string>

namespace pubsub::bn {

std::string_view step_name(Step k) {
  switch (k) {
    case Step::skip: return "skip";
    case Step::broadcast: return "broadcast";
    case Step::broadcast_partial: return "broadcast-partial";
    case Step::subscribe: return "subscribe";
    case Step::unsubscribe: return "unsubscribe";
    case Step::leave: return "leave";
    case Step::join: return "join";
  }
  return "?";
}

std::string_view describe(BroadcastPre pre) {
  switch (pre) {
    case BroadcastPre::ok: return "ok";
    case BroadcastPre::stale_message: return "message already seen by some peer";
    case BroadcastPre::missing_origin: return "origin peer not in state";
    case BroadcastPre::not_publisher: return "origin does not publish the message topic";
  }
  return "?";
}

bool new_message(const Message& m, const State& s) {
  return std::none_of(s.begin(), s.end(),
                      [&](const auto& e) { return e.second.seen.contains(m); });
}

BroadcastPre check_broadcast_pre(const Message& m, const State& s) {
  if (!new_message(m, s)) return BroadcastPre::stale_message;
  const PeerState* origin = s.find(m.origin);
  if (origin == nullptr) return BroadcastPre::missing_origin;
  if (!origin->pubs.contains(m.topic)) return BroadcastPre::not_publisher;
  return BroadcastPre::ok;
}

State broadcast(const Message& m, State s) {
  if (auto pre = check_broadcast_pre(m, s); pre != BroadcastPre::ok) {
    throw ContractError("broadcast " + to_string(m) + ": " +
                        std::string(describe(pre)));
  }
  s.for_each_value([&](PeerId p, PeerState& pst) {
    if (pst.subs.contains(m.topic) || p == m.origin) {
      pst.seen = insert_unique(m, pst.seen);
    }
  });
  return s;
}

State broadcast_partial(const Message& m, std::span<const PeerId> receivers,
                        State s) {
  if (!new_message(m, s)) {
    throw ContractError("broadcast-partial " + to_string(m) +
                        ": message already seen by some peer");
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (i > 0 && !(receivers[i - 1] < receivers[i])) {
      throw ContractError("broadcast-partial: receivers not strictly ascending");
    }
    if (!s.contains(receivers[i])) {
      throw ContractError("broadcast-partial: receiver " +
                          to_string(receivers[i]) + " not in state");
    }
  }
  for (PeerId p : receivers) {
    PeerState* pst = s.find(p);
    pst->seen = insert_unique(m, pst->seen);
  }
  return s;
}

std::vector<PeerId> receivers(const Message& m, const State& s) {
  std::vector<PeerId> out;
  for (const auto& [p, pst] : s) {
    if (pst.seen.contains(m)) out.push_back(p);
  }
  return out;
}

State subscribe(PeerId p, std::span<const Topic> topics, State s) {
  PeerState* pst = s.find(p);
  if (pst == nullptr) {
    throw ContractError("subscribe: peer " + to_string(p) + " not in state");
  }
  pst->subs = union_set(
      pst->subs, TopicSet::from_range({topics.begin(), topics.end()}));
  return s;
}

State unsubscribe(PeerId p, std::span<const Topic> topics, State s) {
  PeerState* pst = s.find(p);
  if (pst == nullptr) {
    throw ContractError("unsubscribe: peer " + to_string(p) + " not in state");
  }
  pst->subs = TopicSet::unchecked(set_difference(pst->subs.view(), topics));
  return s;
}

State join(PeerId p, TopicSet pubs, TopicSet subs, State s) {
  if (s.contains(p)) {
    throw ContractError("join: peer " + to_string(p) + " already in state");
  }
  s.set(p, PeerState{std::move(pubs), std::move(subs), {}});
  return s;
}

State leave(PeerId p, State s) {
  if (!s.erase(p)) {
    throw ContractError("leave: peer " + to_string(p) + " not in state");
  }
  return s;
}

std::optional<Message> broadcast_witness(const State& s, const State& u) {
  auto se = s.entries();
  auto ue = u.entries();
  for (std::size_t i = 0; i < se.size() && i < ue.size(); ++i) {
    if (se[i] == ue[i]) continue;
    auto diff = set_difference(ue[i].second.seen.view(), se[i].second.seen.view());
    if (diff.empty()) return std::nullopt;
    return diff.front();
  }
  return std::nullopt;
}

std::optional<std::pair<PeerId, std::vector<Topic>>> topics_witness(
    const State& s, const State& u) {
  auto se = s.entries();
  auto ue = u.entries();
  for (std::size_t i = 0; i < se.size() && i < ue.size(); ++i) {
    if (se[i] == ue[i]) continue;
    if (se[i].first != ue[i].first) return std::nullopt;
    auto diff = set_difference(ue[i].second.subs.view(), se[i].second.subs.view());
    if (diff.empty()) return std::nullopt;
    return std::pair{se[i].first, std::move(diff)};
  }
  return std::nullopt;
}

std::optional<std::pair<PeerId, PeerState>> join_witness(const State& s,
                                                         const State& u) {
  auto se = s.entries();
  auto ue = u.entries();
  std::size_t i = 0;
  for (; i < se.size() && i < ue.size(); ++i) {
    if (se[i] == ue[i]) continue;
    if (se[i].first != ue[i].first) return ue[i];  // joining peer
    return std::nullopt;
  }
  if (i == se.size() && i < ue.size()) return ue[i];
  return std::nullopt;
}

bool rel_skip(const State& s, const State& u) { return u == s; }

bool rel_broadcast(const State& s, const State& u) {
  auto m = broadcast_witness(s, u);
  return m && broadcast_pre(*m, s) && u == broadcast(*m, s);
}

bool rel_broadcast_partial(const State& s, const State& u) {
  auto m = broadcast_witness(s, u);
  if (!m || !new_message(*m, s)) return false;
  auto ps = receivers(*m, u);
  // A receiver missing from s can never be reproduced from s.
  if (!std::all_of(ps.begin(), ps.end(), [&](PeerId p) { return s.contains(p); })) {
    return false;
  }
  return u == broadcast_partial(*m, ps, s);
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
  return w && s.contains(w->first) && u == leave(w->first, s);
}

bool rel_join(const State& s, const State& u) {
  auto w = join_witness(s, u);
  if (!w) return false;
  const auto& [p, pst] = *w;
  return !s.contains(p) && u == join(p, pst.pubs, pst.subs, s);
}

StepMatch match_step(const State& s, const State& u) {
  StepMatch out;
  if (rel_skip(s, u)) out.insert(Step::skip);
  if (rel_broadcast(s, u)) out.insert(Step::broadcast);
  if (rel_broadcast_partial(s, u)) out.insert(Step::broadcast_partial);
  if (rel_subscribe(s, u)) out.insert(Step::subscribe);
  if (rel_unsubscribe(s, u)) out.insert(Step::unsubscribe);
  if (rel_leave(s, u)) out.insert(Step::leave);
  if (rel_join(s, u)) out.insert(Step::join);
  return out;
}

bool rel_step(const State& s, const State& u) {
  return rel_skip(s, u) || rel_broadcast(s, u) || rel_broadcast_partial(s, u) ||
         rel_subscribe(s, u) || rel_unsubscribe(s, u) || rel_leave(s, u) ||
         rel_join(s, u);
}

bool well_formed(const State& s) {
  return std::all_of(s.begin(), s.end(), [](const auto& e) {
    return e.second.pubs.is_ordered() && e.second.subs.is_ordered() &&
           e.second.seen.is_ordered();
  });
}

}  // namespace pubsub::bn
