#include "pubsub/harness/enumerate.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>

#include "pubsub/harness/generator.hpp"
#include "pubsub/harness/json_io.hpp"
#include "pubsub/refinement.hpp"

namespace pubsub::harness {

namespace {

template <class T>
std::vector<std::vector<T>> subsets(const std::vector<T>& items) {
  std::vector<std::vector<T>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
    std::vector<T> pick;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask & (std::size_t{1} << i)) pick.push_back(items[i]);
    }
    out.push_back(std::move(pick));
  }
  return out;
}

template <class T>
std::vector<std::vector<T>> arrangements(const std::vector<T>& items) {
  std::vector<std::vector<T>> out;
  std::vector<T> cur;
  std::vector<bool> used(items.size());
  std::function<void()> go = [&] {
    out.push_back(cur);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(items[i]);
      go();
      cur.pop_back();
      used[i] = false;
    }
  };
  go();
  return out;
}

std::vector<PeerId> ids_of(const Bounds& b) {
  std::vector<PeerId> out;
  for (std::uint64_t i = 0; i < b.peers; ++i) out.push_back(PeerId{i});
  return out;
}

std::vector<Message> sorted_pool(const Bounds& b) {
  return MessageSet::from_range(message_pool(b)).elements();
}

// Every map from topics to non-empty subsets of `others`.
std::vector<fn::TopicPeers> nsubs_maps(const std::vector<Topic>& topics,
                                       const std::vector<PeerId>& others) {
  std::vector<fn::TopicPeers> out{fn::TopicPeers{}};
  const auto peer_sets = subsets(others);
  for (const Topic& tp : topics) {
    std::vector<fn::TopicPeers> next;
    for (const fn::TopicPeers& m : out) {
      for (const auto& ps : peer_sets) {
        fn::TopicPeers ext = m;
        if (!ps.empty()) ext.set(tp, PeerSet::from_range(ps));
        next.push_back(std::move(ext));
      }
    }
    out = std::move(next);
  }
  return out;
}

// All maps assigning each peer of some subset of `ids` one of its choices.
template <class PS>
std::vector<OrderedMap<PeerId, PS>> product_states(
    const std::vector<PeerId>& ids, const std::function<std::vector<PS>(PeerId)>& choices) {
  std::vector<OrderedMap<PeerId, PS>> out;
  std::vector<std::vector<PS>> per_peer;
  for (PeerId p : ids) per_peer.push_back(choices(p));
  for (std::size_t mask = 0; mask < (std::size_t{1} << ids.size()); ++mask) {
    std::vector<OrderedMap<PeerId, PS>> partial{OrderedMap<PeerId, PS>{}};
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!(mask & (std::size_t{1} << i))) continue;
      std::vector<OrderedMap<PeerId, PS>> next;
      for (const auto& st : partial) {
        for (const PS& ps : per_peer[i]) {
          auto ext = st;
          ext.set(ids[i], ps);
          next.push_back(std::move(ext));
        }
      }
      partial = std::move(next);
    }
    for (auto& st : partial) out.push_back(std::move(st));
  }
  return out;
}

double count_arrangements(std::size_t m) {
  // sum over k of m! / (m-k)!
  double total = 0;
  double term = 1;
  for (std::size_t k = 0; k <= m; ++k) {
    total += term;
    term *= static_cast<double>(m - k);
  }
  return total;
}

std::string key_of(const fn::State& s) { return canonical(s); }
std::string key_of(const bn::State& s) { return to_json(s).dump(); }

class Tally {
 public:
  explicit Tally(CheckReport& r) : r_(r) {}

  void pass() { ++r_.totals.pass; }

  void fail(std::string check, std::size_t index, std::string diagnostics,
            std::vector<std::pair<std::string, refine::Borf>> states) {
    ++r_.totals.fail;
    if (!r_.counterexample) {
      r_.counterexample =
          Counterexample{std::move(check), 0, index, std::move(diagnostics), std::move(states)};
    }
  }

  void verdict(std::size_t index, const refine::Verdict& v) {
    if (v.passed()) {
      pass();
      return;
    }
    fail(std::string(refine::obligation_name(v.obligation)), index,
         std::string(refine::status_name(v.status)) + ": " + v.diagnostics, v.subjects);
  }

 private:
  CheckReport& r_;
};

// Shared driver: relation agreement, closure and per-successor checks.
template <class State>
nlohmann::json run_system(const std::vector<State>& universe, Tally& tally,
                          const std::function<std::vector<State>(const State&)>& successors,
                          const std::function<bool(const State&, const State&)>& rel,
                          const std::function<bool(const State&)>& good,
                          const std::function<void(std::size_t, const State&)>& check_state,
                          const std::function<void(std::size_t, const State&, const State&)>& check_pair) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index.emplace(key_of(universe[i]), i);

  std::size_t transitions = 0;
  std::size_t pairs = 0;
  std::vector<char> mark(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const State& s = universe[i];
    std::fill(mark.begin(), mark.end(), 0);
    check_state(i, s);
    for (const State& u : successors(s)) {
      ++transitions;
      if (!good(u)) {
        tally.fail("good-state-preservation", i, "an enabled transition leaves the good states",
                   {{"s", s}, {"u", u}});
      } else {
        tally.pass();
      }
      auto it = index.find(key_of(u));
      if (it == index.end()) {
        tally.fail("successor-closure", i, "successor lies outside the enumerated universe",
                   {{"s", s}, {"u", u}});
        continue;
      }
      if (mark[it->second]) continue;
      mark[it->second] = 1;
      check_pair(i, s, u);
    }
    for (std::size_t j = 0; j < universe.size(); ++j) {
      ++pairs;
      const bool related = rel(s, universe[j]);
      if (related == static_cast<bool>(mark[j])) {
        tally.pass();
        continue;
      }
      tally.fail("relation-agreement", i,
                 related ? "step relation accepts a state that no transition produces"
                         : "step relation rejects a successor",
                 {{"s", s}, {"u", universe[j]}});
    }
  }
  return {{"states", universe.size()}, {"transitions", transitions}, {"pairs", pairs}};
}

}  // namespace

CapExceeded::CapExceeded(std::string system, double estimate, double cap)
    : std::runtime_error(system + " universe has about " + std::to_string(std::llround(estimate)) +
                         " states, above the cap of " + std::to_string(std::llround(cap))),
      estimate_(estimate) {}

std::vector<Message> message_pool(const Bounds& b) {
  if (b.messages > 0 && b.topics == 0) {
    throw std::invalid_argument("messages need at least one topic");
  }
  const std::vector<Topic> topics = topic_pool(b.topics);
  std::vector<Message> out;
  for (std::size_t i = 0; i < b.messages; ++i) {
    out.push_back(Message{"m" + std::to_string(i), topics[i % b.topics],
                          PeerId{i % std::max<std::size_t>(b.peers, 1)}});
  }
  return out;
}

double estimate_fn_states(const Bounds& b) {
  const double t = std::pow(2.0, static_cast<double>(b.topics));
  const double others = b.peers == 0 ? 0.0 : static_cast<double>(b.peers - 1);
  const double per_peer = t * t * std::pow(2.0, others * static_cast<double>(b.topics)) *
                          count_arrangements(b.messages) *
                          std::pow(2.0, static_cast<double>(b.messages));
  return std::pow(1.0 + per_peer, static_cast<double>(b.peers));
}

double estimate_bn_states(const Bounds& b) {
  const double t = std::pow(2.0, static_cast<double>(b.topics));
  const double per_peer = t * t * std::pow(2.0, static_cast<double>(b.messages));
  return std::pow(1.0 + per_peer, static_cast<double>(b.peers));
}

std::vector<fn::State> fn_universe(const Bounds& b) {
  const std::vector<PeerId> ids = ids_of(b);
  const auto topic_sets = subsets(topic_pool(b.topics));
  const auto pool = sorted_pool(b);
  const auto pendings = arrangements(pool);
  const auto seens = subsets(pool);
  return product_states<fn::PeerState>(ids, [&](PeerId p) {
    std::vector<PeerId> others;
    for (PeerId q : ids) {
      if (q != p) others.push_back(q);
    }
    std::vector<fn::PeerState> out;
    for (const auto& pubs : topic_sets) {
      for (const auto& subs : topic_sets) {
        for (const auto& nsubs : nsubs_maps(topic_pool(b.topics), others)) {
          for (const auto& pending : pendings) {
            for (const auto& seen : seens) {
              out.push_back(fn::PeerState{TopicSet::from_range(pubs), TopicSet::from_range(subs),
                                          nsubs, pending, MessageSet::from_range(seen)});
            }
          }
        }
      }
    }
    return out;
  });
}

std::vector<bn::State> bn_universe(const Bounds& b) {
  const auto topic_sets = subsets(topic_pool(b.topics));
  const auto seens = subsets(sorted_pool(b));
  return product_states<bn::PeerState>(ids_of(b), [&](PeerId) {
    std::vector<bn::PeerState> out;
    for (const auto& pubs : topic_sets) {
      for (const auto& subs : topic_sets) {
        for (const auto& seen : seens) {
          out.push_back(bn::PeerState{TopicSet::from_range(pubs), TopicSet::from_range(subs),
                                      MessageSet::from_range(seen)});
        }
      }
    }
    return out;
  });
}

std::vector<fn::State> fn_successors(const fn::State& s, const Bounds& b) {
  const std::vector<Topic> topics = topic_pool(b.topics);
  const auto topic_sets = subsets(topics);
  std::vector<fn::State> out{s};
  for (const Message& m : message_pool(b)) {
    if (fn::produce_pre(m, s)) out.push_back(fn::produce(m, s));
  }
  for (const Message& m : fn::pending_messages(s)) {
    out.push_back(fn::forward(fn::find_forwarder(s, m), m, s));
  }
  for (const auto& [p, pst] : s) {
    for (const auto& ts : topic_sets) {
      if (ts.empty()) continue;
      out.push_back(fn::subscribe(p, ts, s));
      out.push_back(fn::unsubscribe(p, ts, s));
    }
    if (pst.pending.empty()) out.push_back(fn::leave(p, s));
  }
  const auto nbr_sets = subsets(s.keys());
  for (PeerId p : ids_of(b)) {
    if (s.contains(p)) continue;
    for (const auto& pubs : topic_sets) {
      for (const auto& subs : topic_sets) {
        for (const auto& nbrs : nbr_sets) {
          out.push_back(fn::join(p, TopicSet::from_range(pubs), TopicSet::from_range(subs),
                                 PeerSet::from_range(nbrs), s));
        }
      }
    }
  }
  return out;
}

std::vector<bn::State> bn_successors(const bn::State& s, const Bounds& b) {
  const std::vector<Topic> topics = topic_pool(b.topics);
  const auto topic_sets = subsets(topics);
  const auto receiver_sets = subsets(s.keys());
  std::vector<bn::State> out{s};
  for (const Message& m : message_pool(b)) {
    if (bn::broadcast_pre(m, s)) out.push_back(bn::broadcast(m, s));
    if (!bn::new_message(m, s)) continue;
    for (const auto& rs : receiver_sets) {
      if (!rs.empty()) out.push_back(bn::broadcast_partial(m, rs, s));
    }
  }
  for (const auto& [p, pst] : s) {
    for (const auto& ts : topic_sets) {
      if (ts.empty()) continue;
      out.push_back(bn::subscribe(p, ts, s));
      out.push_back(bn::unsubscribe(p, ts, s));
    }
    out.push_back(bn::leave(p, s));
  }
  for (PeerId p : ids_of(b)) {
    if (s.contains(p)) continue;
    for (const auto& pubs : topic_sets) {
      for (const auto& subs : topic_sets) {
        out.push_back(bn::join(p, TopicSet::from_range(pubs), TopicSet::from_range(subs), s));
      }
    }
  }
  return out;
}

CheckReport enumerate_oracle(const Bounds& b, const EnumerateOptions& opts) {
  if (opts.floodnet && estimate_fn_states(b) > opts.cap) {
    throw CapExceeded("Floodnet", estimate_fn_states(b), opts.cap);
  }
  if (opts.broadcastnet && estimate_bn_states(b) > opts.cap) {
    throw CapExceeded("Broadcastnet", estimate_bn_states(b), opts.cap);
  }
  const auto start = std::chrono::steady_clock::now();
  CheckReport r;
  Tally tally(r);
  r.config = {{"mode", "enumerate"}, {"peers", b.peers}, {"topics", b.topics},
              {"messages", b.messages}};

  if (opts.floodnet) {
    r.stats["floodnet"] = run_system<fn::State>(
        fn_universe(b), tally, [&](const fn::State& s) { return fn_successors(s, b); },
        [](const fn::State& s, const fn::State& u) { return fn::rel_step(s, u); },
        [](const fn::State& u) { return fn::good_state(u); },
        [&](std::size_t i, const fn::State& s) {
          tally.verdict(i, refine::check_wfs1(s));
          tally.verdict(i, refine::check_wfs2(s, refine::f2b(s)));
        },
        [&](std::size_t i, const fn::State& s, const fn::State& u) {
          tally.verdict(i, refine::check_wfs1(u));
          tally.verdict(i, refine::check_wfs3(s, refine::f2b(s), u));
        });
  }
  if (opts.broadcastnet) {
    r.stats["broadcastnet"] = run_system<bn::State>(
        bn_universe(b), tally, [&](const bn::State& s) { return bn_successors(s, b); },
        [](const bn::State& s, const bn::State& u) { return bn::rel_step(s, u); },
        [](const bn::State& u) { return bn::well_formed(u); },
        [&](std::size_t i, const bn::State& s) { tally.verdict(i, refine::check_wfs2(s, s)); },
        [&](std::size_t i, const bn::State& s, const bn::State& u) {
          tally.verdict(i, refine::check_wfs3(s, s, u));
        });
  }
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace pubsub::harness
