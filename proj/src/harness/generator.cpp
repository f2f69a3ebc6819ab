#include "pubsub/harness/generator.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

#include "pubsub/harness/json_io.hpp"

namespace pubsub::harness {

namespace {

bool churn_kind(fn::Step k) {
  return k == fn::Step::subscribe || k == fn::Step::unsubscribe || k == fn::Step::join ||
         k == fn::Step::leave;
}

template <class T>
std::vector<T> random_subset(std::span<const T> items, Rng& rng, bool non_empty) {
  std::vector<T> out;
  for (const T& x : items) {
    if (rng.chance(1, 2)) out.push_back(x);
  }
  if (non_empty && out.empty() && !items.empty()) out.push_back(rng.pick(items));
  return out;
}

std::vector<PeerId> sample_distinct(std::vector<PeerId> pool, std::size_t n, Rng& rng) {
  for (std::size_t i = 0; i < n && i < pool.size(); ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(std::min(n, pool.size()));
  return pool;
}

std::string payload(std::size_t k) { return "m" + std::to_string(k); }

void track(fn::PeerState& pst, const Topic& tp, PeerId q) {
  const PeerSet* cur = pst.nsubs.find(tp);
  pst.nsubs.set(tp, insert_unique(q, cur ? *cur : PeerSet{}));
}

// nsubs(p)[tp] = neighbors of p subscribed to tp.
void wire_overlay(fn::State& s, const std::map<std::uint64_t, std::vector<PeerId>>& adj) {
  s.for_each_value([&](PeerId p, fn::PeerState& pst) {
    auto it = adj.find(p.value);
    if (it == adj.end()) return;
    for (PeerId q : it->second) {
      for (const Topic& tp : s.at(q).subs) track(pst, tp, q);
    }
  });
}

TraceEvent traced(std::size_t index, Event e, const fn::State& pre, const fn::State& post) {
  return TraceEvent{index, std::move(e), digest(pre), digest(post)};
}

}  // namespace

unsigned GeneratorConfig::effective_weight(fn::Step k) const {
  if (static_mode && churn_kind(k)) return 0;
  return weights[static_cast<std::size_t>(k)];
}

void GeneratorConfig::validate() const {
  unsigned total = 0;
  for (std::size_t i = 0; i < fn::kStepCount; ++i) total += effective_weight(static_cast<fn::Step>(i));
  if (total == 0) throw std::invalid_argument("at least one transition weight must be positive");
}

nlohmann::json GeneratorConfig::to_json() const {
  nlohmann::json w = nlohmann::json::object();
  for (std::size_t i = 0; i < fn::kStepCount; ++i) {
    w[std::string(fn::step_name(static_cast<fn::Step>(i)))] = weights[i];
  }
  return {{"max_peers", max_peers}, {"max_topics", max_topics},
          {"max_messages", max_messages}, {"steps", steps},
          {"seed", seed}, {"weights", std::move(w)}, {"static", static_mode}};
}

Weights parse_weights(std::string_view text, Weights base) {
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("weight \"" + std::string(item) + "\" is not of the form kind=value");
    }
    auto kind = fn::parse_step(item.substr(0, eq));
    if (!kind) throw std::invalid_argument("unknown transition kind \"" + std::string(item.substr(0, eq)) + "\"");
    const std::string value(item.substr(eq + 1));
    std::size_t used = 0;
    unsigned long w = 0;
    try {
      w = std::stoul(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || value[0] == '-') {
      throw std::invalid_argument("weight \"" + value + "\" is not a non-negative integer");
    }
    base[static_cast<std::size_t>(*kind)] = static_cast<unsigned>(w);
  }
  return base;
}

std::vector<PeerId> peer_universe(const GeneratorConfig& cfg) {
  std::vector<PeerId> out;
  for (std::uint64_t i = 0; i < 2 * cfg.max_peers; ++i) out.push_back(PeerId{i});
  return out;
}

std::vector<Topic> topic_pool(std::size_t n) {
  std::vector<Topic> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back("t" + std::to_string(i));
  return out;
}

fn::State gen_good_state(const GeneratorConfig& cfg, Rng& rng) {
  const std::vector<PeerId> universe = peer_universe(cfg);
  const std::vector<Topic> topics = topic_pool(cfg.max_topics);
  const std::vector<PeerId> ids = sample_distinct(universe, rng.below(cfg.max_peers + 1), rng);

  fn::State s;
  for (PeerId p : ids) {
    fn::PeerState pst;
    pst.pubs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
    pst.subs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
    s.set(p, std::move(pst));
  }

  std::map<std::uint64_t, std::vector<PeerId>> adj;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (rng.chance(1, 2)) {
        adj[ids[i].value].push_back(ids[j]);
        adj[ids[j].value].push_back(ids[i]);
      }
    }
  }
  wire_overlay(s, adj);

  // Stale entries: departed peers or peers that have since unsubscribed.
  if (!topics.empty() && universe.size() > 1) {
    s.for_each_value([&](PeerId p, fn::PeerState& pst) {
      if (!rng.chance(1, 8)) return;
      PeerId q = rng.pick<PeerId>(universe);
      if (q != p) track(pst, rng.pick<Topic>(topics), q);
    });
  }

  if (!topics.empty() && !ids.empty()) {
    for (std::size_t k = 0; k < cfg.max_messages; ++k) {
      if (!rng.chance(1, 2)) continue;
      const Message m{payload(k), rng.pick<Topic>(topics), rng.pick<PeerId>(universe)};
      s.for_each_value([&](PeerId, fn::PeerState& pst) {
        if (rng.chance(1, 4)) {
          pst.pending.insert(pst.pending.begin() + rng.below(pst.pending.size() + 1), m);
        }
        if (rng.chance(1, 4)) pst.seen = insert_unique(m, pst.seen);
      });
    }
  }
  return s;
}

Event gen_enabled_event(const fn::State& s, const GeneratorConfig& cfg, Rng& rng) {
  unsigned total = 0;
  for (std::size_t i = 0; i < fn::kStepCount; ++i) total += cfg.effective_weight(static_cast<fn::Step>(i));
  if (total == 0) return Event{};
  std::uint64_t roll = rng.below(total);
  fn::Step kind = fn::Step::skip;
  for (std::size_t i = 0; i < fn::kStepCount; ++i) {
    const unsigned w = cfg.effective_weight(static_cast<fn::Step>(i));
    if (roll < w) {
      kind = static_cast<fn::Step>(i);
      break;
    }
    roll -= w;
  }

  const std::vector<Topic> topics = topic_pool(cfg.max_topics);
  auto peers_where = [&](auto pred) {
    std::vector<PeerId> out;
    for (const auto& [p, pst] : s) {
      if (pred(pst)) out.push_back(p);
    }
    return out;
  };

  Event e;
  e.kind = kind;
  switch (kind) {
    case fn::Step::skip:
      return e;
    case fn::Step::produce: {
      auto publishers = peers_where([](const fn::PeerState& pst) { return !pst.pubs.empty(); });
      if (publishers.empty() || cfg.max_messages == 0) break;
      for (int attempt = 0; attempt < 8; ++attempt) {
        const PeerId p = rng.pick<PeerId>(publishers);
        Message m{payload(rng.below(cfg.max_messages)), rng.pick(s.at(p).pubs.view()), p};
        if (fn::produce_pre(m, s)) {
          e.message = std::move(m);
          return e;
        }
      }
      break;
    }
    case fn::Step::forward: {
      const MessageSet pending = fn::pending_messages(s);
      if (pending.empty()) break;
      const Message& m = rng.pick(pending.view());
      e.peer = fn::find_forwarder(s, m);
      e.message = m;
      return e;
    }
    case fn::Step::subscribe: {
      auto candidates = peers_where([&](const fn::PeerState& pst) {
        return pst.subs.size() < topics.size();
      });
      if (candidates.empty()) break;
      e.peer = rng.pick<PeerId>(candidates);
      const TopicSet missing = TopicSet::unchecked(set_difference<Topic>(topics, s.at(*e.peer).subs.view()));
      e.topics = random_subset(missing.view(), rng, true);
      return e;
    }
    case fn::Step::unsubscribe: {
      auto candidates = peers_where([](const fn::PeerState& pst) { return !pst.subs.empty(); });
      if (candidates.empty()) break;
      e.peer = rng.pick<PeerId>(candidates);
      e.topics = random_subset(s.at(*e.peer).subs.view(), rng, true);
      return e;
    }
    case fn::Step::join: {
      if (s.size() >= cfg.max_peers) break;
      std::vector<PeerId> fresh;
      for (PeerId p : peer_universe(cfg)) {
        if (!s.contains(p)) fresh.push_back(p);
      }
      if (fresh.empty()) break;
      e.peer = rng.pick<PeerId>(fresh);
      e.pubs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
      e.subs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
      const std::vector<PeerId> keys = s.keys();
      std::vector<PeerId> nbrs = random_subset<PeerId>(keys, rng, false);
      if (rng.chance(1, 8)) {
        PeerId stale = rng.pick<PeerId>(fresh);
        if (stale != *e.peer) nbrs.push_back(stale);
      }
      e.nbrs = PeerSet::from_range(std::move(nbrs));
      return e;
    }
    case fn::Step::leave: {
      auto candidates = peers_where([](const fn::PeerState& pst) { return pst.pending.empty(); });
      if (candidates.empty()) break;
      e.peer = rng.pick<PeerId>(candidates);
      return e;
    }
  }
  return Event{};
}

GeneratedTrace gen_trace(const GeneratorConfig& cfg, Rng& rng) {
  GeneratedTrace out;
  out.initial = gen_good_state(cfg, rng);
  out.states.push_back(out.initial);
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    Event e = gen_enabled_event(out.states.back(), cfg, rng);
    fn::State next = apply_event(out.states.back(), e);
    out.events.push_back(traced(i, std::move(e), out.states.back(), next));
    out.states.push_back(std::move(next));
  }
  return out;
}

CheckReport run_fuzz(const FuzzConfig& cfg) {
  cfg.gen.validate();
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  std::map<std::string, std::size_t> fn_kinds;
  std::map<std::string, std::size_t> bn_kinds;
  for (std::size_t t = 0; t < cfg.traces; ++t) {
    Rng rng(derive_seed(cfg.gen.seed, t));
    GeneratedTrace trace = gen_trace(cfg.gen, rng);
    CheckReport r = check_trace_refinement(trace.states, {}, t);
    for (const StepRecord& rec : r.steps) {
      if (rec.fn_kind) ++fn_kinds[std::string(fn::step_name(*rec.fn_kind))];
      if (!rec.bn_match.empty()) ++bn_kinds[std::string(bn::step_name(rec.bn_match.front()))];
    }
    report.merge(std::move(r));
  }
  report.config = cfg.gen.to_json();
  report.config["mode"] = "fuzz";
  report.config["traces"] = cfg.traces;
  report.stats = {{"floodnet_steps", fn_kinds}, {"broadcastnet_matches", bn_kinds}};
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::optional<ForwardInstance> gen_forward_instance(const GeneratorConfig& cfg, Rng& rng) {
  fn::State s = gen_good_state(cfg, rng);
  std::vector<std::pair<PeerId, Message>> holders;
  for (const auto& [p, pst] : s) {
    for (const Message& m : pst.pending) holders.emplace_back(p, m);
  }
  if (holders.empty()) return std::nullopt;
  auto [p, m] = holders[rng.below(holders.size())];
  return ForwardInstance{p, std::move(m), std::move(s)};
}

StaticInstance gen_static_instance(std::size_t max_peers, std::size_t max_topics, Rng& rng) {
  if (max_peers == 0) throw std::invalid_argument("static instance needs at least one peer");
  const std::vector<Topic> topics = topic_pool(std::max<std::size_t>(max_topics, 1));
  std::vector<PeerId> universe;
  for (std::uint64_t i = 0; i < 2 * max_peers; ++i) universe.push_back(PeerId{i});
  const std::vector<PeerId> ids = sample_distinct(universe, 1 + rng.below(max_peers), rng);

  const PeerId origin = rng.pick<PeerId>(ids);
  const Topic tp = rng.pick<Topic>(topics);
  fn::State s;
  for (PeerId p : ids) {
    fn::PeerState pst;
    pst.pubs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
    pst.subs = TopicSet::from_range(random_subset<Topic>(topics, rng, false));
    if (p == origin) pst.pubs = insert_unique(tp, pst.pubs);
    s.set(p, std::move(pst));
  }

  // Random tree over the origin and the subscribers of tp keeps the topic
  // overlay connected; extra edges anywhere add redundant paths.
  std::vector<PeerId> group{origin};
  for (PeerId p : ids) {
    if (p != origin && s.at(p).subs.contains(tp)) group.push_back(p);
  }
  std::map<std::uint64_t, std::vector<PeerId>> adj;
  auto connect = [&](PeerId a, PeerId b) {
    auto& na = adj[a.value];
    if (std::find(na.begin(), na.end(), b) != na.end()) return;
    na.push_back(b);
    adj[b.value].push_back(a);
  };
  for (std::size_t k = 1; k < group.size(); ++k) connect(group[k], group[rng.below(k)]);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (rng.chance(1, 3)) connect(ids[i], ids[j]);
    }
  }
  wire_overlay(s, adj);

  // Earlier, fully propagated traffic.
  for (std::size_t k = 0; k < 2; ++k) {
    const Message old{"old" + std::to_string(k), rng.pick<Topic>(topics), rng.pick<PeerId>(ids)};
    s.for_each_value([&](PeerId, fn::PeerState& pst) {
      if (rng.chance(1, 2)) pst.seen = insert_unique(old, pst.seen);
    });
  }
  return StaticInstance{std::move(s), Message{"fresh", tp, origin}};
}

bool topic_connected(const fn::State& s, const Message& m) {
  if (!s.contains(m.origin)) return false;
  std::vector<PeerId> visited{m.origin};
  std::deque<PeerId> queue{m.origin};
  while (!queue.empty()) {
    const PeerId p = queue.front();
    queue.pop_front();
    const PeerSet* nbrs = s.at(p).nsubs.find(m.topic);
    if (nbrs == nullptr) continue;
    for (PeerId q : *nbrs) {
      if (!s.contains(q) || std::find(visited.begin(), visited.end(), q) != visited.end()) continue;
      visited.push_back(q);
      queue.push_back(q);
    }
  }
  return std::all_of(s.begin(), s.end(), [&](const auto& e) {
    return !e.second.subs.contains(m.topic) ||
           std::find(visited.begin(), visited.end(), e.first) != visited.end();
  });
}

}  // namespace pubsub::harness
