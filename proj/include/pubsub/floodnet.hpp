#ifndef PUBSUB_FLOODNET_HPP_
#define PUBSUB_FLOODNET_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pubsub/model.hpp"

/// Implementation-level network: messages are flooded hop by hop to the
/// neighbors each peer knows to be subscribed.
namespace pubsub::fn {

/// Topic -> neighboring peers known to subscribe to it. Topics never map to
/// an empty peer set.
using TopicPeers = OrderedMap<Topic, PeerSet>;

struct PeerState {
  TopicSet pubs;
  TopicSet subs;
  TopicPeers nsubs;
  /// Duplicate-free; newest first.
  std::vector<Message> pending;
  MessageSet seen;

  friend bool operator==(const PeerState&, const PeerState&) = default;
};

using State = OrderedMap<PeerId, PeerState>;

enum class Step : unsigned {
  skip,
  produce,
  forward,
  subscribe,
  unsubscribe,
  leave,
  join,
};
inline constexpr std::size_t kStepCount = 7;

std::string_view step_name(Step k);
std::optional<Step> parse_step(std::string_view name);
using StepMatch = KindSet<Step>;

enum class ProducePre { ok, stale_message, missing_origin, not_publisher };
std::string_view describe(ProducePre pre);

/// Union of every peer's pending messages, in the global order.
MessageSet pending_messages(const State& s);

/// True iff no peer has `m` pending or seen.
bool new_message(const Message& m, const State& s);

ProducePre check_produce_pre(const Message& m, const State& s);
inline bool produce_pre(const Message& m, const State& s) {
  return check_produce_pre(m, s) == ProducePre::ok;
}

/// Adds `m` to the front of pending unless it is already pending or seen.
PeerState add_pending(const Message& m, PeerState pst);

State produce(const Message& m, State s);

/// Forwarder's own update: `m` moves from pending to seen.
PeerState forwarder_state(PeerState pst, const Message& m);

/**
 * `p` processes its pending message `m`: `m` moves to p's seen set and is
 * added to the pending set of every peer in p's neighbor list for the
 * message topic. Neighbors no longer in the state are skipped.
 */
State forward(PeerId p, const Message& m, State s);

/// First peer in key order with `m` pending.
PeerId find_forwarder(const State& s, const Message& m);

/**
 * Besides updating p's subs, every other peer that tracks p under some topic
 * learns the change for each topic that p actually gained or dropped.
 */
State subscribe(PeerId p, std::span<const Topic> topics, State s);
State unsubscribe(PeerId p, std::span<const Topic> topics, State s);

/// Neighbors a joining peer actually links with: those present in `s` that
/// subscribe to at least one topic.
PeerSet effective_neighbors(const PeerSet& nbrs, const State& s);

PeerState joinee_state(TopicSet pubs, TopicSet subs, const PeerSet& nbrs,
                       const State& s);
State join(PeerId p, TopicSet pubs, TopicSet subs, const PeerSet& nbrs, State s);
State leave(PeerId p, State s);

/// Union of all neighbor sets in an nsubs map.
PeerSet neighbors_of(const TopicPeers& nsubs);

/// First position where keys differ; same-key entries are skipped because a
/// join also updates the neighbors' nsubs maps.
std::optional<std::pair<PeerId, PeerState>> join_witness(const State& s,
                                                         const State& u);
/// First position where key or subs differ; other fields are ignored because
/// subscription changes also touch the neighbors' nsubs maps.
std::optional<std::pair<PeerId, std::vector<Topic>>> topics_witness(
    const State& s, const State& u);

bool rel_skip(const State& s, const State& u);
bool rel_produce(const State& s, const State& u);
bool rel_forward(const State& s, const State& u);
bool rel_subscribe(const State& s, const State& u);
bool rel_unsubscribe(const State& s, const State& u);
bool rel_leave(const State& s, const State& u);
bool rel_join(const State& s, const State& u);

StepMatch match_step(const State& s, const State& u);
bool rel_step(const State& s, const State& u);

// Good-state invariants.

/// No peer lists itself in its own nsubs map.
bool no_self_tracking(const State& s);
/// Every seen set is strictly ascending.
bool seen_ordered(const State& s);
inline bool good_state(const State& s) {
  return no_self_tracking(s) && seen_ordered(s);
}

}  // namespace pubsub::fn

#endif  // PUBSUB_FLOODNET_HPP_
