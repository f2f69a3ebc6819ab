#ifndef PUBSUB_BROADCASTNET_HPP_
#define PUBSUB_BROADCASTNET_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pubsub/model.hpp"

/// Specification-level network: every broadcast reaches all subscribers in a
/// single atomic step.
namespace pubsub::bn {

struct PeerState {
  TopicSet pubs;
  TopicSet subs;
  MessageSet seen;

  friend bool operator==(const PeerState&, const PeerState&) = default;
};

using State = OrderedMap<PeerId, PeerState>;

/// Disjuncts of the step relation, in the order they are tried.
enum class Step : unsigned {
  skip,
  broadcast,
  broadcast_partial,
  subscribe,
  unsubscribe,
  leave,
  join,
};
inline constexpr std::size_t kStepCount = 7;

std::string_view step_name(Step k);
using StepMatch = KindSet<Step>;

/// Which conjunct of the broadcast precondition fails, if any.
enum class BroadcastPre { ok, stale_message, missing_origin, not_publisher };
std::string_view describe(BroadcastPre pre);

/// True iff no peer has `m` in its seen set.
bool new_message(const Message& m, const State& s);

BroadcastPre check_broadcast_pre(const Message& m, const State& s);
inline bool broadcast_pre(const Message& m, const State& s) {
  return check_broadcast_pre(m, s) == BroadcastPre::ok;
}

/// Delivers `m` to its origin and every subscriber of its topic.
State broadcast(const Message& m, State s);

/**
 * Delivers `m` to exactly the peers in `receivers`, which must be strictly
 * ascending and present in `s`. Unlike a lock-step walk that would silently
 * skip mis-ordered receivers, violations raise ContractError.
 */
State broadcast_partial(const Message& m, std::span<const PeerId> receivers,
                        State s);

/// Ascending list of peers whose seen set contains `m`.
std::vector<PeerId> receivers(const Message& m, const State& s);

State subscribe(PeerId p, std::span<const Topic> topics, State s);
State unsubscribe(PeerId p, std::span<const Topic> topics, State s);
State join(PeerId p, TopicSet pubs, TopicSet subs, State s);
State leave(PeerId p, State s);

// Witness functions. Each walks both entry sequences in lock-step and looks
// at the first position where they differ.

std::optional<Message> broadcast_witness(const State& s, const State& u);
std::optional<std::pair<PeerId, std::vector<Topic>>> topics_witness(
    const State& s, const State& u);
std::optional<std::pair<PeerId, PeerState>> join_witness(const State& s,
                                                         const State& u);

bool rel_skip(const State& s, const State& u);
bool rel_broadcast(const State& s, const State& u);
bool rel_broadcast_partial(const State& s, const State& u);
bool rel_subscribe(const State& s, const State& u);
bool rel_unsubscribe(const State& s, const State& u);
bool rel_leave(const State& s, const State& u);
bool rel_join(const State& s, const State& u);

/// Evaluates every disjunct of the step relation.
StepMatch match_step(const State& s, const State& u);
/// Short-circuiting disjunction of the same relations.
bool rel_step(const State& s, const State& u);

/// Structural well-formedness: ordered topic and seen sets.
bool well_formed(const State& s);

}  // namespace pubsub::bn

#endif  // PUBSUB_BROADCASTNET_HPP_
