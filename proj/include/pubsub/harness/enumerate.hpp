#ifndef PUBSUB_HARNESS_ENUMERATE_HPP_
#define PUBSUB_HARNESS_ENUMERATE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pubsub/broadcastnet.hpp"
#include "pubsub/floodnet.hpp"
#include "pubsub/harness/trace.hpp"

namespace pubsub::harness {

/// Peer ids range over [0, peers), topics t0.., messages m0.. where message i
/// has topic t(i mod topics) and origin i mod peers.
struct Bounds {
  std::size_t peers = 0;
  std::size_t topics = 0;
  std::size_t messages = 0;
};

struct EnumerateOptions {
  /// Maximum number of states per system.
  double cap = 4096;
  bool floodnet = true;
  bool broadcastnet = true;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string system, double estimate, double cap);
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

std::vector<Message> message_pool(const Bounds& b);

/// Number of good Floodnet states within the bounds: every peer subset, and
/// per peer every pubs, subs, nsubs map over the other ids, pending
/// arrangement and seen set.
double estimate_fn_states(const Bounds& b);
double estimate_bn_states(const Bounds& b);

std::vector<fn::State> fn_universe(const Bounds& b);
std::vector<bn::State> bn_universe(const Bounds& b);

/// Every state reachable in one step by some enabled (transition, argument)
/// pair; duplicates are possible.
std::vector<fn::State> fn_successors(const fn::State& s, const Bounds& b);
std::vector<bn::State> bn_successors(const bn::State& s, const Bounds& b);

/**
 * Brute-force oracle. For every state s and every state u of the universe,
 * the step relation must hold exactly when u is a successor of s. Every
 * successor must stay inside the universe and be good, and each successor
 * pair must pass WFS1..WFS3. Throws CapExceeded before enumerating when a
 * universe would exceed the cap.
 */
CheckReport enumerate_oracle(const Bounds& b, const EnumerateOptions& opts = {});

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_ENUMERATE_HPP_
