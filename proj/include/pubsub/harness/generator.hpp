#ifndef PUBSUB_HARNESS_GENERATOR_HPP_
#define PUBSUB_HARNESS_GENERATOR_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pubsub/floodnet.hpp"
#include "pubsub/harness/rng.hpp"
#include "pubsub/harness/trace.hpp"

namespace pubsub::harness {

using Weights = std::array<unsigned, fn::kStepCount>;

struct GeneratorConfig {
  std::size_t max_peers = 4;
  std::size_t max_topics = 2;
  std::size_t max_messages = 3;
  std::size_t steps = 20;
  std::uint64_t seed = 0;
  /// Indexed by fn::Step.
  Weights weights = {1, 3, 6, 1, 1, 1, 1};
  /// Disables churn and subscription changes.
  bool static_mode = false;

  unsigned effective_weight(fn::Step k) const;
  /// Throws std::invalid_argument when no transition kind has positive weight.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Parses "kind=weight,..." on top of `base`; throws std::invalid_argument.
Weights parse_weights(std::string_view text, Weights base);

/// Peer ids range over [0, 2 * max_peers) so joins can pick fresh ids.
std::vector<PeerId> peer_universe(const GeneratorConfig& cfg);
std::vector<Topic> topic_pool(std::size_t n);

/**
 * Random good state with at most max_peers peers. Neighbor maps follow a
 * random overlay (each peer lists the neighbors subscribed to each topic),
 * with occasional stale entries for absent or unsubscribed peers; pending and
 * seen sets draw from max_messages payloads.
 */
fn::State gen_good_state(const GeneratorConfig& cfg, Rng& rng);

/// Samples a transition kind by weight, then arguments enabled in `s`. Falls
/// back to skip when the sampled kind has no enabled arguments.
Event gen_enabled_event(const fn::State& s, const GeneratorConfig& cfg, Rng& rng);

/// A generated trace: cfg.steps events from a random good state.
struct GeneratedTrace {
  fn::State initial;
  std::vector<TraceEvent> events;
  std::vector<fn::State> states;
};
GeneratedTrace gen_trace(const GeneratorConfig& cfg, Rng& rng);

struct FuzzConfig {
  GeneratorConfig gen;
  std::size_t traces = 1;
};

/// Generates and checks `traces` independent traces; trace t uses the seed
/// derive_seed(gen.seed, t).
CheckReport run_fuzz(const FuzzConfig& cfg);

/// Forward instance: `peer` holds `message` pending in `state`.
struct ForwardInstance {
  PeerId peer;
  Message message;
  fn::State state;
};
std::optional<ForwardInstance> gen_forward_instance(const GeneratorConfig& cfg, Rng& rng);

/// Static configuration with a fresh message ready to be produced by a
/// publisher whose topic overlay is connected.
struct StaticInstance {
  fn::State state;
  Message message;
};
StaticInstance gen_static_instance(std::size_t max_peers, std::size_t max_topics, Rng& rng);

/// Every subscriber of m's topic is reachable from m's origin by following
/// nsubs edges for that topic.
bool topic_connected(const fn::State& s, const Message& m);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_GENERATOR_HPP_
