#ifndef PUBSUB_TESTS_SUPPORT_HPP_
#define PUBSUB_TESTS_SUPPORT_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pubsub/broadcastnet.hpp"
#include "pubsub/floodnet.hpp"
#include "pubsub/harness/generator.hpp"
#include "pubsub/harness/json_io.hpp"
#include "pubsub/refinement.hpp"

namespace pubsub::testing {

inline PeerId P(std::uint64_t v) { return PeerId{v}; }
inline Topic T(const char* name) { return Topic(name); }
inline Message M(const char* pld, const char* tp, std::uint64_t origin) {
  return Message{pld, Topic(tp), PeerId{origin}};
}

inline fn::PeerState fps(TopicSet pubs, TopicSet subs, fn::TopicPeers nsubs = {},
                         std::vector<Message> pending = {}, MessageSet seen = {}) {
  return fn::PeerState{std::move(pubs), std::move(subs), std::move(nsubs), std::move(pending),
                       std::move(seen)};
}

inline bn::PeerState bps(TopicSet pubs, TopicSet subs, MessageSet seen = {}) {
  return bn::PeerState{std::move(pubs), std::move(subs), std::move(seen)};
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(PUBSUB_TEST_DATA) + "/" + name;
}

/// Random good Floodnet states for property tests.
inline std::vector<fn::State> sample_fn_states(std::size_t n, std::uint64_t seed,
                                               std::size_t max_peers = 5) {
  harness::GeneratorConfig cfg;
  cfg.max_peers = max_peers;
  cfg.max_topics = 3;
  cfg.max_messages = 4;
  harness::Rng rng(seed);
  std::vector<fn::State> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(harness::gen_good_state(cfg, rng));
  return out;
}

inline std::vector<bn::State> sample_bn_states(std::size_t n, std::uint64_t seed,
                                               std::size_t max_peers = 5) {
  std::vector<bn::State> out;
  for (const fn::State& s : sample_fn_states(n, seed, max_peers)) {
    out.push_back(refine::f2b(s));
  }
  return out;
}

}  // namespace pubsub::testing

#endif  // PUBSUB_TESTS_SUPPORT_HPP_
