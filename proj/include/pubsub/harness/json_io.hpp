#ifndef PUBSUB_HARNESS_JSON_IO_HPP_
#define PUBSUB_HARNESS_JSON_IO_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pubsub/broadcastnet.hpp"
#include "pubsub/floodnet.hpp"
#include "pubsub/harness/trace.hpp"
#include "pubsub/refinement.hpp"

namespace pubsub::harness {

using nlohmann::json;

/// Malformed input. `pointer` is a JSON pointer into the document and `line`
/// the 1-based line it starts on (0 when unknown).
class InputError : public std::runtime_error {
 public:
  InputError(std::string message, std::string pointer = {}, std::size_t line = 0);

  const std::string& pointer() const { return pointer_; }
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::string pointer_;
  std::size_t line_;
};

json to_json(const Message& m);
json to_json(const fn::State& s);
json to_json(const bn::State& s);
/// {"system": "floodnet" | "broadcastnet", "state": ...}
json to_json(const refine::Borf& s);
json to_json(const Event& e);

// The readers throw InputError with `pointer` relative to the value passed in.
Message message_from_json(const json& j);
fn::State fn_state_from_json(const json& j);
bn::State bn_state_from_json(const json& j);
Event event_from_json(const json& j);

/// Compact serialization used for digests and state identity.
std::string canonical(const fn::State& s);
/// Lowercase hex SHA-256 of the canonical serialization.
std::string digest(const fn::State& s);

struct Scenario {
  fn::State initial;
  std::vector<TraceEvent> events;
};

/**
 * Reads a scenario document:
 *   {"state": {"peers": {"<id>": {"pubs", "subs", "nsubs", "pending", "seen"}}},
 *    "events": [{"kind": ..., ...}]}
 * Topic lists are normalized; seen sets must already be strictly ascending and
 * no peer may list itself in its nsubs map. Errors carry the line of the
 * offending value.
 */
Scenario parse_scenario(std::string_view text);
std::string emit_scenario(const Scenario& scenario);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_JSON_IO_HPP_
