#ifndef PUBSUB_REFINEMENT_HPP_
#define PUBSUB_REFINEMENT_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pubsub/broadcastnet.hpp"
#include "pubsub/floodnet.hpp"

/// Commitment refinement map from Floodnet to Broadcastnet and checkers for
/// the well-founded simulation obligations over the combined system.
namespace pubsub::refine {

/// Drops nsubs and pending, and hides messages that are still pending
/// anywhere in the network.
bn::PeerState map_peer(const fn::PeerState& ps, const MessageSet& pending);

/// Refinement map: only fully propagated (committed) messages stay visible.
bn::State f2b(const fn::State& s);

/**
 * State of the combined transition system. The tag is explicit: an empty
 * network is a valid state of either system and the tag decides which
 * relation applies to it.
 */
class Borf {
 public:
  Borf(bn::State s) : value_(std::move(s)) {}  // NOLINT(google-explicit-constructor)
  Borf(fn::State s) : value_(std::move(s)) {}  // NOLINT(google-explicit-constructor)

  bool is_bn() const { return std::holds_alternative<bn::State>(value_); }
  bool is_fn() const { return std::holds_alternative<fn::State>(value_); }
  const bn::State& bn() const { return std::get<bn::State>(value_); }
  const fn::State& fn() const { return std::get<fn::State>(value_); }
  bn::State& bn() { return std::get<bn::State>(value_); }
  bool empty() const { return is_bn() ? bn().empty() : fn().empty(); }

  friend bool operator==(const Borf&, const Borf&) = default;

 private:
  std::variant<bn::State, fn::State> value_;
};

/// x is a good Floodnet state and y its image under the refinement map.
bool rel_wf(const Borf& x, const Borf& y);
bool rel_b(const Borf& x, const Borf& y);

bool good_rel_step_fn(const fn::State& s, const fn::State& u);
/// Step relation of the combined system; mixed tags never step.
bool rel_step(const Borf& s, const Borf& u);

/// Labelling function.
Borf label(const Borf& s);

/// Matching Broadcastnet state for a Floodnet step from a good state.
bn::State exists_v1(const fn::State& s, const fn::State& u);

/**
 * Constructs the witness v for the simulation obligation: given rel_b(s, w)
 * and rel_step(s, u), returns v with rel_step(w, v) and rel_b(u, v).
 * Throws ContractError when the hypotheses do not hold.
 */
Borf exists_v(const Borf& s, const Borf& u, const Borf& w);

enum class Obligation { wfs1, wfs2, wfs3 };
enum class Status { pass, fail, not_applicable };

std::string_view obligation_name(Obligation o);
std::string_view status_name(Status s);

struct Verdict {
  Obligation obligation;
  Status status = Status::pass;
  std::optional<Borf> witness;
  std::string diagnostics;
  /// The states the obligation was evaluated on, filled in unless it passed.
  std::vector<std::pair<std::string, Borf>> subjects;

  bool passed() const { return status == Status::pass; }
};

/// Hooks used to inject faults into the checkers.
struct CheckOptions {
  /// When false, obligations are evaluated even if their hypotheses fail.
  bool check_preconditions = true;
  /// Applied to the witness computed by exists_v before it is judged.
  std::function<void(Borf&)> tamper_witness;
};

Verdict check_wfs1(const fn::State& s, const CheckOptions& opts = {});
Verdict check_wfs2(const Borf& s, const Borf& w, const CheckOptions& opts = {});
Verdict check_wfs3(const Borf& s, const Borf& w, const Borf& u,
                   const CheckOptions& opts = {});

}  // namespace pubsub::refine

#endif  // PUBSUB_REFINEMENT_HPP_
