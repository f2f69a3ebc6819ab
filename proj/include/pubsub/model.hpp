#ifndef PUBSUB_MODEL_HPP_
#define PUBSUB_MODEL_HPP_

#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pubsub/ordered.hpp"

namespace pubsub {

/// Raised when a transition function is called outside its input contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PeerId {
  std::uint64_t value = 0;

  friend auto operator<=>(const PeerId&, const PeerId&) = default;
};

class Topic {
 public:
  explicit Topic(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw std::invalid_argument("topic name must be non-empty");
  }

  const std::string& name() const { return name_; }

  // std::string compares through char_traits<char>, i.e. as unsigned bytes.
  friend auto operator<=>(const Topic&, const Topic&) = default;

 private:
  std::string name_;
};

/// Ordered lexicographically on (payload, topic, origin).
struct Message {
  std::string payload;
  Topic topic;
  PeerId origin;

  friend auto operator<=>(const Message&, const Message&) = default;
};

using TopicSet = OrderedSet<Topic>;
using MessageSet = OrderedSet<Message>;
using PeerSet = OrderedSet<PeerId>;

std::string to_string(PeerId p);
std::string to_string(const Topic& t);
std::string to_string(const Message& m);

std::ostream& operator<<(std::ostream& os, PeerId p);
std::ostream& operator<<(std::ostream& os, const Topic& t);
std::ostream& operator<<(std::ostream& os, const Message& m);

/**
 * Small bitmask over the enumerators of a transition-kind enum, used to report
 * which disjuncts of a step relation accepted a pair of states.
 */
template <class Kind>
class KindSet {
 public:
  void insert(Kind k) { bits_ |= 1u << static_cast<unsigned>(k); }
  bool contains(Kind k) const { return bits_ & (1u << static_cast<unsigned>(k)); }
  bool empty() const { return bits_ == 0; }

  /// Lowest enumerator present, i.e. the first disjunct in relation order.
  std::optional<Kind> first() const {
    if (bits_ == 0) return std::nullopt;
    return static_cast<Kind>(std::countr_zero(bits_));
  }

  std::vector<Kind> members() const {
    std::vector<Kind> out;
    for (unsigned b = 0; b < 32; ++b) {
      if (bits_ & (1u << b)) out.push_back(static_cast<Kind>(b));
    }
    return out;
  }

  friend bool operator==(const KindSet&, const KindSet&) = default;

 private:
  unsigned bits_ = 0;
};

}  // namespace pubsub

#endif  // PUBSUB_MODEL_HPP_
