#include "pubsub/model.hpp"

#include <ostream>

namespace pubsub {

std::string to_string(PeerId p) { return std::to_string(p.value); }

std::string to_string(const Topic& t) { return t.name(); }

std::string to_string(const Message& m) {
  return "(pld:\"" + m.payload + "\",tp:" + m.topic.name() +
         ",or:" + to_string(m.origin) + ")";
}

std::ostream& operator<<(std::ostream& os, PeerId p) { return os << p.value; }

std::ostream& operator<<(std::ostream& os, const Topic& t) { return os << t.name(); }

std::ostream& operator<<(std::ostream& os, const Message& m) {
  return os << to_string(m);
}

}  // namespace pubsub
