#include "pubsub/harness/json_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace pubsub::harness {

namespace {

std::string escape_pointer_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, std::string_view key) {
  return ptr + "/" + escape_pointer_token(key);
}

std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

// Maps the JSON pointer of every value in a (syntactically valid) document to
// the line it starts on.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) { value(""); }

  std::size_t line_of(std::string ptr) const {
    while (true) {
      if (auto it = lines_.find(ptr); it != lines_.end()) return it->second;
      auto slash = ptr.rfind('/');
      if (slash == std::string::npos) return 0;
      ptr.erase(slash);
    }
  }

 private:
  void ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size()) {
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'u': out += "\\u"; break;  // left encoded; only affects lookup
          default: out += e;
        }
      } else {
        out += c;
      }
    }
    ++pos_;  // closing quote
    return out;
  }

  void value(const std::string& ptr) {
    ws();
    lines_.emplace(ptr, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{' || c == '[') {
      const bool object = c == '{';
      const char close = object ? '}' : ']';
      ++pos_;
      std::size_t index = 0;
      while (true) {
        ws();
        if (pos_ >= text_.size()) return;
        if (text_[pos_] == close) {
          ++pos_;
          return;
        }
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (object) {
          std::string key = string();
          ws();
          ++pos_;  // ':'
          value(child(ptr, key));
        } else {
          value(child(ptr, index++));
        }
      }
    }
    if (c == '"') {
      string();
      return;
    }
    while (pos_ < text_.size() && std::string_view(",}] \t\r\n").find(text_[pos_]) ==
                                      std::string_view::npos) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

[[noreturn]] void fail(const std::string& ptr, const std::string& message) {
  throw InputError(message, ptr);
}

void expect_object(const json& j, const std::string& ptr,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(ptr, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(child(ptr, key), "unknown field \"" + key + "\"");
    }
  }
}

PeerId read_peer(const json& j, const std::string& ptr) {
  if (!j.is_number_unsigned()) fail(ptr, "peer id must be a non-negative integer");
  return PeerId{j.get<std::uint64_t>()};
}

PeerId read_peer_key(const std::string& key, const std::string& ptr) {
  const bool digits = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
  if (!digits || (key.size() > 1 && key[0] == '0') || key.size() > 19) {
    fail(ptr, "peer key \"" + key + "\" is not a canonical non-negative integer");
  }
  return PeerId{std::stoull(key)};
}

Topic read_topic(const json& j, const std::string& ptr) {
  if (!j.is_string() || j.get_ref<const std::string&>().empty()) {
    fail(ptr, "topic must be a non-empty string");
  }
  return Topic(j.get<std::string>());
}

Message read_message(const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"pld", "tp", "or"});
  for (const char* key : {"pld", "tp", "or"}) {
    if (!j.contains(key)) fail(ptr, std::string("message is missing \"") + key + "\"");
  }
  if (!j["pld"].is_string()) fail(child(ptr, "pld"), "payload must be a string");
  return Message{j["pld"].get<std::string>(), read_topic(j["tp"], child(ptr, "tp")),
                 read_peer(j["or"], child(ptr, "or"))};
}

template <class T, class Read>
std::vector<T> read_list(const json& j, const std::string& ptr, Read read) {
  if (!j.is_array()) fail(ptr, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    T value = read(j[i], child(ptr, i));
    if (std::find(out.begin(), out.end(), value) != out.end()) {
      fail(child(ptr, i), "duplicate element");
    }
    out.push_back(std::move(value));
  }
  return out;
}

TopicSet read_topic_set(const json& j, const std::string& ptr) {
  return TopicSet::from_range(read_list<Topic>(j, ptr, read_topic));
}

PeerSet read_peer_set(const json& j, const std::string& ptr) {
  return PeerSet::from_range(read_list<PeerId>(j, ptr, read_peer));
}

MessageSet read_seen(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array");
  std::vector<Message> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_message(j[i], child(ptr, i)));
    if (i > 0 && !(out[i - 1] < out[i])) {
      fail(child(ptr, i),
           "seen set is not strictly ascending (Invariant 2: seen sets are ordered)");
    }
  }
  return MessageSet::unchecked(std::move(out));
}

template <class PeerStateT, class ReadPeer>
OrderedMap<PeerId, PeerStateT> read_state(const json& j, const std::string& ptr,
                                          ReadPeer read_peer_state) {
  expect_object(j, ptr, {"peers"});
  OrderedMap<PeerId, PeerStateT> out;
  if (!j.contains("peers")) return out;
  const std::string peers_ptr = child(ptr, "peers");
  const json& peers = j["peers"];
  if (!peers.is_object()) fail(peers_ptr, "expected an object keyed by peer id");
  for (const auto& [key, value] : peers.items()) {
    const std::string peer_ptr = child(peers_ptr, key);
    PeerId p = read_peer_key(key, peer_ptr);
    if (out.contains(p)) fail(peer_ptr, "duplicate peer " + key);
    out.set(p, read_peer_state(p, value, peer_ptr));
  }
  return out;
}

fn::PeerState read_fn_peer(PeerId p, const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"pubs", "subs", "nsubs", "pending", "seen"});
  fn::PeerState pst;
  if (j.contains("pubs")) pst.pubs = read_topic_set(j["pubs"], child(ptr, "pubs"));
  if (j.contains("subs")) pst.subs = read_topic_set(j["subs"], child(ptr, "subs"));
  if (j.contains("nsubs")) {
    const std::string nptr = child(ptr, "nsubs");
    if (!j["nsubs"].is_object()) fail(nptr, "expected an object keyed by topic");
    for (const auto& [tp, peers] : j["nsubs"].items()) {
      const std::string tptr = child(nptr, tp);
      if (tp.empty()) fail(tptr, "topic must be a non-empty string");
      PeerSet set = read_peer_set(peers, tptr);
      if (set.contains(p)) {
        fail(tptr, "peer " + to_string(p) +
                       " tracks itself (Invariant 1: no peer tracks its own subscriptions)");
      }
      if (!set.empty()) pst.nsubs.set(Topic(tp), std::move(set));
    }
  }
  if (j.contains("pending")) {
    pst.pending = read_list<Message>(j["pending"], child(ptr, "pending"), read_message);
  }
  if (j.contains("seen")) pst.seen = read_seen(j["seen"], child(ptr, "seen"));
  return pst;
}

bn::PeerState read_bn_peer(PeerId, const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"pubs", "subs", "seen"});
  bn::PeerState pst;
  if (j.contains("pubs")) pst.pubs = read_topic_set(j["pubs"], child(ptr, "pubs"));
  if (j.contains("subs")) pst.subs = read_topic_set(j["subs"], child(ptr, "subs"));
  if (j.contains("seen")) pst.seen = read_seen(j["seen"], child(ptr, "seen"));
  return pst;
}

json topics_json(std::span<const Topic> ts) {
  json out = json::array();
  for (const Topic& t : ts) out.push_back(t.name());
  return out;
}

json messages_json(std::span<const Message> ms) {
  json out = json::array();
  for (const Message& m : ms) out.push_back(to_json(m));
  return out;
}

json peers_json(const PeerSet& ps) {
  json out = json::array();
  for (PeerId p : ps) out.push_back(p.value);
  return out;
}

Event read_event(const json& j, const std::string& ptr) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(ptr, "event must be an object with a string \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto step = fn::parse_step(kind);
  if (!step) fail(child(ptr, "kind"), "unknown transition kind \"" + kind + "\"");

  Event e;
  e.kind = *step;
  auto require = [&](const char* key) -> const json& {
    if (!j.contains(key)) fail(ptr, kind + " event is missing \"" + key + "\"");
    return j[key];
  };
  std::vector<std::string_view> allowed = {"kind", "pre_digest", "post_digest"};
  switch (e.kind) {
    case fn::Step::skip:
      break;
    case fn::Step::produce:
      e.message = read_message(require("message"), child(ptr, "message"));
      allowed.push_back("message");
      break;
    case fn::Step::forward:
      e.peer = read_peer(require("peer"), child(ptr, "peer"));
      e.message = read_message(require("message"), child(ptr, "message"));
      allowed.insert(allowed.end(), {"peer", "message"});
      break;
    case fn::Step::subscribe:
    case fn::Step::unsubscribe:
      e.peer = read_peer(require("peer"), child(ptr, "peer"));
      e.topics = read_list<Topic>(require("topics"), child(ptr, "topics"), read_topic);
      allowed.insert(allowed.end(), {"peer", "topics"});
      break;
    case fn::Step::join:
      e.peer = read_peer(require("peer"), child(ptr, "peer"));
      if (j.contains("pubs")) e.pubs = read_topic_set(j["pubs"], child(ptr, "pubs"));
      if (j.contains("subs")) e.subs = read_topic_set(j["subs"], child(ptr, "subs"));
      if (j.contains("nbrs")) e.nbrs = read_peer_set(j["nbrs"], child(ptr, "nbrs"));
      allowed.insert(allowed.end(), {"peer", "pubs", "subs", "nbrs"});
      break;
    case fn::Step::leave:
      e.peer = read_peer(require("peer"), child(ptr, "peer"));
      allowed.push_back("peer");
      break;
  }
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(child(ptr, key), "field \"" + key + "\" is not valid for a " + kind + " event");
    }
  }
  for (const char* key : {"pre_digest", "post_digest"}) {
    if (j.contains(key) && !j[key].is_string()) fail(child(ptr, key), "digest must be a string");
  }
  return e;
}

}  // namespace

InputError::InputError(std::string message, std::string pointer, std::size_t line)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) +
                         (pointer.empty() ? std::string() : "at " + pointer + ": ") + message),
      message_(std::move(message)),
      pointer_(std::move(pointer)),
      line_(line) {}

json to_json(const Message& m) {
  return json{{"pld", m.payload}, {"tp", m.topic.name()}, {"or", m.origin.value}};
}

json to_json(const fn::State& s) {
  json peers = json::object();
  for (const auto& [p, pst] : s) {
    json nsubs = json::object();
    for (const auto& [tp, ps] : pst.nsubs) nsubs[tp.name()] = peers_json(ps);
    peers[to_string(p)] = json{{"pubs", topics_json(pst.pubs.view())},
                               {"subs", topics_json(pst.subs.view())},
                               {"nsubs", std::move(nsubs)},
                               {"pending", messages_json(pst.pending)},
                               {"seen", messages_json(pst.seen.view())}};
  }
  return json{{"peers", std::move(peers)}};
}

json to_json(const bn::State& s) {
  json peers = json::object();
  for (const auto& [p, pst] : s) {
    peers[to_string(p)] = json{{"pubs", topics_json(pst.pubs.view())},
                               {"subs", topics_json(pst.subs.view())},
                               {"seen", messages_json(pst.seen.view())}};
  }
  return json{{"peers", std::move(peers)}};
}

json to_json(const refine::Borf& s) {
  if (s.is_bn()) return json{{"system", "broadcastnet"}, {"state", to_json(s.bn())}};
  return json{{"system", "floodnet"}, {"state", to_json(s.fn())}};
}

json to_json(const Event& e) {
  json out{{"kind", std::string(fn::step_name(e.kind))}};
  switch (e.kind) {
    case fn::Step::skip:
      break;
    case fn::Step::produce:
      out["message"] = to_json(*e.message);
      break;
    case fn::Step::forward:
      out["peer"] = e.peer->value;
      out["message"] = to_json(*e.message);
      break;
    case fn::Step::subscribe:
    case fn::Step::unsubscribe:
      out["peer"] = e.peer->value;
      out["topics"] = topics_json(e.topics);
      break;
    case fn::Step::join:
      out["peer"] = e.peer->value;
      out["pubs"] = topics_json(e.pubs.view());
      out["subs"] = topics_json(e.subs.view());
      out["nbrs"] = peers_json(e.nbrs);
      break;
    case fn::Step::leave:
      out["peer"] = e.peer->value;
      break;
  }
  return out;
}

Message message_from_json(const json& j) { return read_message(j, ""); }

fn::State fn_state_from_json(const json& j) {
  return read_state<fn::PeerState>(j, "", read_fn_peer);
}

bn::State bn_state_from_json(const json& j) {
  return read_state<bn::PeerState>(j, "", read_bn_peer);
}

Event event_from_json(const json& j) { return read_event(j, ""); }

std::string canonical(const fn::State& s) { return to_json(s).dump(); }

std::string digest(const fn::State& s) {
  const std::string text = canonical(s);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(e.what());
  }
  const LineIndex lines(text);
  try {
    expect_object(doc, "", {"state", "events", "description"});
    if (!doc.contains("state")) fail("", "scenario is missing \"state\"");
    Scenario out;
    out.initial = read_state<fn::PeerState>(doc["state"], "/state", read_fn_peer);
    if (doc.contains("events")) {
      const json& events = doc["events"];
      if (!events.is_array()) fail("/events", "expected an array");
      for (std::size_t i = 0; i < events.size(); ++i) {
        TraceEvent te;
        te.index = i;
        te.event = read_event(events[i], child(std::string("/events"), i));
        te.pre_digest = events[i].value("pre_digest", "");
        te.post_digest = events[i].value("post_digest", "");
        out.events.push_back(std::move(te));
      }
    }
    return out;
  } catch (const InputError& e) {
    throw InputError(e.message(), e.pointer(), lines.line_of(e.pointer()));
  }
}

std::string emit_scenario(const Scenario& scenario) {
  json events = json::array();
  for (const TraceEvent& te : scenario.events) {
    json e = to_json(te.event);
    if (!te.pre_digest.empty()) e["pre_digest"] = te.pre_digest;
    if (!te.post_digest.empty()) e["post_digest"] = te.post_digest;
    events.push_back(std::move(e));
  }
  return json{{"state", to_json(scenario.initial)}, {"events", std::move(events)}}.dump(2) + "\n";
}

}  // namespace pubsub::harness
