#include <algorithm>
#include <random>

#include "doctest.h"
#include "pubsub/harness/enumerate.hpp"
#include "support.hpp"

using namespace pubsub;
using namespace pubsub::testing;
using fn::State;

namespace {

const std::vector<Topic> kTopics{T("t0"), T("t1"), T("t2")};

std::vector<Topic> random_topics(std::mt19937_64& gen) {
  std::vector<Topic> out;
  for (const Topic& t : kTopics) {
    if (gen() & 1) out.push_back(t);
  }
  return out;
}

// Three-peer network on topic t.
State triangle() {
  return State{{P(1), fps({T("t")}, {}, {{T("t"), PeerSet{P(3)}}})},
               {P(2), fps({}, {T("t")}, {{T("t"), PeerSet{P(3)}}})},
               {P(3), fps({}, {T("t")}, {{T("t"), PeerSet{P(2)}}})}};
}

MessageSet pending_oracle(const State& s) {
  std::vector<Message> all;
  for (const auto& [p, pst] : s) all.insert(all.end(), pst.pending.begin(), pst.pending.end());
  return MessageSet::from_range(all);
}

}  // namespace

TEST_CASE("pending_messages") {
  CHECK(fn::pending_messages(State{}).empty());
  const Message m1 = M("m1", "t", 1), m2 = M("m2", "t", 1);
  const State s{{P(1), fps({}, {}, {}, {m1})}, {P(2), fps({}, {}, {}, {m2, m1})}};
  CHECK(fn::pending_messages(s).elements() == std::vector<Message>{m1, m2});
  CHECK(fn::pending_messages(triangle()).empty());
  for (const State& st : sample_fn_states(300, 1)) CHECK(fn::pending_messages(st) == pending_oracle(st));
}

TEST_CASE("new_message scans pending and seen") {
  const Message m = M("m", "t", 1);
  CHECK(fn::new_message(m, State{}));
  CHECK_FALSE(fn::new_message(m, State{{P(4), fps({}, {}, {}, {m})}}));
  CHECK_FALSE(fn::new_message(m, State{{P(4), fps({}, {}, {}, {}, MessageSet{m})}}));
}

TEST_CASE("produce") {
  const Message m = M("a", "t1", 1);
  const State s{{P(1), fps({T("t1")}, {})}};
  CHECK(fn::produce(m, s).at(P(1)).pending == std::vector<Message>{m});
  CHECK(fn::check_produce_pre(M("a", "t2", 1), s) == fn::ProducePre::not_publisher);
  CHECK(fn::check_produce_pre(M("a", "t1", 2), s) == fn::ProducePre::missing_origin);
  CHECK(fn::check_produce_pre(m, fn::produce(m, s)) == fn::ProducePre::stale_message);
  CHECK_THROWS_AS(fn::produce(M("a", "t2", 1), s), ContractError);

  std::mt19937_64 gen(4);
  for (const State& st : sample_fn_states(400, 2)) {
    if (st.empty()) continue;
    const PeerId p = st.keys()[gen() % st.size()];
    if (st.at(p).pubs.empty()) continue;
    const Message fresh{"new", st.at(p).pubs[0], p};
    REQUIRE(fn::produce_pre(fresh, st));
    const State u = fn::produce(fresh, st);
    CHECK(fn::pending_messages(u) == insert_unique(fresh, fn::pending_messages(st)));
    CHECK(refine::f2b(u) == refine::f2b(st));
    CHECK(fn::rel_step(st, u));
    CHECK(fn::match_step(st, u).first() == fn::Step::produce);
  }
}

TEST_CASE("forward") {
  const Message m = M("m", "t", 1);
  SUBCASE("no targets") {
    const State s{{P(1), fps({T("t")}, {}, {}, {m})}, {P(2), fps({}, {T("t")})}};
    const State u = fn::forward(P(1), m, s);
    CHECK(u.at(P(1)).pending.empty());
    CHECK(u.at(P(1)).seen == MessageSet{m});
    CHECK(u.at(P(2)) == s.at(P(2)));
  }
  SUBCASE("three-peer network") {
    const State s = fn::produce(m, triangle());
    const State u = fn::forward(P(1), m, s);
    CHECK(u.at(P(1)).seen == MessageSet{m});
    CHECK(u.at(P(1)).pending.empty());
    CHECK(u.at(P(3)).pending == std::vector<Message>{m});
    CHECK(u.at(P(2)) == s.at(P(2)));
  }
  SUBCASE("neighbor that already saw m is unchanged") {
    const State s{{P(1), fps({}, {}, {{T("t"), PeerSet{P(2)}}}, {m})},
                  {P(2), fps({}, {T("t")}, {}, {}, MessageSet{m})}};
    CHECK(fn::forward(P(1), m, s).at(P(2)) == s.at(P(2)));
  }
  SUBCASE("absent neighbors are skipped") {
    State s = fn::produce(m, triangle());
    s = fn::forward(P(1), m, s);
    s = fn::leave(P(1), s);
    fn::PeerState p3 = s.at(P(3));
    p3.nsubs.set(T("t"), PeerSet{P(1), P(2)});
    s.set(P(3), p3);
    const State u = fn::forward(P(3), m, s);
    CHECK_FALSE(u.contains(P(1)));
    CHECK(u.at(P(2)).pending == std::vector<Message>{m});
  }
  CHECK_THROWS_AS(fn::forward(P(1), m, triangle()), ContractError);
  CHECK_THROWS_AS(fn::forward(P(7), m, triangle()), ContractError);
}

TEST_CASE("forward properties on random states") {
  for (const State& s : sample_fn_states(600, 3)) {
    for (const auto& [p, pst] : s) {
      for (const Message& m : pst.pending) {
        const State u = fn::forward(p, m, s);
        const MessageSet before = fn::pending_messages(s);
        const MessageSet after = fn::pending_messages(u);
        CHECK((after == before ||
               after == MessageSet::unchecked(set_difference<Message>(before.view(), std::span(&m, 1)))));
        if (after == before) CHECK(refine::f2b(u) == refine::f2b(s));
        for (const auto& [q, qst] : u) {
          CHECK(qst.pubs == s.at(q).pubs);
          CHECK(qst.subs == s.at(q).subs);
          CHECK(qst.nsubs == s.at(q).nsubs);
        }
        CHECK(fn::good_state(u));
      }
    }
  }
}

TEST_CASE("find_forwarder") {
  const Message m = M("m", "t", 1);
  CHECK(fn::find_forwarder(State{{P(9), fps({}, {}, {}, {m})}}, m) == P(9));
  const State two{{P(2), fps({}, {}, {}, {m})}, {P(5), fps({}, {}, {}, {m})}};
  CHECK(fn::find_forwarder(two, m) == P(2));
  const State last{{P(1), fps({}, {})}, {P(4), fps({}, {})}, {P(7), fps({}, {}, {}, {m})}};
  CHECK(fn::find_forwarder(last, m) == P(7));
  CHECK_THROWS_AS(fn::find_forwarder(State{{P(1), fps({}, {})}}, m), ContractError);

  for (const State& s : sample_fn_states(300, 9)) {
    for (const Message& pm : fn::pending_messages(s)) {
      const PeerId f = fn::find_forwarder(s, pm);
      REQUIRE(s.contains(f));
      const auto& pending = s.at(f).pending;
      CHECK(std::find(pending.begin(), pending.end(), pm) != pending.end());
      CHECK_FALSE(fn::new_message(pm, s));
      for (const auto& [q, qst] : s) {
        if (!(q < f)) break;
        CHECK(std::find(qst.pending.begin(), qst.pending.end(), pm) == qst.pending.end());
      }
    }
  }
}

TEST_CASE("subscribe and unsubscribe update tracking neighbors") {
  State s = triangle();
  CHECK(fn::subscribe(P(2), {}, s) == s);
  const std::vector<Topic> t{T("t")};
  const State u = fn::unsubscribe(P(2), t, s);
  CHECK(u.at(P(2)).subs.empty());
  CHECK_FALSE(u.at(P(3)).nsubs.contains(T("t")));
  CHECK(u.at(P(1)) == s.at(P(1)));
  CHECK(refine::f2b(u) == bn::unsubscribe(P(2), t, refine::f2b(s)));

  const std::vector<Topic> x{T("x")};
  const State v = fn::subscribe(P(3), x, s);
  CHECK(v.at(P(3)).subs == TopicSet{T("t"), T("x")});
  CHECK(v.at(P(1)).nsubs.at(T("x")) == PeerSet{P(3)});
  CHECK(v.at(P(2)).nsubs.at(T("x")) == PeerSet{P(3)});
  CHECK_FALSE(v.at(P(3)).nsubs.contains(T("x")));
  CHECK_THROWS_AS(fn::subscribe(P(8), x, s), ContractError);

  std::mt19937_64 gen(6);
  for (const State& st : sample_fn_states(400, 4)) {
    if (st.empty()) continue;
    const PeerId p = st.keys()[gen() % st.size()];
    const auto ts = random_topics(gen);
    const State sub = fn::subscribe(p, ts, st);
    const State unsub = fn::unsubscribe(p, ts, st);
    CHECK(refine::f2b(sub) == bn::subscribe(p, ts, refine::f2b(st)));
    CHECK(refine::f2b(unsub) == bn::unsubscribe(p, ts, refine::f2b(st)));
    CHECK(fn::good_state(sub));
    CHECK(fn::good_state(unsub));
    CHECK(fn::rel_step(st, sub));
    CHECK(fn::rel_step(st, unsub));
  }
}

TEST_CASE("join") {
  const State one = fn::join(P(1), {T("t1")}, {}, {}, State{});
  CHECK(one == State{{P(1), fps({T("t1")}, {})}});

  const State s{{P(1), fps({}, {T("t1")})}};
  const State u = fn::join(P(2), {}, {T("t1")}, PeerSet{P(1)}, s);
  CHECK(u.at(P(1)).nsubs.at(T("t1")).contains(P(2)));
  CHECK(u.at(P(2)).nsubs.at(T("t1")) == PeerSet{P(1)});
  CHECK(u.at(P(2)).pending.empty());
  CHECK(u.at(P(2)).seen.empty());

  CHECK_THROWS_AS(fn::join(P(1), {}, {}, {}, s), ContractError);
  CHECK_THROWS_AS(fn::join(P(2), {}, {}, PeerSet{P(2)}, s), ContractError);

  std::mt19937_64 gen(8);
  for (const State& st : sample_fn_states(400, 5)) {
    std::vector<PeerId> nbrs;
    for (PeerId q : st.keys()) {
      if (gen() & 1) nbrs.push_back(q);
    }
    if (gen() % 4 == 0) nbrs.push_back(P(77));
    const State j = fn::join(P(60), TopicSet::from_range(random_topics(gen)),
                             TopicSet::from_range(random_topics(gen)), PeerSet::from_range(nbrs), st);
    CHECK(fn::good_state(j));
    CHECK(fn::rel_step(st, j));
    CHECK(fn::match_step(st, j).contains(fn::Step::join));
    auto w = fn::join_witness(st, j);
    REQUIRE(w);
    CHECK(w->first == P(60));
    CHECK(w->second == j.at(P(60)));
  }
}

TEST_CASE("leave") {
  CHECK(fn::leave(P(1), State{{P(1), fps({}, {})}}).empty());
  const State s = triangle();
  const State u = fn::leave(P(1), s);
  CHECK(u.at(P(2)) == s.at(P(2)));
  CHECK(u.at(P(3)) == s.at(P(3)));
  CHECK_THROWS_AS(fn::leave(P(5), s), ContractError);

  for (const State& st : sample_fn_states(300, 7)) {
    for (const auto& [p, pst] : st) {
      const State left = fn::leave(p, st);
      auto w = fn::join_witness(left, st);
      REQUIRE(w);
      CHECK(w->first == p);
      CHECK(w->second == pst);
      CHECK(fn::rel_leave(st, left) == pst.pending.empty());
      if (!pst.pending.empty()) CHECK_FALSE(fn::rel_step(st, left));
    }
  }
}

TEST_CASE("witnesses on identical states") {
  for (const State& s : sample_fn_states(50, 10)) {
    CHECK_FALSE(fn::join_witness(s, s));
    CHECK_FALSE(fn::topics_witness(s, s));
  }
}

TEST_CASE("good-state invariants") {
  CHECK(fn::good_state(State{}));
  const State self{{P(3), fps({}, {T("t1")}, {{T("t1"), PeerSet{P(3)}}})}};
  CHECK_FALSE(fn::no_self_tracking(self));
  CHECK_FALSE(fn::good_state(self));
  const Message m1 = M("m1", "t", 1), m2 = M("m2", "t", 1);
  const State unordered{{P(2), fps({}, {}, {}, {}, MessageSet::unchecked({m2, m1}))}};
  CHECK_FALSE(fn::seen_ordered(unordered));
  CHECK_FALSE(fn::good_state(unordered));
}

TEST_CASE("step relation on constructed steps") {
  for (const State& s : sample_fn_states(300, 11)) {
    CHECK(fn::rel_step(s, s));
    for (const Message& m : fn::pending_messages(s)) {
      const State u = fn::forward(fn::find_forwarder(s, m), m, s);
      CHECK(fn::rel_step(s, u));
      CHECK(fn::match_step(s, u).contains(fn::Step::forward));
    }
  }
}

TEST_CASE("step names round-trip") {
  for (std::size_t i = 0; i < fn::kStepCount; ++i) {
    const auto k = static_cast<fn::Step>(i);
    CHECK(fn::parse_step(fn::step_name(k)) == k);
  }
  CHECK_FALSE(fn::parse_step("teleport"));
}

TEST_CASE("step relation agrees with the successor oracle on small universes") {
  harness::EnumerateOptions opts;
  opts.broadcastnet = false;
  for (harness::Bounds b : {harness::Bounds{0, 0, 0}, harness::Bounds{1, 1, 0},
                            harness::Bounds{2, 1, 0}, harness::Bounds{1, 2, 2},
                            harness::Bounds{2, 1, 1}}) {
    CAPTURE(b.peers);
    CAPTURE(b.topics);
    CAPTURE(b.messages);
    const harness::CheckReport r = harness::enumerate_oracle(b, opts);
    CHECK(r.ok());
  }
}
