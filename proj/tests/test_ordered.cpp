#include <algorithm>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace pubsub;
using namespace pubsub::testing;

namespace {

std::vector<Message> message_pool6() {
  return {M("a", "t1", 5), M("a", "t1", 7), M("a", "t2", 1),
          M("b", "t1", 1), M("b", "t1", 1), M("", "t1", 0)};
}

MessageSet random_set(std::mt19937_64& gen, const std::vector<Message>& pool) {
  std::vector<Message> pick;
  for (const Message& m : pool) {
    if (gen() & 1) pick.push_back(m);
  }
  return MessageSet::from_range(pick);
}

}  // namespace

TEST_CASE("total order on model values") {
  CHECK(total_order_compare(P(1), P(2)) == std::strong_ordering::less);
  const Message m = M("x", "t", 3);
  CHECK(total_order_compare(m, m) == std::strong_ordering::equal);
  CHECK(total_order_compare(M("a", "t1", 5), M("a", "t1", 7)) == std::strong_ordering::less);
  // payload before topic before origin
  CHECK(M("a", "t2", 9) < M("b", "t1", 0));
  CHECK(M("a", "t1", 9) < M("a", "t2", 0));
  // byte order: uppercase sorts before lowercase, high bytes last
  CHECK(T("Z") < T("a"));
  CHECK(T("z") < T("\xc3\xa9"));
}

TEST_CASE("total order is a strict weak order on all triples of a small pool") {
  const auto pool = message_pool6();
  for (const Message& a : pool) {
    CHECK_FALSE(a < a);
    for (const Message& b : pool) {
      CHECK((a < b) + (b < a) + (a == b) == 1);
      for (const Message& c : pool) {
        if (a < b && b < c) CHECK(a < c);
        if (a == b && b == c) CHECK(a == c);
      }
    }
  }
}

TEST_CASE("insert_unique") {
  const Message a = M("a", "t", 1), b = M("b", "t", 1), c = M("c", "t", 1);
  CHECK(insert_unique(a, MessageSet{}) == MessageSet::from_sorted({a}));
  CHECK(insert_unique(a, MessageSet{a}) == MessageSet{a});
  const MessageSet got = insert_unique(b, MessageSet{a, c});
  CHECK(got.elements() == std::vector<Message>{a, b, c});

  std::mt19937_64 gen(7);
  const auto pool = message_pool6();
  for (int i = 0; i < 500; ++i) {
    const MessageSet x = random_set(gen, pool);
    const Message& e = pool[gen() % pool.size()];
    const MessageSet y = insert_unique(e, x);
    CHECK(y.is_ordered());
    CHECK(y.contains(e));
    CHECK(y.size() == x.size() + (x.contains(e) ? 0 : 1));
    for (const Message& old : x) CHECK(y.contains(old));
  }
}

TEST_CASE("union_set") {
  const Message a = M("a", "t", 1), b = M("b", "t", 1), c = M("c", "t", 1);
  CHECK(union_set(MessageSet{}, MessageSet{b, c}) == MessageSet{b, c});
  CHECK(union_set(MessageSet{a}, MessageSet{a}) == MessageSet{a});
  CHECK(union_set(MessageSet{a, c}, MessageSet{b}).elements() == std::vector<Message>{a, b, c});

  std::mt19937_64 gen(11);
  const auto pool = message_pool6();
  for (int i = 0; i < 300; ++i) {
    const MessageSet x = random_set(gen, pool), y = random_set(gen, pool), z = random_set(gen, pool);
    CHECK(union_set(x, y) == union_set(y, x));
    CHECK(union_set(x, x) == x);
    CHECK(union_set(union_set(x, y), z) == union_set(x, union_set(y, z)));
    std::vector<Message> concat = x.elements();
    concat.insert(concat.end(), y.begin(), y.end());
    CHECK(union_set(x, y) == MessageSet::from_range(concat));
  }
}

TEST_CASE("set_difference keeps the order of its first argument") {
  const PeerId a = P(3), b = P(1), c = P(2);
  const std::vector<PeerId> x{a, b, c};
  CHECK(set_difference<PeerId>(x, std::vector<PeerId>{}) == x);
  CHECK(set_difference<PeerId>(x, x).empty());
  CHECK(set_difference<PeerId>(x, std::vector<PeerId>{b}) == std::vector<PeerId>{a, c});

  std::mt19937_64 gen(5);
  for (int i = 0; i < 300; ++i) {
    std::vector<PeerId> xs, ys;
    for (int k = 0; k < 6; ++k) {
      if (gen() & 1) xs.push_back(P(gen() % 8));
      if (gen() & 1) ys.push_back(P(gen() % 8));
    }
    std::vector<PeerId> out = set_difference<PeerId>(xs, ys);
    for (PeerId p : xs) {
      if (std::find(ys.begin(), ys.end(), p) != ys.end()) out.push_back(p);
    }
    CHECK(std::is_permutation(out.begin(), out.end(), xs.begin(), xs.end()));
  }
}

TEST_CASE("OrderedSet construction") {
  CHECK(PeerSet{P(3), P(1), P(3)}.elements() == std::vector<PeerId>{P(1), P(3)});
  CHECK_THROWS_AS(PeerSet::from_sorted({P(2), P(1)}), std::invalid_argument);
  CHECK_THROWS_AS(PeerSet::from_sorted({P(1), P(1)}), std::invalid_argument);
  CHECK_FALSE(PeerSet::unchecked({P(2), P(1)}).is_ordered());
}

TEST_CASE("OrderedMap replaces in place and splices new keys") {
  OrderedMap<PeerId, int> m;
  m.set(P(5), 1);
  m.set(P(1), 2);
  m.set(P(3), 3);
  m.set(P(5), 4);
  CHECK(m.keys() == std::vector<PeerId>{P(1), P(3), P(5)});
  CHECK(m.at(P(5)) == 4);
  CHECK_FALSE(m.erase(P(9)));
  CHECK(m.size() == 3);
  CHECK(m.erase(P(3)));
  CHECK(m.keys() == std::vector<PeerId>{P(1), P(5)});
  CHECK_THROWS_AS(m.at(P(3)), std::out_of_range);
  CHECK(m.find(P(3)) == nullptr);
}
