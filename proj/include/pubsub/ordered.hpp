#ifndef PUBSUB_ORDERED_HPP_
#define PUBSUB_ORDERED_HPP_

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <iterator>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pubsub {

/// Single total order shared by every set and map in the model.
template <class T>
constexpr std::strong_ordering total_order_compare(const T& a, const T& b) {
  return a <=> b;
}

/**
 * Set represented as a strictly ascending sequence, so set equality is
 * sequence equality.
 *
 * The invariant is established by the named constructors. `unchecked` exists
 * for states that are deliberately malformed (fault injection, invariant
 * checker tests); every operation below behaves like its list-based
 * counterpart on such inputs and `is_ordered` reports the violation.
 */
template <class T>
class OrderedSet {
 public:
  using value_type = T;
  using const_iterator = typename std::vector<T>::const_iterator;

  OrderedSet() = default;

  OrderedSet(std::initializer_list<T> init) : elements_(init) { normalize(); }

  /// Sorts and deduplicates.
  static OrderedSet from_range(std::vector<T> elements) {
    OrderedSet out;
    out.elements_ = std::move(elements);
    out.normalize();
    return out;
  }

  /// Throws std::invalid_argument unless `elements` is strictly ascending.
  static OrderedSet from_sorted(std::vector<T> elements) {
    OrderedSet out;
    out.elements_ = std::move(elements);
    if (!out.is_ordered()) {
      throw std::invalid_argument("sequence is not strictly ascending");
    }
    return out;
  }

  static OrderedSet unchecked(std::vector<T> elements) {
    OrderedSet out;
    out.elements_ = std::move(elements);
    return out;
  }

  bool is_ordered() const {
    return std::adjacent_find(elements_.begin(), elements_.end(),
                              [](const T& a, const T& b) {
                                return total_order_compare(a, b) >= 0;
                              }) == elements_.end();
  }

  // Linear scan so that membership stays meaningful on unordered input.
  bool contains(const T& value) const {
    return std::find(elements_.begin(), elements_.end(), value) !=
           elements_.end();
  }

  const std::vector<T>& elements() const { return elements_; }
  std::span<const T> view() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const_iterator begin() const { return elements_.begin(); }
  const_iterator end() const { return elements_.end(); }
  const T& operator[](std::size_t i) const { return elements_[i]; }

  friend bool operator==(const OrderedSet&, const OrderedSet&) = default;
  friend auto operator<=>(const OrderedSet&, const OrderedSet&) = default;

 private:
  void normalize() {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()),
                    elements_.end());
  }

  std::vector<T> elements_;
};

/// Inserts `a` before the first larger element; a no-op when `a` is present
/// at or before that point.
template <class T>
OrderedSet<T> insert_unique(const T& a, const OrderedSet<T>& x) {
  std::vector<T> out;
  out.reserve(x.size() + 1);
  auto it = x.begin();
  for (; it != x.end(); ++it) {
    if (*it == a) return x;
    if (total_order_compare(a, *it) < 0) break;
    out.push_back(*it);
  }
  out.push_back(a);
  out.insert(out.end(), it, x.end());
  return OrderedSet<T>::unchecked(std::move(out));
}

template <class T>
OrderedSet<T> union_set(const OrderedSet<T>& x, const OrderedSet<T>& y) {
  std::vector<T> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(),
                 std::back_inserter(out));
  return OrderedSet<T>::unchecked(std::move(out));
}

/// Elements of `x` not in `y`, in the order they appear in `x`.
template <class T>
std::vector<T> set_difference(std::span<const T> x, std::span<const T> y) {
  std::vector<T> out;
  for (const T& e : x) {
    if (std::find(y.begin(), y.end(), e) == y.end()) out.push_back(e);
  }
  return out;
}

template <class T>
OrderedSet<T> set_difference(const OrderedSet<T>& x, const OrderedSet<T>& y) {
  return OrderedSet<T>::unchecked(set_difference(x.view(), y.view()));
}

/**
 * Association list with strictly ascending keys. Inserting an existing key
 * replaces its value in place; a new key is spliced at its sorted position.
 */
template <class K, class V>
class OrderedMap {
 public:
  using Entry = std::pair<K, V>;
  using const_iterator = typename std::vector<Entry>::const_iterator;

  OrderedMap() = default;

  OrderedMap(std::initializer_list<Entry> init) {
    for (const auto& [k, v] : init) set(k, v);
  }

  const V* find(const K& key) const {
    auto it = lower_bound(key);
    return it != entries_.end() && it->first == key ? &it->second : nullptr;
  }

  V* find(const K& key) {
    auto it = lower_bound(key);
    return it != entries_.end() && it->first == key ? &it->second : nullptr;
  }

  bool contains(const K& key) const { return find(key) != nullptr; }

  /// Throws std::out_of_range on a missing key.
  const V& at(const K& key) const {
    if (const V* v = find(key)) return *v;
    throw std::out_of_range("key not present in map");
  }

  void set(const K& key, V value) {
    auto it = lower_bound(key);
    if (it != entries_.end() && it->first == key) {
      it->second = std::move(value);
    } else {
      entries_.insert(it, Entry{key, std::move(value)});
    }
  }

  /// Returns false when the key was absent.
  bool erase(const K& key) {
    auto it = lower_bound(key);
    if (it == entries_.end() || it->first != key) return false;
    entries_.erase(it);
    return true;
  }

  std::vector<K> keys() const {
    std::vector<K> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  template <class F>
  void for_each_value(F&& f) {
    for (auto& e : entries_) f(e.first, e.second);
  }

  friend bool operator==(const OrderedMap&, const OrderedMap&) = default;

 private:
  typename std::vector<Entry>::iterator lower_bound(const K& key) {
    return std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const Entry& e, const K& k) { return total_order_compare(e.first, k) < 0; });
  }
  typename std::vector<Entry>::const_iterator lower_bound(const K& key) const {
    return std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const Entry& e, const K& k) { return total_order_compare(e.first, k) < 0; });
  }

  std::vector<Entry> entries_;
};

}  // namespace pubsub

#endif  // PUBSUB_ORDERED_HPP_
