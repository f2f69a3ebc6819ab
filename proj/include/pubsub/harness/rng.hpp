#ifndef PUBSUB_HARNESS_RNG_HPP_
#define PUBSUB_HARNESS_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace pubsub::harness {

/**
 * Seeded random stream. The engine output is fixed by the standard; bounded
 * draws use our own rejection sampling because std distributions differ
 * between library implementations.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T>
  const T& pick(std::span<const T> items) {
    if (items.empty()) throw std::invalid_argument("pick from empty range");
    return items[below(items.size())];
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_RNG_HPP_
