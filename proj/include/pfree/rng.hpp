#pragma once

#include <cstdint>
#include <vector>

namespace pfree {

/// SplitMix64. Counter-based, so the stream for a given seed is identical on
/// every platform. Uniform draws use rejection sampling rather than
/// <random> distributions, whose output is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  /// Child stream; children of distinct indices are independent.
  SplitMix64 split(std::uint64_t index) const {
    SplitMix64 child(state_ ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    child.next();
    return child;
  }

  /// m distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t m) {
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < m && i < n; ++i) {
      const std::uint64_t j = i + below(n - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(m < n ? m : n);
    return pool;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pfree
