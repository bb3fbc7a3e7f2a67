#pragma once

/// Weighted sum-free subsets of finite abelian groups.
///
/// The group is embedded in (Z/n)^s, n the exponent. Every c in (Z/n)^s
/// gives homomorphisms f_b(c) = sum_i c_i b_i onto nonzero subgroups of Z/n,
/// and for a uniformly random c each b lands in the middle-third interval I
/// with probability at least 1/4. So some c captures a quarter of the total
/// weight, and {b : f_b(c) in I} is sum-free because I is.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pfree/abelian.hpp"
#include "pfree/error.hpp"
#include "pfree/multset.hpp"
#include "pfree/rng.hpp"

namespace pfree {

/// Nonzero elements of a finite abelian group with positive integer weights.
class WeightedSet {
 public:
  /// `weights[i]` belongs to the i-th element of `base` in canonical order.
  WeightedSet(MultSet base, std::vector<std::uint64_t> weights)
      : base_(std::move(base)), weights_(std::move(weights)) {
    if (weights_.size() != base_.size()) throw PreconditionError("one weight per element required");
    for (auto w : weights_) {
      if (w == 0) throw PreconditionError("weights must be positive integers");
    }
    if (base_.contains(base_.group().identity())) {
      throw PreconditionError("weighted set must exclude the identity");
    }
  }

  static WeightedSet unit(MultSet base) {
    std::vector<std::uint64_t> w(base.size(), 1);
    return WeightedSet(std::move(base), std::move(w));
  }

  const MultSet& base() const { return base_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::uint64_t weight_of(Element e) const {
    const auto it = std::lower_bound(base_.begin(), base_.end(), e);
    if (it == base_.end() || *it != e) return 0;
    return weights_[static_cast<std::size_t>(it - base_.begin())];
  }
  std::uint64_t total() const { return std::accumulate(weights_.begin(), weights_.end(), std::uint64_t{0}); }

 private:
  MultSet base_;
  std::vector<std::uint64_t> weights_;
};

struct AlonKleitmanOptions {
  /// Scan every c when n^s is at most this.
  std::uint64_t exhaustive_cap = 1'000'000;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0xa1c1e17a;
};

struct AlonKleitmanResult {
  MultSet chosen;
  std::uint64_t weight = 0;
  std::uint64_t total = 0;
  std::int64_t modulus = 0;
  std::vector<std::int64_t> character;
  bool exhaustive = true;
  std::uint64_t scanned = 0;
};

inline AlonKleitmanResult alon_kleitman_weighted(const WeightedSet& b, const AlonKleitmanOptions& opt = {}) {
  const GroupOracle& g = b.base().group();
  if (!g.abelian()) throw NotAbelian("weighted lemma needs an abelian group, got " + g.spec());
  if (!g.order()) throw NotEnumerable("weighted lemma needs a finite group");
  if (b.base().empty()) throw PreconditionError("weighted set must be nonempty");

  const AbelianCoordinates coords(g);
  const std::int64_t n = coords.exponent();
  const std::size_t s = coords.rank();
  const std::int64_t lo = n / 3 + 1, hi = 2 * n / 3;
  std::vector<std::vector<std::int64_t>> emb;
  emb.reserve(b.base().size());
  for (auto e : b.base()) emb.push_back(coords.embed(e));

  auto weight_at = [&](const std::vector<std::int64_t>& c) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < emb.size(); ++i) {
      __int128 f = 0;
      for (std::size_t j = 0; j < s; ++j) f += static_cast<__int128>(c[j]) * emb[i][j];
      const auto r = static_cast<std::int64_t>(f % n);
      if (r >= lo && r <= hi) w += b.weights()[i];
    }
    return w;
  };

  const std::uint64_t total = b.total();
  AlonKleitmanResult out;
  out.total = total;
  out.modulus = n;

  __int128 space = 1;
  for (std::size_t j = 0; j < s; ++j) {
    space *= n;
    if (space > static_cast<__int128>(opt.exhaustive_cap)) break;
  }
  std::optional<std::vector<std::int64_t>> best;
  std::uint64_t best_weight = 0;
  if (space <= static_cast<__int128>(opt.exhaustive_cap)) {
    // first qualifying c in lexicographic order
    std::vector<std::int64_t> c(s, 0);
    for (__int128 idx = 0; idx < space; ++idx) {
      ++out.scanned;
      const auto w = weight_at(c);
      if (4 * static_cast<unsigned __int128>(w) >= total) {
        best = c;
        best_weight = w;
        break;
      }
      for (std::size_t j = s; j-- > 0;) {
        if (++c[j] < n) break;
        c[j] = 0;
      }
    }
    if (!best) throw InternalError("exhaustive character scan found no qualifying c");
  } else {
    out.exhaustive = false;
    SplitMix64 rng(opt.seed);
    for (std::uint64_t t = 0; t < opt.samples; ++t) {
      std::vector<std::int64_t> c(s);
      for (auto& v : c) v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
      ++out.scanned;
      const auto w = weight_at(c);
      if (!best || w > best_weight || (w == best_weight && c < *best)) {
        best = c;
        best_weight = w;
      }
    }
    if (4 * static_cast<unsigned __int128>(best_weight) < total) {
      throw NotFound("alon-kleitman", "sampled character search found no c capturing a quarter of the weight");
    }
  }

  std::vector<Element> chosen;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    __int128 f = 0;
    for (std::size_t j = 0; j < s; ++j) f += static_cast<__int128>((*best)[j]) * emb[i][j];
    const auto r = static_cast<std::int64_t>(f % n);
    if (r >= lo && r <= hi) chosen.push_back(b.base()[i]);
  }
  out.chosen = MultSet::from_sorted(b.base().group_ptr(), std::move(chosen));
  out.weight = best_weight;
  out.character = *best;
  return out;
}

}  // namespace pfree
