#pragma once

/// Approximate-group diagnostics: doubling and tripling constants and the
/// number of translates of X needed to cover X^2.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pfree/multset.hpp"
#include "pfree/rational.hpp"

namespace pfree {

enum class CoverSide { kLeft, kRight, kBoth };

struct CoverResult {
  /// Translating elements, in pick order; paired with the side used.
  std::vector<std::pair<Element, CoverSide>> translates;
  std::size_t size() const { return translates.size(); }
};

struct ApproxGroupReport {
  std::size_t size = 0;
  Rational doubling;
  Rational tripling;
  bool symmetric = false;
  bool has_identity = false;
  std::size_t covering_upper = 0;
  std::optional<std::size_t> covering_exact;
  std::optional<Rational> queried_k;
  std::optional<bool> is_k_approx;
};

namespace detail {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  std::size_t count_and_not(const Bits& covered) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(__builtin_popcountll(words_[i] & ~covered.words_[i]));
    }
    return c;
  }
  void merge(const Bits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct CoverInstance {
  std::size_t universe = 0;
  std::vector<Bits> sets;
  std::vector<std::pair<Element, CoverSide>> labels;
  /// containing[u] = indices of sets covering universe element u
  std::vector<std::vector<std::size_t>> containing;
};

/// Translates xX (and/or Xx) for x in X, as subsets of X^2.
inline CoverInstance cover_instance(const MultSet& x, const MultSet& x2, CoverSide side) {
  CoverInstance inst;
  inst.universe = x2.size();
  inst.containing.resize(x2.size());
  auto index_of = [&](Element e) {
    return static_cast<std::size_t>(std::lower_bound(x2.begin(), x2.end(), e) - x2.begin());
  };
  auto add = [&](Element t, CoverSide s) {
    Bits b(inst.universe);
    for (auto y : x) {
      const Element p = s == CoverSide::kLeft ? x.group().multiply(t, y) : x.group().multiply(y, t);
      b.set(index_of(p));
    }
    for (std::size_t u = 0; u < inst.universe; ++u) {
      if (b.test(u)) inst.containing[u].push_back(inst.sets.size());
    }
    inst.sets.push_back(std::move(b));
    inst.labels.emplace_back(t, s);
  };
  for (auto t : x) {
    if (side != CoverSide::kRight) add(t, CoverSide::kLeft);
    if (side != CoverSide::kLeft) add(t, CoverSide::kRight);
  }
  return inst;
}

inline std::vector<std::size_t> greedy_cover(const CoverInstance& inst) {
  Bits covered(inst.universe);
  std::vector<std::size_t> picks;
  while (covered.count() < inst.universe) {
    std::size_t best = 0, gain = 0;
    for (std::size_t i = 0; i < inst.sets.size(); ++i) {
      const auto g = inst.sets[i].count_and_not(covered);
      if (g > gain) {
        gain = g;
        best = i;
      }
    }
    if (gain == 0) throw InternalError("translates do not cover X^2");
    picks.push_back(best);
    covered.merge(inst.sets[best]);
  }
  return picks;
}

/// Exact minimum cover by branch and bound: branch on the uncovered element
/// with fewest covering sets, prune with ceil(uncovered / largest set).
class ExactCover {
 public:
  ExactCover(const CoverInstance& inst, std::size_t upper, std::uint64_t node_budget)
      : inst_(inst), best_(upper), node_budget_(node_budget) {
    for (const auto& s : inst.sets) max_set_ = std::max(max_set_, s.count());
  }

  /// Minimum cover size, or nullopt when the node budget ran out.
  std::optional<std::size_t> solve() {
    Bits covered(inst_.universe);
    search(covered, 0);
    if (exhausted_) return std::nullopt;
    return best_;
  }

 private:
  void search(const Bits& covered, std::size_t depth) {
    if (exhausted_) return;
    if (++nodes_ > node_budget_) {
      exhausted_ = true;
      return;
    }
    const std::size_t uncovered = inst_.universe - covered.count();
    if (uncovered == 0) {
      best_ = std::min(best_, depth);
      return;
    }
    if (depth + (uncovered + max_set_ - 1) / max_set_ >= best_) return;
    std::size_t pivot = 0, fewest = SIZE_MAX;
    for (std::size_t u = 0; u < inst_.universe; ++u) {
      if (!covered.test(u) && inst_.containing[u].size() < fewest) {
        fewest = inst_.containing[u].size();
        pivot = u;
      }
    }
    std::vector<std::size_t> options = inst_.containing[pivot];
    std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return inst_.sets[a].count_and_not(covered) > inst_.sets[b].count_and_not(covered);
    });
    for (auto i : options) {
      Bits next = covered;
      next.merge(inst_.sets[i]);
      search(next, depth + 1);
    }
  }

  const CoverInstance& inst_;
  std::size_t best_;
  std::size_t max_set_ = 1;
  std::uint64_t node_budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

/// Greedy cover of X^2 by translates of X; the result is re-verified to
/// cover X^2.
inline CoverResult greedy_covering(const MultSet& x, CoverSide side = CoverSide::kLeft, const Budget& budget = {}) {
  const MultSet x2 = product_set(x, x, budget);
  const auto inst = detail::cover_instance(x, x2, side);
  CoverResult out;
  for (auto i : detail::greedy_cover(inst)) out.translates.push_back(inst.labels[i]);
  MultSet covered = MultSet::from_sorted(x.group_ptr(), {});
  for (auto [t, s] : out.translates) {
    covered = unite(covered, s == CoverSide::kLeft ? left_translate(t, x) : right_translate(x, t));
  }
  if (!x2.subset_of(covered)) throw InternalError("greedy translates do not cover X^2");
  return out;
}

/// Doubling, tripling, symmetry and covering diagnostics. The exact cover
/// is attempted when |X^2| <= 4096; `k` enables the k-approximate-group test,
/// which uses the exact cover when available and the greedy bound otherwise.
inline ApproxGroupReport approx_report(const MultSet& x, std::optional<Rational> k = std::nullopt,
                                       CoverSide side = CoverSide::kLeft, const Budget& budget = {},
                                       std::uint64_t cover_node_budget = 200'000) {
  if (x.empty()) throw PreconditionError("approx_report needs a nonempty set");
  ApproxGroupReport r;
  const MultSet x2 = product_set(x, x, budget);
  const MultSet x3 = product_set(x2, x, budget);
  const auto n = static_cast<std::int64_t>(x.size());
  r.size = x.size();
  r.doubling = ratio(static_cast<std::int64_t>(x2.size()), n);
  r.tripling = ratio(static_cast<std::int64_t>(x3.size()), n);
  r.symmetric = inverse_set(x) == x;
  r.has_identity = x.contains(x.group().identity());

  const auto inst = detail::cover_instance(x, x2, side);
  r.covering_upper = detail::greedy_cover(inst).size();
  if (x2.size() <= 4096) {
    r.covering_exact = detail::ExactCover(inst, r.covering_upper, cover_node_budget).solve();
  }
  if (k) {
    r.queried_k = *k;
    const std::size_t cover = r.covering_exact.value_or(r.covering_upper);
    r.is_k_approx = r.has_identity && r.symmetric && Rational(static_cast<std::int64_t>(cover)) <= *k;
  }
  return r;
}

}  // namespace pfree
