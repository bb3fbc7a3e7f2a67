#pragma once

/// Baselines and brute-force oracles: a maximum product-free subset by
/// branch and bound, and the greedy maximal product-free subset.

#include <bit>
#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/multset.hpp"

namespace pfree {

namespace detail {

/// prod[i][j] = index of x_i x_j in X, or -1.
inline std::vector<std::vector<int>> product_table(const MultSet& x) {
  const auto n = x.size();
  std::vector<std::vector<int>> t(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Element p = x.group().multiply(x[i], x[j]);
      const auto it = std::lower_bound(x.begin(), x.end(), p);
      if (it != x.end() && *it == p) t[i][j] = static_cast<int>(it - x.begin());
    }
  }
  return t;
}

class MaxProductFree {
 public:
  explicit MaxProductFree(const MultSet& x) : n_(static_cast<int>(x.size())), prod_(product_table(x)) {}

  std::uint32_t solve() {
    search(0, 0, 0);
    return best_mask_;
  }

 private:
  // chosen: elements taken; blocked: products of chosen pairs inside X
  void search(int i, std::uint32_t chosen, std::uint32_t blocked) {
    const int size = std::popcount(chosen);
    if (size > best_size_) {
      best_size_ = size;
      best_mask_ = chosen;
    }
    if (i == n_) return;
    int open = 0;
    for (int j = i; j < n_; ++j) open += !((blocked >> j) & 1);
    if (size + open <= best_size_) return;

    if (!((blocked >> i) & 1)) {
      const std::uint32_t with = chosen | (std::uint32_t{1} << i);
      std::uint32_t new_blocked = blocked;
      bool ok = true;
      for (int j = 0; j < n_ && ok; ++j) {
        if (!((with >> j) & 1)) continue;
        for (int p : {prod_[i][j], prod_[j][i]}) {
          if (p < 0) continue;
          if ((with >> p) & 1) ok = false;
          new_blocked |= std::uint32_t{1} << p;
        }
      }
      if (ok) search(i + 1, with, new_blocked);
    }
    search(i + 1, chosen, blocked);
  }

  int n_;
  std::vector<std::vector<int>> prod_;
  int best_size_ = -1;
  std::uint32_t best_mask_ = 0;
};

}  // namespace detail

/// A maximum-cardinality product-free subset of X, |X| <= 24. Among optima
/// the first found when branching "include" before "exclude" in canonical
/// order is returned.
inline MultSet exhaustive_max_product_free(const MultSet& x) {
  if (x.size() > 24) throw BudgetExceeded("exhaustive search limited to |X| <= 24");
  const std::uint32_t mask = detail::MaxProductFree(x).solve();
  std::vector<Element> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((mask >> i) & 1) out.push_back(x[i]);
  }
  return MultSet::from_sorted(x.group_ptr(), std::move(out));
}

/// Scans X in canonical order, keeping an element iff the kept set stays
/// product-free. The result is maximal.
inline MultSet greedy_product_free(const MultSet& x) {
  const GroupOracle& g = x.group();
  std::vector<Element> kept;
  std::unordered_set<Element, ElementHash> kept_set, blocked;  // blocked = kept * kept
  for (auto c : x) {
    if (blocked.count(c)) continue;
    auto lands = [&](Element p) { return p == c || kept_set.count(p) != 0; };
    bool ok = !lands(g.multiply(c, c));
    for (std::size_t i = 0; ok && i < kept.size(); ++i) {
      ok = !lands(g.multiply(kept[i], c)) && !lands(g.multiply(c, kept[i]));
    }
    if (!ok) continue;
    for (auto a : kept) {
      blocked.insert(g.multiply(a, c));
      blocked.insert(g.multiply(c, a));
    }
    blocked.insert(g.multiply(c, c));
    kept.push_back(c);
    kept_set.insert(c);
  }
  std::sort(kept.begin(), kept.end());
  return MultSet::from_sorted(x.group_ptr(), std::move(kept));
}

}  // namespace pfree
