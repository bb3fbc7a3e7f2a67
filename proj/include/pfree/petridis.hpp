#pragma once

/// Search for a large subset with small tripling: given |X^2| <= k|X|, find
/// Y in X with |Y| >= |X|/k and |Y^3| <= k^3 |Y|. Such a Y always exists;
/// this module only searches for one.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/multset.hpp"
#include "pfree/rational.hpp"
#include "pfree/rng.hpp"

namespace pfree {

struct PetridisResult {
  MultSet y;
  std::size_t y3_size = 0;
  /// "whole-set", "exhaustive" or "local-search".
  std::string strategy;
  std::uint64_t evaluations = 0;
};

struct PetridisOptions {
  std::size_t exhaustive_max = 16;
  std::uint64_t max_moves = 10'000;
  /// Candidate moves examined per local-search step.
  std::size_t neighborhood = 32;
  std::uint64_t seed = 0x9e7d;
};

inline PetridisResult petridis_subset(const MultSet& x, const Rational& k, const PetridisOptions& opt = {},
                                      const Budget& budget = {}) {
  if (k < 1) throw PreconditionError("petridis_subset needs k >= 1");
  if (x.empty()) throw PreconditionError("petridis_subset needs a nonempty set");
  const MultSet x2 = product_set(x, x, budget);
  if (size_q(x2.size()) > k * size_q(x.size())) throw PreconditionError("|X^2| <= k|X| does not hold");

  const Rational k3 = k * k * k;
  const Rational min_size = size_q(x.size()) / k;
  auto tripling_ok = [&](std::size_t y_size, std::size_t y3_size) {
    return size_q(y3_size) <= k3 * size_q(y_size);
  };

  PetridisResult out;
  const std::size_t x3 = product_set(x2, x, budget).size();
  ++out.evaluations;
  if (tripling_ok(x.size(), x3)) {
    out.y = x;
    out.y3_size = x3;
    out.strategy = "whole-set";
    return out;
  }

  const auto lower = static_cast<std::size_t>(ceil(min_size));
  if (x.size() <= opt.exhaustive_max) {
    const std::size_t n = x.size();
    for (std::size_t size = n; size >= std::max<std::size_t>(lower, 1); --size) {
      // subsets of this size in lexicographic order of index vectors
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      for (;;) {
        std::vector<Element> ys;
        for (auto i : idx) ys.push_back(x[i]);
        const MultSet y = MultSet::from_sorted(x.group_ptr(), std::move(ys));
        const std::size_t y3 = power_set(y, 3, budget).size();
        ++out.evaluations;
        if (tripling_ok(size, y3)) {
          out.y = y;
          out.y3_size = y3;
          out.strategy = "exhaustive";
          return out;
        }
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
      if (size == 1) break;
    }
    throw NotFound("petridis", "exhaustive scan found no subset with small tripling");
  }

  // local search on |Y^3|/|Y| with single-element removals and additions
  SplitMix64 rng(opt.seed);
  std::vector<Element> cur(x.begin(), x.end());
  Rational cur_ratio = ratio(static_cast<std::int64_t>(x3), static_cast<std::int64_t>(x.size()));
  while (out.evaluations < opt.max_moves) {
    std::vector<Element> best;
    Rational best_ratio = cur_ratio;
    std::size_t best_y3 = 0;
    std::vector<Element> outside;
    std::set_difference(x.begin(), x.end(), cur.begin(), cur.end(), std::back_inserter(outside));
    for (std::size_t t = 0; t < opt.neighborhood && out.evaluations < opt.max_moves; ++t) {
      std::vector<Element> cand = cur;
      const bool remove = outside.empty() || (rng.below(2) == 0 && size_q(cur.size() - 1) >= min_size);
      if (remove) {
        if (size_q(cur.size() - 1) < min_size) break;
        cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(rng.below(cand.size())));
      } else {
        cand.push_back(outside[rng.below(outside.size())]);
        std::sort(cand.begin(), cand.end());
      }
      const MultSet y = MultSet::from_sorted(x.group_ptr(), cand);
      const std::size_t y3 = power_set(y, 3, budget).size();
      ++out.evaluations;
      const Rational r = ratio(static_cast<std::int64_t>(y3), static_cast<std::int64_t>(cand.size()));
      if (r < best_ratio) {
        best_ratio = r;
        best = std::move(cand);
        best_y3 = y3;
      }
    }
    if (best.empty()) break;
    cur = std::move(best);
    cur_ratio = best_ratio;
    if (tripling_ok(cur.size(), best_y3)) {
      out.y = MultSet::from_sorted(x.group_ptr(), cur);
      out.y3_size = best_y3;
      out.strategy = "local-search";
      return out;
    }
  }
  throw NotFound("petridis", "local search exhausted without a subset of small tripling");
}

}  // namespace pfree
