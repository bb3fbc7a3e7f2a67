#pragma once

/// Verifying finder for homogeneous tuples: given six sets U1..U3, V1..V3,
/// find dense subsets U'i, V'i whose triple products U'1U'2U'3 and V'1V'2V'3
/// are disjoint. Nothing is returned unless disjointness was checked by
/// direct computation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/multset.hpp"
#include "pfree/rational.hpp"
#include "pfree/rng.hpp"

namespace pfree {

struct HomogeneousTuple {
  std::array<MultSet, 3> u;
  std::array<MultSet, 3> v;
  /// min over the six of |subset| / |input|.
  Rational achieved_density;
  /// 0 when |U'1U'2U'3| <= |V'1V'2V'3|, else 1.
  int side = 0;
  std::size_t u_product = 0;
  std::size_t v_product = 0;
  /// "threshold", "sampling" or "exhaustive".
  std::string strategy;

  const std::array<MultSet, 3>& smaller() const { return side == 0 ? u : v; }
};

struct FinderOptions {
  std::uint64_t samples = 2'000;
  /// Node cap for the exhaustive strategy.
  std::uint64_t exhaustive_nodes = 200'000;
  std::size_t exhaustive_max = 8;
  std::uint64_t seed = 0x5eed;
  Budget budget;
};

namespace detail {

inline bool disjoint_sorted(const MultSet& a, const MultSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

inline MultSet pick(const MultSet& s, const std::vector<std::size_t>& idx) {
  std::vector<Element> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(s[i]);
  std::sort(out.begin(), out.end());
  return MultSet::from_sorted(s.group_ptr(), std::move(out));
}

inline MultSet prefix(const MultSet& s, std::size_t r) {
  return MultSet::from_sorted(s.group_ptr(), std::vector<Element>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(r)));
}

inline MultSet suffix(const MultSet& s, std::size_t r) {
  return MultSet::from_sorted(s.group_ptr(), std::vector<Element>(s.end() - static_cast<std::ptrdiff_t>(r), s.end()));
}

/// Fills the product sizes, side and density after verifying disjointness.
inline bool accept(HomogeneousTuple& t, const std::array<MultSet, 6>& in, const Budget& budget) {
  const MultSet pu = product_set(t.u[0], t.u[1], t.u[2], budget);
  const MultSet pv = product_set(t.v[0], t.v[1], t.v[2], budget);
  if (!disjoint_sorted(pu, pv)) return false;
  t.u_product = pu.size();
  t.v_product = pv.size();
  t.side = pu.size() <= pv.size() ? 0 : 1;
  Rational d(1);
  for (int i = 0; i < 3; ++i) {
    d = std::min(d, Rational(size_q(t.u[i].size()) / size_q(in[i].size())));
    d = std::min(d, Rational(size_q(t.v[i].size()) / size_q(in[i + 3].size())));
  }
  t.achieved_density = d;
  return true;
}

/// Odometer over r-subsets of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t r = idx.size();
  std::size_t i = r;
  while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

inline std::vector<std::size_t> first_combination(std::size_t r) {
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

/// Every returned subset has size >= max(2, ceil(delta |input|)). Throws
/// NotFound("homogeneous", ...) when no strategy succeeds.
inline HomogeneousTuple find_homogeneous_tuple(const std::array<MultSet, 6>& in, const Rational& target_delta,
                                               const FinderOptions& opt = {}) {
  if (target_delta <= 0 || target_delta > 1) throw PreconditionError("target delta must lie in (0,1]");
  for (const auto& s : in) {
    if (s.size() < 2) throw PreconditionError("homogeneous tuple inputs need size >= 2");
    s.require_same_domain(in[0]);
  }
  std::array<std::size_t, 6> r{};
  for (int i = 0; i < 6; ++i) {
    r[i] = std::max<std::size_t>(2, static_cast<std::size_t>(ceil(target_delta * size_q(in[i].size()))));
    if (r[i] > in[i].size()) throw NotFound("homogeneous", "target density leaves no room in an input set");
  }
  const GroupOracle& g = in[0].group();

  // (a) ordered groups: bottom parts on one side, top parts on the other
  if (g.linearly_ordered()) {
    for (int flip = 0; flip < 2; ++flip) {
      HomogeneousTuple t;
      t.strategy = "threshold";
      for (int i = 0; i < 3; ++i) {
        const MultSet& a = in[flip == 0 ? i : i + 3];
        const MultSet& b = in[flip == 0 ? i + 3 : i];
        const std::size_t ra = r[flip == 0 ? i : i + 3];
        const std::size_t rb = r[flip == 0 ? i + 3 : i];
        (flip == 0 ? t.u : t.v)[i] = detail::prefix(a, ra);
        (flip == 0 ? t.v : t.u)[i] = detail::suffix(b, rb);
      }
      const auto& lo = flip == 0 ? t.u : t.v;
      const auto& hi = flip == 0 ? t.v : t.u;
      const Element max_lo = g.multiply(g.multiply(lo[0].vec().back(), lo[1].vec().back()), lo[2].vec().back());
      const Element min_hi = g.multiply(g.multiply(hi[0][0], hi[1][0]), hi[2][0]);
      if (max_lo < min_hi && detail::accept(t, in, opt.budget)) return t;
    }
  }

  // (b) random subsets of the minimal sizes
  SplitMix64 rng(opt.seed);
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    HomogeneousTuple t;
    t.strategy = "sampling";
    for (int i = 0; i < 6; ++i) {
      auto idx = rng.sample_distinct(in[i].size(), r[i]);
      (i < 3 ? t.u[i] : t.v[i - 3]) = detail::pick(in[i], idx);
    }
    if (detail::accept(t, in, opt.budget)) return t;
  }

  // (c) small inputs: all U-triples, then V1, V2 and a greedy V3 avoiding U'1U'2U'3
  bool small = true;
  for (const auto& s : in) small = small && s.size() <= opt.exhaustive_max;
  if (small) {
    std::uint64_t nodes = 0;
    std::array<std::vector<std::size_t>, 3> iu{detail::first_combination(r[0]), detail::first_combination(r[1]),
                                               detail::first_combination(r[2])};
    auto advance = [&](std::array<std::vector<std::size_t>, 3>& idx, const std::array<std::size_t, 3>& n) {
      for (int k = 2; k >= 0; --k) {
        if (detail::next_combination(idx[k], n[k])) return true;
        idx[k] = detail::first_combination(idx[k].size());
      }
      return false;
    };
    const std::array<std::size_t, 3> nu{in[0].size(), in[1].size(), in[2].size()};
    const std::array<std::size_t, 3> nv{in[3].size(), in[4].size(), in[5].size()};
    do {
      std::array<MultSet, 3> u{detail::pick(in[0], iu[0]), detail::pick(in[1], iu[1]), detail::pick(in[2], iu[2])};
      const MultSet pu = product_set(u[0], u[1], u[2], opt.budget);
      std::unordered_set<Element, ElementHash> forbidden(pu.begin(), pu.end());
      auto i1 = detail::first_combination(r[3]);
      do {
        auto i2 = detail::first_combination(r[4]);
        do {
          if (++nodes > opt.exhaustive_nodes) throw NotFound("homogeneous", "exhaustive search budget exhausted");
          const MultSet v12 = product_set(detail::pick(in[3], i1), detail::pick(in[4], i2), opt.budget);
          std::vector<std::size_t> allowed;
          for (std::size_t j = 0; j < in[5].size() && allowed.size() < r[5]; ++j) {
            bool ok = true;
            for (auto a : v12) {
              if (forbidden.count(g.multiply(a, in[5][j]))) {
                ok = false;
                break;
              }
            }
            if (ok) allowed.push_back(j);
          }
          if (allowed.size() == r[5]) {
            HomogeneousTuple t;
            t.strategy = "exhaustive";
            t.u = u;
            t.v = {detail::pick(in[3], i1), detail::pick(in[4], i2), detail::pick(in[5], allowed)};
            if (detail::accept(t, in, opt.budget)) return t;
            throw InternalError("exhaustive homogeneous tuple failed re-verification");
          }
        } while (detail::next_combination(i2, nv[1]));
      } while (detail::next_combination(i1, nv[0]));
    } while (advance(iu, nu));
  }
  throw NotFound("homogeneous", "no homogeneous tuple at the target density");
}

}  // namespace pfree
