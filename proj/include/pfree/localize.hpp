#pragma once

/// From a triple U, V, W inside Y with small triple product, find Z with
/// small Z^-1 Z Z^-1. Each Z_{g,h} = U^-1 g ∩ V ∩ h W^-1 for g in UV, h in VW;
/// the map (u, z, w) -> (g, z, h) = (uz, z, zw) is a bijection onto the
/// triples with z in Z_{g,h}, so the Z_{g,h} sizes sum to |U||V||W|.
/// With z1 = u1^-1 g and z3 = h w3^-1, z1^-1 z2 z3^-1 = g^-1 (u1 z2 w3) h^-1,
/// so Z^-1 Z Z^-1 sits inside a two-sided translate of UVW.

#include <unordered_set>
#include <vector>

#include "pfree/certificate.hpp"

namespace pfree {

struct LocalizeResult {
  MultSet z;
  Element g{}, h{};
  /// Sum of |Z_{g,h}| over all scanned pairs.
  std::uint64_t total = 0;
  std::uint64_t pairs = 0;
  std::size_t zzz_size = 0;
  std::vector<TraceRecord> trace;

  bool all_hold() const {
    for (const auto& t : trace) {
      if (!t.holds) return false;
    }
    return true;
  }
};

/// Z_{g,h} as a sorted set.
inline MultSet z_gh(Element g, Element h, const MultSet& u, const MultSet& v, const MultSet& w) {
  const GroupOracle& G = v.group();
  std::vector<Element> out;
  for (auto z : v) {
    const Element zi = G.invert(z);
    if (u.contains(G.multiply(g, zi)) && w.contains(G.multiply(zi, h))) out.push_back(z);
  }
  return MultSet::from_sorted(v.group_ptr(), std::move(out));
}

/// Largest Z_{g,h}; ties go to the least (g, h) in canonical order.
inline LocalizeResult localize_small_triple(const MultSet& y, const MultSet& u, const MultSet& v, const MultSet& w,
                                            const Budget& budget = {}) {
  if (u.empty() || v.empty() || w.empty()) throw PreconditionError("localize needs nonempty U, V, W");
  if (!u.subset_of(y) || !v.subset_of(y) || !w.subset_of(y)) throw PreconditionError("U, V, W must lie in Y");
  const std::size_t uvw = product_set(u, v, w, budget).size();
  if (2 * uvw > y.size()) throw PreconditionError("localize needs |UVW| <= |Y|/2");

  const MultSet uv = product_set(u, v, budget);
  const MultSet vw = product_set(v, w, budget);
  const GroupOracle& G = y.group();
  std::unordered_set<Element, ElementHash> us(u.begin(), u.end()), ws(w.begin(), w.end());
  std::vector<Element> vinv;
  vinv.reserve(v.size());
  for (auto z : v) vinv.push_back(G.invert(z));

  LocalizeResult out;
  std::size_t best = 0;
  for (auto g : uv) {
    // z with g z^-1 in U, computed once per g
    std::vector<std::size_t> left;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (us.count(G.multiply(g, vinv[i]))) left.push_back(i);
    }
    for (auto h : vw) {
      ++out.pairs;
      std::size_t count = 0;
      for (auto i : left) count += ws.count(G.multiply(vinv[i], h));
      out.total += count;
      if (count > best) {
        best = count;
        out.g = g;
        out.h = h;
      }
    }
  }
  if (best == 0) throw InternalError("localize found no nonempty Z_{g,h}");
  out.z = z_gh(out.g, out.h, u, v, w);
  const MultSet zi = inverse_set(out.z);
  out.zzz_size = product_set(zi, out.z, zi, budget).size();

  const std::uint64_t volume = static_cast<std::uint64_t>(u.size()) * v.size() * w.size();
  out.trace.push_back(TraceRecord::make("localize", {{"U", u.size()}, {"V", v.size()}, {"W", w.size()}, {"pairs", out.pairs}},
                                        "sum |Z_{g,h}| == |U||V||W|", Rational(out.total), Relation::kEq,
                                        Rational(volume)));
  out.trace.push_back(TraceRecord::make("localize", {{"Z", out.z.size()}, {"Y", y.size()}},
                                        "|Z| >= 4|U||V||W| / |Y|^2", size_q(out.z.size()), Relation::kGe,
                                        Rational(4 * Rational(volume)) / (size_q(y.size()) * size_q(y.size()))));
  out.trace.push_back(TraceRecord::make("localize", {{"ZZZ", out.zzz_size}, {"UVW", uvw}},
                                        "|Z^-1 Z Z^-1| <= |UVW|", size_q(out.zzz_size), Relation::kLe, size_q(uvw)));
  out.trace.push_back(TraceRecord::make("localize", {{"ZZZ", out.zzz_size}, {"Y", y.size()}},
                                        "|Z^-1 Z Z^-1| <= |Y| / 2", size_q(out.zzz_size), Relation::kLe,
                                        size_q(y.size()) / 2));
  return out;
}

}  // namespace pfree
