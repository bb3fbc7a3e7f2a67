#pragma once

/// Product-free subsets of sets with doubling k = |X^2|/|X|.
///
/// Small sets (|X| < 16k) get a single non-identity element. Otherwise:
/// pass to Y in X with small tripling, halve Y down to a triple with
/// |UVW| <= |Y|/2, localize to Z with |Z^-1 Z Z^-1| <= |Y|/2, and pick g in
/// YZ^-1 outside Z^-1 Z Z^-1 maximizing |gZ ∩ Y|. If gz1 gz2 = gz3 then
/// g = z1^-1 z3 z2^-1, so gZ and hence gZ ∩ Y are product-free.

#include <string>
#include <unordered_set>
#include <vector>

#include "pfree/bounds.hpp"
#include "pfree/certificate.hpp"
#include "pfree/halving.hpp"
#include "pfree/localize.hpp"
#include "pfree/petridis.hpp"

namespace pfree {

struct ExtractOptions {
  PetridisOptions petridis;
  FinderOptions finder;
  Budget budget;
};

namespace detail {

inline Json encode_set(const MultSet& s) {
  Json a = Json::array();
  for (const auto& e : s.encode()) a.push_back(e);
  return a;
}

/// The pigeonhole choice: g in YZ^-1 minus Z^-1 Z Z^-1 maximizing |gZ ∩ Y|,
/// ties to the least g. Returns false when no candidate exists.
inline bool best_translate(const MultSet& y, const MultSet& z, const Budget& budget, Element& g_out,
                           MultSet& witness) {
  const MultSet zi = inverse_set(z);
  const MultSet forbidden = product_set(zi, z, zi, budget);
  const MultSet candidates = difference(product_set(y, zi, budget), forbidden);
  std::unordered_set<Element, ElementHash> ys(y.begin(), y.end());
  const GroupOracle& G = y.group();
  std::size_t best = 0;
  bool found = false;
  for (auto g : candidates) {
    std::size_t hits = 0;
    for (auto e : z) hits += ys.count(G.multiply(g, e));
    if (!found || hits > best) {
      best = hits;
      g_out = g;
      found = true;
    }
  }
  if (!found) return false;
  witness = intersect(left_translate(g_out, z), y);
  return true;
}

}  // namespace detail

inline Rational doubling(const MultSet& x, const Budget& budget = {}) {
  return size_q(product_set(x, x, budget).size()) / size_q(x.size());
}

/// Never throws NotFound: a failed stage yields complete = false with the
/// stage recorded in `failure`.
inline ExtractionCertificate product_free_extract(const MultSet& x, const BoundsProfile& profile,
                                                  const ExtractOptions& opt = {}) {
  if (x.empty()) throw PreconditionError("extraction needs a nonempty set");
  const GroupOracle& G = x.group();
  if (x.size() == 1 && x[0] == G.identity()) throw PreconditionError("the set {1} has no product-free subset");

  ExtractionCertificate cert;
  cert.algorithm = "thm33";
  cert.params["delta"] = to_string(profile.delta());
  cert.params["alpha"] = to_string(profile.alpha());
  if (const auto& ex = profile.exact()) {
    cert.params["c2"] = ex->c2;
    cert.params["eps2"] = to_string(ex->eps2);
  }

  const std::size_t x2 = product_set(x, x, opt.budget).size();
  const Rational k = size_q(x2) / size_q(x.size());
  cert.params["k"] = to_string(k);
  const bool small = size_q(x.size()) < 16 * k;
  cert.add(TraceRecord::make("doubling", {{"X", x.size()}, {"X2", x2}}, "|X^2| == k|X|", size_q(x2), Relation::kEq,
                             k * size_q(x.size())));
  cert.add(TraceRecord::make("branch", {{"X", x.size()}}, small ? "|X| < 16k" : "|X| >= 16k", size_q(x.size()),
                             small ? Relation::kLt : Relation::kGe, 16 * k));

  auto claim_guarantee = [&] {
    const auto& ex = profile.exact();
    if (!ex || !cert.all_stages_hold()) return;
    cert.guarantee = ex->eps2 * size_q(x.size()) / pow(k, static_cast<unsigned>(ex->c2));
  };

  if (small) {
    Element z = x[0];
    if (z == G.identity()) z = x[1];
    cert.witness = MultSet::from_sorted(x.group_ptr(), {z});
    cert.replay = Json{{"branch", "singleton"}, {"z", G.format(z)}};
    claim_guarantee();
    cert.seal(x);
    return cert;
  }

  try {
    const PetridisResult pet = petridis_subset(x, k, opt.petridis, opt.budget);
    const MultSet& y = pet.y;
    cert.params["petridis_strategy"] = pet.strategy;
    cert.add(TraceRecord::make("petridis", {{"Y", y.size()}, {"X", x.size()}}, "Y subset of X (1 = yes)",
                               Rational(y.subset_of(x) ? 1 : 0), Relation::kEq, Rational(1)));
    cert.add(TraceRecord::make("petridis", {{"Y", y.size()}, {"X", x.size()}}, "|Y| >= |X| / k", size_q(y.size()),
                               Relation::kGe, size_q(x.size()) / k));
    cert.add(TraceRecord::make("petridis", {{"Y", y.size()}, {"Y3", pet.y3_size}}, "|Y^3| <= k^3 |Y|",
                               size_q(pet.y3_size), Relation::kLe, k * k * k * size_q(y.size())));

    const HalvingResult half = seh_halving(y, profile.alpha(), profile.delta(), opt.finder);
    for (const auto& t : half.trace) cert.add(t);
    cert.params["halving_fallback"] = half.fallback;

    const LocalizeResult loc = localize_small_triple(y, half.u, half.v, half.w, opt.budget);
    for (const auto& t : loc.trace) cert.add(t);
    const MultSet& z = loc.z;

    Element g{};
    MultSet witness;
    if (!detail::best_translate(y, z, opt.budget, g, witness)) {
      throw NotFound("pigeonhole", "every g in YZ^-1 lies in Z^-1 Z Z^-1");
    }
    cert.add(TraceRecord::make("pigeonhole", {{"Y_g", witness.size()}, {"Z", z.size()}}, "|Y_g| >= |Z| / (2k^3)",
                               size_q(witness.size()), Relation::kGe, size_q(z.size()) / (2 * k * k * k)));
    cert.witness = std::move(witness);
    cert.replay = Json{{"branch", "main"}, {"g", G.format(g)}, {"Z", detail::encode_set(z)}, {"Y", detail::encode_set(y)}};
    claim_guarantee();
  } catch (const NotFound& e) {
    cert.complete = false;
    cert.failure = e.stage() + ": " + e.what();
    cert.witness = MultSet::from_sorted(x.group_ptr(), {});
  }
  cert.seal(x);
  return cert;
}

}  // namespace pfree
