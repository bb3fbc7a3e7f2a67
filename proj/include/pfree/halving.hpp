#pragma once

/// Iterated halving: starting from U = V = W = Y, repeatedly split the
/// current triple with a homogeneous tuple and keep the side with the
/// smaller triple product. Disjoint triple products inside UVW mean the
/// smaller one has at most half its size, so after
/// n - 1 = ceil(log2(|Y^3| / (alpha |Y|))) steps |UVW| <= alpha |Y|.

#include <string>
#include <vector>

#include "pfree/bounds.hpp"
#include "pfree/certificate.hpp"
#include "pfree/homogeneous.hpp"

namespace pfree {

struct HalvingStep {
  std::size_t u = 0, v = 0, w = 0;
  std::size_t product = 0;
  Rational achieved_density;
  std::string strategy;
};

struct HalvingResult {
  MultSet u, v, w;
  std::size_t product = 0;
  /// Number of halving steps the bound calls for.
  std::int64_t n = 0;
  bool fallback = false;
  /// The product bound was met before all n - 1 steps ran.
  bool early_exit = false;
  std::vector<HalvingStep> steps;
  std::vector<TraceRecord> trace;

  bool all_hold() const {
    for (const auto& t : trace) {
      if (!t.holds) return false;
    }
    return true;
  }
};

/// Lower bound eps |Y|^{c0+1} / |Y^3|^{c0} on the output sizes, when c0 is
/// an integer.
inline std::optional<Rational> halving_size_bound(const BoundsProfile& profile, std::size_t y, std::size_t y3) {
  const auto& ex = profile.exact();
  if (!ex) return std::nullopt;
  const auto c0 = static_cast<unsigned>(ex->c0);
  return ex->eps0 * pow(size_q(y), c0 + 1) / pow(size_q(y3), c0);
}

/// Stops early once |UVW| <= alpha |Y|; a finder failure is rethrown as
/// NotFound tagged with the step index.
inline HalvingResult seh_halving(const MultSet& y, const Rational& alpha, const Rational& delta,
                                 const FinderOptions& finder = {}) {
  if (alpha <= 0 || alpha >= 1) throw PreconditionError("alpha must lie in (0,1)");
  if (delta <= 0 || delta >= 1) throw PreconditionError("delta must lie in (0,1)");
  if (size_q(y.size()) < 8 / alpha) throw PreconditionError("halving needs |Y| >= 8/alpha");
  const BoundsProfile profile = compute_bounds_profile(delta, alpha);

  HalvingResult out;
  const std::size_t y3 = power_set(y, 3, finder.budget).size();
  const Rational target = alpha * size_q(y.size());
  out.n = ceil_log2(size_q(y3) / target) + 1;
  out.trace.push_back(TraceRecord::make("halving", {{"Y", y.size()}, {"Y3", y3}, {"n", static_cast<std::uint64_t>(out.n)}},
                                        "|Y^3| <= 2^(n-1) alpha |Y|", size_q(y3), Relation::kLe,
                                        pow(Rational(2), static_cast<unsigned>(out.n - 1)) * target));

  const bool fallback = pow(delta, static_cast<unsigned>(std::max<std::int64_t>(out.n - 2, 0))) *
                            size_q(y.size()) < 2;
  if (fallback) {
    out.fallback = true;
    const MultSet two = MultSet::from_sorted(y.group_ptr(), {y[0], y[1]});
    out.u = out.v = out.w = two;
    out.product = power_set(two, 3, finder.budget).size();
    out.trace.push_back(TraceRecord::make("halving fallback", {{"U", 2}, {"V", 2}, {"W", 2}, {"UVW", out.product}},
                                          "|UVW| <= 8", size_q(out.product), Relation::kLe, Rational(8)));
  } else {
    MultSet u = y, v = y, w = y;
    std::size_t prod = y3;
    for (std::int64_t step = 1; step < out.n; ++step) {
      if (size_q(prod) <= target) {
        out.early_exit = true;
        break;
      }
      const std::string stage = "halving step " + std::to_string(step);
      HomogeneousTuple t;
      try {
        t = find_homogeneous_tuple({u, v, w, u, v, w}, delta, finder);
      } catch (const NotFound& e) {
        throw NotFound(stage, e.what());
      }
      const auto& next = t.smaller();
      const std::array<const MultSet*, 3> prev{&u, &v, &w};
      bool contained = true;
      for (int i = 0; i < 3; ++i) contained = contained && next[i].subset_of(*prev[i]);
      out.trace.push_back(TraceRecord::make(stage, {{"U", next[0].size()}, {"V", next[1].size()}, {"W", next[2].size()}},
                                            "new sets contained in previous (1 = yes)", Rational(contained ? 1 : 0),
                                            Relation::kEq, Rational(1)));
      for (int i = 0; i < 3; ++i) {
        static const char* names[] = {"U", "V", "W"};
        out.trace.push_back(TraceRecord::make(
            stage, {{std::string(names[i]) + "_prev", prev[i]->size()}, {names[i], next[i].size()}},
            std::string("|") + names[i] + "'| >= delta |" + names[i] + "|", size_q(next[i].size()), Relation::kGe,
            delta * size_q(prev[i]->size())));
      }
      // recomputed, not taken from the finder
      const std::size_t recomputed = product_set(next[0], next[1], next[2], finder.budget).size();
      out.trace.push_back(TraceRecord::make(stage, {{"UVW_prev", prod}, {"UVW", recomputed}},
                                            "|U'V'W'| <= |UVW| / 2", size_q(recomputed), Relation::kLe,
                                            size_q(prod) / 2));
      out.steps.push_back({next[0].size(), next[1].size(), next[2].size(), recomputed, t.achieved_density,
                           t.strategy});
      u = next[0];
      v = next[1];
      w = next[2];
      prod = recomputed;
    }
    out.u = std::move(u);
    out.v = std::move(v);
    out.w = std::move(w);
    out.product = prod;
  }

  out.trace.push_back(TraceRecord::make("halving result", {{"UVW", out.product}, {"Y", y.size()}},
                                        "|UVW| <= alpha |Y|", size_q(out.product), Relation::kLe, target));
  if (const auto bound = halving_size_bound(profile, y.size(), y3)) {
    const std::size_t smallest = std::min({out.u.size(), out.v.size(), out.w.size()});
    out.trace.push_back(TraceRecord::make("halving result", {{"min_size", smallest}},
                                          "min(|U|,|V|,|W|) >= eps0 |Y|^(c0+1) / |Y^3|^c0", size_q(smallest),
                                          Relation::kGe, *bound));
  }
  return out;
}

}  // namespace pfree
