#pragma once

/// Product-free subsets in solvable groups by descent along a subnormal
/// series with abelian factors. At each level either half of C lies in the
/// next subgroup (descend), or half lies outside it and the weighted
/// abelian lemma runs on the image in the abelian factor, weighting each
/// coset by how many elements of C it holds. Preimages of product-free
/// sets are product-free, so the pulled-back set keeps a 1/4 share of
/// C minus H, and each descent costs a factor 2.

#include <string>
#include <unordered_map>
#include <vector>

#include "pfree/alon_kleitman.hpp"
#include "pfree/certificate.hpp"
#include "pfree/quotient.hpp"

namespace pfree {

inline ExtractionCertificate solvable_extract(const MultSet& c, const SubnormalSeries& series,
                                              const AlonKleitmanOptions& ak = {}) {
  if (series.groups.size() < 2) throw PreconditionError("series must have at least one step");
  const GroupOracle& top = *series.groups.front();
  if (c.empty()) throw PreconditionError("solvable_extract needs a nonempty set");
  if (c.group().domain_tag() != top.domain_tag()) throw DomainMismatch("set lives outside the series' group");
  for (auto e : c) {
    if (!top.contains(e)) throw PreconditionError("set is not inside the top group of the series");
  }
  if (c.contains(top.identity())) throw PreconditionError("set must not contain the identity");

  const int n = series.n();
  ExtractionCertificate cert;
  cert.algorithm = "solvable";
  cert.params["alpha"] = "1/4";
  cert.params["n"] = n;
  Json orders = Json::array();
  for (const auto& gr : series.groups) orders.push_back(*gr->order());
  cert.params["series_orders"] = orders;

  MultSet cur = c;
  std::size_t level = 0;
  for (;;) {
    const GroupOracle& sub = *series.groups[level + 1];
    std::vector<Element> inside, outside;
    for (auto e : cur) (sub.contains(e) ? inside : outside).push_back(e);
    const std::string stage = "level " + std::to_string(level);
    if (2 * inside.size() >= cur.size() && level + 2 < series.groups.size()) {
      cert.add(TraceRecord::make(stage, {{"C", cur.size()}, {"C_in_H", inside.size()}}, "|C cap H| >= |C|/2",
                                 size_q(inside.size()), Relation::kGe, size_q(cur.size()) / 2));
      cur = MultSet::from_sorted(c.group_ptr(), std::move(inside));
      ++level;
      continue;
    }
    cert.add(TraceRecord::make(stage, {{"C", cur.size()}, {"C_minus_H", outside.size()}},
                               "|C \\ H| >= |C|/2", size_q(outside.size()), Relation::kGe,
                               size_q(cur.size()) / 2));

    const QuotientGroup& factor = *series.factors[level];
    std::unordered_map<std::int64_t, std::uint64_t> fiber;
    std::vector<Element> images;
    for (auto e : outside) {
      const Element b = factor.project(e);
      if (fiber[b.id]++ == 0) images.push_back(b);
    }
    std::sort(images.begin(), images.end());
    std::vector<std::uint64_t> weights;
    for (auto b : images) weights.push_back(fiber[b.id]);
    const WeightedSet wb(MultSet::from_sorted(series.factors[level], images), std::move(weights));
    const auto res = alon_kleitman_weighted(wb, ak);

    cert.add(TraceRecord::make(stage + " weighted lemma",
                               {{"B", images.size()}, {"A", res.chosen.size()}, {"weight_A", res.weight},
                                {"weight_B", res.total}},
                               "sum_A w >= sum_B w / 4", Rational(static_cast<std::int64_t>(res.weight)),
                               Relation::kGe, Rational(static_cast<std::int64_t>(res.total)) / 4));
    std::vector<Element> witness;
    for (auto e : outside) {
      if (res.chosen.contains(factor.project(e))) witness.push_back(e);
    }
    cert.witness = MultSet::from_sorted(c.group_ptr(), std::move(witness));
    cert.replay["level"] = level;
    cert.replay["modulus"] = res.modulus;
    cert.replay["character"] = res.character;
    cert.replay["exhaustive"] = res.exhaustive;
    break;
  }

  cert.guarantee = size_q(c.size()) / (4 * pow(Rational(2), static_cast<unsigned>(n)));
  cert.add(TraceRecord::make("bound", {{"C", c.size()}, {"witness", cert.witness.size()}},
                             "|witness| >= (1/4)|C|/2^n", size_q(cert.witness.size()), Relation::kGe,
                             *cert.guarantee));
  cert.seal(c);
  return cert;
}

}  // namespace pfree
