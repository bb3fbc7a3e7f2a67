#pragma once

/// Quotients by normal subgroups, subnormal series with abelian factors,
/// and subgroup lattices of cyclic groups.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfree/abelian.hpp"
#include "pfree/error.hpp"
#include "pfree/group.hpp"
#include "pfree/multset.hpp"
#include "pfree/subgroup.hpp"

namespace pfree {

/// G/H for a normal subgroup H of a finite group G. Each coset is
/// represented by its canonically least member, and quotient handles are
/// the parent handles of those representatives.
class QuotientGroup final : public GroupOracle {
 public:
  QuotientGroup(GroupPtr parent, std::vector<Element> normal_subgroup)
      : GroupOracle(parent->spec() + "/" + digest_elements(normal_subgroup)),
        parent_(std::move(parent)),
        kernel_(std::move(normal_subgroup)) {
    const auto all = parent_->elements();
    rep_.reserve(all.size());
    for (auto g : all) {
      if (rep_.count(g.id)) continue;
      reps_.push_back(g);  // canonical order visits the least coset member first
      for (auto h : kernel_) rep_.emplace(parent_->multiply(g, h).id, g);
    }
    const auto gens = generating_set(*parent_, all);
    abelian_ = true;
    for (auto a : gens) {
      for (auto b : gens) {
        if (project(commutator(*parent_, a, b)) != identity()) abelian_ = false;
      }
    }
    if (abelian_) {
      const AbelianCoordinates coords(*this);
      invariant_factors_ = detail::invariant_factors_of(coords.moduli());
    }
  }

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Element>& kernel() const { return kernel_; }

  /// The canonical projection G -> G/H.
  Element project(Element g) const {
    const auto it = rep_.find(g.id);
    if (it == rep_.end()) throw DomainMismatch("element is not in the parent group");
    return it->second;
  }

  Element identity() const override { return project(parent_->identity()); }
  std::optional<std::uint64_t> order() const override { return reps_.size(); }
  std::vector<Element> elements() const override { return reps_; }
  bool dense() const override { return false; }
  bool contains(Element e) const override {
    const auto it = rep_.find(e.id);
    return it != rep_.end() && it->second == e;
  }
  Payload payload(Element e) const override { return parent_->payload(e); }
  Element from_payload(const Payload& p) const override { return project(parent_->from_payload(p)); }
  std::string format(Element e) const override { return parent_->format(e); }
  Element parse(std::string_view text) const override { return project(parent_->parse(text)); }
  bool abelian() const override { return abelian_; }
  std::optional<std::vector<std::int64_t>> invariant_factors() const override { return invariant_factors_; }

 protected:
  Element do_multiply(Element a, Element b) const override { return project(parent_->multiply(a, b)); }
  Element do_invert(Element a) const override { return project(parent_->invert(a)); }

 private:
  GroupPtr parent_;
  std::vector<Element> kernel_;
  std::vector<Element> reps_;
  std::unordered_map<std::int64_t, Element> rep_;
  bool abelian_ = false;
  std::optional<std::vector<std::int64_t>> invariant_factors_;
};

using QuotientPtr = std::shared_ptr<const QuotientGroup>;

/// G/H together with its projection. Verifies that H is a normal
/// subgroup, that projection is a homomorphism (exhaustively for |G| <= 200,
/// on 10^4 random pairs otherwise) and that every fiber has |H| elements.
inline QuotientPtr quotient_projection(const GroupPtr& g, const MultSet& h) {
  if (!g->enumerable()) throw NotEnumerable("quotient_projection needs a finite enumerable group");
  if (h.group().domain_tag() != g->domain_tag()) throw DomainMismatch("subgroup lives in another group");
  const std::vector<Element>& hs = h.vec();
  if (!is_subgroup(*g, hs)) throw NotSubgroup("H is not a subgroup of " + g->spec());
  const auto all = g->elements();
  if (!is_normal(*g, generating_set(*g, all), hs)) throw NotNormal("H is not normal in " + g->spec());
  auto q = std::make_shared<const QuotientGroup>(g, hs);

  if (q->order().value() * hs.size() != all.size()) throw InternalError("quotient order mismatch");
  std::unordered_map<std::int64_t, std::size_t> fiber;
  for (auto x : all) ++fiber[q->project(x).id];
  for (const auto& [rep, count] : fiber) {
    if (count != hs.size()) throw InternalError("quotient fiber has the wrong size");
  }
  auto check = [&](Element a, Element b) {
    if (q->project(g->multiply(a, b)) != q->multiply(q->project(a), q->project(b))) {
      throw InternalError("projection is not a homomorphism");
    }
  };
  if (all.size() <= 200) {
    for (auto a : all) {
      for (auto b : all) check(a, b);
    }
  } else {
    SplitMix64 rng(0xa11ce);
    for (int i = 0; i < 10'000; ++i) check(all[rng.below(all.size())], all[rng.below(all.size())]);
  }
  return q;
}

/// G = G_0 > G_1 > ... > G_{n+1} = {1}, each normal in the previous one with
/// abelian factor, together with the factor groups G_i / G_{i+1}.
struct SubnormalSeries {
  /// groups[0] is the top group; groups.back() is trivial.
  std::vector<GroupPtr> groups;
  /// factors[i] = groups[i] / groups[i+1].
  std::vector<QuotientPtr> factors;

  /// n in "a length-(n+1) series"; the top group is abelian iff n == 0.
  int n() const { return static_cast<int>(groups.size()) - 2; }
  std::size_t length() const { return groups.size() - 1; }
};

/// Builds a series from an explicit chain of sorted element lists, top first,
/// ending in the trivial subgroup, and checks every invariant.
inline SubnormalSeries make_series(const GroupPtr& top, const std::vector<std::vector<Element>>& chain) {
  if (chain.size() < 2) throw PreconditionError("a series needs at least two terms");
  if (chain.back() != std::vector<Element>{top->identity()}) {
    throw PreconditionError("series must end at the trivial subgroup");
  }
  SubnormalSeries s;
  s.groups.push_back(top);
  if (chain.front() != top->elements()) throw PreconditionError("series must start at the whole group");
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto& parent = s.groups.back();
    const auto& sub = chain[i];
    if (!std::includes(chain[i - 1].begin(), chain[i - 1].end(), sub.begin(), sub.end())) {
      throw PreconditionError("series terms must be nested");
    }
    if (!is_subgroup(*top, sub)) throw NotSubgroup("series term " + std::to_string(i) + " is not a subgroup");
    if (!is_normal(*top, generating_set(*top, chain[i - 1]), sub)) {
      throw NotNormal("series term " + std::to_string(i) + " is not normal in its predecessor");
    }
    auto factor = std::make_shared<const QuotientGroup>(parent, sub);
    if (!factor->abelian()) throw NotAbelian("series factor " + std::to_string(i - 1) + " is not abelian");
    s.factors.push_back(std::move(factor));
    s.groups.push_back(std::make_shared<const SubgroupOracle>(top, sub));
  }
  return s;
}

/// Checks nesting, normality, abelian factors and trivial last term.
inline void verify_series(const SubnormalSeries& s) {
  if (s.groups.size() < 2 || s.factors.size() + 1 != s.groups.size()) {
    throw InternalError("malformed series");
  }
  const GroupOracle& top = *s.groups.front();
  if (s.groups.back()->order() != 1u) throw InternalError("series does not end at the trivial group");
  for (std::size_t i = 0; i + 1 < s.groups.size(); ++i) {
    const auto upper = s.groups[i]->elements();
    const auto lower = s.groups[i + 1]->elements();
    const auto gens = generating_set(top, upper);
    if (!is_normal(top, gens, lower)) throw InternalError("series step is not normal");
    for (auto a : gens) {
      for (auto b : gens) {
        if (!std::binary_search(lower.begin(), lower.end(), commutator(top, a, b))) {
          throw InternalError("series factor is not abelian");
        }
      }
    }
  }
}

/// Smallest normal subgroup of `ambient` (given by generators) containing `seeds`.
inline std::vector<Element> normal_closure(const GroupOracle& g, const std::vector<Element>& ambient_gens,
                                           std::vector<Element> seeds) {
  auto sub = closure(g, seeds);
  for (bool grew = true; grew;) {
    grew = false;
    for (auto x : ambient_gens) {
      const Element xi = g.invert(x);
      for (auto s : std::vector<Element>(seeds)) {
        const Element c = g.multiply(g.multiply(x, s), xi);
        if (!std::binary_search(sub.begin(), sub.end(), c)) {
          seeds.push_back(c);
          sub = closure(g, seeds);
          grew = true;
        }
      }
    }
  }
  return sub;
}

/// The derived series G > G' > G'' > ... ; succeeds iff it reaches {1}.
inline SubnormalSeries derived_subnormal_series(const GroupPtr& g) {
  if (!g->enumerable()) throw NotEnumerable("derived series needs a finite enumerable group");
  if (*g->order() > 10'000) throw PreconditionError("derived series limited to order <= 10^4");
  std::vector<std::vector<Element>> chain{g->elements()};
  while (chain.back().size() > 1) {
    const auto gens = generating_set(*g, chain.back());
    std::vector<Element> comms;
    for (auto a : gens) {
      for (auto b : gens) {
        const Element c = commutator(*g, a, b);
        if (c != g->identity()) comms.push_back(c);
      }
    }
    auto next = normal_closure(*g, gens, comms);
    if (next.size() == chain.back().size()) {
      throw NotSolvable(g->spec() + " is not solvable: derived series stabilizes at order " +
                        std::to_string(next.size()));
    }
    chain.push_back(std::move(next));
  }
  auto s = make_series(g, chain);
  verify_series(s);
  return s;
}

/// All subgroups of Z/n, one per divisor d of n (the multiples of n/d),
/// ordered by increasing size. Each is checked to be closed under adding
/// its generator.
inline std::vector<MultSet> cyclic_subgroups(const GroupPtr& g) {
  const auto moduli = g->coordinate_moduli();
  if (!moduli || moduli->size() != 1) throw PreconditionError("cyclic_subgroups needs a cyclic:n group");
  const std::int64_t n = moduli->front();
  if (n < 2) throw PreconditionError("cyclic_subgroups needs n >= 2");
  std::vector<MultSet> out;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    const std::int64_t step = n / d;
    std::vector<Element> k;
    for (std::int64_t v = 0; v < n; v += step) k.push_back(Element{v});
    for (auto e : k) {
      if ((e.id + step) % n % step != 0) throw InternalError("cyclic subgroup not closed");
    }
    out.push_back(MultSet::from_sorted(g, std::move(k)));
  }
  return out;
}

}  // namespace pfree
