#pragma once

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "pfree/group.hpp"
#include "pfree/hash.hpp"

namespace pfree {

/// Membership test over a group's handles: a bitmap for dense groups, a
/// hash set otherwise.
class Membership {
 public:
  explicit Membership(const GroupOracle& g) {
    if (g.dense() && g.enumerable()) bits_.assign(*g.order(), false);
  }
  bool insert(Element e) {
    if (!bits_.empty()) {
      auto ref = bits_[static_cast<std::size_t>(e.id)];
      if (ref) return false;
      ref = true;
      return true;
    }
    return set_.insert(e).second;
  }
  bool contains(Element e) const {
    if (!bits_.empty()) return bits_[static_cast<std::size_t>(e.id)];
    return set_.count(e) != 0;
  }

 private:
  std::vector<bool> bits_;
  std::unordered_set<Element, ElementHash> set_;
};

/// Elements of the subgroup generated by `gens`, sorted. The group must be
/// finite so that every element has finite order.
inline std::vector<Element> closure(const GroupOracle& g, const std::vector<Element>& gens) {
  Membership seen(g);
  std::vector<Element> out{g.identity()};
  seen.insert(g.identity());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto s : gens) {
      const Element next = g.multiply(out[i], s);
      if (seen.insert(next)) {
        out.push_back(next);
        if (out.size() > kEnumerationCap) throw BudgetExceeded("subgroup closure exceeds enumeration cap");
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A small generating set of the subgroup with element list `elems`
/// (sorted), chosen greedily in canonical order. Every element of `elems`
/// lies in the closure of the result; the closure may be larger when
/// `elems` is not a subgroup.
inline std::vector<Element> generating_set(const GroupOracle& g, const std::vector<Element>& elems) {
  std::vector<Element> gens;
  std::vector<Element> span{g.identity()};
  for (auto e : elems) {
    if (std::binary_search(span.begin(), span.end(), e)) continue;
    gens.push_back(e);
    span = closure(g, gens);
  }
  return gens;
}

/// Whether sorted `elems` is a subgroup of g.
inline bool is_subgroup(const GroupOracle& g, const std::vector<Element>& elems) {
  if (!std::binary_search(elems.begin(), elems.end(), g.identity())) return false;
  return closure(g, generating_set(g, elems)) == elems;
}

/// Whether subgroup H (sorted elements) is normal in the subgroup with
/// generators `ambient_gens`: conjugates of H's generators stay in H.
inline bool is_normal(const GroupOracle& g, const std::vector<Element>& ambient_gens,
                      const std::vector<Element>& h) {
  for (auto x : ambient_gens) {
    const Element xi = g.invert(x);
    for (auto s : generating_set(g, h)) {
      if (!std::binary_search(h.begin(), h.end(), g.multiply(g.multiply(x, s), xi))) return false;
    }
  }
  return true;
}

inline Element commutator(const GroupOracle& g, Element a, Element b) {
  return g.multiply(g.multiply(g.invert(a), g.invert(b)), g.multiply(a, b));
}

inline std::string digest_elements(const std::vector<Element>& elems) {
  Fnv1a h;
  for (auto e : elems) h.update(static_cast<std::uint64_t>(e.id));
  return h.hex();
}

/// A subgroup viewed as a group in its own right. Shares handles and the
/// domain tag with its parent, so sets in the subgroup are also sets in
/// the parent.
class SubgroupOracle final : public GroupOracle {
 public:
  SubgroupOracle(GroupPtr parent, std::vector<Element> sorted_elements)
      : GroupOracle(parent->spec() + "{" + digest_elements(sorted_elements) + "}", parent->domain_tag()),
        parent_(std::move(parent)),
        elems_(std::move(sorted_elements)) {
    if (!is_subgroup(*parent_, elems_)) throw NotSubgroup("element list is not a subgroup of " + parent_->spec());
    abelian_ = true;
    const auto gens = generating_set(*parent_, elems_);
    for (auto a : gens) {
      for (auto b : gens) {
        if (parent_->multiply(a, b) != parent_->multiply(b, a)) abelian_ = false;
      }
    }
  }

  const GroupPtr& parent() const { return parent_; }

  Element identity() const override { return parent_->identity(); }
  std::optional<std::uint64_t> order() const override { return elems_.size(); }
  std::vector<Element> elements() const override { return elems_; }
  bool dense() const override { return false; }
  bool contains(Element e) const override { return std::binary_search(elems_.begin(), elems_.end(), e); }
  Payload payload(Element e) const override { return parent_->payload(e); }
  Element from_payload(const Payload& p) const override {
    const Element e = parent_->from_payload(p);
    if (!contains(e)) throw ParseError("element is not in the subgroup");
    return e;
  }
  std::string format(Element e) const override { return parent_->format(e); }
  Element parse(std::string_view text) const override {
    const Element e = parent_->parse(text);
    if (!contains(e)) throw ParseError("element is not in the subgroup");
    return e;
  }
  bool abelian() const override { return abelian_; }

 protected:
  Element do_multiply(Element a, Element b) const override { return parent_->multiply(a, b); }
  Element do_invert(Element a) const override { return parent_->invert(a); }

 private:
  GroupPtr parent_;
  std::vector<Element> elems_;
  bool abelian_ = false;
};

}  // namespace pfree
