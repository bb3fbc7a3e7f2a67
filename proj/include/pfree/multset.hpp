#pragma once

/// Finite multiplicative sets and the basic Ruzsa-calculus operations on
/// them: product sets, inverses, powers, product-freeness and incident
/// pair counts.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/group.hpp"

namespace pfree {

/// Work caps for set-algebra operations.
struct Budget {
  /// Largest product set any single operation may accumulate.
  std::uint64_t max_elements = 10'000'000;
  /// Largest number of ordered pairs a pair scan may visit.
  std::uint64_t max_pairs = 4'000'000'000ULL;
};

/// A finite subset of one ambient group, stored sorted in canonical order.
class MultSet {
 public:
  MultSet() = default;

  MultSet(GroupPtr group, std::vector<Element> elements) : group_(std::move(group)) {
    if (!group_) throw PreconditionError("MultSet needs an ambient group");
    for (auto e : elements) {
      if (!group_->contains(e)) {
        throw DomainMismatch("element handle " + std::to_string(e.id) + " is not in " + group_->spec());
      }
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    elems_ = std::move(elements);
  }

  /// Trusted constructor: `sorted` must be strictly increasing members of `group`.
  static MultSet from_sorted(GroupPtr group, std::vector<Element> sorted) {
    MultSet s;
    s.group_ = std::move(group);
    s.elems_ = std::move(sorted);
    return s;
  }

  static MultSet of(GroupPtr group, std::initializer_list<std::int64_t> ids) {
    std::vector<Element> v;
    for (auto id : ids) v.push_back(Element{id});
    return MultSet(std::move(group), std::move(v));
  }

  static MultSet parse(GroupPtr group, const std::vector<std::string>& encodings) {
    std::vector<Element> v;
    v.reserve(encodings.size());
    for (const auto& text : encodings) v.push_back(group->parse(text));
    return MultSet(std::move(group), std::move(v));
  }

  const GroupOracle& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }

  std::span<const Element> elements() const { return elems_; }
  const std::vector<Element>& vec() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  Element operator[](std::size_t i) const { return elems_[i]; }

  bool contains(Element e) const { return std::binary_search(elems_.begin(), elems_.end(), e); }

  bool same_domain(const MultSet& other) const {
    return group_ && other.group_ && group_->domain_tag() == other.group_->domain_tag();
  }
  void require_same_domain(const MultSet& other) const {
    if (!same_domain(other)) {
      throw DomainMismatch("sets live in different groups: '" + (group_ ? group_->spec() : "?") + "' vs '" +
                           (other.group_ ? other.group_->spec() : "?") + "'");
    }
  }

  bool subset_of(const MultSet& other) const {
    require_same_domain(other);
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  std::vector<std::string> encode() const {
    std::vector<std::string> out;
    out.reserve(elems_.size());
    for (auto e : elems_) out.push_back(group_->format(e));
    return out;
  }

  friend bool operator==(const MultSet& a, const MultSet& b) {
    return a.same_domain(b) && a.elems_ == b.elems_;
  }

 private:
  GroupPtr group_;
  std::vector<Element> elems_;
};

inline MultSet intersect(const MultSet& a, const MultSet& b) {
  a.require_same_domain(b);
  std::vector<Element> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return MultSet::from_sorted(a.group_ptr(), std::move(out));
}

inline MultSet difference(const MultSet& a, const MultSet& b) {
  a.require_same_domain(b);
  std::vector<Element> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return MultSet::from_sorted(a.group_ptr(), std::move(out));
}

inline MultSet unite(const MultSet& a, const MultSet& b) {
  a.require_same_domain(b);
  std::vector<Element> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return MultSet::from_sorted(a.group_ptr(), std::move(out));
}

namespace detail {

/// Collects distinct handles into a sorted vector, choosing a dense mark
/// array when the handle range is small and a hash set otherwise.
class Accumulator {
 public:
  Accumulator(std::int64_t lo, std::int64_t hi, std::uint64_t expected, const Budget& budget)
      : budget_(budget) {
    const __int128 span = static_cast<__int128>(hi) - lo + 1;
    dense_ = hi >= lo && span <= (1u << 26) && span <= 64 * static_cast<__int128>(expected) + 4096;
    if (dense_) {
      lo_ = lo;
      marks_.assign(static_cast<std::size_t>(span), 0);
    }
  }

  void add(Element e) {
    if (dense_) {
      auto& m = marks_[static_cast<std::size_t>(e.id - lo_)];
      if (!m) {
        m = 1;
        out_.push_back(e);
        check();
      }
    } else if (seen_.insert(e).second) {
      out_.push_back(e);
      check();
    }
  }

  std::vector<Element> take() {
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void check() const {
    if (out_.size() > budget_.max_elements) {
      throw BudgetExceeded("product set exceeds " + std::to_string(budget_.max_elements) + " elements");
    }
  }

  const Budget& budget_;
  bool dense_ = false;
  std::int64_t lo_ = 0;
  std::vector<unsigned char> marks_;
  std::unordered_set<Element, ElementHash> seen_;
  std::vector<Element> out_;
};

inline void check_pairs(std::uint64_t a, std::uint64_t b, const Budget& budget) {
  if (a != 0 && b > budget.max_pairs / a) {
    throw BudgetExceeded("pair scan of " + std::to_string(a) + "x" + std::to_string(b) + " exceeds budget");
  }
}

}  // namespace detail

/// XY = {xy : x in X, y in Y}.
inline MultSet product_set(const MultSet& x, const MultSet& y, const Budget& budget = {}) {
  x.require_same_domain(y);
  if (x.empty() || y.empty()) return MultSet::from_sorted(x.group_ptr(), {});
  detail::check_pairs(x.size(), y.size(), budget);
  const GroupOracle& g = x.group();
  std::int64_t lo = 0, hi = -1;
  if (g.dense()) {
    lo = 0;
    hi = static_cast<std::int64_t>(*g.order()) - 1;
  } else if (g.linearly_ordered()) {
    lo = g.multiply(x.vec().front(), y.vec().front()).id;
    hi = g.multiply(x.vec().back(), y.vec().back()).id;
  }
  detail::Accumulator acc(lo, hi, static_cast<std::uint64_t>(x.size()) * y.size(), budget);
  for (auto a : x) {
    for (auto b : y) acc.add(g.multiply(a, b));
  }
  return MultSet::from_sorted(x.group_ptr(), acc.take());
}

inline MultSet product_set(const MultSet& x, const MultSet& y, const MultSet& z, const Budget& budget = {}) {
  return product_set(product_set(x, y, budget), z, budget);
}

/// X^{-1}.
inline MultSet inverse_set(const MultSet& x) {
  std::vector<Element> out;
  out.reserve(x.size());
  for (auto e : x) out.push_back(x.group().invert(e));
  std::sort(out.begin(), out.end());
  return MultSet::from_sorted(x.group_ptr(), std::move(out));
}

/// X^n = X...X (n factors), built as X^{n+1} = X^n X.
inline MultSet power_set(const MultSet& x, int n, const Budget& budget = {}) {
  if (n < 1) throw PreconditionError("power_set needs n >= 1");
  MultSet p = x;
  for (int i = 1; i < n; ++i) p = product_set(p, x, budget);
  return p;
}

/// Left translate gX.
inline MultSet left_translate(Element g, const MultSet& x) {
  std::vector<Element> out;
  out.reserve(x.size());
  for (auto e : x) out.push_back(x.group().multiply(g, e));
  std::sort(out.begin(), out.end());
  return MultSet::from_sorted(x.group_ptr(), std::move(out));
}

inline MultSet right_translate(const MultSet& x, Element g) {
  std::vector<Element> out;
  out.reserve(x.size());
  for (auto e : x) out.push_back(x.group().multiply(e, g));
  std::sort(out.begin(), out.end());
  return MultSet::from_sorted(x.group_ptr(), std::move(out));
}

/// True iff X^2 and X are disjoint. Empty sets are product-free; sets
/// containing the identity are not.
inline bool is_product_free(const MultSet& x, const Budget& budget = {}) {
  if (x.empty()) return true;
  detail::check_pairs(x.size(), x.size(), budget);
  const GroupOracle& g = x.group();
  for (auto a : x) {
    for (auto b : x) {
      if (x.contains(g.multiply(a, b))) return false;
    }
  }
  return true;
}

/// |{(x, y) in X x X : xy in X}|.
inline std::uint64_t count_incident_pairs(const MultSet& x, const Budget& budget = {}) {
  detail::check_pairs(x.size(), x.size(), budget);
  std::uint64_t count = 0;
  if (x.empty()) return 0;
  const GroupOracle& g = x.group();
  for (auto a : x) {
    for (auto b : x) count += x.contains(g.multiply(a, b));
  }
  return count;
}

/// The full group as a set.
inline MultSet full_set(const GroupPtr& g) { return MultSet::from_sorted(g, g->elements()); }

}  // namespace pfree
