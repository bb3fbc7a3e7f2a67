#pragma once

/// Coordinates on finite abelian groups: an explicit isomorphism with
/// Z/m1 x ... x Z/ms, and its embedding into (Z/n)^s with n the exponent.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/group.hpp"
#include "pfree/subgroup.hpp"

namespace pfree {

class AbelianCoordinates {
 public:
  /// Native coordinates when the group provides them, otherwise a basis
  /// found by repeatedly taking an element of maximal order modulo the
  /// span so far, lifted to an element of the same order in the group.
  explicit AbelianCoordinates(const GroupOracle& g) : group_(&g) {
    if (!g.abelian()) throw NotAbelian("group '" + g.spec() + "' is not abelian");
    if (auto moduli = g.coordinate_moduli()) {
      moduli_ = *moduli;
      native_ = true;
    } else {
      build_basis(g);
    }
    exponent_ = 1;
    for (auto m : moduli_) exponent_ = std::lcm(exponent_, m);
  }

  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  /// Least common multiple of the factor orders.
  std::int64_t exponent() const { return exponent_; }
  /// Basis elements; empty when native coordinates are used.
  const std::vector<Element>& basis() const { return basis_; }

  std::vector<std::int64_t> coords(Element e) const {
    if (native_) {
      const Payload p = group_->payload(e);
      return {p.begin(), p.end()};
    }
    const auto it = table_.find(e.id);
    if (it == table_.end()) throw InternalError("element outside the coordinatized group");
    return it->second;
  }

  /// Image under Z/m_i -> Z/n, x -> x * n/m_i in every coordinate: an
  /// injective homomorphism into (Z/n)^s.
  std::vector<std::int64_t> embed(Element e) const {
    auto c = coords(e);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= exponent_ / moduli_[i];
    return c;
  }

 private:
  void build_basis(const GroupOracle& g) {
    const auto all = g.elements();
    const auto n = all.size();
    std::vector<Element> span{g.identity()};
    auto in_span = [&](Element e) { return std::binary_search(span.begin(), span.end(), e); };
    auto order_mod_span = [&](Element x) {
      std::int64_t k = 1;
      Element p = x;
      while (!in_span(p)) {
        p = g.multiply(p, x);
        ++k;
      }
      return k;
    };
    while (span.size() < n) {
      Element best = g.identity();
      std::int64_t best_order = 0;
      for (auto x : all) {
        const auto q = order_mod_span(x);
        if (q > best_order) {
          best_order = q;
          best = x;
        }
      }
      // lift: some y in best*span has order exactly best_order in g
      bool lifted = false;
      for (auto s : span) {
        const Element y = g.multiply(best, s);
        Element p = y;
        std::int64_t k = 1;
        while (p != g.identity() && k <= best_order) {
          p = g.multiply(p, y);
          ++k;
        }
        if (k == best_order) {
          basis_.push_back(y);
          moduli_.push_back(best_order);
          lifted = true;
          break;
        }
      }
      if (!lifted) throw InternalError("abelian basis: no lift of maximal order");
      span = closure(g, basis_);
    }
    // coordinate table by walking exponent vectors as an odometer; a digit
    // wrapping at m_i multiplies in b_i^{m_i} = 1
    std::vector<std::int64_t> digits(basis_.size(), 0);
    Element e = g.identity();
    for (std::size_t count = 0; count < n; ++count) {
      if (!table_.emplace(e.id, digits).second) throw InternalError("abelian basis is not independent");
      for (std::size_t i = basis_.size(); i-- > 0;) {
        e = g.multiply(e, basis_[i]);
        if (++digits[i] < moduli_[i]) break;
        digits[i] = 0;
      }
    }
  }

  const GroupOracle* group_;
  bool native_ = false;
  std::vector<std::int64_t> moduli_;
  std::vector<Element> basis_;
  std::int64_t exponent_ = 1;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> table_;
};

}  // namespace pfree
