#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/group.hpp"
#include "pfree/multset.hpp"
#include "pfree/quotient.hpp"
#include "pfree/rational.hpp"

namespace pfree {

/// Outcome of checking a subset I of Z/n for sum-freeness and for meeting
/// every nonzero subgroup in at least a quarter of its elements.
struct IntervalCheck {
  bool sum_free = false;
  bool dense_in_subgroups = false;
  /// min over nonzero subgroups K of |K cap I| / |K|
  Rational worst_density;
  std::size_t subgroups_checked = 0;
  bool ok() const { return sum_free && dense_in_subgroups; }
};

/// Exhaustive check of I against Z/n, independent of how I was built.
inline IntervalCheck check_cyclic_interval(const MultSet& interval) {
  const GroupPtr& g = interval.group_ptr();
  const auto moduli = g->coordinate_moduli();
  if (!moduli || moduli->size() != 1) throw PreconditionError("interval must live in a cyclic:n group");
  const std::int64_t n = moduli->front();
  std::vector<unsigned char> in(static_cast<std::size_t>(n), 0);
  for (auto e : interval) in[static_cast<std::size_t>(e.id)] = 1;

  IntervalCheck out;
  out.sum_free = true;
  for (auto a : interval) {
    for (auto b : interval) {
      if (in[static_cast<std::size_t>((a.id + b.id) % n)]) {
        out.sum_free = false;
        break;
      }
    }
    if (!out.sum_free) break;
  }
  out.dense_in_subgroups = true;
  out.worst_density = Rational(1);
  for (const auto& k : cyclic_subgroups(g)) {
    if (k.size() < 2) continue;
    std::int64_t hit = 0;
    for (auto e : k) hit += in[static_cast<std::size_t>(e.id)];
    const auto kn = static_cast<std::int64_t>(k.size());
    const Rational density = ratio(hit, kn);
    if (density < out.worst_density) out.worst_density = density;
    if (4 * hit < kn) out.dense_in_subgroups = false;
    ++out.subgroups_checked;
  }
  return out;
}

/// I = image of {floor(n/3)+1, ..., floor(2n/3)} in the cyclic group `g`
/// of order n >= 2. Re-verified exhaustively when n <= 10^4.
inline MultSet cyclic_interval(const GroupPtr& g) {
  const auto moduli = g->coordinate_moduli();
  if (!moduli || moduli->size() != 1) throw PreconditionError("cyclic_interval needs a cyclic:n group");
  const std::int64_t n = moduli->front();
  if (n < 2) throw PreconditionError("cyclic_interval needs a non-zero cyclic group (n >= 2)");
  std::vector<Element> out;
  for (std::int64_t v = n / 3 + 1; v <= 2 * n / 3; ++v) out.push_back(Element{v});
  MultSet interval = MultSet::from_sorted(g, std::move(out));
  if (n <= 10'000 && !check_cyclic_interval(interval).ok()) {
    throw InternalError("cyclic interval failed verification for n = " + std::to_string(n));
  }
  return interval;
}

inline MultSet cyclic_interval(std::int64_t n) {
  if (n < 2) throw PreconditionError("cyclic_interval needs a non-zero cyclic group (n >= 2)");
  return cyclic_interval(build_group("cyclic:" + std::to_string(n), /*verify_axioms=*/false));
}

}  // namespace pfree
