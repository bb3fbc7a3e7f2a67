#include <gtest/gtest.h>

#include <set>

#include "pfree/pfree.hpp"

using namespace pfree;

namespace {

GroupPtr Z() {
  static const GroupPtr z = build_group("int");
  return z;
}

MultSet ints(std::initializer_list<std::int64_t> v) { return MultSet::of(Z(), v); }

MultSet range(std::int64_t lo, std::int64_t hi) {
  std::vector<Element> v;
  for (auto i = lo; i <= hi; ++i) v.push_back(Element{i});
  return MultSet(Z(), v);
}

// Plain nested-loop product, independent of the accumulator paths.
std::set<Element> naive_product(const MultSet& x, const MultSet& y) {
  std::set<Element> out;
  for (auto a : x) {
    for (auto b : y) out.insert(x.group().multiply(a, b));
  }
  return out;
}

bool naive_product_free(const MultSet& x) {
  for (auto a : x) {
    for (auto b : x) {
      if (x.contains(x.group().multiply(a, b))) return false;
    }
  }
  return true;
}

MultSet random_subset(const GroupPtr& g, std::size_t m, SplitMix64& rng) {
  const auto all = g->elements();
  std::vector<Element> v;
  for (auto i : rng.sample_distinct(all.size(), std::min(m, all.size()))) v.push_back(all[i]);
  return MultSet(g, v);
}

}  // namespace

TEST(ProductSet, IntervalSumsetHasSizeTwoNMinusOne) {
  EXPECT_EQ(product_set(range(0, 3), range(0, 3)), range(0, 6));
}

TEST(ProductSet, IdentityIsNeutral) {
  const auto g = build_group("sym:4");
  SplitMix64 rng(3);
  const auto y = random_subset(g, 7, rng);
  EXPECT_EQ(product_set(MultSet::of(g, {g->identity().id}), y), y);
}

TEST(ProductSet, TranspositionSquaredIsIdentity) {
  const auto g = build_group("sym:3");
  const auto t = MultSet::parse(g, {"(1,0,2)"});
  EXPECT_EQ(product_set(t, t), MultSet::parse(g, {"(0,1,2)"}));
}

TEST(ProductSet, AgreesWithNaiveProductAcrossGroups) {
  SplitMix64 rng(11);
  for (const char* spec : {"sym:4", "heisenberg:5", "abelian:6,6", "dihedral:7", "quaternion"}) {
    const auto g = build_group(spec);
    for (int t = 0; t < 20; ++t) {
      const auto x = random_subset(g, 1 + rng.below(12), rng);
      const auto y = random_subset(g, 1 + rng.below(12), rng);
      const auto p = product_set(x, y);
      const auto n = naive_product(x, y);
      EXPECT_EQ(std::vector<Element>(p.begin(), p.end()), std::vector<Element>(n.begin(), n.end())) << spec;
      EXPECT_LE(p.size(), x.size() * y.size());
    }
  }
}

TEST(ProductSet, SparseIntegersUseHashPath) {
  const auto x = ints({0, 1'000'000'000'000LL});
  EXPECT_EQ(product_set(x, x), ints({0, 1'000'000'000'000LL, 2'000'000'000'000LL}));
}

TEST(ProductSet, BudgetIsEnforced) {
  Budget b;
  b.max_elements = 10;
  EXPECT_THROW(product_set(range(0, 20), range(0, 20), b), BudgetExceeded);
}

TEST(PowerSet, ThreeFoldSums) {
  EXPECT_EQ(power_set(ints({1, 2}), 3), range(3, 6));
  const auto p = power_set(ints({0, 1, 2, 4}), 3);
  EXPECT_EQ(p.size(), 12u);
  EXPECT_FALSE(p.contains(Element{11}));
  EXPECT_EQ(power_set(ints({5, 9}), 1), ints({5, 9}));
  EXPECT_THROW(power_set(ints({1}), 0), PreconditionError);
}

TEST(InverseSet, SymmetricIntervalIsItsOwnInverse) {
  EXPECT_EQ(inverse_set(ints({-1, 1})), ints({-1, 1}));
}

TEST(InverseSet, InversionLaws) {
  SplitMix64 rng(5);
  const auto g = build_group("heisenberg:3");
  for (int t = 0; t < 30; ++t) {
    const auto x = random_subset(g, 1 + rng.below(10), rng);
    const auto y = random_subset(g, 1 + rng.below(10), rng);
    EXPECT_EQ(inverse_set(inverse_set(x)), x);
    EXPECT_EQ(inverse_set(x).size(), x.size());
    EXPECT_EQ(inverse_set(product_set(x, y)), product_set(inverse_set(y), inverse_set(x)));
  }
}

TEST(PowerSet, MonotoneUnderInclusion) {
  SplitMix64 rng(9);
  const auto g = build_group("sym:4");
  for (int t = 0; t < 30; ++t) {
    const auto y = random_subset(g, 2 + rng.below(10), rng);
    std::vector<Element> sub;
    for (auto e : y) {
      if (rng.below(2)) sub.push_back(e);
    }
    if (sub.empty()) continue;
    const MultSet x(g, sub);
    for (int n : {2, 3}) EXPECT_TRUE(power_set(x, n).subset_of(power_set(y, n)));
  }
}

TEST(PowerSet, ContainingIdentityGivesChain) {
  SplitMix64 rng(13);
  const auto g = build_group("dihedral:6");
  for (int t = 0; t < 20; ++t) {
    const auto x = unite(random_subset(g, 4, rng), MultSet::of(g, {g->identity().id}));
    const auto x2 = power_set(x, 2), x3 = power_set(x, 3);
    EXPECT_TRUE(x.subset_of(x2));
    EXPECT_TRUE(x2.subset_of(x3));
  }
}

TEST(ProductFree, SmallExamples) {
  EXPECT_TRUE(is_product_free(ints({2, 3})));
  EXPECT_FALSE(is_product_free(ints({1, 2})));
  EXPECT_FALSE(is_product_free(ints({0})));
  EXPECT_TRUE(is_product_free(MultSet::from_sorted(Z(), {})));
  const auto g = build_group("sym:3");
  EXPECT_TRUE(is_product_free(MultSet::parse(g, {"(1,0,2)", "(2,1,0)", "(0,2,1)"})));
}

TEST(IncidentPairs, CountsOrderedPairsLandingInside) {
  // (1,1), (1,2), (2,1)
  EXPECT_EQ(count_incident_pairs(ints({1, 2, 3})), 3u);
  EXPECT_EQ(count_incident_pairs(ints({2, 3})), 0u);
  const auto g = build_group("cyclic:6");
  const auto h = MultSet::of(g, {0, 2, 4});
  EXPECT_EQ(count_incident_pairs(h), 9u);
}

TEST(IncidentPairs, ZeroExactlyWhenProductFree) {
  SplitMix64 rng(17);
  for (const char* spec : {"sym:4", "cyclic:20", "quaternion"}) {
    const auto g = build_group(spec);
    for (int t = 0; t < 50; ++t) {
      const auto x = random_subset(g, 1 + rng.below(8), rng);
      EXPECT_EQ(count_incident_pairs(x) == 0, is_product_free(x));
      EXPECT_EQ(is_product_free(x), naive_product_free(x));
    }
  }
}

TEST(ApproxReport, SmallIntervalIsTwoApproximate) {
  const auto r = approx_report(range(-2, 2), Rational(2));
  EXPECT_TRUE(r.symmetric);
  EXPECT_TRUE(r.has_identity);
  ASSERT_TRUE(r.covering_exact.has_value());
  EXPECT_EQ(*r.covering_exact, 2u);
  EXPECT_TRUE(*r.is_k_approx);
}

TEST(ApproxReport, IntervalDoubling) {
  for (std::int64_t n : {1, 5, 30}) {
    const auto r = approx_report(range(-n, n));
    EXPECT_EQ(r.doubling, ratio(4 * n + 1, 2 * n + 1));
    EXPECT_LT(r.doubling, 2);
  }
}

TEST(ApproxReport, AsymmetricSetIsNeverApproximateGroup) {
  const auto r = approx_report(ints({0, 1}), Rational(100));
  EXPECT_FALSE(r.symmetric);
  EXPECT_FALSE(*r.is_k_approx);
}

TEST(ApproxReport, ReportInvariants) {
  SplitMix64 rng(21);
  const auto g = build_group("sym:4");
  for (int t = 0; t < 30; ++t) {
    const auto x = random_subset(g, 1 + rng.below(12), rng);
    const auto r = approx_report(x, Rational(3));
    EXPECT_GE(r.doubling, 1);
    EXPECT_GE(r.tripling, 1);
    if (r.covering_exact) {
      EXPECT_LE(*r.covering_exact, r.covering_upper);
    }
    if (*r.is_k_approx) {
      EXPECT_LE(r.doubling, 3);
    }
  }
}

TEST(ApproxReport, GreedyCoverCoversSquare) {
  SplitMix64 rng(23);
  const auto g = build_group("heisenberg:3");
  for (auto side : {CoverSide::kLeft, CoverSide::kRight, CoverSide::kBoth}) {
    const auto x = random_subset(g, 6, rng);
    const auto cover = greedy_covering(x, side);
    MultSet covered = MultSet::from_sorted(g, {});
    for (auto [t, s] : cover.translates) {
      covered = unite(covered, s == CoverSide::kLeft ? left_translate(t, x) : right_translate(x, t));
    }
    EXPECT_TRUE(product_set(x, x).subset_of(covered));
  }
}

TEST(ApproxReport, SubgroupHasCoveringOne) {
  const auto g = build_group("cyclic:9");
  const auto r = approx_report(full_set(g), Rational(1));
  EXPECT_EQ(r.doubling, 1);
  EXPECT_EQ(*r.covering_exact, 1u);
  EXPECT_TRUE(*r.is_k_approx);
}

TEST(RuzsaTriangle, DifferenceSetBoundedBySquaredDoubling) {
  SplitMix64 rng(29);
  const auto g = build_group("sym:4");
  for (int t = 0; t < 200; ++t) {
    const auto x = random_subset(g, 1 + rng.below(15), rng);
    const Rational k = size_q(product_set(x, x).size()) / size_q(x.size());
    EXPECT_LE(size_q(product_set(x, inverse_set(x)).size()), k * k * size_q(x.size()));
  }
}

TEST(MultSet, CanonicalAndDuplicateFree) {
  const auto x = ints({3, 1, 2, 3, 1});
  EXPECT_EQ(x.size(), 3u);
  EXPECT_EQ(x[0], Element{1});
  EXPECT_EQ(x.encode(), (std::vector<std::string>{"1", "2", "3"}));
  const auto g = build_group("cyclic:5");
  EXPECT_THROW(MultSet::of(g, {7}), DomainMismatch);
}

TEST(SetFile, RoundTrip) {
  const auto g = build_group("heisenberg:3");
  SplitMix64 rng(31);
  const auto x = random_subset(g, 9, rng);
  std::istringstream in("# comment\n" + format_set_text(x) + "\n");
  const auto y = parse_set_text(in);
  EXPECT_EQ(y.encode(), x.encode());
  EXPECT_EQ(y.group().spec(), "heisenberg:3");
}
