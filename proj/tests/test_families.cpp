#include <gtest/gtest.h>

#include <set>

#include "pfree/pfree.hpp"

using namespace pfree;

TEST(Families, Interval) {
  const auto x = generate("interval:2");
  EXPECT_EQ(x.encode(), (std::vector<std::string>{"-2", "-1", "0", "1", "2"}));
  const auto r = approx_report(x, Rational(2));
  EXPECT_TRUE(*r.is_k_approx);
}

TEST(Families, GapSizesAndDoubling) {
  const auto g = generate_with_metadata(parse_family("gap:2:3,3:1,100"));
  EXPECT_EQ(g.set.size(), 49u);
  EXPECT_EQ(g.metadata["collisions"], 0);
  const auto x2 = product_set(g.set, g.set);
  EXPECT_EQ(x2.size(), 169u);
  EXPECT_LT(size_q(x2.size()) / size_q(g.set.size()), 4);
}

TEST(Families, GapCollisionsAreReported) {
  const auto g = generate_with_metadata(parse_family("gap:2:3,3:1,2"));
  EXPECT_EQ(g.metadata["nominal_size"], 49);
  // {n1 + 2 n2 : |n1|, |n2| <= 3} = {-9..9}
  EXPECT_EQ(g.set.size(), 19u);
  EXPECT_EQ(g.metadata["collisions"], 30);
}

TEST(Families, CollisionFreeGapHasProductSize) {
  // a_{i+1} > 2 sum_{j<=i} N_j a_j
  for (const char* spec : {"gap:3:2,3,1:1,20,200", "gap:2:5,4:1,40", "gap:1:7:3"}) {
    const auto f = parse_family(spec);
    std::uint64_t nominal = 1;
    for (auto n : f.params) nominal *= 2 * n + 1;
    EXPECT_EQ(generate(f).size(), nominal) << spec;
  }
}

TEST(Families, FullGroup) {
  const auto x = generate("full-group(cyclic:9)");
  EXPECT_EQ(x.size(), 9u);
  EXPECT_EQ(approx_report(x).doubling, 1);
  EXPECT_EQ(generate("full-group:sym:3").size(), 6u);
  const auto m = generate("full-group-minus-identity(sym:3)");
  EXPECT_EQ(m.size(), 5u);
  EXPECT_FALSE(m.contains(m.group().identity()));
}

TEST(Families, HeisenbergBall) {
  const auto x = generate("heisenberg-ball:5:1");
  EXPECT_EQ(x.size(), 27u);
  EXPECT_TRUE(x.contains(x.group().identity()));
  EXPECT_EQ(inverse_set(x).size(), 27u);
  EXPECT_EQ(generate("heisenberg-ball:3:5").size(), 27u);  // radius clamps to the whole group
}

TEST(Families, CosetUnion) {
  const auto x = generate("coset-union:cyclic:12:4:2");
  // <4> = {0,4,8}; cosets of 0 and 1
  EXPECT_EQ(x.encode(), (std::vector<std::string>{"0", "1", "4", "5", "8", "9"}));
  const auto s = generate("coset-union:sym:4:(1,0,2,3);(0,1,3,2):3");
  EXPECT_EQ(s.size(), 12u);
}

TEST(Families, RandomIsDeterministicAndSeedSensitive) {
  const auto a = generate("random:sym:4:10:seed=7");
  const auto b = generate("random:sym:4:10:seed=7");
  const auto c = generate("random:sym:4:10:seed=8");
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a.encode(), b.encode());
  EXPECT_NE(a.encode(), c.encode());
  EXPECT_EQ(generate("random:heisenberg:3:27").size(), 27u);
}

TEST(Families, InvalidSpecsRejected) {
  EXPECT_THROW(parse_family("interval:-1"), ParseError);
  EXPECT_THROW(parse_family("interval"), ParseError);
  EXPECT_THROW(parse_family("gap:2:3:1,2"), ParseError);
  EXPECT_THROW(generate("random:int:5"), Error);
  EXPECT_THROW(generate("random:cyclic:3:5"), PreconditionError);
  EXPECT_THROW(parse_family("sphere:3"), ParseError);
  EXPECT_THROW(generate("interval:100000"), BudgetExceeded);
  EXPECT_THROW(generate("full-group(sym:3"), ParseError);
}

TEST(Families, BareGroupSpecMeansWholeGroup) {
  EXPECT_EQ(resolve_set_source("cyclic:10").size(), 10u);
  EXPECT_EQ(resolve_set_source("interval:3").size(), 7u);
  EXPECT_THROW(resolve_set_source("int"), BudgetExceeded);
}
