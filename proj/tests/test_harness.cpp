#include <gtest/gtest.h>

#include <sstream>

#include "pfree/pfree.hpp"

using namespace pfree;

namespace {

RunConfig config() {
  RunConfig c;
  return c;
}

// Splits CSV rows and drops the wall_ms column.
std::vector<std::string> rows_without_timing(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    if (cells.size() > 7) cells.erase(cells.begin() + 7);
    std::string joined;
    for (const auto& c : cells) joined += c + "|";
    out.push_back(joined);
  }
  return out;
}

}  // namespace

TEST(Analyze, IntervalReport) {
  const auto j = cmd_analyze(resolve_set_source("interval:10"), config());
  EXPECT_EQ(j["doubling"], "41/21");
  EXPECT_EQ(j["symmetric"], true);
  EXPECT_EQ(j["is_k_approx"], true);
  EXPECT_EQ(j["max_product_free_size"], 10);
}

TEST(Analyze, CyclicEightDensityHalf) {
  const auto j = cmd_analyze(resolve_set_source("full-group(cyclic:8)"), config());
  EXPECT_EQ(j["max_product_free_density"], "1/2");
}

TEST(Analyze, RandomSymReportHasAllFields) {
  const auto j = cmd_analyze(resolve_set_source("random:sym:4:10:seed=1"), config());
  for (const char* key : {"size", "doubling", "tripling", "symmetric", "has_identity", "covering_upper",
                          "covering_exact", "is_k_approx", "incident_pairs", "max_product_free_density"}) {
    EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j[key].is_null()) << key;
  }
}

TEST(Extract, Dispatch) {
  const auto cfg = config();
  EXPECT_EQ(run_algorithm("interval", resolve_set_source("cyclic:10"), cfg).witness.encode(),
            (std::vector<std::string>{"4", "5", "6"}));
  const auto s = run_algorithm("solvable", resolve_set_source("full-group-minus-identity(sym:3)"), cfg);
  EXPECT_EQ(s.witness.size(), 3u);
  EXPECT_EQ(certificate_exit_code(s), 0);
  const auto t = run_algorithm("thm33", resolve_set_source("interval:8"), cfg);
  EXPECT_EQ(t.replay["branch"], "singleton");
  EXPECT_THROW(run_algorithm("alon-kleitman", resolve_set_source("sym:3"), cfg), NotAbelian);
  EXPECT_THROW(run_algorithm("interval", resolve_set_source("sym:3"), cfg), PreconditionError);
  EXPECT_THROW(run_algorithm("magic", resolve_set_source("sym:3"), cfg), ParseError);
}

TEST(Extract, SolvableCertificateIsSealedAgainstFullInput) {
  const auto x = resolve_set_source("full-group(sym:3)");
  const auto c = run_algorithm("solvable", x, config());
  EXPECT_EQ(c.input_digest, input_digest(x));
  int emits = 0;
  for (const auto& t : c.trace) emits += t.stage == "emit";
  EXPECT_EQ(emits, 2);
}

TEST(Verify, RoundTripAcrossAlgorithmsAndFamilies) {
  const auto cfg = config();
  const std::vector<std::pair<std::string, std::vector<std::string>>> matrix{
      {"interval:40", {"thm33", "greedy"}},
      {"interval:6", {"thm33", "greedy", "exhaustive"}},
      {"gap:2:4,4:1,20", {"thm33", "greedy"}},
      {"full-group(cyclic:12)", {"interval", "alon-kleitman", "solvable", "greedy", "exhaustive"}},
      {"random:abelian:4,6:15:seed=3", {"alon-kleitman", "solvable", "greedy", "exhaustive"}},
      {"full-group-minus-identity(sym:4)", {"solvable", "greedy"}},
      {"heisenberg-ball:5:1", {"solvable", "greedy", "thm33"}},
      {"random:sym:4:12:seed=2", {"solvable", "greedy", "exhaustive", "thm33"}}};
  for (const auto& [family, algos] : matrix) {
    const auto x = resolve_set_source(family);
    for (const auto& a : algos) {
      SCOPED_TRACE(family + " / " + a);
      const auto cert = run_algorithm(a, x, cfg);
      ASSERT_EQ(certificate_exit_code(cert), 0);
      const auto j = Json::parse(to_json(cert).dump());
      const auto r = cmd_verify(j, x, cfg);
      EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures.front());
    }
  }
}

TEST(Verify, FinderFailureGivesIncompleteCertificate) {
  // S4 minus the identity triples to the whole group, so no disjoint
  // triple pair of the required size exists
  const auto x = resolve_set_source("full-group-minus-identity(sym:4)");
  const auto cert = run_algorithm("thm33", x, config());
  EXPECT_FALSE(cert.complete);
  EXPECT_NE(cert.failure.find("homogeneous"), std::string::npos);
  EXPECT_FALSE(cert.guarantee.has_value());
  EXPECT_EQ(certificate_exit_code(cert), 2);
  EXPECT_FALSE(cmd_verify(to_json(cert), x, config()).pass());
}

TEST(Verify, TamperedWitnessFails) {
  const auto x = resolve_set_source("interval:40");
  const auto cert = run_algorithm("thm33", x, config());
  ASSERT_GE(cert.witness.size(), 2u);
  auto j = to_json(cert);
  // swap in an element of X whose square lands on some other witness element
  const auto& G = x.group();
  bool swapped = false;
  for (std::size_t i = 0; i < cert.witness.size() && !swapped; ++i) {
    for (auto e : x) {
      if (G.multiply(e, e) == cert.witness[i] && !cert.witness.contains(e)) {
        j["witness"][i == 0 ? 1 : 0] = G.format(e);
        swapped = true;
        break;
      }
    }
  }
  ASSERT_TRUE(swapped);
  EXPECT_FALSE(cmd_verify(j, x, config()).pass());
}

TEST(Verify, TamperedTraceFails) {
  const auto x = resolve_set_source("interval:40");
  auto j = to_json(run_algorithm("thm33", x, config()));
  j["trace"][0]["lhs"] = "1/1";
  EXPECT_FALSE(cmd_verify(j, x, config()).pass());
}

TEST(Verify, TamperedFlagsFail) {
  const auto x = resolve_set_source("full-group(cyclic:12)");
  auto j = to_json(run_algorithm("alon-kleitman", x, config()));
  auto size = j;
  size["achieved_size"] = j["achieved_size"].get<int>() + 1;
  EXPECT_FALSE(cmd_verify(size, x, config()).pass());
  auto guarantee = j;
  guarantee["guarantee"] = "100/1";
  EXPECT_FALSE(cmd_verify(guarantee, x, config()).pass());
}

TEST(Verify, DigestMismatchFails) {
  const auto x = resolve_set_source("interval:40");
  const auto j = to_json(run_algorithm("greedy", x, config()));
  EXPECT_FALSE(cmd_verify(j, resolve_set_source("interval:41"), config()).pass());
}

TEST(Verify, ReplayCatchesSwappedThm33Translate) {
  const auto x = resolve_set_source("interval:100");
  auto j = to_json(run_algorithm("thm33", x, config()));
  ASSERT_EQ(j["replay"]["branch"], "main");
  j["replay"]["g"] = std::to_string(std::stoll(j["replay"]["g"].get<std::string>()) + 1);
  EXPECT_FALSE(cmd_verify(j, x, config()).pass());
}

TEST(Bench, EmptyFamilyListGivesHeaderOnly) {
  auto cfg = config();
  cfg.algorithms = {"thm33"};
  EXPECT_EQ(cmd_bench(cfg), std::string(kBenchHeader) + "\n");
}

TEST(Bench, IntervalRowsAndDeterminism) {
  auto cfg = config();
  cfg.families = {"interval:50", "interval:100", "interval:200"};
  cfg.algorithms = {"thm33"};
  const auto a = cmd_bench(cfg);
  cfg.workers = 3;
  const auto b = cmd_bench(cfg);
  const auto ra = rows_without_timing(a), rb = rows_without_timing(b);
  EXPECT_EQ(ra.size(), 4u);
  EXPECT_EQ(ra, rb);
  EXPECT_EQ(ra[1].rfind("interval:50|101|201/101|thm33|", 0), 0u) << ra[1];
}

TEST(Bench, GreedyNeverBeatsExhaustive) {
  auto cfg = config();
  for (int s = 0; s < 8; ++s) cfg.families.push_back("random:sym:4:" + std::to_string(6 + s) + ":seed=" + std::to_string(s));
  cfg.algorithms = {"greedy", "exhaustive"};
  const auto rows = rows_without_timing(cmd_bench(cfg));
  for (std::size_t i = 1; i + 1 < rows.size(); i += 2) {
    auto density = [](const std::string& row) {
      std::vector<std::string> cells;
      std::stringstream ss(row);
      std::string c;
      while (std::getline(ss, c, '|')) cells.push_back(c);
      return parse_rational(cells.at(5));
    };
    EXPECT_LE(density(rows[i]), density(rows[i + 1]));
  }
}

TEST(Bench, RowErrorsAreRecordedNotFatal) {
  auto cfg = config();
  cfg.families = {"sym:3", "nonsense:1"};
  cfg.algorithms = {"alon-kleitman"};
  const auto rows = rows_without_timing(cmd_bench(cfg));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find("abelian"), std::string::npos);
  EXPECT_NE(rows[2].find("unknown"), std::string::npos);
}

TEST(RunConfig, ExactlyOneInputSource) {
  RunConfig cfg;
  EXPECT_THROW(resolve_input(cfg), ParseError);
  cfg.input = "interval:3";
  cfg.set_file = "/nonexistent";
  EXPECT_THROW(resolve_input(cfg), ParseError);
}
