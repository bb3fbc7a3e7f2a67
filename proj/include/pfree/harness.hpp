#pragma once

/// Command implementations behind the pfree CLI: analyze, extract, verify
/// and bench. Everything here is deterministic given the RunConfig except
/// the wall-time column of bench.

#include <atomic>
#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pfree/approx.hpp"
#include "pfree/alon_kleitman.hpp"
#include "pfree/brute.hpp"
#include "pfree/certificate.hpp"
#include "pfree/cyclic_interval.hpp"
#include "pfree/extract.hpp"
#include "pfree/io.hpp"
#include "pfree/quotient.hpp"
#include "pfree/solvable.hpp"

namespace pfree {

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"thm33", "solvable", "alon-kleitman", "interval", "greedy", "exhaustive"};
  return names;
}

struct RunConfig {
  std::string command;
  /// Family spec or bare group spec.
  std::optional<std::string> input;
  std::optional<std::string> set_file;
  std::string algorithm = "thm33";
  Rational delta = ratio(1, 4);
  Rational alpha = ratio(1, 2);
  /// Queried k for the approximate-group test in analyze.
  Rational k = 2;
  Budget budget;
  unsigned workers = 1;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> families;
  std::vector<std::string> algorithms;
};

/// Exactly one of `input` and `set_file` must be set.
inline MultSet resolve_input(const RunConfig& cfg) {
  if (cfg.input.has_value() == cfg.set_file.has_value()) {
    throw ParseError("give exactly one input: a family/group spec or --set-file");
  }
  return cfg.set_file ? read_set_file(*cfg.set_file) : resolve_set_source(*cfg.input);
}

inline Json cmd_analyze(const MultSet& x, const RunConfig& cfg) {
  const ApproxGroupReport r = approx_report(x, cfg.k, CoverSide::kLeft, cfg.budget);
  Json j;
  j["group"] = x.group().spec();
  j["size"] = r.size;
  j["doubling"] = to_string(r.doubling);
  j["tripling"] = to_string(r.tripling);
  j["symmetric"] = r.symmetric;
  j["has_identity"] = r.has_identity;
  j["covering_upper"] = r.covering_upper;
  j["covering_exact"] = r.covering_exact ? Json(*r.covering_exact) : Json(nullptr);
  j["k"] = to_string(cfg.k);
  j["is_k_approx"] = r.is_k_approx ? Json(*r.is_k_approx) : Json(nullptr);
  j["incident_pairs"] = count_incident_pairs(x, cfg.budget);
  if (x.size() <= 24) {
    const std::size_t best = exhaustive_max_product_free(x).size();
    j["max_product_free_size"] = best;
    j["max_product_free_density"] = to_string(size_q(best) / size_q(x.size()));
  } else {
    j["max_product_free_size"] = nullptr;
    j["max_product_free_density"] = nullptr;
  }
  return j;
}

namespace detail {

inline MultSet without_identity(const MultSet& x) {
  std::vector<Element> v;
  for (auto e : x) {
    if (e != x.group().identity()) v.push_back(e);
  }
  return MultSet::from_sorted(x.group_ptr(), std::move(v));
}

inline ExtractOptions extract_options(const RunConfig& cfg) {
  ExtractOptions o;
  o.budget = cfg.budget;
  o.finder.budget = cfg.budget;
  if (cfg.seed) {
    o.finder.seed = *cfg.seed;
    o.petridis.seed = *cfg.seed;
  }
  return o;
}

}  // namespace detail

/// Runs one extraction algorithm on X. Math-stage failures are reported
/// through an incomplete certificate; precondition failures throw.
inline ExtractionCertificate run_algorithm(const std::string& algorithm, const MultSet& x, const RunConfig& cfg) {
  ExtractionCertificate cert;
  if (algorithm == "thm33") {
    cert = product_free_extract(x, compute_bounds_profile(cfg.delta, cfg.alpha), detail::extract_options(cfg));
  } else if (algorithm == "solvable") {
    const MultSet c = detail::without_identity(x);
    if (c.empty()) throw PreconditionError("no non-identity elements to extract from");
    cert = solvable_extract(c, derived_subnormal_series(x.group_ptr()));
    // re-seal against X rather than X minus the identity
    std::erase_if(cert.trace, [](const TraceRecord& t) { return t.stage == "emit"; });
    cert.seal(x);
  } else if (algorithm == "alon-kleitman") {
    const GroupOracle& g = x.group();
    if (!g.abelian() || !g.order()) throw NotAbelian("alon-kleitman needs a finite abelian group");
    const MultSet b = detail::without_identity(x);
    if (b.empty()) throw PreconditionError("no non-identity elements to extract from");
    AlonKleitmanOptions ak;
    if (cfg.seed) ak.seed = *cfg.seed;
    const auto res = alon_kleitman_weighted(WeightedSet::unit(b), ak);
    cert.algorithm = "alon-kleitman";
    cert.witness = res.chosen;
    cert.guarantee = size_q(b.size()) / 4;
    cert.add(TraceRecord::make("weighted lemma", {{"B", b.size()}, {"A", res.chosen.size()}},
                               "|A| >= |B| / 4", size_q(res.chosen.size()), Relation::kGe, *cert.guarantee));
    cert.replay = Json{{"modulus", res.modulus}, {"character", res.character}, {"exhaustive", res.exhaustive}};
    cert.seal(x);
  } else if (algorithm == "interval") {
    const MultSet interval = cyclic_interval(x.group_ptr());
    cert.algorithm = "interval";
    cert.witness = intersect(x, interval);
    if (x.size() == *x.group().order()) {
      cert.guarantee = size_q(x.size()) / 4;
      cert.add(TraceRecord::make("interval", {{"G", x.size()}, {"I", interval.size()}}, "|I| >= |G| / 4",
                                 size_q(interval.size()), Relation::kGe, *cert.guarantee));
    }
    cert.seal(x);
  } else if (algorithm == "greedy") {
    cert.algorithm = "greedy";
    cert.witness = greedy_product_free(x);
    cert.seal(x);
  } else if (algorithm == "exhaustive") {
    cert.algorithm = "exhaustive";
    cert.witness = exhaustive_max_product_free(x);
    cert.replay = Json{{"optimum", cert.witness.size()}};
    cert.seal(x);
  } else {
    throw ParseError("unknown algorithm '" + algorithm + "'");
  }
  if (cfg.seed) cert.params["seed"] = *cfg.seed;
  return cert;
}

/// 0 when the certificate verifies, 2 when a math stage failed.
inline int certificate_exit_code(const ExtractionCertificate& c) { return c.ok() ? 0 : 2; }

struct VerifyReport {
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Recomputes everything a certificate claims against the set X.
inline VerifyReport cmd_verify(const Json& j, const MultSet& x, const RunConfig& cfg) {
  VerifyReport r;
  auto fail = [&](std::string why) { r.failures.push_back(std::move(why)); };
  const ExtractionCertificate c = certificate_from_json(j, x.group_ptr());

  if (c.input_digest != input_digest(x)) fail("input digest does not match the set");
  if (c.group != x.group().spec()) fail("group spec does not match the set");
  if (!c.complete) fail("certificate is incomplete: " + c.failure);
  if (!c.witness.subset_of(x)) fail("witness is not contained in the set");
  const bool pf = is_product_free(c.witness, cfg.budget);
  if (!pf) fail("witness is not product-free");
  if (c.verified_product_free != pf) fail("verified_product_free flag disagrees with recomputation");
  if (c.achieved_size != c.witness.size()) fail("achieved_size disagrees with the witness");
  if (c.guarantee && size_q(c.witness.size()) < Rational(ceil(*c.guarantee))) {
    fail("witness is smaller than the claimed guarantee");
  }
  for (std::size_t i = 0; i < c.trace.size(); ++i) {
    const auto& t = c.trace[i];
    const bool holds = evaluate(t.lhs, t.relation, t.rhs);
    if (holds != t.holds) fail("trace record " + std::to_string(i) + " has a wrong holds flag");
    if (!holds) fail("trace record " + std::to_string(i) + " (" + t.stage + ": " + t.inequality + ") fails");
  }
  if (!r.pass()) return r;

  // replay the final step
  const GroupOracle& G = x.group();
  try {
    if (c.algorithm == "thm33") {
      const Rational k = doubling(x, cfg.budget);
      if (c.params.value("k", std::string()) != to_string(k)) fail("recorded k disagrees with |X^2|/|X|");
      const std::string branch = c.replay.at("branch").get<std::string>();
      if (branch == "singleton") {
        if (!(size_q(x.size()) < 16 * k)) fail("singleton branch taken although |X| >= 16k");
        const MultSet rest = detail::without_identity(x);
        if (rest.empty() || !(c.witness == MultSet::from_sorted(x.group_ptr(), {rest[0]}))) {
          fail("singleton witness is not the least non-identity element");
        }
      } else if (branch == "main") {
        if (size_q(x.size()) < 16 * k) fail("main branch taken although |X| < 16k");
        std::vector<std::string> ys, zs;
        for (const auto& e : c.replay.at("Y")) ys.push_back(e.get<std::string>());
        for (const auto& e : c.replay.at("Z")) zs.push_back(e.get<std::string>());
        const MultSet y = MultSet::parse(x.group_ptr(), ys);
        const MultSet z = MultSet::parse(x.group_ptr(), zs);
        const Element g = G.parse(c.replay.at("g").get<std::string>());
        if (!y.subset_of(x)) fail("replayed Y is not contained in X");
        if (!z.subset_of(y)) fail("replayed Z is not contained in Y");
        const MultSet zi = inverse_set(z);
        if (product_set(zi, z, zi, cfg.budget).contains(g)) fail("g lies in Z^-1 Z Z^-1");
        if (!(intersect(left_translate(g, z), y) == c.witness)) fail("witness is not gZ ∩ Y");
        if (size_q(c.witness.size()) < size_q(z.size()) / (2 * k * k * k)) fail("pigeonhole bound fails");
      } else {
        fail("unknown thm33 branch '" + branch + "'");
      }
    } else {
      RunConfig rerun = cfg;
      rerun.seed.reset();
      if (c.params.contains("seed")) rerun.seed = c.params.at("seed").get<std::uint64_t>();
      const ExtractionCertificate again = run_algorithm(c.algorithm, x, rerun);
      if (!(again.witness == c.witness)) fail("re-running " + c.algorithm + " gives a different witness");
    }
  } catch (const Json::exception& e) {
    fail(std::string("malformed replay data: ") + e.what());
  } catch (const Error& e) {
    fail(std::string("replay failed: ") + e.what());
  }
  return r;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace detail

inline const char* kBenchHeader = "family,size,k,algorithm,witness_size,density,guarantee,wall_ms,error";

/// One row per (family, algorithm) in input order; row failures go to the
/// error column. Rows run on `cfg.workers` threads.
inline std::string cmd_bench(const RunConfig& cfg) {
  struct Row {
    std::string family, algorithm;
    std::string cells;
  };
  std::vector<Row> rows;
  for (const auto& f : cfg.families) {
    for (const auto& a : cfg.algorithms) rows.push_back({f, a, {}});
  }
  auto run_row = [&](Row& row) {
    std::string size, k, witness, density, guarantee, error;
    const auto start = std::chrono::steady_clock::now();
    try {
      const MultSet x = resolve_set_source(row.family);
      size = std::to_string(x.size());
      k = to_string(doubling(x, cfg.budget));
      const ExtractionCertificate c = run_algorithm(row.algorithm, x, cfg);
      witness = std::to_string(c.witness.size());
      density = to_string(size_q(c.witness.size()) / size_q(x.size()));
      if (c.guarantee) guarantee = to_string(*c.guarantee);
      if (!c.complete) {
        error = c.failure;
      } else if (!c.ok()) {
        error = "certificate check failed";
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << ms;
    row.cells = detail::csv_field(row.family) + "," + size + "," + k + "," + row.algorithm + "," + witness + "," +
                density + "," + guarantee + "," + t.str() + "," + detail::csv_field(error);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(rows.size())));
  if (workers <= 1) {
    for (auto& row : rows) run_row(row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) run_row(rows[i]);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::string out = std::string(kBenchHeader) + "\n";
  for (const auto& row : rows) out += row.cells + "\n";
  return out;
}

}  // namespace pfree
