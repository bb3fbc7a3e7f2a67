// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "pfree/pfree.hpp"

using namespace pfree;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Checker {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) msgs_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.pass = failures_ == 0;
    std::ostringstream s;
    s << summary << " (" << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failures: " << msgs_.str();
    s << ")";
    o.detail = s.str();
    return o;
  }

 private:
  std::uint64_t checks_ = 0, failures_ = 0;
  std::ostringstream msgs_;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

MultSet random_subset(const GroupPtr& g, std::size_t m, SplitMix64& rng) {
  const auto all = g->elements();
  std::vector<Element> v;
  for (auto i : rng.sample_distinct(all.size(), std::min(m, all.size()))) v.push_back(all[i]);
  return MultSet(g, v);
}

MultSet int_set(const std::vector<std::int64_t>& v) {
  static const GroupPtr z = build_group("int");
  std::vector<Element> e;
  for (auto i : v) e.push_back(Element{i});
  return MultSet(z, e);
}

MultSet random_int_subset(std::int64_t lo, std::int64_t hi, std::size_t m, SplitMix64& rng) {
  std::vector<std::int64_t> v;
  const auto span = static_cast<std::size_t>(hi - lo + 1);
  for (auto i : rng.sample_distinct(span, std::min(m, span))) v.push_back(lo + static_cast<std::int64_t>(i));
  return int_set(v);
}

Rational measured_doubling(const MultSet& x) { return size_q(product_set(x, x).size()) / size_q(x.size()); }

// A random abelian group with at most three invariant factors and order <= 512.
GroupPtr random_abelian(SplitMix64& rng) {
  for (;;) {
    const int factors = 1 + static_cast<int>(rng.below(3));
    std::vector<std::int64_t> m;
    std::int64_t order = 1;
    for (int i = 0; i < factors; ++i) {
      m.push_back(rng.between(2, 64));
      order *= m.back();
    }
    if (order > 512) continue;
    std::string spec = "abelian:";
    for (std::size_t i = 0; i < m.size(); ++i) spec += (i ? "," : "") + std::to_string(m[i]);
    auto g = build_group(spec, false);
    if (g->invariant_factors()->size() <= 3) return g;
  }
}

// ---- criteria ----

Outcome cyclic_intervals() {
  const auto t0 = Clock::now();
  Checker c;
  for (std::int64_t n = 2; n <= 2000; ++n) {
    const auto r = check_cyclic_interval(cyclic_interval(n));
    c.require(r.ok(), "n=" + std::to_string(n));
  }
  const double s = seconds_since(t0);
  c.require(s < 60, "runtime " + std::to_string(s) + "s");
  return c.outcome("n=2..2000 in " + std::to_string(s) + "s");
}

Outcome weighted_abelian() {
  const auto t0 = Clock::now();
  Checker c;
  SplitMix64 rng(0xa2);
  for (int t = 0; t < 500; ++t) {
    const auto g = random_abelian(rng);
    const auto order = static_cast<std::size_t>(*g->order());
    if (order < 2) continue;
    auto b = random_subset(g, 1 + rng.below(std::min<std::size_t>(order - 1, 40)), rng);
    b = difference(b, MultSet::of(g, {g->identity().id}));
    if (b.empty()) b = MultSet::from_sorted(g, {g->elements()[1]});
    std::vector<std::uint64_t> w;
    const std::uint64_t cap = 10'000 / b.size();
    for (std::size_t i = 0; i < b.size(); ++i) w.push_back(1 + rng.below(cap));
    const WeightedSet ws(b, w);
    const auto r = alon_kleitman_weighted(ws);
    std::uint64_t got = 0;
    for (auto a : r.chosen) got += ws.weight_of(a);
    const std::string tag = g->spec() + " #" + std::to_string(t);
    c.require(ws.total() <= 10'000, tag + " weight total");
    c.require(r.chosen.subset_of(b), tag + " containment");
    c.require(is_product_free(r.chosen), tag + " sum-free");
    c.require(got == r.weight, tag + " weight bookkeeping");
    c.require(got >= (ws.total() + 3) / 4, tag + " weight bound");
  }
  const double s = seconds_since(t0);
  c.require(s < 120, "runtime " + std::to_string(s) + "s");
  return c.outcome("500 groups in " + std::to_string(s) + "s");
}

Outcome solvable_groups() {
  Checker c;
  SplitMix64 rng(0xa3);
  for (const char* spec : {"sym:3", "sym:4", "dihedral:4", "dihedral:6", "quaternion", "heisenberg:3"}) {
    const auto g = build_group(spec);
    const auto series = derived_subnormal_series(g);
    const auto identity = MultSet::of(g, {g->identity().id});
    for (int t = 0; t < 100; ++t) {
      auto cset = difference(random_subset(g, 1 + rng.below(*g->order()), rng), identity);
      if (cset.empty()) cset = difference(full_set(g), identity);
      const auto cert = solvable_extract(cset, series);
      const auto need = ceil(size_q(cset.size()) / (4 * (std::int64_t{1} << series.n())));
      const std::string tag = std::string(spec) + " #" + std::to_string(t);
      c.require(cert.witness.subset_of(cset), tag + " containment");
      c.require(is_product_free(cert.witness), tag + " product-free");
      c.require(BigInt(cert.witness.size()) >= need, tag + " size bound");
      c.require(cert.ok(), tag + " certificate");
    }
  }
  const auto s3 = build_group("sym:3");
  const auto c3 = difference(full_set(s3), MultSet::of(s3, {s3->identity().id}));
  const auto w = solvable_extract(c3, derived_subnormal_series(s3)).witness;
  c.require(w.size() == 3, "S3 nonidentity witness size " + std::to_string(w.size()));
  c.require(exhaustive_max_product_free(c3).size() == 3, "S3 nonidentity optimum");
  return c.outcome("6 groups x 100 subsets, S3 nonidentity -> " + std::to_string(w.size()));
}

Outcome difference_set_bound() {
  Checker c;
  SplitMix64 rng(0xa4);
  std::uint64_t applicable = 0;
  auto check = [&](const MultSet& x, const std::string& fam) {
    // k is the measured doubling, so the hypothesis always holds; also
    // probe a few integer k to exercise the implication
    const Rational k0 = measured_doubling(x);
    const auto diff = product_set(x, inverse_set(x)).size();
    for (const Rational& k : {k0, Rational(ceil(k0))}) {
      if (size_q(product_set(x, x).size()) > k * size_q(x.size())) continue;
      ++applicable;
      c.require(size_q(diff) <= k * k * size_q(x.size()), fam);
    }
  };
  const auto s4 = build_group("sym:4");
  const auto h3 = build_group("heisenberg:3");
  for (int t = 0; t < 1000; ++t) {
    const auto n = rng.between(1, 60);
    const auto a = rng.between(-50, 50);
    std::vector<std::int64_t> iv;
    for (std::int64_t i = a; i < a + n; ++i) iv.push_back(i);
    check(int_set(iv), "interval");

    const auto n1 = rng.between(0, 5), n2 = rng.between(0, 5), a2 = rng.between(1, 40);
    std::vector<std::int64_t> gp;
    for (auto i = -n1; i <= n1; ++i) {
      for (auto j = -n2; j <= n2; ++j) gp.push_back(i + a2 * j);
    }
    check(int_set(gp), "gap");

    check(random_subset(s4, 1 + rng.below(24), rng), "random sym:4");
    check(random_subset(h3, 1 + rng.below(27), rng), "random heisenberg:3");
  }
  return c.outcome(std::to_string(applicable) + " applicable instances over 4 families");
}

Outcome small_tripling() {
  Checker c;
  std::uint64_t scans = 0, total = 0;
  auto run = [&](const MultSet& x) {
    ++total;
    const Rational k = measured_doubling(x);
    try {
      const auto r = petridis_subset(x, k);
      scans += r.strategy != "whole-set";
      const bool ok = r.y.subset_of(x) && size_q(r.y.size()) >= size_q(x.size()) / k &&
                      size_q(power_set(r.y, 3).size()) <= k * k * k * size_q(r.y.size());
      c.require(ok, "unverified witness for " + std::to_string(x.size()) + "-set");
    } catch (const NotFound&) {
      c.require(false, "not found");
    }
  };
  SplitMix64 rng(0xa5);
  for (int t = 0; t < 1000; ++t) run(random_int_subset(-8, 8, 1 + rng.below(10), rng));
  // every nonempty subset of {-6..6} with at most 8 elements
  for (std::uint32_t mask = 1; mask < (1u << 13); ++mask) {
    if (std::popcount(mask) > 8) continue;
    std::vector<std::int64_t> v;
    for (int i = 0; i < 13; ++i) {
      if ((mask >> i) & 1) v.push_back(i - 6);
    }
    run(int_set(v));
  }
  return c.outcome(std::to_string(total) + " sets, " + std::to_string(scans) + " needed a scan");
}

struct HalvingCase {
  std::string family;
  MultSet y;
  HalvingResult r;
};

std::vector<HalvingCase>& halving_cases() {
  static std::vector<HalvingCase> cases;
  return cases;
}

Outcome halving_loop() {
  Checker c;
  SplitMix64 rng(0xa6);
  std::uint64_t fallbacks = 0, iterations = 0;
  for (int t = 0; t < 200; ++t) {
    std::string fam;
    if (t % 2 == 0) {
      const auto n = rng.between(8, 999);
      fam = "interval:" + std::to_string(n);
    } else {
      const auto n1 = rng.between(2, 20), n2 = rng.between(2, 20);  // |Y| >= 25
      fam = "gap:2:" + std::to_string(n1) + "," + std::to_string(n2) + ":1," + std::to_string(2 * (2 * n1 + 1) + rng.below(50));
    }
    const auto y = generate(fam);
    const auto r = seh_halving(y, ratio(1, 2), ratio(1, 4));
    fallbacks += r.fallback;
    iterations += r.steps.size();
    c.require(y.size() <= 2000, fam + " too large");
    c.require(2 * r.product <= y.size(), fam + " |UVW| > |Y|/2");
    c.require(product_set(r.u, r.v, r.w).size() == r.product, fam + " recorded product size");
    c.require(r.u.subset_of(y) && r.v.subset_of(y) && r.w.subset_of(y), fam + " containment");
    c.require(r.all_hold(), fam + " iteration invariant");
    if (r.fallback) c.require(r.u.size() == 2 && r.v.size() == 2 && r.w.size() == 2 && r.product <= 8, fam + " fallback");
    halving_cases().push_back({fam, y, r});
  }
  return c.outcome("200 instances, " + std::to_string(iterations) + " iterations, " + std::to_string(fallbacks) +
                   " fallbacks");
}

Outcome localize_identity() {
  Checker c;
  std::uint64_t calls = 0;
  auto check = [&](const MultSet& y, const MultSet& u, const MultSet& v, const MultSet& w, const std::string& tag) {
    const auto r = localize_small_triple(y, u, v, w);
    ++calls;
    const auto uvw = static_cast<std::uint64_t>(u.size() * v.size() * w.size());
    c.require(r.total == uvw, tag + " identity");
    const auto ys = size_q(y.size());
    c.require(size_q(r.z.size()) >= 4 * size_q(uvw) / (ys * ys), tag + " |Z| bound");
    const auto zi = inverse_set(r.z);
    const auto zzz = product_set(zi, r.z, zi).size();
    c.require(zzz == r.zzz_size, tag + " recorded |Z^-1 Z Z^-1|");
    c.require(2 * zzz <= y.size(), tag + " |Z^-1 Z Z^-1| <= |Y|/2");
  };
  for (const auto& hc : halving_cases()) check(hc.y, hc.r.u, hc.r.v, hc.r.w, hc.family);
  SplitMix64 rng(0xa7);
  for (const char* spec : {"heisenberg:5", "heisenberg:7", "sym:5", "dihedral:40"}) {
    const auto g = build_group(spec);
    const auto y = full_set(g);
    for (int t = 0; t < 10; ++t) {
      const auto m = 2 + rng.below(2);  // |UVW| <= 27 <= |G|/2
      check(y, random_subset(g, m, rng), random_subset(g, m, rng), random_subset(g, m, rng), spec);
    }
  }
  return c.outcome(std::to_string(calls) + " calls");
}

std::vector<std::pair<ExtractionCertificate, MultSet>>& emitted() {
  static std::vector<std::pair<ExtractionCertificate, MultSet>> certs;
  return certs;
}

Outcome pipeline() {
  const auto t0 = Clock::now();
  Checker c;
  RunConfig cfg;
  std::string branches;
  for (const char* fam : {"interval:50", "interval:100", "interval:200", "interval:300", "gap:2:10,10:1,100",
                          "gap:3:3,3,3:1,10,100", "gap:2:20,5:1,100", "interval:8"}) {
    const auto g = generate_with_metadata(parse_family(fam));
    if (g.metadata.contains("collisions")) c.require(g.metadata["collisions"] == 0, std::string(fam) + " collides");
    const auto x = g.set;
    const auto cert = run_algorithm("thm33", x, cfg);
    const Rational k = measured_doubling(x);
    const std::string branch = cert.replay.value("branch", std::string());
    const std::string expected = size_q(x.size()) < 16 * k ? "singleton" : "main";
    branches += std::string(branches.empty() ? "" : " ") + fam + "=" + branch;
    c.require(branch == expected, std::string(fam) + " took " + branch);
    c.require(cert.ok(), std::string(fam) + " certificate: " + cert.failure);
    c.require(is_product_free(cert.witness) && cert.witness.subset_of(x), std::string(fam) + " witness");
    if (branch == "main") {
      std::vector<std::string> zs;
      for (const auto& e : cert.replay["Z"]) zs.push_back(e.get<std::string>());
      const auto z = MultSet::parse(x.group_ptr(), zs);
      c.require(size_q(cert.witness.size()) >= size_q(z.size()) / (2 * k * k * k), std::string(fam) + " pigeonhole");
    }
    emitted().emplace_back(cert, x);
  }
  c.require(branches.find("interval:8=singleton") != std::string::npos, "interval:8 not singleton");
  const double s = seconds_since(t0);
  c.require(s < 300, "runtime " + std::to_string(s) + "s");
  return c.outcome(branches + "; " + std::to_string(s) + "s");
}

Outcome oracle_agreement() {
  Checker c;
  RunConfig cfg;
  SplitMix64 rng(0xa9);
  const std::vector<std::string> groups{"int",          "cyclic:13", "cyclic:20",   "abelian:2,2,2,2", "abelian:3,6",
                                        "sym:3",        "sym:4",     "dihedral:5",  "dihedral:8",      "quaternion",
                                        "heisenberg:3", "heisenberg:5", "sym:5"};
  std::uint64_t runs = 0;
  for (int t = 0; t < 500; ++t) {
    const auto& spec = groups[static_cast<std::size_t>(t) % groups.size()];
    const auto g = build_group(spec);
    const auto m = 1 + rng.below(14);
    const auto x = spec == "int" ? random_int_subset(-20, 20, m, rng) : random_subset(g, m, rng);
    const auto best = exhaustive_max_product_free(x).size();
    const auto brute_ok = is_product_free(exhaustive_max_product_free(x));
    c.require(brute_ok, spec + " exhaustive witness");
    std::vector<std::string> algos{"greedy", "thm33"};
    if (g->abelian() && g->enumerable()) algos.push_back("alon-kleitman");
    if (g->enumerable() && spec != "sym:5") algos.push_back("solvable");
    if (spec.rfind("cyclic:", 0) == 0 && x.size() == *g->order()) algos.push_back("interval");
    for (const auto& a : algos) {
      const std::string tag = spec + " #" + std::to_string(t) + " " + a;
      try {
        const auto cert = run_algorithm(a, x, cfg);
        ++runs;
        c.require(is_product_free(cert.witness) && cert.witness.subset_of(x), tag + " witness");
        c.require(cert.witness.size() <= best, tag + " beats the optimum");
        emitted().emplace_back(cert, x);
      } catch (const PreconditionError&) {
        // X = {1}, or identity-only inputs where no algorithm applies
        c.require(x.size() == 1 && x[0] == x.group().identity(), tag + " rejected a valid input");
      }
    }
  }
  const auto ten = exhaustive_max_product_free(int_set({1, 2, 3, 4, 5, 6, 7, 8, 9, 10})).size();
  c.require(ten == 5, "{1..10} optimum " + std::to_string(ten));
  return c.outcome("500 sets, " + std::to_string(runs) + " algorithm runs, {1..10} -> " + std::to_string(ten));
}

Outcome round_trip() {
  Checker c;
  RunConfig cfg;
  for (const auto& [cert, x] : emitted()) {
    const auto r = cmd_verify(Json::parse(to_json(cert).dump()), x, cfg);
    c.require(r.pass(), cert.algorithm + " on " + x.group().spec() + ": " + (r.pass() ? "" : r.failures.front()));
  }
  // three single-field tamperings of a main-branch certificate
  const auto x = generate("interval:100");
  const auto cert = run_algorithm("thm33", x, cfg);
  const Json base = to_json(cert);
  const auto& G = x.group();

  Json witness = base;
  bool swapped = false;
  for (std::size_t i = 0; i < cert.witness.size() && !swapped; ++i) {
    for (auto e : x) {
      if (G.multiply(e, e) == cert.witness[i] && !cert.witness.contains(e)) {
        witness["witness"][i == 0 ? 1 : 0] = G.format(e);
        swapped = true;
        break;
      }
    }
  }
  c.require(swapped, "no square root available for witness tampering");
  c.require(!cmd_verify(witness, x, cfg).pass(), "witness tampering accepted");

  Json trace = base;
  trace["trace"][0]["rhs"] = "1/1000";
  c.require(!cmd_verify(trace, x, cfg).pass(), "trace tampering accepted");

  Json size = base;
  size["achieved_size"] = cert.achieved_size + 1;
  c.require(!cmd_verify(size, x, cfg).pass(), "achieved_size tampering accepted");

  return c.outcome(std::to_string(emitted().size()) + " certificates round-tripped, 3 tamperings rejected");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cyclic interval exhaustive check", cyclic_intervals},
      {"weighted sum-free lemma on random abelian groups", weighted_abelian},
      {"solvable descent on small groups", solvable_groups},
      {"difference-set bound from doubling", difference_set_bound},
      {"small-tripling subset completeness", small_tripling},
      {"iterated halving invariants", halving_loop},
      {"localization counting identity", localize_identity},
      {"end-to-end extraction pipeline", pipeline},
      {"oracle agreement", oracle_agreement},
      {"certificate round trip and tampering", round_trip}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
