#pragma once

/// Deterministic instance generators. Text forms:
///
///   interval:N                         {-N..N} in the integers
///   gap:d:N1,..,Nd:a1,..,ad            {sum n_i a_i : |n_i| <= N_i}
///   heisenberg-ball:p:r                unitriangular matrices mod p, entries in [-r, r]
///   coset-union:<group>:<g1;g2;..>:m   first m left cosets of <g1, g2, ..>
///   random:<group>:m[:seed=S]          m distinct uniform elements
///   full-group:<group>                 also full-group(<group>)
///   full-group-minus-identity:<group>  also full-group-minus-identity(<group>)

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pfree/error.hpp"
#include "pfree/group.hpp"
#include "pfree/multset.hpp"
#include "pfree/rng.hpp"
#include "pfree/subgroup.hpp"

namespace pfree {

inline constexpr std::size_t kFamilySizeCap = 100'000;

struct FamilySpec {
  std::string name;
  GroupPtr group;
  std::vector<std::int64_t> params;
  std::vector<std::int64_t> params2;
  std::vector<std::string> generators;
  std::uint64_t seed = 0;
  std::string text;
};

struct GeneratedSet {
  MultSet set;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

namespace detail {

inline std::vector<std::int64_t> parse_int_list(const std::string& s, const char* what) {
  std::vector<std::int64_t> out;
  for (const auto& part : split(s, ',')) {
    try {
      out.push_back(GroupOracle::parse_int64(part));
    } catch (const ParseError&) {
      throw ParseError(std::string("malformed ") + what + " '" + s + "'");
    }
  }
  return out;
}

inline bool is_family_name(const std::string& name) {
  return name == "interval" || name == "gap" || name == "heisenberg-ball" || name == "coset-union" ||
         name == "random" || name == "full-group" || name == "full-group-minus-identity";
}

}  // namespace detail

/// Returns true when `text` names a family (as opposed to a bare group spec).
inline bool looks_like_family(const std::string& text) {
  const auto paren = text.find('(');
  const auto colon = text.find(':');
  return detail::is_family_name(text.substr(0, std::min(paren, colon)));
}

inline FamilySpec parse_family(const std::string& text) {
  FamilySpec f;
  f.text = text;
  std::string body = text;
  const auto paren = text.find('(');
  if (paren != std::string::npos && paren < text.find(':')) {
    if (text.back() != ')') throw ParseError("unbalanced parentheses in '" + text + "'");
    body = text.substr(0, paren) + ":" + text.substr(paren + 1, text.size() - paren - 2);
  }
  const auto tok = detail::split(body, ':');
  f.name = tok[0];
  std::size_t pos = 1;
  auto need = [&](std::size_t k) {
    if (pos + k > tok.size()) throw ParseError("truncated family spec '" + text + "'");
  };
  auto finish = [&] {
    if (pos != tok.size()) throw ParseError("trailing tokens in family spec '" + text + "'");
  };

  if (f.name == "interval") {
    need(1);
    const auto n = GroupOracle::parse_int64(tok[pos++]);
    if (n < 0) throw ParseError("interval radius must be >= 0");
    f.params = {n};
    f.group = build_group("int");
  } else if (f.name == "gap") {
    need(3);
    const auto d = detail::parse_positive(tok[pos++], "gap dimension");
    f.params = detail::parse_int_list(tok[pos++], "gap radii");
    f.params2 = detail::parse_int_list(tok[pos++], "gap steps");
    if (static_cast<std::int64_t>(f.params.size()) != d || static_cast<std::int64_t>(f.params2.size()) != d) {
      throw ParseError("gap needs exactly d radii and d steps");
    }
    for (auto r : f.params) {
      if (r < 0) throw ParseError("gap radii must be >= 0");
    }
    f.group = build_group("int");
  } else if (f.name == "heisenberg-ball") {
    need(2);
    const auto p = detail::parse_positive(tok[pos++], "prime");
    const auto r = GroupOracle::parse_int64(tok[pos++]);
    if (r < 0) throw ParseError("ball radius must be >= 0");
    f.params = {p, r};
    f.group = build_group("heisenberg:" + std::to_string(p));
  } else if (f.name == "coset-union") {
    f.group = parse_group_tokens(tok, pos);
    need(2);
    for (const auto& gtok : detail::split(tok[pos++], ';')) {
      if (!gtok.empty()) f.generators.push_back(gtok);
    }
    f.params = {detail::parse_positive(tok[pos++], "coset count")};
  } else if (f.name == "random") {
    f.group = parse_group_tokens(tok, pos);
    need(1);
    const auto m = GroupOracle::parse_int64(tok[pos++]);
    if (m < 0) throw ParseError("random size must be >= 0");
    f.params = {m};
    if (pos < tok.size() && tok[pos].rfind("seed=", 0) == 0) {
      const auto s = GroupOracle::parse_int64(tok[pos++].substr(5));
      f.seed = static_cast<std::uint64_t>(s);
    }
  } else if (f.name == "full-group" || f.name == "full-group-minus-identity") {
    f.group = parse_group_tokens(tok, pos);
  } else {
    throw ParseError("unknown family '" + f.name + "'");
  }
  finish();
  return f;
}

inline GeneratedSet generate_with_metadata(const FamilySpec& f) {
  GeneratedSet out;
  auto& meta = out.metadata;
  meta["family"] = f.name;
  meta["spec"] = f.text;
  const GroupOracle& g = *f.group;
  std::vector<Element> elems;

  if (f.name == "interval") {
    const auto n = f.params[0];
    if (static_cast<std::uint64_t>(2 * n + 1) > kFamilySizeCap) throw BudgetExceeded("interval exceeds the size cap");
    for (std::int64_t i = -n; i <= n; ++i) elems.push_back(Element{i});
  } else if (f.name == "gap") {
    __int128 nominal = 1;
    for (auto r : f.params) {
      nominal *= 2 * static_cast<__int128>(r) + 1;
      if (nominal > static_cast<__int128>(kFamilySizeCap)) throw BudgetExceeded("gap exceeds the size cap");
    }
    std::vector<std::int64_t> sums{0};
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      std::vector<std::int64_t> next;
      for (auto s : sums) {
        for (std::int64_t n = -f.params[i]; n <= f.params[i]; ++n) {
          std::int64_t term, total;
          if (__builtin_mul_overflow(n, f.params2[i], &term) || __builtin_add_overflow(s, term, &total)) {
            throw BudgetExceeded("gap element overflows int64");
          }
          next.push_back(total);
        }
      }
      sums = std::move(next);
    }
    for (auto s : sums) elems.push_back(Element{s});
    meta["nominal_size"] = static_cast<std::uint64_t>(nominal);
  } else if (f.name == "heisenberg-ball") {
    const auto& h = static_cast<const HeisenbergGroup&>(g);
    const auto p = f.params[0];
    const auto r = std::min<std::int64_t>(f.params[1], p);
    for (std::int64_t a = -r; a <= r; ++a) {
      for (std::int64_t b = -r; b <= r; ++b) {
        for (std::int64_t c = -r; c <= r; ++c) elems.push_back(h.make(a, b, c));
      }
    }
  } else if (f.name == "coset-union") {
    std::vector<Element> gens;
    for (const auto& s : f.generators) gens.push_back(g.parse(s));
    const auto h = closure(g, gens);
    const auto all = g.elements();
    std::unordered_set<Element, ElementHash> covered;
    std::int64_t cosets = 0;
    for (auto x : all) {
      if (cosets == f.params[0]) break;
      if (covered.count(x)) continue;
      for (auto e : h) {
        const Element y = g.multiply(x, e);
        covered.insert(y);
        elems.push_back(y);
      }
      ++cosets;
      if (elems.size() > kFamilySizeCap) throw BudgetExceeded("coset union exceeds the size cap");
    }
    meta["subgroup_size"] = h.size();
    meta["cosets"] = cosets;
  } else if (f.name == "random") {
    const auto m = static_cast<std::uint64_t>(f.params[0]);
    if (m > kFamilySizeCap) throw BudgetExceeded("random set exceeds the size cap");
    const auto n = g.order();
    if (!n) throw PreconditionError("random sets need a finite group");
    if (m > *n) throw PreconditionError("random set larger than the group");
    SplitMix64 rng(f.seed);
    if (g.dense()) {
      for (auto i : rng.sample_distinct(*n, m)) elems.push_back(Element{static_cast<std::int64_t>(i)});
    } else {
      const auto all = g.elements();
      for (auto i : rng.sample_distinct(all.size(), m)) elems.push_back(all[i]);
    }
    meta["seed"] = f.seed;
  } else {
    const auto n = g.order();
    if (!n || *n > kFamilySizeCap) throw BudgetExceeded("full group exceeds the size cap");
    elems = g.elements();
    if (f.name == "full-group-minus-identity") std::erase(elems, g.identity());
  }
  out.set = MultSet(f.group, std::move(elems));
  meta["size"] = out.set.size();
  if (meta.contains("nominal_size")) meta["collisions"] = meta["nominal_size"].get<std::uint64_t>() - out.set.size();
  return out;
}

inline MultSet generate(const FamilySpec& f) { return generate_with_metadata(f).set; }

inline MultSet generate(const std::string& text) { return generate(parse_family(text)); }

}  // namespace pfree
