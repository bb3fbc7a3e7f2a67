#pragma once

/// Extraction certificates: the witness, the recomputed product-freeness
/// verdict, the claimed lower bound and a trace of stage inequalities, all
/// serializable to JSON with exact rationals as "p/q" strings.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pfree/error.hpp"
#include "pfree/hash.hpp"
#include "pfree/multset.hpp"
#include "pfree/rational.hpp"

namespace pfree {

using Json = nlohmann::ordered_json;

enum class Relation { kLe, kLt, kGe, kGt, kEq };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::kLe: return "<=";
    case Relation::kLt: return "<";
    case Relation::kGe: return ">=";
    case Relation::kGt: return ">";
    case Relation::kEq: return "==";
  }
  return "?";
}

inline Relation parse_relation(const std::string& s) {
  if (s == "<=") return Relation::kLe;
  if (s == "<") return Relation::kLt;
  if (s == ">=") return Relation::kGe;
  if (s == ">") return Relation::kGt;
  if (s == "==") return Relation::kEq;
  throw ParseError("unknown relation '" + s + "'");
}

inline bool evaluate(const Rational& lhs, Relation r, const Rational& rhs) {
  switch (r) {
    case Relation::kLe: return lhs <= rhs;
    case Relation::kLt: return lhs < rhs;
    case Relation::kGe: return lhs >= rhs;
    case Relation::kGt: return lhs > rhs;
    case Relation::kEq: return lhs == rhs;
  }
  return false;
}

/// One certified inequality `lhs rel rhs` of an algorithm stage.
struct TraceRecord {
  std::string stage;
  std::vector<std::pair<std::string, std::uint64_t>> sizes;
  std::string inequality;
  Rational lhs;
  Relation relation = Relation::kLe;
  Rational rhs;
  bool holds = false;

  static TraceRecord make(std::string stage, std::vector<std::pair<std::string, std::uint64_t>> sizes,
                          std::string inequality, Rational lhs, Relation rel, Rational rhs) {
    TraceRecord t{std::move(stage), std::move(sizes), std::move(inequality), std::move(lhs), rel, std::move(rhs)};
    t.holds = evaluate(t.lhs, t.relation, t.rhs);
    return t;
  }
};

/// Content hash of (group spec, canonical element listing).
inline std::string input_digest(const MultSet& x) {
  Fnv1a h;
  h.update(x.group().spec()).update(std::string_view("\n"));
  for (const auto& s : x.encode()) h.update(s).update(std::string_view("\n"));
  return h.hex();
}

struct ExtractionCertificate {
  std::string group;
  std::string input_digest;
  std::string algorithm;
  Json params = Json::object();
  MultSet witness;
  bool verified_product_free = false;
  std::size_t achieved_size = 0;
  std::optional<Rational> guarantee;
  std::vector<TraceRecord> trace;
  /// False when a stage failed and the witness is absent or partial.
  bool complete = true;
  /// Algorithm-specific data that lets a verifier replay the final step.
  Json replay = Json::object();
  /// Stage name and message of the failure that left the certificate incomplete.
  std::string failure;

  bool all_stages_hold() const {
    for (const auto& t : trace) {
      if (!t.holds) return false;
    }
    return true;
  }

  void add(TraceRecord t) { trace.push_back(std::move(t)); }

  /// Recomputes product-freeness and the size fields, and checks the
  /// witness is contained in `input`.
  void seal(const MultSet& input) {
    group = input.group().spec();
    input_digest = pfree::input_digest(input);
    if (!witness.group_ptr()) witness = MultSet::from_sorted(input.group_ptr(), {});
    if (!witness.subset_of(input)) throw InternalError("witness is not contained in the input set");
    verified_product_free = is_product_free(witness);
    achieved_size = witness.size();
    add(TraceRecord::make("emit", {{"witness", witness.size()}}, "witness is product-free (1 = yes)",
                          Rational(verified_product_free ? 1 : 0), Relation::kEq, Rational(1)));
    if (guarantee) {
      add(TraceRecord::make("emit", {{"witness", witness.size()}}, "|witness| >= ceil(guarantee)",
                            size_q(witness.size()), Relation::kGe, Rational(ceil(*guarantee))));
    }
  }

  bool ok() const { return complete && verified_product_free && all_stages_hold(); }
};

inline Json to_json(const TraceRecord& t) {
  Json sizes = Json::object();
  for (const auto& [k, v] : t.sizes) sizes[k] = v;
  return Json{{"stage", t.stage},     {"sizes", sizes},         {"inequality", t.inequality},
              {"lhs", to_string(t.lhs)}, {"relation", to_string(t.relation)}, {"rhs", to_string(t.rhs)},
              {"holds", t.holds}};
}

inline Json to_json(const ExtractionCertificate& c) {
  Json trace = Json::array();
  for (const auto& t : c.trace) trace.push_back(to_json(t));
  Json witness = Json::array();
  if (c.witness.group_ptr()) {
    for (const auto& s : c.witness.encode()) witness.push_back(s);
  }
  return Json{{"input_digest", c.input_digest},
              {"group", c.group},
              {"algorithm", c.algorithm},
              {"params", c.params},
              {"witness", witness},
              {"verified_product_free", c.verified_product_free},
              {"achieved_size", c.achieved_size},
              {"guarantee", c.guarantee ? Json(to_string(*c.guarantee)) : Json(nullptr)},
              {"complete", c.complete},
              {"trace", trace},
              {"replay", c.replay},
              {"failure", c.failure.empty() ? Json(nullptr) : Json(c.failure)}};
}

/// Parses a certificate; the witness is decoded in `group`.
inline ExtractionCertificate certificate_from_json(const Json& j, const GroupPtr& group) {
  try {
    ExtractionCertificate c;
    c.input_digest = j.at("input_digest").get<std::string>();
    c.group = j.value("group", group->spec());
    c.algorithm = j.at("algorithm").get<std::string>();
    c.params = j.value("params", Json::object());
    std::vector<std::string> witness;
    for (const auto& w : j.at("witness")) witness.push_back(w.get<std::string>());
    c.witness = MultSet::parse(group, witness);
    if (c.witness.size() != witness.size()) throw ParseError("witness lists a duplicate element");
    c.verified_product_free = j.at("verified_product_free").get<bool>();
    c.achieved_size = j.at("achieved_size").get<std::size_t>();
    if (!j.at("guarantee").is_null()) c.guarantee = parse_rational(j.at("guarantee").get<std::string>());
    c.complete = j.value("complete", true);
    for (const auto& t : j.at("trace")) {
      TraceRecord r;
      r.stage = t.at("stage").get<std::string>();
      for (const auto& [k, v] : t.at("sizes").items()) r.sizes.emplace_back(k, v.get<std::uint64_t>());
      r.inequality = t.at("inequality").get<std::string>();
      r.lhs = parse_rational(t.at("lhs").get<std::string>());
      r.relation = parse_relation(t.at("relation").get<std::string>());
      r.rhs = parse_rational(t.at("rhs").get<std::string>());
      r.holds = t.at("holds").get<bool>();
      c.trace.push_back(std::move(r));
    }
    c.replay = j.value("replay", Json::object());
    if (j.contains("failure") && !j["failure"].is_null()) c.failure = j["failure"].get<std::string>();
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace pfree
