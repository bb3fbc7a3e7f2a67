#pragma once

/// Set files: the first non-comment line is the group spec, then one
/// element encoding per line. Blank lines and lines starting with '#' are
/// skipped.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/families.hpp"
#include "pfree/multset.hpp"

namespace pfree {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline MultSet parse_set_text(std::istream& in) {
  std::string line;
  GroupPtr group;
  std::vector<std::string> elems;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!group) {
      group = build_group(line);
    } else {
      elems.push_back(line);
    }
  }
  if (!group) throw ParseError("set file has no group spec line");
  return MultSet::parse(group, elems);
}

inline MultSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open set file '" + path + "'");
  return parse_set_text(in);
}

inline std::string format_set_text(const MultSet& x) {
  std::ostringstream out;
  out << x.group().spec() << '\n';
  for (const auto& e : x.encode()) out << e << '\n';
  return out.str();
}

inline void write_set_file(const std::string& path, const MultSet& x) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write set file '" + path + "'");
  out << format_set_text(x);
}

/// A family spec, or a bare group spec meaning the whole group.
inline MultSet resolve_set_source(const std::string& text) {
  if (looks_like_family(text)) return generate(text);
  const GroupPtr g = build_group(text);
  const auto n = g->order();
  if (!n || *n > kFamilySizeCap) throw BudgetExceeded("group '" + text + "' is too large to use as a set");
  return full_set(g);
}

}  // namespace pfree
