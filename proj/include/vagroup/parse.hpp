#pragma once

// One entry point for the three element syntaxes, and files of named elements.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vagroup/errors.hpp"
#include "vagroup/fixtures.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/text.hpp"
#include "vagroup/treepair.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup {

using AnyElement = std::variant<VAElement, TreePair, PLMap>;

inline AnyElement parse_any(Scanner& s) {
  char c = s.peek();
  if (c == 'v') {
    return parse_vaelement(s);
  }
  if (c == 't') {
    return parse_treepair(s);
  }
  if (c == 'p') {
    return parse_plmap(s);
  }
  s.fail("expected va{...}, tp{...} or pl{...}");
  return VAElement();
}

inline AnyElement parse_element(std::string_view text) {
  Scanner s(text);
  AnyElement e = parse_any(s);
  if (!s.at_end()) {
    s.fail("trailing input after element");
  }
  return e;
}

inline VAElement as_va(const AnyElement& e) {
  if (const auto* v = std::get_if<VAElement>(&e)) {
    return *v;
  }
  if (const auto* t = std::get_if<TreePair>(&e)) {
    return to_va(tp_to_plmap(*t));
  }
  return to_va(std::get<PLMap>(e));
}

inline std::string to_string(const AnyElement& e) {
  return std::visit([](const auto& x) { return to_string(x); }, e);
}

// Statements "name = element", any number per line or spread over lines;
// '#' starts a comment. Names are identifiers. Order is kept.
using ElementFile = std::vector<std::pair<std::string, AnyElement>>;

inline ElementFile parse_element_file(std::string_view text) {
  Scanner s(text);
  ElementFile out;
  std::map<std::string, bool> seen;
  while (!s.at_end()) {
    std::string name = s.identifier();
    if (seen[name]) {
      s.fail("duplicate name '" + name + "'");
    }
    seen[name] = true;
    s.expect("=");
    out.emplace_back(name, parse_any(s));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DomainError("cannot read " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline ElementFile load_element_file(const std::string& path) {
  try {
    return parse_element_file(read_file(path));
  } catch (const ParseError& e) {
    throw DomainError(path + ":" + e.what());
  }
}

inline std::string write_element_file(const ElementFile& f) {
  std::string out;
  for (const auto& [name, e] : f) {
    out += name + " = " + to_string(e) + "\n";
  }
  return out;
}

// A fixture name, an inline element, a file holding exactly one element, or
// PATH:NAME for one statement of an element file.
inline AnyElement resolve_element(const std::string& spec) {
  if (auto f = fixtures::by_name(spec)) {
    return *f;
  }
  auto first = spec.find_first_not_of(" \t\n");
  if (first != std::string::npos &&
      (spec.compare(first, 3, "va{") == 0 || spec.compare(first, 3, "tp{") == 0 ||
       spec.compare(first, 3, "pl{") == 0)) {
    return parse_element(spec);
  }
  namespace fs = std::filesystem;
  if (fs::is_regular_file(spec)) {
    std::string text = read_file(spec);
    Scanner probe(text);
    if (!probe.at_end() && (probe.consume("va{") || probe.consume("tp{") ||
                            probe.consume("pl{"))) {
      return parse_element(text);
    }
    ElementFile file = parse_element_file(text);
    if (file.size() != 1) {
      throw DomainError(spec + " holds " + std::to_string(file.size()) +
                        " elements; use PATH:NAME");
    }
    return file.front().second;
  }
  if (auto colon = spec.rfind(':'); colon != std::string::npos) {
    std::string path = spec.substr(0, colon);
    std::string name = spec.substr(colon + 1);
    if (fs::is_regular_file(path)) {
      for (auto& [n, e] : load_element_file(path)) {
        if (n == name) {
          return e;
        }
      }
      throw DomainError("no element named '" + name + "' in " + path);
    }
  }
  throw DomainError("'" + spec + "' is not a fixture name, an element or a readable file");
}

}  // namespace vagroup
