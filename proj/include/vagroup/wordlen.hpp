#pragma once

// Generating sets and exact word lengths inside a breadth-first Cayley ball.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vagroup/certify.hpp"
#include "vagroup/errors.hpp"
#include "vagroup/fixtures.hpp"
#include "vagroup/treepair.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup {

struct Generator {
  std::string name;
  VAElement element;
};

// Inverses are adjoined as "name^-1" unless the inverse is already listed
// (involutions, or an inverse given explicitly).
class GenSet {
 public:
  GenSet() = default;

  explicit GenSet(const std::vector<Generator>& base) {
    for (const auto& g : base) {
      if (g.element.is_identity()) {
        throw DomainError("generator " + g.name + " is the identity");
      }
      if (!contains(g.element)) {
        gens_.push_back(g);
      }
    }
    std::size_t n = gens_.size();
    for (std::size_t i = 0; i < n; ++i) {
      VAElement inv = va_invert(gens_[i].element);
      if (!contains(inv)) {
        gens_.push_back({gens_[i].name + "^-1", std::move(inv)});
      }
    }
    for (const auto& g : gens_) {
      stats_.max_log2_slope = std::max(stats_.max_log2_slope, va_max_abs_log2_slope(g.element));
      stats_.max_sing = std::max(stats_.max_sing, va_singularities(g.element).size());
    }
  }

  const std::vector<Generator>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  const GenStats& stats() const { return stats_; }

  // Generators as given, without the adjoined inverses.
  std::vector<std::string> base_names() const {
    std::vector<std::string> out;
    for (const auto& g : gens_) {
      if (g.name.size() < 3 || g.name.compare(g.name.size() - 3, 3, "^-1") != 0) {
        out.push_back(g.name);
      }
    }
    return out;
  }

 private:
  bool contains(const VAElement& e) const {
    return std::any_of(gens_.begin(), gens_.end(),
                       [&](const Generator& g) { return va_equal(g.element, e); });
  }

  std::vector<Generator> gens_;
  GenStats stats_;
};

// The five standard generators of V as tree pairs, plus beta and its 1- half.
// Any finite set serves; the choice only moves the constants.
inline const std::vector<std::pair<std::string, std::string>>& default_genset_text() {
  static const std::vector<std::pair<std::string, std::string>> t = {
      {"x0", "tp{(,(,)); ((,),); 1 2 3}"},
      {"x1", "tp{(,(,(,))); (,((,),)); 1 2 3 4}"},
      {"c", "tp{(,(,)); (,(,)); 3 1 2}"},
      {"pi0", "tp{(,(,)); (,(,)); 1 3 2}"},
      {"pi1", "tp{(,(,(,))); (,(,(,))); 1 2 4 3}"},
  };
  return t;
}

inline GenSet default_genset() {
  std::vector<Generator> base;
  for (const auto& [name, text] : default_genset_text()) {
    base.push_back({name, to_va(tp_to_plmap(parse_treepair(text)))});
  }
  base.push_back({"beta", fixtures::beta()});
  base.push_back({"beta_right", fixtures::beta_right()});
  return GenSet(base);
}

struct BallLimits {
  std::size_t max_elements = 1'000'000;
  std::size_t piece_budget = kDefaultPieceBudget;
};

struct Ball {
  std::size_t radius = 0;
  std::vector<std::string> generator_names;
  std::unordered_map<std::string, std::size_t> length;  // canonical text -> length
  std::vector<VAElement> elements;                      // BFS order
  std::vector<std::size_t> element_length;
};

// Deterministic: frontiers are expanded in insertion order and generators in
// list order, so the first word found for an element is the same every run.
inline Ball bfs_ball(const GenSet& s, std::size_t radius, const BallLimits& limits = {}) {
  Ball b;
  b.radius = radius;
  for (const auto& g : s.generators()) {
    b.generator_names.push_back(g.name);
  }
  VAElement id;
  b.length.emplace(to_string(id), 0);
  b.elements.push_back(id);
  b.element_length.push_back(0);
  std::size_t begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::size_t end = b.elements.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& g : s.generators()) {
        VAElement e = va_compose(b.elements[i], g.element, limits.piece_budget);
        std::string key = to_string(e);
        if (b.length.emplace(std::move(key), r).second) {
          b.elements.push_back(std::move(e));
          b.element_length.push_back(r);
          if (b.elements.size() > limits.max_elements) {
            throw ResourceLimit("ball exceeds " + std::to_string(limits.max_elements) +
                                " elements at radius " + std::to_string(r));
          }
        }
      }
    }
    begin = end;
  }
  return b;
}

inline std::optional<std::size_t> exact_length(const VAElement& e, const Ball& b) {
  auto it = b.length.find(to_string(e));
  if (it == b.length.end()) {
    return std::nullopt;
  }
  return it->second;
}

// Product of `length` generators of s drawn from a seeded mt19937_64.
inline VAElement random_word(const GenSet& s, std::uint64_t seed, std::size_t length,
                             std::size_t budget = kDefaultPieceBudget) {
  if (s.size() == 0) {
    throw DomainError("empty generating set");
  }
  std::mt19937_64 rng(seed);
  VAElement e;
  for (std::size_t i = 0; i < length; ++i) {
    e = va_compose(e, s.generators()[rng() % s.size()].element, budget);
  }
  return e;
}

inline constexpr const char* kBallHeader = "# vagroup ball v1";

// Entries sorted by length, then text; one "length<TAB>text" per line.
inline void write_ball(std::ostream& out, const Ball& b) {
  out << kBallHeader << "\n";
  out << "radius " << b.radius << "\n";
  for (const auto& n : b.generator_names) {
    out << "generator " << n << "\n";
  }
  std::vector<std::pair<std::size_t, const std::string*>> rows;
  rows.reserve(b.length.size());
  for (const auto& [text, len] : b.length) {
    rows.emplace_back(len, &text);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : *x.second < *y.second;
  });
  for (const auto& [len, text] : rows) {
    out << len << "\t" << *text << "\n";
  }
}

inline std::string ball_to_string(const Ball& b) {
  std::ostringstream os;
  write_ball(os, b);
  return os.str();
}

inline void save_ball(const std::string& path, const Ball& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DomainError("cannot write " + path);
  }
  write_ball(out, b);
  if (!out) {
    throw DomainError("error writing " + path);
  }
}

// Entries are re-parsed, so a loaded ball carries elements as well.
inline Ball read_ball(std::istream& in) {
  Ball b;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(lineno, 1, "ball file: " + what);
  };
  ++lineno;
  if (!std::getline(in, line) || line != kBallHeader) {
    fail("missing header '" + std::string(kBallHeader) + "'");
  }
  bool have_radius = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    if (line.rfind("radius ", 0) == 0) {
      b.radius = std::stoul(line.substr(7));
      have_radius = true;
      continue;
    }
    if (line.rfind("generator ", 0) == 0) {
      b.generator_names.push_back(line.substr(10));
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail("expected 'length<TAB>element'");
    }
    std::size_t len = 0;
    try {
      len = std::stoul(line.substr(0, tab));
    } catch (const std::exception&) {
      fail("bad length");
    }
    std::string text = line.substr(tab + 1);
    VAElement e = parse_vaelement(text);
    if (to_string(e) != text) {
      fail("entry is not in canonical form");
    }
    if (!b.length.emplace(text, len).second) {
      fail("duplicate entry");
    }
    b.elements.push_back(std::move(e));
    b.element_length.push_back(len);
  }
  if (!have_radius) {
    fail("missing radius line");
  }
  return b;
}

inline Ball load_ball(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DomainError("cannot read " + path);
  }
  return read_ball(in);
}

}  // namespace vagroup
