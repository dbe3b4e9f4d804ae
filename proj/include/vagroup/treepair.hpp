#pragma once

// Tree-pair diagrams (S, T, pi) for elements of V. A tree is stored as its
// left-to-right list of leaf addresses (root-to-leaf paths over {0,1}).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vagroup/errors.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/text.hpp"

namespace vagroup {

using Address = std::string;

inline Arc address_arc(const Address& a) {
  BigInt num = 0;
  for (char c : a) {
    num = num * 2 + (c == '1' ? 1 : 0);
  }
  auto depth = static_cast<std::int64_t>(a.size());
  return {Dyadic::frac(num, depth), Dyadic::frac(num + 1, depth)};
}

// True when `a` is a proper prefix of `b`, i.e. arc(b) is strictly inside arc(a).
inline bool is_proper_ancestor(const Address& a, const Address& b) {
  return a.size() < b.size() && b.compare(0, a.size(), a) == 0;
}

struct TreePair {
  std::vector<Address> source;     // leaves of S, left to right
  std::vector<Address> target;     // leaves of T, left to right
  std::vector<std::size_t> perm;   // source leaf i is paired with target leaf perm[i]

  std::size_t size() const { return source.size(); }
  bool is_trivial() const { return source.size() == 1; }

  friend bool operator==(const TreePair& a, const TreePair& b) {
    return a.source == b.source && a.target == b.target && a.perm == b.perm;
  }
};

struct HigmanWitness {
  std::size_t n;
  Address source_leaf;
  Address target_leaf;
};

namespace detail {

// Leaves must form a complete prefix code in left-to-right order.
inline bool is_leaf_list(const std::vector<Address>& leaves) {
  std::vector<Arc> arcs;
  for (const auto& a : leaves) {
    for (char c : a) {
      if (c != '0' && c != '1') {
        return false;
      }
    }
    arcs.push_back(address_arc(a));
  }
  return check_tiling(arcs, 0, 1, "tree").empty();
}

inline std::optional<std::size_t> reducible_at(const TreePair& t, std::size_t i) {
  const auto& s = t.source;
  if (i + 1 >= s.size()) {
    return std::nullopt;
  }
  const Address& a = s[i];
  const Address& b = s[i + 1];
  if (a.empty() || a.size() != b.size() || a.back() != '0' || b.back() != '1' ||
      a.compare(0, a.size() - 1, b, 0, b.size() - 1) != 0) {
    return std::nullopt;
  }
  std::size_t j = t.perm[i];
  if (t.perm[i + 1] != j + 1) {
    return std::nullopt;
  }
  const Address& c = t.target[j];
  const Address& d = t.target[j + 1];
  if (c.empty() || c.size() != d.size() || c.back() != '0' || d.back() != '1' ||
      c.compare(0, c.size() - 1, d, 0, d.size() - 1) != 0) {
    return std::nullopt;
  }
  return j;
}

inline void collapse(TreePair& t, std::size_t i, std::size_t j) {
  t.source[i].pop_back();
  t.source.erase(t.source.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  t.target[j].pop_back();
  t.target.erase(t.target.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  t.perm.erase(t.perm.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  for (auto& p : t.perm) {
    if (p > j) {
      --p;
    }
  }
}

}  // namespace detail

inline std::string check_treepair(const TreePair& t) {
  if (t.source.size() != t.target.size() || t.perm.size() != t.source.size()) {
    return "leaf counts of source, target and permutation differ";
  }
  if (!detail::is_leaf_list(t.source)) {
    return "source leaves do not form a binary tree";
  }
  if (!detail::is_leaf_list(t.target)) {
    return "target leaves do not form a binary tree";
  }
  std::vector<bool> seen(t.perm.size(), false);
  for (auto p : t.perm) {
    if (p >= seen.size() || seen[p]) {
      return "pairing is not a permutation";
    }
    seen[p] = true;
  }
  return {};
}

inline TreePair tp_reduce(TreePair t) {
  std::size_t i = 0;
  while (i + 1 < t.source.size()) {
    if (auto j = detail::reducible_at(t, i)) {
      detail::collapse(t, i, *j);
      // the new leaf may pair up with its left neighbour
      i = i > 0 ? i - 1 : 0;
    } else {
      ++i;
    }
  }
  return t;
}

// Collapses a uniformly chosen reducible caret at each step.
inline TreePair tp_reduce_random(TreePair t, std::mt19937_64& rng) {
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t i = 0; i + 1 < t.source.size(); ++i) {
      if (auto j = detail::reducible_at(t, i)) {
        options.emplace_back(i, *j);
      }
    }
    if (options.empty()) {
      return t;
    }
    auto [i, j] = options[rng() % options.size()];
    detail::collapse(t, i, j);
  }
}

inline TreePair tp_identity() { return {{""}, {""}, {0}}; }

inline PLMap tp_to_plmap(const TreePair& t) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < t.source.size(); ++i) {
    pieces.push_back(Piece::between(address_arc(t.source[i]),
                                    address_arc(t.target[t.perm[i]])));
  }
  return PLMap(std::move(pieces));
}

namespace detail {

// Standard dyadic arcs tiling [lo, hi), largest first from the left.
inline std::vector<Arc> standard_cover(Dyadic lo, const Dyadic& hi) {
  std::vector<Arc> out;
  while (lo < hi) {
    // largest 2^-d aligned with lo that fits
    Dyadic len = lo.is_zero() ? Dyadic(1) : Dyadic::pow2(lo.exponent());
    while (lo + len > hi) {
      len = len.mul_pow2(-1);
    }
    out.push_back({lo, lo + len});
    lo = lo + len;
  }
  return out;
}

inline bool is_standard(const Arc& a) {
  Dyadic len = a.length();
  if (len.mantissa() != 1) {
    return false;
  }
  return a.lo.is_zero() || a.lo.exponent() >= len.exponent();
}

inline Address arc_address(const Arc& a) {
  std::int64_t depth = -a.length().exponent();
  Address out(static_cast<std::size_t>(depth), '0');
  BigInt idx = a.lo.is_zero() ? BigInt(0)
                              : detail::shift_left(a.lo.mantissa(),
                                                   static_cast<std::uint64_t>(
                                                       a.lo.exponent() + depth));
  for (std::int64_t i = depth - 1; i >= 0; --i) {
    if (mpz_tstbit(idx.get_mpz_t(), static_cast<mp_bitcnt_t>(depth - 1 - i))) {
      out[static_cast<std::size_t>(i)] = '1';
    }
  }
  return out;
}

}  // namespace detail

inline TreePair tp_from_plmap(const PLMap& f) {
  std::vector<std::pair<Arc, Arc>> leaves;
  for (const auto& p : f.pieces()) {
    std::vector<Arc> todo = detail::standard_cover(p.arc.lo, p.arc.hi);
    std::reverse(todo.begin(), todo.end());
    while (!todo.empty()) {
      Arc a = todo.back();
      todo.pop_back();
      Arc img = image_of(a, p.map);
      if (detail::is_standard(img)) {
        leaves.emplace_back(a, img);
        continue;
      }
      Dyadic mid = a.lo + a.length().mul_pow2(-1);
      todo.push_back({mid, a.hi});
      todo.push_back({a.lo, mid});
    }
  }
  TreePair t;
  std::vector<std::pair<Dyadic, std::size_t>> by_target;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    t.source.push_back(detail::arc_address(leaves[i].first));
    by_target.emplace_back(leaves[i].second.lo, i);
  }
  std::sort(by_target.begin(), by_target.end());
  t.perm.resize(leaves.size());
  for (std::size_t k = 0; k < by_target.size(); ++k) {
    std::size_t i = by_target[k].second;
    t.target.push_back(detail::arc_address(leaves[i].second));
    t.perm[i] = k;
  }
  return tp_reduce(std::move(t));
}

inline TreePair tp_invert(const TreePair& t) {
  TreePair r;
  r.source = t.target;
  r.target = t.source;
  r.perm.resize(t.perm.size());
  for (std::size_t i = 0; i < t.perm.size(); ++i) {
    r.perm[t.perm[i]] = i;
  }
  return r;
}

namespace detail {

// Leaves of the smallest tree refining both leaf sets.
inline std::vector<Address> common_refinement(const std::vector<Address>& a,
                                              const std::vector<Address>& b) {
  std::vector<Address> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      out.push_back(a[i]);
      ++i;
      ++j;
    } else if (is_proper_ancestor(a[i], b[j])) {
      // b is finer here: take b's leaves under a[i]
      while (j < b.size() && is_proper_ancestor(a[i], b[j])) {
        out.push_back(b[j++]);
      }
      ++i;
    } else {
      while (i < a.size() && is_proper_ancestor(b[j], a[i])) {
        out.push_back(a[i++]);
      }
      ++j;
    }
  }
  return out;
}

}  // namespace detail

// a.b: apply a, then b.
inline TreePair tp_multiply(const TreePair& a, const TreePair& b) {
  std::vector<Address> middle = detail::common_refinement(a.target, b.source);

  std::vector<std::size_t> a_inverse(a.perm.size());
  for (std::size_t i = 0; i < a.perm.size(); ++i) {
    a_inverse[a.perm[i]] = i;
  }
  std::map<Address, Address> b_source_target;
  for (std::size_t i = 0; i < b.source.size(); ++i) {
    b_source_target[b.source[i]] = b.target[b.perm[i]];
  }
  auto owner = [](const std::vector<Address>& leaves, const Address& m) {
    auto it = std::upper_bound(leaves.begin(), leaves.end(), m);
    return static_cast<std::size_t>(it - leaves.begin()) - 1;
  };

  std::vector<std::pair<Address, Address>> pairs;
  for (const auto& m : middle) {
    std::size_t ta = owner(a.target, m);
    const Address& t_leaf = a.target[ta];
    Address src = a.source[a_inverse[ta]] + m.substr(t_leaf.size());
    std::size_t sb = owner(b.source, m);
    const Address& s_leaf = b.source[sb];
    Address dst = b_source_target[s_leaf] + m.substr(s_leaf.size());
    pairs.emplace_back(std::move(src), std::move(dst));
  }
  std::sort(pairs.begin(), pairs.end());
  TreePair r;
  std::vector<std::pair<Address, std::size_t>> by_target;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    r.source.push_back(pairs[i].first);
    by_target.emplace_back(pairs[i].second, i);
  }
  std::sort(by_target.begin(), by_target.end());
  r.perm.resize(pairs.size());
  for (std::size_t k = 0; k < by_target.size(); ++k) {
    r.target.push_back(by_target[k].first);
    r.perm[by_target[k].second] = k;
  }
  return tp_reduce(std::move(r));
}

inline TreePair tp_power(const TreePair& t, std::int64_t k) {
  TreePair base = k < 0 ? tp_invert(t) : t;
  TreePair r = tp_identity();
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) {
    r = tp_multiply(r, base);
  }
  return r;
}

// A source leaf paired with a target leaf strictly inside it.
inline std::optional<HigmanWitness> find_contracting_leaf(const TreePair& t,
                                                          std::size_t n) {
  for (std::size_t i = 0; i < t.source.size(); ++i) {
    const Address& j = t.target[t.perm[i]];
    if (is_proper_ancestor(t.source[i], j)) {
      return HigmanWitness{n, t.source[i], j};
    }
  }
  return std::nullopt;
}

inline bool verify_witness(const TreePair& f, const HigmanWitness& w) {
  TreePair p = tp_power(f, static_cast<std::int64_t>(w.n));
  if (!is_proper_ancestor(w.source_leaf, w.target_leaf)) {
    return false;
  }
  for (std::size_t i = 0; i < p.source.size(); ++i) {
    if (p.source[i] == w.source_leaf) {
      return p.target[p.perm[i]] == w.target_leaf;
    }
  }
  return false;
}

inline std::optional<HigmanWitness> tp_higman_contraction(const TreePair& f,
                                                          std::size_t n_max) {
  TreePair p = tp_identity();
  for (std::size_t n = 1; n <= n_max; ++n) {
    p = tp_multiply(p, f);
    if (auto w = find_contracting_leaf(p, n)) {
      return w;
    }
  }
  return std::nullopt;
}

struct FiniteOrder {
  std::size_t n;
};
struct InfiniteCertified {
  HigmanWitness witness;
};
struct OrderUnknown {
  std::size_t n_max;
};
using OrderResult = std::variant<FiniteOrder, InfiniteCertified, OrderUnknown>;

inline OrderResult tp_order(const TreePair& f, std::size_t n_max) {
  TreePair p = tp_identity();
  for (std::size_t n = 1; n <= n_max; ++n) {
    p = tp_multiply(p, f);
    if (p.is_trivial()) {
      return FiniteOrder{n};
    }
    if (auto w = find_contracting_leaf(p, n)) {
      return InfiniteCertified{*w};
    }
  }
  return OrderUnknown{n_max};
}

////////////////////////////////////////////////////////////////////////////
// Text form: tp{ S ; T ; perm } with trees in paren notation, "(,)" a caret.
////////////////////////////////////////////////////////////////////////////

namespace detail {

inline void tree_text(const std::vector<Address>& leaves, std::size_t& i,
                      const Address& at, std::string& out) {
  if (i < leaves.size() && leaves[i] == at) {
    ++i;
    return;
  }
  out += '(';
  tree_text(leaves, i, at + '0', out);
  out += ',';
  tree_text(leaves, i, at + '1', out);
  out += ')';
}

inline void parse_tree(Scanner& s, const Address& at, std::vector<Address>& out,
                       std::size_t depth) {
  if (depth > 4096) {
    s.fail("tree too deep");
  }
  if (!s.consume("(")) {
    out.push_back(at);
    return;
  }
  parse_tree(s, at + '0', out, depth + 1);
  s.expect(",");
  parse_tree(s, at + '1', out, depth + 1);
  s.expect(")");
}

}  // namespace detail

inline std::string tree_to_string(const std::vector<Address>& leaves) {
  std::string out;
  std::size_t i = 0;
  detail::tree_text(leaves, i, "", out);
  return out;
}

inline std::string to_string(const TreePair& t) {
  std::string s = "tp{" + tree_to_string(t.source) + "; " +
                  tree_to_string(t.target) + ";";
  for (auto p : t.perm) {
    s += " " + std::to_string(p + 1);
  }
  return s + "}";
}

inline TreePair parse_treepair(Scanner& s) {
  std::size_t line = s.line();
  std::size_t col = s.column();
  s.expect("tp{");
  TreePair t;
  detail::parse_tree(s, "", t.source, 0);
  s.expect(";");
  detail::parse_tree(s, "", t.target, 0);
  s.expect(";");
  while (!s.consume("}")) {
    std::size_t v = s.natural();
    if (v == 0) {
      s.fail("permutation entries are 1-based");
    }
    t.perm.push_back(v - 1);
  }
  if (auto msg = check_treepair(t); !msg.empty()) {
    throw ValidationError(std::to_string(line) + ":" + std::to_string(col) +
                          ": " + msg);
  }
  return tp_reduce(std::move(t));
}

inline TreePair parse_treepair(std::string_view text) {
  Scanner s(text);
  TreePair t = parse_treepair(s);
  if (!s.at_end()) {
    s.fail("trailing input after tp{...}");
  }
  return t;
}

}  // namespace vagroup
