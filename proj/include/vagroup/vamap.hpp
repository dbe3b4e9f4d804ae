#pragma once

// Elements of V-A: finitely many affine pieces plus finitely many one-sided
// self-similar singularity germs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vagroup/errors.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/text.hpp"

namespace vagroup {

inline constexpr std::size_t kDefaultPieceBudget = std::size_t{1} << 16;

// A singularity at p^side sent to q^side. On its neighbourhood the map is the
// self-similar extension of the annulus pieces: f o L_p = L_q o f with
// L_r(x) = 2(x - r) + r.
struct Germ {
  Dyadic p;
  Side side = Side::Plus;
  Dyadic q;
  Dyadic eps;
  std::vector<Piece> annulus;  // on A0, absolute coordinates, left to right

  bool plus() const { return side == Side::Plus; }
  CantorPoint anchor() const { return CantorPoint::sided(p, side); }
  CantorPoint image_anchor() const { return CantorPoint::sided(q, side); }

  Arc neighborhood() const {
    return plus() ? Arc{p, p + eps} : Arc{p - eps, p};
  }

  // L_p^{-k}(A0); k may be negative (outside the neighbourhood).
  Arc depth_arc(std::int64_t k) const {
    Dyadic far = eps.mul_pow2(-k);
    Dyadic near = eps.mul_pow2(-k - 1);
    return plus() ? Arc{p + near, p + far} : Arc{p - far, p - near};
  }

  Arc annulus_arc() const { return depth_arc(0); }

  // Annulus piece transported to depth k: L_q^{-k} o A o L_p^k.
  Piece scaled(const Piece& piece, std::int64_t k) const {
    if (k == 0) {
      return piece;
    }
    Arc arc{p + (piece.arc.lo - p).mul_pow2(-k), p + (piece.arc.hi - p).mul_pow2(-k)};
    std::int64_t a = piece.map.log2_slope;
    Dyadic ap = p.mul_pow2(a);
    Dyadic offset = q - ap + (ap + piece.map.offset - q).mul_pow2(-k);
    return {arc, {a, offset}};
  }

  // Value of the map at the outer end of the neighbourhood.
  Dyadic outer_value() const {
    return plus() ? annulus.back().map(annulus.back().arc.hi)
                  : annulus.front().map(annulus.front().arc.lo);
  }

  // Radius of the image neighbourhood.
  Dyadic image_radius() const {
    return plus() ? outer_value() - q : q - outer_value();
  }

  Arc image_neighborhood() const {
    Dyadic d = image_radius();
    return plus() ? Arc{q, q + d} : Arc{q - d, q};
  }

  // The k with x in depth_arc(k); x must lie strictly on the germ's side.
  std::int64_t depth_of(const CantorPoint& x) const {
    Rat t = plus() ? x.value() - Rat(p) : Rat(p) - x.value();
    if (t.sign() <= 0) {
      throw DomainError("point " + x.to_string() + " is not on the side of germ " +
                        anchor().to_string());
    }
    auto log2_of = [](const Rat& r) {
      return static_cast<std::int64_t>(detail::bit_length(r.numerator())) -
             static_cast<std::int64_t>(detail::bit_length(r.denominator()));
    };
    std::int64_t k = log2_of(Rat(eps)) - log2_of(t);
    for (;;) {
      int loc = depth_arc(k).locate(x);
      if (loc == 0) {
        return k;
      }
      // + side: left of the arc is deeper; - side: right of it is deeper
      k += (loc < 0) == plus() ? 1 : -1;
    }
  }

  friend bool operator==(const Germ& a, const Germ& b) {
    return a.p == b.p && a.side == b.side && a.q == b.q && a.eps == b.eps &&
           a.annulus == b.annulus;
  }
};

using Segment = std::variant<Piece, Germ>;

inline Arc domain_of(const Segment& s) {
  return std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Piece>) {
          return v.arc;
        } else {
          return v.neighborhood();
        }
      },
      s);
}

inline Arc image_of(const Segment& s) {
  return std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Piece>) {
          return v.image();
        } else {
          return v.image_neighborhood();
        }
      },
      s);
}

inline const Germ* as_germ(const Segment& s) { return std::get_if<Germ>(&s); }
inline const Piece* as_piece(const Segment& s) { return std::get_if<Piece>(&s); }

class VAElement {
 public:
  VAElement() : segments_{Piece{Arc{0, 1}, AffineMap::identity()}} {}

  // No checks; segments must already be sorted by domain.
  static VAElement unchecked(std::vector<Segment> segments) {
    VAElement e;
    e.segments_ = std::move(segments);
    return e;
  }

  static VAElement from_plmap(const PLMap& f) {
    std::vector<Segment> s(f.pieces().begin(), f.pieces().end());
    return unchecked(std::move(s));
  }

  const std::vector<Segment>& segments() const { return segments_; }

  std::vector<Germ> germs() const {
    std::vector<Germ> out;
    for (const auto& s : segments_) {
      if (const Germ* g = as_germ(s)) {
        out.push_back(*g);
      }
    }
    return out;
  }

  // Segment whose domain contains x.
  const Segment& segment_at(const CantorPoint& x) const {
    auto it = std::partition_point(
        segments_.begin(), segments_.end(),
        [&](const Segment& s) { return domain_of(s).locate(x) > 0; });
    if (it == segments_.end()) {
      throw DomainError("point " + x.to_string() + " outside the element's domain");
    }
    return *it;
  }

  bool is_identity() const {
    const Piece* p = segments_.size() == 1 ? as_piece(segments_[0]) : nullptr;
    return p != nullptr && p->map.is_identity();
  }

  std::size_t piece_count() const {
    std::size_t n = 0;
    for (const auto& s : segments_) {
      n += as_germ(s) ? as_germ(s)->annulus.size() : 1;
    }
    return n;
  }

  friend bool operator==(const VAElement& a, const VAElement& b) {
    return a.segments_ == b.segments_;
  }

 private:
  std::vector<Segment> segments_;
};

using SingSet = std::set<CantorPoint>;

////////////////////////////////////////////////////////////////////////////
// Self-similar extension of a germ
////////////////////////////////////////////////////////////////////////////

// Explicit pieces of a germ's self-similar extension over `range`, which must
// lie on the germ's side and stay away from the anchor.
inline std::vector<Piece> extension_pieces(const Germ& g, const Arc& range) {
  std::int64_t k_lo = g.depth_of(CantorPoint::sided(range.lo, Side::Plus));
  std::int64_t k_hi = g.depth_of(CantorPoint::sided(range.hi, Side::Minus));
  std::int64_t step = k_lo <= k_hi ? 1 : -1;
  std::vector<Piece> out;
  for (std::int64_t k = k_lo;; k += step) {
    for (const auto& piece : g.annulus) {
      Piece s = g.scaled(piece, k);
      if (auto o = intersect(s.arc, range)) {
        out.push_back({*o, s.map});
      }
    }
    if (k == k_hi) {
      break;
    }
  }
  return detail::merge_pieces(std::move(out));
}

// The same germ described with fundamental annulus of radius r.
inline Germ rebase(const Germ& g, const Dyadic& r) {
  if (r == g.eps) {
    return g;
  }
  Germ out{g.p, g.side, g.q, r, {}};
  out.annulus = extension_pieces(g, out.annulus_arc());
  return out;
}

namespace detail {

inline std::vector<Piece> annulus_between(const Germ& g, const Dyadic& r_inner,
                                          const Dyadic& r_outer) {
  Arc range = g.plus() ? Arc{g.p + r_inner, g.p + r_outer}
                       : Arc{g.p - r_outer, g.p - r_inner};
  return extension_pieces(g, range);
}

}  // namespace detail

// The element's map near x: the piece valid on an arc containing x, or the
// germ anchored at x.
inline std::variant<Piece, const Germ*> local_at(const VAElement& e,
                                                 const CantorPoint& x) {
  const Segment& s = e.segment_at(x);
  if (const Piece* p = as_piece(s)) {
    return *p;
  }
  const Germ& g = std::get<Germ>(s);
  if (g.anchor() == x) {
    return &g;
  }
  std::int64_t k = g.depth_of(x);
  for (const auto& piece : g.annulus) {
    Piece sp = g.scaled(piece, k);
    if (sp.arc.contains(x)) {
      return sp;
    }
  }
  throw DomainError("annulus of germ " + g.anchor().to_string() +
                    " does not cover " + x.to_string());
}

inline CantorPoint va_eval(const VAElement& e, const CantorPoint& x) {
  auto local = local_at(e, x);
  if (auto* g = std::get_if<const Germ*>(&local)) {
    return (*g)->image_anchor();
  }
  return std::get<Piece>(local).map(x);
}

// e on the arc J, as segments tiling J. A germ whose anchor lies in J is
// re-based to fit; other germ parts become explicit pieces.
inline std::vector<Segment> restrict_to(const VAElement& e, const Arc& j) {
  std::vector<Segment> out;
  for (const auto& s : e.segments()) {
    Arc d = domain_of(s);
    auto o = intersect(d, j);
    if (!o) {
      continue;
    }
    if (const Piece* p = as_piece(s)) {
      out.push_back(Piece{*o, p->map});
      continue;
    }
    const Germ& g = std::get<Germ>(s);
    if (j.contains(g.anchor())) {
      out.push_back(rebase(g, o->length()));
    } else {
      for (auto& piece : extension_pieces(g, *o)) {
        out.push_back(std::move(piece));
      }
    }
  }
  return out;
}

// Converts the k outermost annuli of the germ at `anchor` into explicit
// pieces. Same function, different (non-canonical) description.
inline VAElement va_peel(const VAElement& e, const CantorPoint& anchor,
                         std::int64_t k) {
  std::vector<Segment> out;
  bool found = false;
  for (const auto& s : e.segments()) {
    const Germ* g = as_germ(s);
    if (g == nullptr || g->anchor() != anchor || k <= 0) {
      out.push_back(s);
      continue;
    }
    found = true;
    Dyadic r = g->eps.mul_pow2(-k);
    auto outer = detail::annulus_between(*g, r, g->eps);
    if (g->plus()) {
      out.push_back(rebase(*g, r));
      out.insert(out.end(), outer.begin(), outer.end());
    } else {
      out.insert(out.end(), outer.begin(), outer.end());
      out.push_back(rebase(*g, r));
    }
  }
  if (!found && k > 0) {
    throw DomainError("no singularity at " + anchor.to_string());
  }
  return VAElement::unchecked(std::move(out));
}

////////////////////////////////////////////////////////////////////////////
// Structural validation
////////////////////////////////////////////////////////////////////////////

inline std::string check_germ(const Germ& g) {
  std::string at = "germ at " + g.p.to_string() + side_char(g.side);
  if (g.eps.sign() <= 0) {
    return at + ": radius must be positive";
  }
  if ((g.plus() && !(Dyadic(0) <= g.p && g.p < Dyadic(1))) ||
      (!g.plus() && !(Dyadic(0) < g.p && g.p <= Dyadic(1)))) {
    return at + ": anchor is not a point of the Cantor set";
  }
  if ((g.plus() && !(Dyadic(0) <= g.q && g.q < Dyadic(1))) ||
      (!g.plus() && !(Dyadic(0) < g.q && g.q <= Dyadic(1)))) {
    return at + ": image anchor " + g.q.to_string() + side_char(g.side) +
           " is not a point of the Cantor set";
  }
  Arc a0 = g.annulus_arc();
  std::vector<Arc> arcs;
  for (const auto& piece : g.annulus) {
    arcs.push_back(piece.arc);
  }
  if (auto msg = detail::check_tiling(arcs, a0.lo, a0.hi, at + ": annulus");
      !msg.empty()) {
    return msg;
  }
  for (std::size_t i = 0; i + 1 < g.annulus.size(); ++i) {
    if (g.annulus[i].image().hi != g.annulus[i + 1].image().lo) {
      return at + ": map is not continuous at " + g.annulus[i].arc.hi.to_string();
    }
  }
  Dyadic delta = g.image_radius();
  if (delta.sign() <= 0) {
    return at + ": image neighbourhood is empty or on the wrong side";
  }
  Dyadic inner = g.plus() ? g.annulus.front().image().lo : g.annulus.back().image().hi;
  Dyadic expected = g.plus() ? g.q + delta.mul_pow2(-1) : g.q - delta.mul_pow2(-1);
  if (inner != expected) {
    return at + ": endpoint compatibility fails (inner value " + inner.to_string() +
           ", expected " + expected.to_string() + ")";
  }
  Arc img = g.image_neighborhood();
  if (img.lo < Dyadic(0) || img.hi > Dyadic(1)) {
    return at + ": image neighbourhood leaves [0,1]";
  }
  for (std::int64_t k = 0; k <= 3; ++k) {
    const Piece& inner_piece = g.plus() ? g.annulus.front() : g.annulus.back();
    const Piece& outer_piece = g.plus() ? g.annulus.back() : g.annulus.front();
    Piece a = g.scaled(inner_piece, k);
    Piece b = g.scaled(outer_piece, k + 1);
    Dyadic x = g.plus() ? a.arc.lo : a.arc.hi;
    if (a.map(x) != b.map(x)) {
      return at + ": self-similarity fails between depths " + std::to_string(k) +
             " and " + std::to_string(k + 1);
    }
  }
  if (detail::merge_pieces(g.annulus).size() < 2) {
    return at + ": trivial germ (a single affine map), not a singularity";
  }
  return {};
}

// Empty when e is a well-formed bijection (canonical or not).
inline std::string check_structure(const VAElement& e) {
  const auto& segs = e.segments();
  std::vector<Arc> domains;
  std::vector<Arc> images;
  for (const auto& s : segs) {
    if (const Germ* g = as_germ(s)) {
      if (auto msg = check_germ(*g); !msg.empty()) {
        return msg;
      }
    } else if (!(as_piece(s)->arc.lo < as_piece(s)->arc.hi)) {
      return "empty piece " + as_piece(s)->arc.to_string();
    }
    domains.push_back(domain_of(s));
    images.push_back(image_of(s));
  }
  if (auto msg = detail::check_tiling(domains, 0, 1, "domain"); !msg.empty()) {
    return msg;
  }
  if (auto msg = detail::check_image_tiling(images, 0, 1, "image"); !msg.empty()) {
    return msg;
  }
  return {};
}

////////////////////////////////////////////////////////////////////////////
// Canonical form
////////////////////////////////////////////////////////////////////////////

// x -> 1 - x conjugation; swaps + and - germs.
inline Piece reflect(const Piece& p) {
  return {{Dyadic(1) - p.arc.hi, Dyadic(1) - p.arc.lo},
          {p.map.log2_slope,
           Dyadic(1) - Dyadic::pow2(p.map.log2_slope) - p.map.offset}};
}

inline VAElement reflect(const VAElement& e) {
  std::vector<Segment> out;
  for (auto it = e.segments().rbegin(); it != e.segments().rend(); ++it) {
    if (const Piece* p = as_piece(*it)) {
      out.push_back(reflect(*p));
      continue;
    }
    const Germ& g = std::get<Germ>(*it);
    Germ r{Dyadic(1) - g.p, g.plus() ? Side::Minus : Side::Plus, Dyadic(1) - g.q,
           g.eps, {}};
    for (auto a = g.annulus.rbegin(); a != g.annulus.rend(); ++a) {
      r.annulus.push_back(reflect(*a));
    }
    out.push_back(std::move(r));
  }
  return VAElement::unchecked(std::move(out));
}

namespace detail {

// Leftmost point where two piece lists tiling the same arc disagree.
inline std::optional<Dyadic> first_disagreement(const std::vector<Piece>& a,
                                                const std::vector<Piece>& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (auto o = intersect(a[i].arc, b[j].arc)) {
      if (a[i].map != b[j].map) {
        return o->lo;
      }
    }
    if (a[i].arc.hi < b[j].arc.hi) {
      ++i;
    } else if (b[j].arc.hi < a[i].arc.hi) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return std::nullopt;
}

inline std::vector<Piece> germ_depth_pieces(const Germ& g, std::int64_t k) {
  std::vector<Piece> out;
  for (const auto& piece : g.annulus) {
    out.push_back(g.scaled(piece, k));
  }
  return out;
}

// Largest r such that the + germ at segs[i] describes e on [p, p + r).
inline Dyadic maximal_plus_radius(const std::vector<Segment>& segs, std::size_t i) {
  const Germ& g = std::get<Germ>(segs[i]);
  for (std::size_t j = i + 1; j < segs.size(); ++j) {
    if (const Piece* piece = as_piece(segs[j])) {
      auto ext = extension_pieces(g, piece->arc);
      if (auto x = first_disagreement(ext, {*piece})) {
        return *x - g.p;
      }
      continue;
    }
    const Germ& h = std::get<Germ>(segs[j]);
    if (h.plus()) {
      return h.p - g.p;
    }
    // Walk into the facing germ; its breakpoints accumulate at its anchor
    // while g's extension is affine there, so this stops.
    for (std::int64_t k = 0;; ++k) {
      auto own = germ_depth_pieces(h, k);
      auto ext = extension_pieces(g, h.depth_arc(k));
      if (auto x = first_disagreement(ext, own)) {
        return *x - g.p;
      }
    }
  }
  return Dyadic(1) - g.p;
}

inline std::vector<Dyadic> maximal_radii(const VAElement& e) {
  const auto& segs = e.segments();
  std::vector<Dyadic> radii(segs.size());
  std::optional<VAElement> mirrored;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Germ* g = as_germ(segs[i]);
    if (g == nullptr) {
      continue;
    }
    if (g->plus()) {
      radii[i] = maximal_plus_radius(segs, i);
    } else {
      if (!mirrored) {
        mirrored = reflect(e);
      }
      radii[i] = maximal_plus_radius(mirrored->segments(), segs.size() - 1 - i);
    }
  }
  // A - germ facing a + germ yields the overlap to it.
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Germ* g = as_germ(segs[i]);
    if (g == nullptr) {
      continue;
    }
    if (!g->plus() && last && std::get<Germ>(segs[*last]).plus()) {
      Dyadic room = g->p - std::get<Germ>(segs[*last]).p - radii[*last];
      radii[i] = std::min(radii[i], room);
    }
    last = i;
  }
  return radii;
}

inline void push_merged(std::vector<Segment>& out, Piece p) {
  if (!out.empty()) {
    if (Piece* last = std::get_if<Piece>(&out.back())) {
      if (last->map == p.map && last->arc.hi == p.arc.lo) {
        last->arc.hi = p.arc.hi;
        return;
      }
    }
  }
  out.push_back(std::move(p));
}

}  // namespace detail

// Unique description of the function: no trivial germs, every germ at its
// maximal regular radius (a - germ facing a + germ gets what is left), and
// maximal explicit pieces.
inline VAElement canonicalize(const VAElement& e,
                              std::size_t budget = kDefaultPieceBudget) {
  std::vector<Segment> flat;
  for (const auto& s : e.segments()) {
    if (const Piece* p = as_piece(s)) {
      detail::push_merged(flat, *p);
      continue;
    }
    Germ g = std::get<Germ>(s);
    g.annulus = detail::merge_pieces(std::move(g.annulus));
    if (g.annulus.size() == 1) {
      detail::push_merged(flat, Piece{g.neighborhood(), g.annulus.front().map});
    } else {
      flat.push_back(std::move(g));
    }
  }
  VAElement base = VAElement::unchecked(std::move(flat));
  const auto& segs = base.segments();
  std::vector<Dyadic> radii = detail::maximal_radii(base);

  std::vector<Segment> out;
  Dyadic cursor = 0;
  auto fill_to = [&](const Dyadic& to) {
    if (cursor < to) {
      for (auto& s : restrict_to(base, {cursor, to})) {
        detail::push_merged(out, std::get<Piece>(std::move(s)));
      }
    }
  };
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Germ* g = as_germ(segs[i]);
    if (g == nullptr) {
      continue;
    }
    Germ wide = rebase(*g, radii[i]);
    Arc n = wide.neighborhood();
    fill_to(n.lo);
    out.push_back(std::move(wide));
    cursor = n.hi;
    if (out.size() > budget) {
      throw ResourceLimit("piece budget of " + std::to_string(budget) + " exceeded");
    }
  }
  fill_to(1);
  VAElement r = VAElement::unchecked(std::move(out));
  if (r.piece_count() > budget) {
    throw ResourceLimit("piece budget of " + std::to_string(budget) + " exceeded");
  }
  return r;
}

struct Validity {
  bool valid = true;
  std::string violation;

  explicit operator bool() const { return valid; }
};

// All invariants, including canonical form.
inline Validity va_validate(const VAElement& e) {
  if (auto msg = check_structure(e); !msg.empty()) {
    return {false, msg};
  }
  VAElement c = canonicalize(e);
  if (!(c == e)) {
    for (std::size_t i = 0; i < std::min(c.segments().size(), e.segments().size());
         ++i) {
      if (!(c.segments()[i] == e.segments()[i])) {
        return {false, "not in canonical form from " +
                           domain_of(e.segments()[i]).lo.to_string() +
                           " (unmerged pieces or non-maximal germ radius)"};
      }
    }
    return {false, "not in canonical form"};
  }
  return {};
}

// Checked construction from arbitrary (sorted or not) segments.
inline VAElement make_element(std::vector<Segment> segments,
                              std::size_t budget = kDefaultPieceBudget) {
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    return domain_of(a).lo < domain_of(b).lo;
  });
  VAElement e = VAElement::unchecked(std::move(segments));
  if (auto msg = check_structure(e); !msg.empty()) {
    throw ValidationError(msg);
  }
  return canonicalize(e, budget);
}

inline VAElement to_va(const PLMap& f) { return VAElement::from_plmap(f); }

inline std::optional<PLMap> to_plmap(const VAElement& e) {
  std::vector<Piece> pieces;
  for (const auto& s : e.segments()) {
    const Piece* p = as_piece(s);
    if (p == nullptr) {
      return std::nullopt;
    }
    pieces.push_back(*p);
  }
  return PLMap(std::move(pieces));
}

////////////////////////////////////////////////////////////////////////////
// Group operations
////////////////////////////////////////////////////////////////////////////

namespace detail {

// Segments of g on the image of (arc, A), pulled back through A.
inline void pull_back(const Piece& via, const std::vector<Segment>& g_part,
                      std::vector<Segment>& out) {
  const AffineMap& a = via.map;
  AffineMap back = a.inverse();
  for (const auto& s : g_part) {
    if (const Piece* p = as_piece(s)) {
      out.push_back(Piece{preimage_of(p->arc, a), a.then(p->map)});
      continue;
    }
    const Germ& h = std::get<Germ>(s);
    Germ r{back(h.p), h.side, h.q, h.eps.mul_pow2(-a.log2_slope), {}};
    for (const auto& piece : h.annulus) {
      r.annulus.push_back({preimage_of(piece.arc, a), a.then(piece.map)});
    }
    out.push_back(std::move(r));
  }
}

inline void compose_germ(const Germ& g0, const VAElement& h,
                         std::vector<Segment>& out) {
  CantorPoint target = g0.image_anchor();
  auto local = local_at(h, target);
  const Germ* hg = nullptr;
  Piece piece;
  Dyadic limit;
  if (auto* found = std::get_if<const Germ*>(&local)) {
    hg = *found;
    limit = hg->eps;
  } else {
    piece = std::get<Piece>(local);
    limit = g0.plus() ? piece.arc.hi - g0.q : g0.q - piece.arc.lo;
  }
  // Peel until the image neighbourhood fits where h is described by one rule.
  std::int64_t k = 0;
  Dyadic delta = g0.image_radius();
  while (delta.mul_pow2(-k) > limit) {
    ++k;
  }
  Germ g = rebase(g0, g0.eps.mul_pow2(-k));
  if (k > 0) {
    for (const auto& outer : annulus_between(g0, g.eps, g0.eps)) {
      pull_back(outer, restrict_to(h, outer.image()), out);
    }
  }
  Germ c{g.p, g.side, hg ? hg->q : piece.map(g.q), g.eps, {}};
  for (const auto& a : g.annulus) {
    if (hg) {
      for (const auto& b : extension_pieces(*hg, a.image())) {
        c.annulus.push_back({preimage_of(b.arc, a.map), a.map.then(b.map)});
      }
    } else {
      c.annulus.push_back({a.arc, a.map.then(piece.map)});
    }
  }
  c.annulus = merge_pieces(std::move(c.annulus));
  out.push_back(std::move(c));
}

}  // namespace detail

// f.g in the left-to-right convention: apply f, then g.
inline VAElement va_compose(const VAElement& f, const VAElement& g,
                            std::size_t budget = kDefaultPieceBudget) {
  std::vector<Segment> out;
  for (const auto& s : f.segments()) {
    if (const Piece* p = as_piece(s)) {
      detail::pull_back(*p, restrict_to(g, p->image()), out);
    } else {
      detail::compose_germ(std::get<Germ>(s), g, out);
    }
    if (out.size() > budget) {
      throw ResourceLimit("piece budget of " + std::to_string(budget) + " exceeded");
    }
  }
  std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) {
    return domain_of(a).lo < domain_of(b).lo;
  });
  return canonicalize(VAElement::unchecked(std::move(out)), budget);
}

inline VAElement va_invert(const VAElement& e) {
  std::vector<Segment> out;
  for (const auto& s : e.segments()) {
    if (const Piece* p = as_piece(s)) {
      out.push_back(Piece{p->image(), p->map.inverse()});
      continue;
    }
    const Germ& g = std::get<Germ>(s);
    Germ r{g.q, g.side, g.p, g.image_radius(), {}};
    for (const auto& piece : g.annulus) {
      r.annulus.push_back({piece.image(), piece.map.inverse()});
    }
    std::sort(r.annulus.begin(), r.annulus.end(),
              [](const Piece& a, const Piece& b) { return a.arc.lo < b.arc.lo; });
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) {
    return domain_of(a).lo < domain_of(b).lo;
  });
  return canonicalize(VAElement::unchecked(std::move(out)));
}

inline VAElement va_power(const VAElement& e, std::int64_t k,
                          std::size_t budget = kDefaultPieceBudget) {
  VAElement base = k < 0 ? va_invert(e) : e;
  VAElement r;
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) {
    r = va_compose(r, base, budget);
  }
  return r;
}

inline bool va_equal(const VAElement& f, const VAElement& g) {
  return canonicalize(f) == canonicalize(g);
}

inline SingSet va_singularities(const VAElement& e) {
  SingSet s;
  for (const auto& seg : e.segments()) {
    if (const Germ* g = as_germ(seg)) {
      s.insert(g->anchor());
    }
  }
  return s;
}

inline SingSet image_set(const VAElement& e, const SingSet& s) {
  SingSet out;
  for (const auto& x : s) {
    out.insert(va_eval(e, x));
  }
  return out;
}

inline std::int64_t va_max_abs_log2_slope(const VAElement& e) {
  std::int64_t m = 0;
  auto see = [&](const Piece& p) {
    std::int64_t a = p.map.log2_slope;
    m = std::max(m, a < 0 ? -a : a);
  };
  for (const auto& s : e.segments()) {
    if (const Piece* p = as_piece(s)) {
      see(*p);
    } else {
      for (const auto& p : std::get<Germ>(s).annulus) {
        see(p);
      }
    }
  }
  return m;
}

// Distinct log2 slopes used anywhere (finite: germs repeat their annulus).
inline std::set<std::int64_t> va_slopes(const VAElement& e) {
  std::set<std::int64_t> out;
  for (const auto& s : e.segments()) {
    if (const Piece* p = as_piece(s)) {
      out.insert(p->map.log2_slope);
    } else {
      for (const auto& p : std::get<Germ>(s).annulus) {
        out.insert(p.map.log2_slope);
      }
    }
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Text form
////////////////////////////////////////////////////////////////////////////

inline std::string to_string(const Germ& g) {
  return "germ(p=" + g.p.to_string() + ", side=" + side_char(g.side) +
         ", q=" + g.q.to_string() + ", eps=" + g.eps.to_string() + ", annulus=[ " +
         pieces_to_string(g.annulus) + " ])";
}

inline std::string to_string(const VAElement& e) {
  std::string s = "va{ ";
  for (std::size_t i = 0; i < e.segments().size(); ++i) {
    if (i > 0) {
      s += " ; ";
    }
    const auto& seg = e.segments()[i];
    s += as_piece(seg) ? as_piece(seg)->to_string() : to_string(std::get<Germ>(seg));
  }
  return s + " }";
}

inline std::string to_string(const SingSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    out += (first ? "" : ", ") + x.to_string();
    first = false;
  }
  return out + "}";
}

namespace detail {

inline Germ parse_germ(Scanner& s) {
  Germ g;
  s.expect("p");
  s.expect("=");
  g.p = s.dyadic();
  s.expect(",");
  s.expect("side");
  s.expect("=");
  if (s.consume("+")) {
    g.side = Side::Plus;
  } else if (s.consume("-")) {
    g.side = Side::Minus;
  } else {
    s.fail("expected side + or -");
  }
  s.expect(",");
  s.expect("q");
  s.expect("=");
  g.q = s.dyadic();
  s.expect(",");
  s.expect("eps");
  s.expect("=");
  g.eps = s.dyadic();
  s.expect(",");
  s.expect("annulus");
  s.expect("=");
  s.expect("[");
  do {
    g.annulus.push_back(parse_piece(s));
  } while (s.consume(";"));
  s.expect("]");
  s.expect(")");
  return g;
}

}  // namespace detail

inline VAElement parse_vaelement(Scanner& s) {
  std::size_t line = s.line();
  std::size_t col = s.column();
  s.expect("va{");
  std::vector<Segment> segs;
  if (!s.consume("}")) {
    do {
      if (s.consume("germ(")) {
        segs.push_back(detail::parse_germ(s));
      } else {
        segs.push_back(detail::parse_piece(s));
      }
    } while (s.consume(";"));
    s.expect("}");
  }
  try {
    return make_element(std::move(segs));
  } catch (const ValidationError& e) {
    throw ValidationError(std::to_string(line) + ":" + std::to_string(col) + ": " +
                          e.what());
  }
}

inline VAElement parse_vaelement(std::string_view text) {
  Scanner s(text);
  VAElement e = parse_vaelement(s);
  if (!s.at_end()) {
    s.fail("trailing input after va{...}");
  }
  return e;
}

}  // namespace vagroup
