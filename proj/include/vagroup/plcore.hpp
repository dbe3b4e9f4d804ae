#pragma once

// Finite piecewise-linear bijections of the Cantor set with dyadic breakpoints
// and power-of-two slopes: Thompson's group V.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vagroup/errors.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/text.hpp"

namespace vagroup {

// The Cantor arc from lo+ to hi- (written [lo,hi); the arc ending at 1
// contains 1-).
struct Arc {
  Dyadic lo;
  Dyadic hi;

  Dyadic length() const { return hi - lo; }

  // -1 if x lies left of the arc, 0 inside, +1 right of it.
  int locate(const CantorPoint& x) const {
    if (x.is_sided()) {
      const Dyadic& v = x.dyadic();
      if (x.side() == Side::Plus) {
        if (v < lo) return -1;
        if (v >= hi) return 1;
        return 0;
      }
      if (v <= lo) return -1;
      if (v > hi) return 1;
      return 0;
    }
    const Rat& r = x.rational();
    if (r < Rat(lo)) return -1;
    if (r > Rat(hi)) return 1;
    return 0;
  }

  bool contains(const CantorPoint& x) const { return locate(x) == 0; }
  bool contains(const Arc& inner) const {
    return lo <= inner.lo && inner.hi <= hi;
  }

  std::string to_string() const {
    return "[" + lo.to_string() + "," + hi.to_string() + ")";
  }

  friend bool operator==(const Arc& a, const Arc& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

inline std::optional<Arc> intersect(const Arc& a, const Arc& b) {
  Arc r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo < r.hi) {
    return r;
  }
  return std::nullopt;
}

// x -> 2^log2_slope * x + offset.
struct AffineMap {
  std::int64_t log2_slope = 0;
  Dyadic offset;

  static AffineMap identity() { return {}; }

  // The increasing affine map sending src onto dst.
  static AffineMap between(const Arc& src, const Arc& dst) {
    Dyadic a = src.length();
    Dyadic b = dst.length();
    if (a.sign() <= 0 || b.sign() <= 0) {
      throw DomainError("empty arc in affine map " + src.to_string() + " -> " +
                        dst.to_string());
    }
    if (a.mantissa() != b.mantissa()) {
      throw DomainError("slope of " + src.to_string() + " -> " +
                        dst.to_string() + " is not a power of 2");
    }
    std::int64_t e = b.exponent() - a.exponent();
    return {e, dst.lo - src.lo.mul_pow2(e)};
  }

  Dyadic operator()(const Dyadic& x) const {
    return x.mul_pow2(log2_slope) + offset;
  }
  Rat operator()(const Rat& x) const {
    return x * Rat(Dyadic::pow2(log2_slope)) + Rat(offset);
  }
  CantorPoint operator()(const CantorPoint& x) const {
    if (x.is_sided()) {
      return CantorPoint::sided((*this)(x.dyadic()), x.side());
    }
    return CantorPoint::rational((*this)(x.rational()));
  }

  AffineMap inverse() const {
    return {-log2_slope, (-offset).mul_pow2(-log2_slope)};
  }

  // outer o this
  AffineMap then(const AffineMap& outer) const {
    return {log2_slope + outer.log2_slope,
            offset.mul_pow2(outer.log2_slope) + outer.offset};
  }

  bool is_identity() const { return log2_slope == 0 && offset.is_zero(); }

  // Unique fixed point when the slope is not 1.
  std::optional<Rat> fixed_point() const {
    if (log2_slope == 0) {
      return std::nullopt;
    }
    return Rat(offset) / (Rat(1) - Rat(Dyadic::pow2(log2_slope)));
  }

  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.log2_slope == b.log2_slope && a.offset == b.offset;
  }
};

inline Arc image_of(const Arc& a, const AffineMap& m) { return {m(a.lo), m(a.hi)}; }
inline Arc preimage_of(const Arc& a, const AffineMap& m) {
  return image_of(a, m.inverse());
}

struct Piece {
  Arc arc;
  AffineMap map;

  static Piece between(const Arc& src, const Arc& dst) {
    return {src, AffineMap::between(src, dst)};
  }

  Arc image() const { return image_of(arc, map); }

  std::string to_string() const {
    return arc.to_string() + " -> " + image().to_string();
  }

  friend bool operator==(const Piece& a, const Piece& b) {
    return a.arc == b.arc && a.map == b.map;
  }
};

namespace detail {

// Merge neighbours carrying the same affine map (contiguous arcs under one
// map have contiguous images).
inline std::vector<Piece> merge_pieces(std::vector<Piece> pieces) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (auto& p : pieces) {
    if (!out.empty() && out.back().map == p.map && out.back().arc.hi == p.arc.lo) {
      out.back().arc.hi = p.arc.hi;
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Empty string when the arcs tile [from, to) in order, else a description.
inline std::string check_tiling(const std::vector<Arc>& arcs, const Dyadic& from,
                                const Dyadic& to, const std::string& what) {
  if (arcs.empty()) {
    return what + " is empty";
  }
  if (arcs.front().lo != from) {
    return what + " starts at " + arcs.front().lo.to_string() + ", not " +
           from.to_string();
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (!(arcs[i].lo < arcs[i].hi)) {
      return what + " has empty arc " + arcs[i].to_string();
    }
    if (i + 1 < arcs.size() && arcs[i].hi != arcs[i + 1].lo) {
      return what + " has a gap or overlap at " + arcs[i].hi.to_string();
    }
  }
  if (arcs.back().hi != to) {
    return what + " ends at " + arcs.back().hi.to_string() + ", not " +
           to.to_string();
  }
  return {};
}

inline std::string check_image_tiling(std::vector<Arc> images, const Dyadic& from,
                                      const Dyadic& to, const std::string& what) {
  std::sort(images.begin(), images.end(),
            [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
  return check_tiling(images, from, to, what);
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////
// PLMap
////////////////////////////////////////////////////////////////////////////

class PLMap {
 public:
  PLMap() : pieces_{Piece{Arc{0, 1}, AffineMap::identity()}} {}

  // Validates (arcs and images both tile [0,1]) and merges to canonical form.
  explicit PLMap(std::vector<Piece> pieces) {
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.arc.lo < b.arc.lo; });
    std::vector<Arc> arcs;
    std::vector<Arc> images;
    for (const auto& p : pieces) {
      arcs.push_back(p.arc);
      images.push_back(p.image());
    }
    if (auto msg = detail::check_tiling(arcs, 0, 1, "domain"); !msg.empty()) {
      throw ValidationError(msg);
    }
    if (auto msg = detail::check_image_tiling(images, 0, 1, "image"); !msg.empty()) {
      throw ValidationError(msg);
    }
    pieces_ = detail::merge_pieces(std::move(pieces));
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  const Piece& piece_at(const CantorPoint& x) const {
    auto it = std::partition_point(
        pieces_.begin(), pieces_.end(),
        [&](const Piece& p) { return p.arc.locate(x) > 0; });
    return *it;
  }

  bool is_identity() const {
    return pieces_.size() == 1 && pieces_.front().map.is_identity();
  }

  friend bool operator==(const PLMap& a, const PLMap& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  std::vector<Piece> pieces_;
};

inline CantorPoint pl_eval(const PLMap& f, const CantorPoint& x) {
  return f.piece_at(x).map(x);
}

// f.g in the left-to-right convention: apply f, then g.
inline PLMap pl_compose(const PLMap& f, const PLMap& g) {
  std::vector<Piece> out;
  const auto& gp = g.pieces();
  for (const auto& p : f.pieces()) {
    Arc image = p.image();
    auto it = std::partition_point(gp.begin(), gp.end(), [&](const Piece& q) {
      return q.arc.hi <= image.lo;
    });
    for (; it != gp.end() && it->arc.lo < image.hi; ++it) {
      if (auto overlap = intersect(image, it->arc)) {
        out.push_back({preimage_of(*overlap, p.map), p.map.then(it->map)});
      }
    }
  }
  return PLMap(std::move(out));
}

inline PLMap pl_invert(const PLMap& f) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    out.push_back({p.image(), p.map.inverse()});
  }
  return PLMap(std::move(out));
}

inline bool pl_equal(const PLMap& f, const PLMap& g) { return f == g; }

inline PLMap pl_power(const PLMap& f, std::int64_t k) {
  PLMap base = k < 0 ? pl_invert(f) : f;
  PLMap r;
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) {
    r = pl_compose(r, base);
  }
  return r;
}

inline std::int64_t pl_max_abs_log2_slope(const PLMap& f) {
  std::int64_t m = 0;
  for (const auto& p : f.pieces()) {
    m = std::max(m, p.map.log2_slope < 0 ? -p.map.log2_slope : p.map.log2_slope);
  }
  return m;
}

struct FixedPoint {
  Rat point;
  std::int64_t log2_slope;
};

struct FixedPointReport {
  std::vector<FixedPoint> points;  // isolated fixed points, one per piece
  std::vector<Arc> fixed_arcs;     // pieces equal to the identity
};

// A piece with slope != 1 contributes its fixed point when it lies in the
// closed arc (the ends stand for lo+ and hi-, both in the piece).
inline FixedPointReport pl_fixed_points(const PLMap& f) {
  FixedPointReport r;
  for (const auto& p : f.pieces()) {
    if (p.map.is_identity()) {
      r.fixed_arcs.push_back(p.arc);
      continue;
    }
    if (auto x = p.map.fixed_point()) {
      if (Rat(p.arc.lo) <= *x && *x <= Rat(p.arc.hi)) {
        r.points.push_back({*x, p.map.log2_slope});
      }
    }
  }
  return r;
}

////////////////////////////////////////////////////////////////////////////
// Text form: pl{ [a,b) -> [c,d) ; ... }
////////////////////////////////////////////////////////////////////////////

inline std::string pieces_to_string(const std::vector<Piece>& pieces) {
  std::string s;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) {
      s += " ; ";
    }
    s += pieces[i].to_string();
  }
  return s;
}

inline std::string to_string(const PLMap& f) {
  return "pl{ " + pieces_to_string(f.pieces()) + " }";
}

namespace detail {

inline Arc parse_arc(Scanner& s) {
  s.expect("[");
  Dyadic lo = s.dyadic();
  s.expect(",");
  Dyadic hi = s.dyadic();
  if (!s.consume(")")) {
    s.expect("]");
  }
  return {lo, hi};
}

inline Piece parse_piece(Scanner& s) {
  std::size_t line = s.line();
  std::size_t col = s.column();
  Arc src = parse_arc(s);
  s.expect("->");
  Arc dst = parse_arc(s);
  try {
    return Piece::between(src, dst);
  } catch (const DomainError& e) {
    throw ParseError(line, col, e.what());
  }
}

}  // namespace detail

inline PLMap parse_plmap(Scanner& s) {
  s.expect("pl{");
  std::vector<Piece> pieces;
  if (!s.consume("}")) {
    do {
      pieces.push_back(detail::parse_piece(s));
    } while (s.consume(";"));
    s.expect("}");
  }
  return PLMap(std::move(pieces));
}

inline PLMap parse_plmap(std::string_view text) {
  Scanner s(text);
  PLMap f = parse_plmap(s);
  if (!s.at_end()) {
    s.fail("trailing input after pl{...}");
  }
  return f;
}

////////////////////////////////////////////////////////////////////////////
// Standard generators of V and seeded random products
////////////////////////////////////////////////////////////////////////////

namespace generators {

namespace detail {
inline Piece piece(Dyadic a, Dyadic b, Dyadic c, Dyadic d) {
  return Piece::between({a, b}, {c, d});
}
inline Dyadic q(long num, std::int64_t log2den) { return Dyadic::frac(num, log2den); }
}  // namespace detail

// [0,1/2)->[0,1/4), [1/2,3/4)->[1/4,1/2), [3/4,1]->[1/2,1]
inline PLMap x0() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(1, 1), 0, q(1, 2)),
                piece(q(1, 1), q(3, 2), q(1, 2), q(1, 1)),
                piece(q(3, 2), 1, q(1, 1), 1)});
}

// x0 acting on [1/2,1], identity on [0,1/2).
inline PLMap x1() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(1, 1), 0, q(1, 1)),
                piece(q(1, 1), q(3, 2), q(1, 1), q(5, 3)),
                piece(q(3, 2), q(7, 3), q(5, 3), q(3, 2)),
                piece(q(7, 3), 1, q(3, 2), 1)});
}

// The order-3 rotation of T.
inline PLMap c() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(1, 1), q(3, 2), 1),
                piece(q(1, 1), q(3, 2), 0, q(1, 1)),
                piece(q(3, 2), 1, q(1, 1), q(3, 2))});
}

// Swaps [1/2,3/4) and [3/4,1].
inline PLMap pi0() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(1, 1), 0, q(1, 1)),
                piece(q(1, 1), q(3, 2), q(3, 2), 1),
                piece(q(3, 2), 1, q(1, 1), q(3, 2))});
}

// Swaps [3/4,7/8) and [7/8,1].
inline PLMap pi1() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(3, 2), 0, q(3, 2)),
                piece(q(3, 2), q(7, 3), q(7, 3), 1),
                piece(q(7, 3), 1, q(3, 2), q(7, 3))});
}

// Swaps the two halves; order 2.
inline PLMap swap_halves() {
  using detail::piece, detail::q;
  return PLMap({piece(0, q(1, 1), q(1, 1), 1), piece(q(1, 1), 1, 0, q(1, 1))});
}

inline std::vector<PLMap> standard() { return {x0(), x1(), c(), pi0(), pi1()}; }

}  // namespace generators

// Product of `depth` generators and inverses drawn uniformly from a seeded
// mt19937_64 (index = draw mod count, so the stream is platform-independent).
inline PLMap random_plmap(std::uint64_t seed, std::size_t depth) {
  std::mt19937_64 rng(seed);
  std::vector<PLMap> gens;
  for (const auto& g : generators::standard()) {
    gens.push_back(g);
    gens.push_back(pl_invert(g));
  }
  PLMap r;
  for (std::size_t i = 0; i < depth; ++i) {
    r = pl_compose(r, gens[rng() % gens.size()]);
  }
  return r;
}

}  // namespace vagroup
