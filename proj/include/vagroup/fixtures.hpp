#pragma once

// Named elements used by the tests, the CLI and the default generating set.

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "vagroup/exact_arith.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup::fixtures {

// The x0 pattern made periodic towards p^side, on a neighbourhood of radius
// eps, fixing p. On the + side the annulus [p+eps/2, p+eps) is cut at
// 3/4 and 7/8 of the radius with slopes 1/2, 1, 2.
inline Germ beta_germ(const Dyadic& p, Side side, const Dyadic& eps) {
  auto at = [&](long num) { return eps * Dyadic::frac(num, 3); };  // num/8 * eps
  Germ g{p, side, p, eps, {}};
  if (side == Side::Plus) {
    g.annulus = {Piece::between({p + at(4), p + at(6)}, {p + at(4), p + at(5)}),
                 Piece::between({p + at(6), p + at(7)}, {p + at(5), p + at(6)}),
                 Piece::between({p + at(7), p + at(8)}, {p + at(6), p + at(8)})};
  } else {
    g.annulus = {Piece::between({p - at(8), p - at(7)}, {p - at(8), p - at(6)}),
                 Piece::between({p - at(7), p - at(6)}, {p - at(6), p - at(5)}),
                 Piece::between({p - at(6), p - at(4)}, {p - at(5), p - at(4)})};
  }
  return g;
}

inline Piece identity_on(const Dyadic& lo, const Dyadic& hi) {
  return {{lo, hi}, AffineMap::identity()};
}

inline Dyadic d(long num, std::int64_t log2den) { return Dyadic::frac(num, log2den); }

// Singular at 0+ and 1-, both fixed.
inline VAElement beta() {
  return make_element({beta_germ(0, Side::Plus, d(1, 1)),
                       beta_germ(1, Side::Minus, d(1, 1))});
}

// Only the 1- half of beta; identity on [0,1/2).
inline VAElement beta_right() {
  return make_element({identity_on(0, d(1, 1)), beta_germ(1, Side::Minus, d(1, 1))});
}

// Only the 0+ half of beta; identity on [1/2,1].
inline VAElement beta_left() {
  return make_element({beta_germ(0, Side::Plus, d(1, 1)), identity_on(d(1, 1), 1)});
}

// The beta pattern at 1/2+ with radius 1/4, identity elsewhere.
inline VAElement half_bump() {
  return make_element({identity_on(0, d(1, 1)),
                       beta_germ(d(1, 1), Side::Plus, d(1, 2)),
                       identity_on(d(3, 2), 1)});
}

inline VAElement x0() { return to_va(generators::x0()); }
inline VAElement swap_halves() { return to_va(generators::swap_halves()); }

// One singularity, 1/2+, whose orbit is infinite in both directions
// (forward 1/4+, 1/8+, ...; backward 3/4+, 7/8+, ...).
inline VAElement infinite_orbit() { return va_compose(half_bump(), x0()); }

// Singularities 1/4+, 1/2+ and 1-; 1/2+ is sent to 1/4+, 1- is fixed.
inline VAElement planted() {
  VAElement bumps = make_element({identity_on(0, d(1, 2)),
                                  beta_germ(d(1, 2), Side::Plus, d(1, 3)),
                                  identity_on(d(3, 3), d(1, 1)),
                                  beta_germ(d(1, 1), Side::Plus, d(1, 2)),
                                  identity_on(d(3, 2), d(7, 3)),
                                  beta_germ(1, Side::Minus, d(1, 3))});
  return va_compose(bumps, x0());
}

// One singularity on an orbit of period 2 ({1/2+, 0+}).
inline VAElement periodic() { return va_compose(half_bump(), swap_halves()); }

// Conjugate of the order-2 swap by beta: beta^-1 . swap . beta.
inline VAElement conjugated_swap() {
  VAElement b = beta();
  return va_compose(va_compose(va_invert(b), swap_halves()), b);
}

// Singular at 0+ with g(x) > x near 0: annulus [1/8,1/4) with slopes
// 1, 2, 4; the smallest secant slope to (0,0) is 5/3, at 3/16.
inline VAElement secant_rate() {
  Germ g{0, Side::Plus, 0, d(1, 2),
         {Piece::between({d(1, 3), d(3, 4)}, {d(1, 2), d(5, 4)}),
          Piece::between({d(3, 4), d(7, 5)}, {d(5, 4), d(3, 3)}),
          Piece::between({d(7, 5), d(1, 2)}, {d(3, 3), d(1, 1)})}};
  return make_element({g, Piece::between({d(1, 2), d(3, 2)}, {d(1, 1), d(3, 2)}),
                       identity_on(d(3, 2), 1)});
}

inline const std::map<std::string, std::function<VAElement()>>& registry() {
  static const std::map<std::string, std::function<VAElement()>> r = {
      {"identity", [] { return VAElement(); }},
      {"x0", x0},
      {"x1", [] { return to_va(generators::x1()); }},
      {"c", [] { return to_va(generators::c()); }},
      {"pi0", [] { return to_va(generators::pi0()); }},
      {"pi1", [] { return to_va(generators::pi1()); }},
      {"swap", swap_halves},
      {"beta", beta},
      {"beta_right", beta_right},
      {"beta_left", beta_left},
      {"half_bump", half_bump},
      {"infinite_orbit", infinite_orbit},
      {"planted", planted},
      {"periodic", periodic},
      {"conjugated_swap", conjugated_swap},
      {"secant_rate", secant_rate},
  };
  return r;
}

inline std::optional<VAElement> by_name(const std::string& name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) {
    return std::nullopt;
  }
  return it->second();
}

}  // namespace vagroup::fixtures
