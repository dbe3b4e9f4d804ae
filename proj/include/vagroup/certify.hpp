#pragma once

// Infinite-order certificates and word-length lower bounds.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vagroup/bounds.hpp"
#include "vagroup/dynamics.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/treepair.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup {

// g moves every point of a punctured neighbourhood of the fixed singularity
// away from it (expanding) or towards it; lambda > 1 bounds the rate.
struct SecantRate {
  Rat lambda;
  CantorPoint anchor;
  bool expanding;
  Dyadic attained_at;  // breakpoint with the extremal secant
};

// A piece with slope 2^log2_slope != 1 through a fixed point.
struct FixedSegmentSlope {
  std::int64_t log2_slope;
  Rat fixed_point;
  Arc segment;
};

using GrowthWitness = std::variant<SecantRate, FixedSegmentSlope>;

inline GrowthWitness fixed_singularity_rate(const VAElement& g, const CantorPoint& s) {
  const Germ* germ = nullptr;
  for (const auto& seg : g.segments()) {
    if (const Germ* x = as_germ(seg); x != nullptr && x->anchor() == s) {
      germ = x;
    }
  }
  if (germ == nullptr) {
    throw DomainError(s.to_string() + " is not a singularity");
  }
  if (germ->p != germ->q) {
    throw DomainError("singularity " + s.to_string() + " is not fixed");
  }
  const Dyadic& p = germ->p;
  // From the outer end of the annulus towards the singularity.
  std::vector<Piece> pieces = germ->annulus;
  if (germ->plus()) {
    std::reverse(pieces.begin(), pieces.end());
  }
  for (const auto& piece : pieces) {
    if (piece.map.log2_slope == 0) {
      continue;
    }
    auto x = piece.map.fixed_point();
    if (Rat(piece.arc.lo) <= *x && *x <= Rat(piece.arc.hi)) {
      return FixedSegmentSlope{piece.map.log2_slope, *x, piece.arc};
    }
  }
  // No fixed point: compare secants to (p, p) at the breakpoints.
  std::vector<std::pair<Dyadic, Rat>> secants;
  for (const auto& piece : germ->annulus) {
    for (const Dyadic& x : {piece.arc.lo, piece.arc.hi}) {
      secants.emplace_back(x, Rat(piece.map(x) - p) / Rat(x - p));
    }
  }
  bool expanding = secants.front().second > Rat(1);
  auto best = secants.front();
  for (const auto& sc : secants) {
    if ((sc.second > Rat(1)) != expanding || sc.second == Rat(1)) {
      throw DomainError("germ at " + s.to_string() + " crosses the diagonal");
    }
    if (expanding ? sc.second < best.second : sc.second > best.second) {
      best = sc;
    }
  }
  Rat lambda = expanding ? best.second : Rat(1) / best.second;
  return SecantRate{lambda, s, expanding, best.first};
}

struct GenStats {
  std::int64_t max_log2_slope = 0;
  std::size_t max_sing = 0;
};

struct LengthLowerBound {
  Rat sing_bound;
  Rat slope_bound;
  Rat value;
};

inline LengthLowerBound word_length_lower_bound(const VAElement& f, const GenStats& s) {
  LengthLowerBound b;
  if (s.max_sing > 0) {
    b.sing_bound = Rat(static_cast<long>(va_singularities(f).size())) /
                   Rat(static_cast<long>(s.max_sing));
  }
  if (s.max_log2_slope > 0) {
    b.slope_bound = Rat(static_cast<long>(va_max_abs_log2_slope(f))) /
                    Rat(static_cast<long>(s.max_log2_slope));
  }
  b.value = std::max(b.sing_bound, b.slope_bound);
  return b;
}

struct HigmanLeaf {
  HigmanWitness witness;
};

struct SingularGrowth {
  CantorPoint s0;
  std::size_t horizon;  // Sing(f^k) contains f^{-j}(s0), j < k, for k <= horizon
};

struct FixedSingularSlope {
  std::size_t period;   // the witness is for f^period
  CantorPoint point;
  GrowthWitness witness;
};

struct NoCertificate {
  std::string reason;
};

using OrderCertificate =
    std::variant<HigmanLeaf, SingularGrowth, FixedSingularSlope, NoCertificate>;

inline bool certified(const OrderCertificate& c) {
  return !std::holds_alternative<NoCertificate>(c);
}

namespace detail {

inline bool backward_orbit_singular(const VAElement& f, const VAElement& inv,
                                    const CantorPoint& s0, std::size_t horizon,
                                    std::size_t budget) {
  VAElement power;
  std::vector<CantorPoint> back{s0};
  for (std::size_t k = 1; k <= horizon; ++k) {
    power = va_compose(power, f, budget);
    SingSet sing = va_singularities(power);
    for (const auto& x : back) {
      if (sing.count(x) == 0) {
        return false;
      }
    }
    back.push_back(va_eval(inv, back.back()));
  }
  return true;
}

}  // namespace detail

// Tries, in order: tree-pair contraction for singularity-free elements; a
// lone singularity on an unresolved orbit whose backward orbit stays singular
// in the powers; a periodic singular orbit of length m, by the growth witness
// of f^m at it.
inline OrderCertificate infinite_order_certificate(const VAElement& f,
                                                   const Bounds& b = {}) {
  if (va_singularities(f).empty()) {
    TreePair t = tp_from_plmap(*to_plmap(f));
    if (auto w = tp_higman_contraction(t, b.n_max)) {
      return HigmanLeaf{*w};
    }
    return NoCertificate{"no contracting leaf in powers up to " +
                         std::to_string(b.n_max)};
  }
  OrbitPartition part = sing_orbit_partition(f, b);
  VAElement inv = va_invert(f);
  for (const auto& c : part.classes) {
    if (c.period || c.members.size() != 1) {
      continue;
    }
    const CantorPoint& s0 = c.members.front().first;
    if (detail::backward_orbit_singular(f, inv, s0, b.growth_horizon, b.piece_budget)) {
      return SingularGrowth{s0, b.growth_horizon};
    }
  }
  for (const auto& c : part.classes) {
    if (!c.period) {
      continue;
    }
    VAElement fm = va_power(f, static_cast<std::int64_t>(*c.period), b.piece_budget);
    SingSet sing = va_singularities(fm);
    for (const auto& [pt, shift] : c.members) {
      if (sing.count(pt) > 0) {
        return FixedSingularSlope{*c.period, pt, fixed_singularity_rate(fm, pt)};
      }
    }
  }
  return NoCertificate{"no certificate within the configured bounds"};
}

inline std::string describe(const GrowthWitness& w) {
  if (const auto* s = std::get_if<SecantRate>(&w)) {
    return std::string("secant-rate lambda=") + s->lambda.to_string() +
           (s->expanding ? " expanding" : " contracting") + " at " +
           s->attained_at.to_string();
  }
  const auto& f = std::get<FixedSegmentSlope>(w);
  return "fixed-segment log2_slope=" + std::to_string(f.log2_slope) +
         " fixed_point=" + f.fixed_point.to_string() + " on " + f.segment.to_string();
}

inline std::string describe(const OrderCertificate& c) {
  if (const auto* h = std::get_if<HigmanLeaf>(&c)) {
    return "higman-leaf n=" + std::to_string(h->witness.n) + " source=" +
           (h->witness.source_leaf.empty() ? "root" : h->witness.source_leaf) +
           " target=" + h->witness.target_leaf;
  }
  if (const auto* g = std::get_if<SingularGrowth>(&c)) {
    return "singular-growth s0=" + g->s0.to_string() +
           " horizon=" + std::to_string(g->horizon);
  }
  if (const auto* f = std::get_if<FixedSingularSlope>(&c)) {
    return "fixed-singular-slope period=" + std::to_string(f->period) +
           " point=" + f->point.to_string() + " " + describe(f->witness);
  }
  return "none (" + std::get<NoCertificate>(c).reason + ")";
}

////////////////////////////////////////////////////////////////////////////
// Distortion table
////////////////////////////////////////////////////////////////////////////

struct DistortionRow {
  std::size_t k;
  Rat sing_bound;
  Rat slope_bound;
  Rat lower_bound;
  Rat ratio;      // lower_bound / k
  Rat certified;  // what the certificate alone guarantees for f^k
};

struct DistortionTable {
  OrderCertificate certificate;
  Rat constant;        // ratio >= constant whenever period divides k
  std::size_t period;  // period of the certificate
  std::vector<DistortionRow> rows;
};

namespace detail {

// Smallest M with 2^M >= x (x >= 1).
inline std::int64_t ceil_log2(const Rat& x) {
  std::int64_t m = 0;
  Rat p(1);
  while (p < x) {
    p = p * Rat(2);
    ++m;
  }
  return m;
}

}  // namespace detail

// Rows k = 1..K of the lower bounds for f^k, next to what the certificate
// alone guarantees. For k = period*j + r the guarantee for f^{period*j} is
// lowered by r times the largest |log2 slope| of f (slopes are subadditive).
inline DistortionTable distortion_table(const VAElement& f, std::size_t k_max,
                                        const GenStats& stats, const Bounds& b = {}) {
  if (k_max == 0) {
    throw DomainError("K must be positive");
  }
  Bounds wide = b;
  wide.growth_horizon = std::max(b.growth_horizon, k_max);
  OrderCertificate cert = infinite_order_certificate(f, wide);
  if (!certified(cert)) {
    throw DomainError("no infinite-order certificate: " + describe(cert));
  }
  Rat g_slope(static_cast<long>(std::max<std::int64_t>(stats.max_log2_slope, 1)));
  Rat g_sing(static_cast<long>(std::max<std::size_t>(stats.max_sing, 1)));
  Rat step_loss(static_cast<long>(va_max_abs_log2_slope(f)));

  std::size_t period = 1;
  Rat constant;
  std::function<Rat(std::size_t)> per_period;  // log2-slope growth of f^{period*j}
  if (const auto* h = std::get_if<HigmanLeaf>(&cert)) {
    period = h->witness.n;
    Rat depth(static_cast<long>(h->witness.target_leaf.size() -
                                h->witness.source_leaf.size()));
    per_period = [=](std::size_t j) { return Rat(static_cast<long>(j)) * depth; };
    constant = depth / (g_slope * Rat(static_cast<long>(period)));
  } else if (std::holds_alternative<SingularGrowth>(cert)) {
    constant = Rat(1) / g_sing;
  } else {
    const auto& fs = std::get<FixedSingularSlope>(cert);
    period = fs.period;
    if (const auto* seg = std::get_if<FixedSegmentSlope>(&fs.witness)) {
      Rat e(seg->log2_slope < 0 ? -seg->log2_slope : seg->log2_slope);
      per_period = [=](std::size_t j) { return Rat(static_cast<long>(j)) * e; };
      constant = e / (g_slope * Rat(static_cast<long>(period)));
    } else {
      Rat lambda = std::get<SecantRate>(fs.witness).lambda;
      // log2(lambda) >= 1/c once lambda^c >= 2
      long c = 1;
      while (lambda.pow(static_cast<unsigned long>(c)) < Rat(2)) {
        ++c;
      }
      per_period = [=](std::size_t j) {
        return Rat(detail::ceil_log2(lambda.pow(static_cast<unsigned long>(j))));
      };
      constant = Rat(1) / (g_slope * Rat(c) * Rat(static_cast<long>(period)));
    }
  }
  auto guaranteed = [&](std::size_t k) {
    if (!per_period) {
      return Rat(static_cast<long>(k)) / g_sing;
    }
    Rat v = per_period(k / period) - Rat(static_cast<long>(k % period)) * step_loss;
    return v.sign() > 0 ? v / g_slope : Rat(0);
  };

  DistortionTable t{cert, constant, period, {}};
  VAElement power;
  for (std::size_t k = 1; k <= k_max; ++k) {
    power = va_compose(power, f, b.piece_budget);
    LengthLowerBound lb = word_length_lower_bound(power, stats);
    t.rows.push_back({k, lb.sing_bound, lb.slope_bound, lb.value,
                      lb.value / Rat(static_cast<long>(k)), guaranteed(k)});
  }
  return t;
}

}  // namespace vagroup
