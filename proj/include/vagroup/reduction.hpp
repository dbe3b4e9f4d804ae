#pragma once

// Conjugating singularities away: at most one singularity per orbit, and
// recognising conjugates of elements of V.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vagroup/bounds.hpp"
#include "vagroup/certify.hpp"
#include "vagroup/dynamics.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup {

// A finite piecewise map from src onto dst with power-of-2 slopes: both
// lengths are cut into their binary expansions, the shorter list is split
// (largest part first) until the counts agree, and parts are matched in order.
inline std::vector<Piece> dyadic_interpolate(const Arc& src, const Arc& dst) {
  auto expansion = [](const Dyadic& len) {
    std::vector<Dyadic> parts;
    const BigInt& m = len.mantissa();
    for (auto bit = static_cast<std::int64_t>(detail::bit_length(m)) - 1; bit >= 0;
         --bit) {
      if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
        parts.push_back(Dyadic::pow2(bit + len.exponent()));
      }
    }
    return parts;
  };
  if (!(src.lo < src.hi) || !(dst.lo < dst.hi)) {
    throw DomainError("cannot interpolate empty arcs");
  }
  std::vector<Dyadic> a = expansion(src.length());
  std::vector<Dyadic> b = expansion(dst.length());
  auto split_largest = [](std::vector<Dyadic>& v) {
    auto it = std::max_element(v.begin(), v.end());
    Dyadic half = it->mul_pow2(-1);
    *it = half;
    v.insert(it, half);
  };
  while (a.size() != b.size()) {
    split_largest(a.size() < b.size() ? a : b);
  }
  std::vector<Piece> out;
  Dyadic x = src.lo;
  Dyadic y = dst.lo;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(Piece::between({x, x + a[i]}, {y, y + b[i]}));
    x += a[i];
    y += b[i];
  }
  return detail::merge_pieces(std::move(out));
}

struct Detachment {
  VAElement a;          // identity off the neighbourhood, fixes the singularity
  VAElement conjugate;  // a^-1 . f . a
  VAElement f_prime;    // f with the singularity interpolated away
  Arc neighborhood;
};

// `labels` are consecutive orbit points s_0, ..., s_m (f(s_i) = s_{i+1});
// s_m is detached. Any extra points listed in `avoid` are kept outside the
// neighbourhood as well.
inline Detachment detach_singularity(const VAElement& f,
                                     const std::vector<CantorPoint>& labels,
                                     const std::vector<CantorPoint>& avoid = {},
                                     std::size_t budget = kDefaultPieceBudget) {
  if (labels.empty()) {
    throw DomainError("empty orbit labelling");
  }
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    if (!(va_eval(f, labels[i]) == labels[i + 1])) {
      throw DomainError("orbit labelling not verified: f(" + labels[i].to_string() +
                        ") != " + labels[i + 1].to_string());
    }
  }
  const CantorPoint& s = labels.back();
  const Germ* germ = nullptr;
  std::size_t at = 0;
  for (std::size_t i = 0; i < f.segments().size(); ++i) {
    const Germ* g = as_germ(f.segments()[i]);
    if (g != nullptr && g->anchor() == s) {
      germ = g;
      at = i;
    }
  }
  if (germ == nullptr) {
    throw DomainError(s.to_string() + " is not a singularity");
  }
  Dyadic r = germ->eps;
  auto inside = [&](const CantorPoint& x) {
    return !(x == s) && rebase(*germ, r).neighborhood().contains(x);
  };
  for (const auto* list : {&labels, &avoid}) {
    for (const auto& x : *list) {
      while (inside(x)) {
        r = r.mul_pow2(-1);
      }
    }
  }
  Germ small = rebase(*germ, r);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < f.segments().size(); ++i) {
    if (i != at) {
      segs.push_back(f.segments()[i]);
      continue;
    }
    auto outer = detail::annulus_between(*germ, r, germ->eps);
    auto flat = dyadic_interpolate(small.neighborhood(), small.image_neighborhood());
    if (small.plus()) {
      segs.insert(segs.end(), flat.begin(), flat.end());
      segs.insert(segs.end(), outer.begin(), outer.end());
    } else {
      segs.insert(segs.end(), outer.begin(), outer.end());
      segs.insert(segs.end(), flat.begin(), flat.end());
    }
  }
  VAElement f_prime = canonicalize(VAElement::unchecked(std::move(segs)), budget);
  VAElement a = va_compose(f, va_invert(f_prime), budget);
  VAElement g = va_compose(f_prime, a, budget);
  return {std::move(a), std::move(g), std::move(f_prime), small.neighborhood()};
}

enum class Fate { Gained, Retained, Lost, Absent };

inline const char* fate_name(Fate f) {
  switch (f) {
    case Fate::Gained:
      return "gained";
    case Fate::Retained:
      return "retained";
    case Fate::Lost:
      return "lost";
    case Fate::Absent:
      return "absent";
  }
  return "?";
}

struct ReductionStep {
  std::size_t orbit;        // class index in the partition at that step
  CantorPoint removed;      // s_m
  std::optional<CantorPoint> previous;  // s_{m-1}
  Fate fate = Fate::Absent;             // what happened to s_{m-1}
  std::size_t span_before = 0;          // m
  std::size_t span_after = 0;
};

struct ReductionReport {
  VAElement conjugator;  // c with c^-1 . f . c = result
  VAElement result;
  std::vector<ReductionStep> steps;
  bool partial = false;  // some singularity pairs have unknown orbit relation
  std::vector<std::pair<CantorPoint, CantorPoint>> unresolved_pairs;
};

namespace detail {

// Labelling s_0..s_m of one orbit class so that its singularities lie in it
// with s_0 and s_m singular. Periodic orbits are cut at their largest gap.
inline std::vector<CantorPoint> label_class(const VAElement& f, const OrbitClass& c) {
  std::vector<std::pair<std::int64_t, CantorPoint>> by_shift;
  for (const auto& [pt, sh] : c.members) {
    by_shift.emplace_back(sh, pt);
  }
  std::sort(by_shift.begin(), by_shift.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::size_t start = 0;
  std::int64_t span = by_shift.back().first - by_shift.front().first;
  if (c.period) {
    auto p = static_cast<std::int64_t>(*c.period);
    std::int64_t best_gap = -1;
    for (std::size_t i = 0; i < by_shift.size(); ++i) {
      std::size_t next = (i + 1) % by_shift.size();
      std::int64_t gap = (by_shift[next].first - by_shift[i].first + p) % p;
      if (gap == 0) {
        gap = p;
      }
      if (gap > best_gap) {
        best_gap = gap;
        start = next;
      }
    }
    span = p - best_gap;
  }
  std::vector<CantorPoint> labels{by_shift[start].second};
  for (std::int64_t i = 0; i < span; ++i) {
    labels.push_back(va_eval(f, labels.back()));
  }
  return labels;
}

inline std::vector<CantorPoint> cycle_points(const VAElement& f, const OrbitClass& c) {
  std::vector<CantorPoint> pts;
  if (!c.period) {
    return pts;
  }
  pts.push_back(c.members.front().first);
  for (std::size_t i = 1; i < *c.period; ++i) {
    pts.push_back(va_eval(f, pts.back()));
  }
  return pts;
}

inline std::size_t singular_span(const VAElement& f, const OrbitClass& c) {
  return label_class(f, c).size() - 1;
}

}  // namespace detail

inline ReductionReport reduce_orbits(const VAElement& f, const Bounds& b = {}) {
  ReductionReport rep{VAElement(), f, {}, false, {}};
  std::size_t cap = 4 * va_singularities(f).size() + 64;
  for (std::size_t iter = 0;; ++iter) {
    OrbitPartition part = sing_orbit_partition(rep.result, b);
    rep.unresolved_pairs = part.unresolved_pairs;
    rep.partial = !part.unresolved_pairs.empty();
    std::vector<std::size_t> order(part.classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return part.classes[x].members.size() > part.classes[y].members.size();
    });
    if (order.empty() || part.classes[order.front()].members.size() < 2) {
      break;
    }
    if (iter >= cap) {
      throw ResourceLimit("orbit reduction did not settle");
    }
    const OrbitClass& c = part.classes[order.front()];
    std::vector<CantorPoint> labels = detail::label_class(rep.result, c);
    std::vector<CantorPoint> avoid = detail::cycle_points(rep.result, c);

    SingSet before = va_singularities(rep.result);
    Detachment d = detach_singularity(rep.result, labels, avoid, b.piece_budget);
    SingSet after = va_singularities(d.conjugate);

    ReductionStep step{order.front(), labels.back(), std::nullopt, Fate::Absent,
                       labels.size() - 1, 0};
    if (labels.size() >= 2) {
      const CantorPoint& prev = labels[labels.size() - 2];
      step.previous = prev;
      bool was = before.count(prev) > 0;
      bool is = after.count(prev) > 0;
      step.fate = was ? (is ? Fate::Retained : Fate::Lost)
                      : (is ? Fate::Gained : Fate::Absent);
    }
    // span of singular positions left on the labelled stretch
    std::size_t last = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (after.count(labels[i]) > 0) {
        last = i;
      }
    }
    step.span_after = last;
    rep.steps.push_back(step);
    rep.conjugator = va_compose(rep.conjugator, d.a, b.piece_budget);
    rep.result = std::move(d.conjugate);
  }
  return rep;
}

// c^-1 . f . c
inline VAElement conjugate_by(const VAElement& f, const VAElement& c,
                              std::size_t budget = kDefaultPieceBudget) {
  return va_compose(va_compose(va_invert(c), f, budget), c, budget);
}

struct IntoV {
  VAElement conjugator;  // c^-1 . f . c = v
  VAElement v;           // no singularities
};
struct NotFiniteOrder {
  VAElement conjugator;  // the certificate is for c^-1 . f . c
  OrderCertificate certificate;
};
struct IntoVUnknown {
  std::string reason;
};
using IntoVResult = std::variant<IntoV, NotFiniteOrder, IntoVUnknown>;

// A finite-order element reduced to at most one singularity per orbit has
// none left, so either the reduction empties Sing or an infinite-order
// certificate is looked for on what remains.
inline IntoVResult conjugate_into_v(const VAElement& f, const Bounds& b = {}) {
  if (va_singularities(f).empty()) {
    return IntoV{VAElement(), f};
  }
  ReductionReport rep = reduce_orbits(f, b);
  if (va_singularities(rep.result).empty()) {
    return IntoV{rep.conjugator, rep.result};
  }
  OrderCertificate cert = infinite_order_certificate(rep.result, b);
  if (certified(cert)) {
    return NotFiniteOrder{rep.conjugator, cert};
  }
  return IntoVUnknown{describe(cert) +
                      (rep.partial ? "; orbit reduction was partial" : "")};
}

}  // namespace vagroup
