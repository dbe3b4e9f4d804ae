#pragma once

// Orbits of Cantor points, and how the singularities of an element sit on them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "vagroup/bounds.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/vamap.hpp"

namespace vagroup {

struct Periodic {
  std::size_t preperiod;
  std::size_t period;
};

struct Unresolved {
  std::size_t steps;
  std::string trend;  // "increasing", "decreasing" or "mixed"; never a verdict
};

struct OrbitResult {
  std::variant<Periodic, Unresolved> classification;
  std::vector<CantorPoint> trace;

  bool periodic() const { return std::holds_alternative<Periodic>(classification); }
  const Periodic& cycle() const { return std::get<Periodic>(classification); }
};

namespace detail {

inline std::string trend_of(const std::vector<CantorPoint>& trace) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    up = up && trace[i] < trace[i + 1];
    down = down && trace[i + 1] < trace[i];
  }
  if (trace.size() < 2) {
    return "mixed";
  }
  return up ? "increasing" : down ? "decreasing" : "mixed";
}

}  // namespace detail

// Iterates until an exact repeat, max_steps evaluations, or a coordinate
// longer than max_bits.
inline OrbitResult orbit_trace(const VAElement& e, const CantorPoint& x,
                               std::size_t max_steps, std::size_t max_bits) {
  OrbitResult r{Unresolved{0, "mixed"}, {x}};
  std::unordered_map<CantorPoint, std::size_t, CantorPointHash> seen{{x, 0}};
  for (std::size_t step = 1; step <= max_steps; ++step) {
    CantorPoint y = va_eval(e, r.trace.back());
    if (y.bits() > max_bits) {
      r.classification = Unresolved{step - 1, detail::trend_of(r.trace)};
      return r;
    }
    r.trace.push_back(y);
    if (auto it = seen.find(y); it != seen.end()) {
      r.classification = Periodic{it->second, step - it->second};
      return r;
    }
    seen.emplace(std::move(y), step);
  }
  r.classification = Unresolved{max_steps, detail::trend_of(r.trace)};
  return r;
}

inline OrbitResult orbit_trace(const VAElement& e, const CantorPoint& x,
                               const Bounds& b = {}) {
  return orbit_trace(e, x, b.max_steps, b.max_bits);
}

struct SameOrbitYes {
  std::int64_t shift;  // f^shift(s) = t
};
struct SameOrbitNo {};
struct SameOrbitUnknown {};
using SameOrbit = std::variant<SameOrbitYes, SameOrbitNo, SameOrbitUnknown>;

namespace detail {

inline std::optional<std::size_t> index_in(const OrbitResult& r, const CantorPoint& t) {
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i] == t) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// `inverse` must be va_invert(e); pass it to avoid recomputing.
inline SameOrbit same_orbit(const VAElement& e, const VAElement& inverse,
                            const CantorPoint& s, const CantorPoint& t,
                            std::size_t bound, std::size_t max_bits = 4096) {
  if (s == t) {
    return SameOrbitYes{0};
  }
  if (bound == 0) {
    return SameOrbitUnknown{};
  }
  OrbitResult fwd = orbit_trace(e, s, bound, max_bits);
  if (auto i = detail::index_in(fwd, t)) {
    return SameOrbitYes{static_cast<std::int64_t>(*i)};
  }
  OrbitResult bwd = orbit_trace(inverse, s, bound, max_bits);
  if (auto i = detail::index_in(bwd, t)) {
    return SameOrbitYes{-static_cast<std::int64_t>(*i)};
  }
  if (fwd.periodic() && orbit_trace(e, t, bound, max_bits).periodic()) {
    return SameOrbitNo{};
  }
  return SameOrbitUnknown{};
}

inline SameOrbit same_orbit(const VAElement& e, const CantorPoint& s,
                            const CantorPoint& t, std::size_t bound) {
  return same_orbit(e, va_invert(e), s, t, bound);
}

struct OrbitClass {
  // (singularity, shift) with f^shift(first member) = singularity; shifts of
  // periodic classes are reduced into [0, period).
  std::vector<std::pair<CantorPoint, std::int64_t>> members;
  std::optional<std::size_t> period;
};

struct OrbitPartition {
  std::vector<OrbitClass> classes;
  std::vector<std::pair<CantorPoint, CantorPoint>> unresolved_pairs;
};

inline OrbitPartition sing_orbit_partition(const VAElement& e, const Bounds& b = {}) {
  SingSet sing = va_singularities(e);
  std::vector<CantorPoint> pts(sing.begin(), sing.end());
  const std::size_t n = pts.size();
  OrbitPartition out;
  if (n == 0) {
    return out;
  }
  VAElement inv = va_invert(e);

  // Union-find with offsets: shift[i] = shift from parent to i.
  std::vector<std::size_t> parent(n);
  std::vector<std::int64_t> offset(n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    std::int64_t total = 0;
    std::size_t r = i;
    while (parent[r] != r) {
      total += offset[r];
      r = parent[r];
    }
    return std::pair{r, total};
  };
  std::vector<std::optional<std::size_t>> period(n);
  for (std::size_t i = 0; i < n; ++i) {
    OrbitResult fwd = orbit_trace(e, pts[i], b);
    OrbitResult bwd = orbit_trace(inv, pts[i], b);
    if (fwd.periodic()) {
      period[i] = fwd.cycle().period;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      std::optional<std::int64_t> d;
      if (auto k = detail::index_in(fwd, pts[j])) {
        d = static_cast<std::int64_t>(*k);
      } else if (auto k2 = detail::index_in(bwd, pts[j])) {
        d = -static_cast<std::int64_t>(*k2);
      }
      if (!d) {
        continue;
      }
      auto [ri, si] = find(i);
      auto [rj, sj] = find(j);
      if (ri != rj) {
        // f^si(root_i) = pts[i], f^d(pts[i]) = pts[j], f^sj(root_j) = pts[j]
        parent[rj] = ri;
        offset[rj] = si + *d - sj;
      }
    }
  }
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    auto [r, s] = find(i);
    auto [it, fresh] = class_of_root.emplace(r, out.classes.size());
    if (fresh) {
      out.classes.emplace_back();
    }
    OrbitClass& c = out.classes[it->second];
    c.members.emplace_back(pts[i], s);
    if (period[i]) {
      c.period = period[i];
    }
  }
  for (auto& c : out.classes) {
    std::int64_t base = c.members.front().second;
    for (auto& m : c.members) {
      m.second -= base;
      if (c.period) {
        auto p = static_cast<std::int64_t>(*c.period);
        m.second = ((m.second % p) + p) % p;
      }
    }
  }
  for (std::size_t a = 0; a < out.classes.size(); ++a) {
    for (std::size_t c = a + 1; c < out.classes.size(); ++c) {
      if (out.classes[a].period || out.classes[c].period) {
        continue;  // a complete cycle was searched and missed the other class
      }
      out.unresolved_pairs.emplace_back(out.classes[a].members.front().first,
                                        out.classes[c].members.front().first);
    }
  }
  return out;
}

struct SingGrowth {
  enum class Check { Verified, Failed, NotApplicable };
  std::vector<std::size_t> counts;  // |Sing(e^k)|, k = 1..K
  Check check = Check::NotApplicable;
  std::string detail;
};

// Sing(e^k) = {e^{-k+1}(s0), ..., s0} is checked as sets when e has one
// singularity s0 whose backward orbit is injective over the horizon.
inline SingGrowth sing_growth(const VAElement& e, std::size_t k_max,
                              std::size_t budget = kDefaultPieceBudget) {
  SingGrowth r;
  std::vector<SingSet> sets;
  VAElement power;
  for (std::size_t k = 1; k <= k_max; ++k) {
    power = va_compose(power, e, budget);
    sets.push_back(va_singularities(power));
    r.counts.push_back(sets.back().size());
  }
  SingSet s = va_singularities(e);
  if (s.size() != 1) {
    r.detail = "element has " + std::to_string(s.size()) + " singularities";
    return r;
  }
  VAElement inv = va_invert(e);
  std::vector<CantorPoint> back{*s.begin()};
  for (std::size_t j = 1; j < k_max; ++j) {
    back.push_back(va_eval(inv, back.back()));
  }
  SingSet distinct(back.begin(), back.end());
  if (distinct.size() != back.size()) {
    r.detail = "backward orbit of the singularity repeats within the horizon";
    return r;
  }
  r.check = SingGrowth::Check::Verified;
  for (std::size_t k = 1; k <= k_max; ++k) {
    SingSet expected(back.begin(), back.begin() + static_cast<std::ptrdiff_t>(k));
    if (expected != sets[k - 1]) {
      r.check = SingGrowth::Check::Failed;
      r.detail = "Sing(e^" + std::to_string(k) + ") = " + to_string(sets[k - 1]) +
                 ", expected " + to_string(expected);
      return r;
    }
  }
  r.detail = "Sing(e^k) = {e^-j(s0) : j < k} for k <= " + std::to_string(k_max);
  return r;
}

}  // namespace vagroup
