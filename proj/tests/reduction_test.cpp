#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vagroup/fixtures.hpp"
#include "vagroup/reduction.hpp"

using namespace vagroup;
using vagroup::testing::random_point;

namespace {

CantorPoint pt(const char* s) { return parse_point(s); }
Dyadic q(long n, std::int64_t k) { return Dyadic::frac(n, k); }

// Independent of dyadic_interpolate: the pieces tile src and dst in order.
void expect_interpolates(const std::vector<Piece>& pieces, const Arc& src, const Arc& dst) {
  ASSERT_FALSE(pieces.empty());
  EXPECT_EQ(pieces.front().arc.lo, src.lo);
  EXPECT_EQ(pieces.back().arc.hi, src.hi);
  EXPECT_EQ(pieces.front().image().lo, dst.lo);
  EXPECT_EQ(pieces.back().image().hi, dst.hi);
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    EXPECT_EQ(pieces[i].arc.hi, pieces[i + 1].arc.lo);
    EXPECT_EQ(pieces[i].image().hi, pieces[i + 1].image().lo);
  }
}

}  // namespace

TEST(Interpolate, Examples) {
  auto same = dyadic_interpolate({0, q(1, 1)}, {0, q(1, 1)});
  ASSERT_EQ(same.size(), 1u);
  EXPECT_TRUE(same[0].map.is_identity());

  auto up = dyadic_interpolate({0, q(1, 2)}, {q(1, 1), 1});
  ASSERT_EQ(up.size(), 1u);
  EXPECT_EQ(up[0].map, (AffineMap{1, q(1, 1)}));

  Arc src{0, q(3, 3)};
  Arc dst{0, q(1, 3)};
  auto odd = dyadic_interpolate(src, dst);
  EXPECT_GE(odd.size(), 2u);
  expect_interpolates(odd, src, dst);
  // 3/8 = 1/4 + 1/8 against 1/8 = 1/16 + 1/16
  EXPECT_EQ(odd[0].arc, (Arc{0, q(1, 2)}));
  EXPECT_EQ(odd[0].image(), (Arc{0, q(1, 4)}));
}

TEST(Interpolate, Random) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    Dyadic a = q(static_cast<long>(rng() % 200), 8);
    Dyadic la = q(1 + static_cast<long>(rng() % 50), 8);
    Dyadic b = q(static_cast<long>(rng() % 200), 8);
    Dyadic lb = q(1 + static_cast<long>(rng() % 50), 8);
    expect_interpolates(dyadic_interpolate({a, a + la}, {b, b + lb}), {a, a + la},
                        {b, b + lb});
  }
}

TEST(Detach, Planted) {
  VAElement f = fixtures::planted();
  std::vector<CantorPoint> labels{pt("1/2+"), pt("1/4+")};
  Detachment d = detach_singularity(f, labels, {pt("1-")});
  EXPECT_EQ(va_eval(d.a, pt("1/4+")), pt("1/4+"));
  EXPECT_EQ(va_singularities(d.conjugate).count(pt("1/4+")), 0u);
  EXPECT_EQ(va_singularities(d.conjugate).count(pt("1-")), 1u);
  EXPECT_TRUE(va_equal(va_compose(va_compose(va_invert(d.a), f), d.a), d.conjugate));
  std::mt19937_64 rng(52);
  int outside = 0;
  while (outside < 100) {
    CantorPoint x = random_point(rng);
    if (d.neighborhood.contains(x)) {
      continue;
    }
    ++outside;
    EXPECT_EQ(va_eval(d.a, x), x);
  }
  EXPECT_THROW(detach_singularity(f, {pt("1/4+"), pt("1/2+")}), DomainError);
}

TEST(Reduce, Fixtures) {
  auto beta = reduce_orbits(fixtures::beta());
  EXPECT_TRUE(beta.steps.empty());
  EXPECT_TRUE(beta.conjugator.is_identity());

  VAElement f = fixtures::planted();
  auto rep = reduce_orbits(f);
  EXPECT_EQ(va_singularities(rep.result).size(), 2u);
  EXPECT_EQ(va_singularities(rep.result).count(pt("1-")), 1u);
  EXPECT_TRUE(va_equal(conjugate_by(f, rep.conjugator), rep.result));
  for (const auto& c : sing_orbit_partition(rep.result).classes) {
    EXPECT_EQ(c.members.size(), 1u);
  }
}

TEST(Reduce, RandomConjugates) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 15; ++i) {
    VAElement v = to_va(random_plmap(rng(), 3));
    VAElement a = vagroup::testing::random_element(rng, 1 + rng() % 2);
    VAElement f = conjugate_by(v, a);
    auto rep = reduce_orbits(f);
    EXPECT_TRUE(va_equal(conjugate_by(f, rep.conjugator), rep.result));
    if (!rep.partial) {
      for (const auto& c : sing_orbit_partition(rep.result).classes) {
        EXPECT_EQ(c.members.size(), 1u);
      }
    }
  }
}

TEST(IntoV, Cases) {
  VAElement x0 = fixtures::x0();
  auto v = std::get<IntoV>(conjugate_into_v(x0));
  EXPECT_TRUE(v.conjugator.is_identity());
  EXPECT_EQ(v.v, x0);

  VAElement cs = fixtures::conjugated_swap();
  auto r = std::get<IntoV>(conjugate_into_v(cs));
  EXPECT_TRUE(va_singularities(r.v).empty());
  EXPECT_TRUE(va_equal(conjugate_by(cs, r.conjugator), r.v));
  auto order = tp_order(tp_from_plmap(*to_plmap(r.v)), 16);
  EXPECT_EQ(std::get<FiniteOrder>(order).n, 2u);

  auto nf = std::get<NotFiniteOrder>(conjugate_into_v(fixtures::beta()));
  EXPECT_TRUE(std::holds_alternative<FixedSingularSlope>(nf.certificate));
}
