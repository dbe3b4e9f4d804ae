#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vagroup/plcore.hpp"

using namespace vagroup;
using vagroup::testing::random_point;

namespace {

Dyadic q(long n, std::int64_t k) { return Dyadic::frac(n, k); }
CantorPoint pt(const char* s) { return parse_point(s); }

}  // namespace

TEST(PLMap, Eval) {
  PLMap x0 = generators::x0();
  EXPECT_EQ(pl_eval(PLMap(), pt("1/3")), pt("1/3"));
  EXPECT_EQ(pl_eval(x0, pt("1/2+")), pt("1/4+"));
  EXPECT_EQ(pl_eval(x0, pt("1/2-")), pt("1/4-"));
  EXPECT_EQ(pl_eval(x0, pt("1/3")), pt("1/6"));
  EXPECT_EQ(pl_eval(x0, pt("1-")), pt("1-"));
  EXPECT_EQ(pl_eval(x0, pt("0+")), pt("0+"));
}

TEST(PLMap, ComposeMatchesPointwise) {
  PLMap x0 = generators::x0();
  PLMap xx = pl_compose(x0, x0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 512; ++i) {
    CantorPoint x = random_point(rng);
    EXPECT_EQ(pl_eval(xx, x), pl_eval(x0, pl_eval(x0, x)));
  }
  for (int i = 0; i < 50; ++i) {
    PLMap f = random_plmap(rng(), 4);
    PLMap g = random_plmap(rng(), 4);
    PLMap fg = pl_compose(f, g);
    for (int j = 0; j < 20; ++j) {
      CantorPoint x = random_point(rng);
      EXPECT_EQ(pl_eval(fg, x), pl_eval(g, pl_eval(f, x)));
    }
    // log2 slopes add along the composite
    for (const auto& p : fg.pieces()) {
      CantorPoint mid = CantorPoint::sided(p.arc.lo, Side::Plus);
      EXPECT_EQ(p.map.log2_slope,
                f.piece_at(mid).map.log2_slope +
                    g.piece_at(pl_eval(f, mid)).map.log2_slope);
    }
  }
}

TEST(PLMap, Inverse) {
  PLMap inv = pl_invert(generators::x0());
  EXPECT_EQ(inv.pieces().front().arc, (Arc{0, q(1, 2)}));
  EXPECT_EQ(inv.pieces().front().image(), (Arc{0, q(1, 1)}));
  EXPECT_EQ(inv.pieces().front().map.log2_slope, 1);
  EXPECT_TRUE(pl_invert(PLMap()).is_identity());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_plmap(rng(), 5);
    EXPECT_EQ(pl_invert(pl_invert(f)), f);
    EXPECT_TRUE(pl_compose(f, pl_invert(f)).is_identity());
  }
}

TEST(PLMap, CanonicalMerge) {
  PLMap split({Piece::between({0, q(1, 2)}, {0, q(1, 3)}),
               Piece::between({q(1, 2), q(1, 1)}, {q(1, 3), q(1, 2)}),
               Piece::between({q(1, 1), q(3, 2)}, {q(1, 2), q(1, 1)}),
               Piece::between({q(3, 2), 1}, {q(1, 1), 1})});
  EXPECT_EQ(split, generators::x0());
  EXPECT_FALSE(generators::x0() == PLMap());
}

TEST(PLMap, Validation) {
  EXPECT_THROW(PLMap({Piece::between({0, q(1, 1)}, {0, q(1, 1)})}), ValidationError);
  EXPECT_THROW(PLMap({Piece::between({0, q(1, 1)}, {0, q(1, 1)}),
                      Piece::between({q(1, 1), 1}, {0, q(1, 1)})}),
               ValidationError);
  EXPECT_THROW(AffineMap::between({0, q(3, 3)}, {0, q(1, 1)}), DomainError);
}

TEST(PLMap, FixedPoints) {
  auto id = pl_fixed_points(PLMap());
  ASSERT_EQ(id.fixed_arcs.size(), 1u);
  EXPECT_EQ(id.fixed_arcs[0], (Arc{0, 1}));
  auto x0 = pl_fixed_points(generators::x0());
  ASSERT_EQ(x0.points.size(), 2u);
  EXPECT_EQ(x0.points[0].point, Rat(0));
  EXPECT_EQ(x0.points[0].log2_slope, -1);
  EXPECT_EQ(x0.points[1].point, Rat(1));
  EXPECT_EQ(x0.points[1].log2_slope, 1);
  AffineMap four{2, -1};  // x -> 4x - 1
  EXPECT_EQ(*four.fixed_point(), Rat(1, 3));
}

TEST(PLMap, EvalAtBreakpointsAgreesWhenEqual) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    PLMap f = random_plmap(rng(), 3);
    PLMap g = pl_compose(pl_compose(f, generators::c()), pl_invert(generators::c()));
    ASSERT_TRUE(pl_equal(f, g));
    for (const auto& p : f.pieces()) {
      CantorPoint x = CantorPoint::sided(p.arc.lo, Side::Plus);
      EXPECT_EQ(pl_eval(f, x), pl_eval(g, x));
    }
  }
}

TEST(PLMap, TextRoundTrip) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    PLMap f = random_plmap(rng(), 4);
    EXPECT_EQ(parse_plmap(to_string(f)), f);
    EXPECT_EQ(to_string(parse_plmap(to_string(f))), to_string(f));
  }
  EXPECT_EQ(parse_plmap("pl{ [0,1/2) -> [0,1/4) ; [1/2,3/4) -> [1/4,1/2) ; [3/4,1] -> [1/2,1] }"),
            generators::x0());
}
