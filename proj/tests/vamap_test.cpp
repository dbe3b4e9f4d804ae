#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vagroup/fixtures.hpp"
#include "vagroup/vamap.hpp"

using namespace vagroup;
using vagroup::testing::oracle_eval;
using vagroup::testing::random_element;
using vagroup::testing::random_point;

namespace {

CantorPoint pt(const char* s) { return parse_point(s); }
Dyadic q(long n, std::int64_t k) { return Dyadic::frac(n, k); }
SingSet sing_of(std::initializer_list<const char*> pts) {
  SingSet s;
  for (const char* p : pts) {
    s.insert(parse_point(p));
  }
  return s;
}

}  // namespace

TEST(VAElement, Validate) {
  EXPECT_TRUE(va_validate(VAElement()).valid);
  VAElement b = fixtures::beta();
  EXPECT_TRUE(va_validate(b).valid) << va_validate(b).violation;
  EXPECT_EQ(va_singularities(b), sing_of({"0+", "1-"}));
  for (const auto& [name, make] : fixtures::registry()) {
    EXPECT_TRUE(va_validate(make()).valid) << name;
  }
}

TEST(VAElement, RejectsBrokenGerms) {
  Germ g = fixtures::beta_germ(0, Side::Plus, q(1, 1));
  Germ shifted = g;
  shifted.annulus[1].map.offset += q(1, 8);
  EXPECT_THROW(make_element({shifted, fixtures::identity_on(q(1, 1), 1)}), ValidationError);
  Germ zero = g;
  zero.eps = 0;
  EXPECT_THROW(make_element({zero, fixtures::identity_on(q(1, 1), 1)}), ValidationError);
  // a germ that is just the identity is not a singularity: rejected as
  // input, flattened by canonicalization
  Germ trivial{0, Side::Plus, 0, q(1, 1), {fixtures::identity_on(q(1, 2), q(1, 1))}};
  std::vector<Segment> segs{trivial, fixtures::identity_on(q(1, 1), 1)};
  EXPECT_THROW(make_element(segs), ValidationError);
  EXPECT_TRUE(canonicalize(VAElement::unchecked(segs)).is_identity());
  // non-canonical input fails validation but canonicalizes
  VAElement peeled = va_peel(fixtures::beta(), pt("0+"), 2);
  EXPECT_TRUE(check_structure(peeled).empty());
  EXPECT_FALSE(va_validate(peeled).valid);
  EXPECT_EQ(canonicalize(peeled), fixtures::beta());
}

TEST(VAElement, EvalBeta) {
  VAElement b = fixtures::beta();
  EXPECT_EQ(va_eval(b, pt("0+")), pt("0+"));
  EXPECT_EQ(va_eval(b, pt("1-")), pt("1-"));
  EXPECT_EQ(va_eval(b, pt("3/8+")), pt("5/16+"));
  EXPECT_EQ(va_eval(b, pt("3/16+")), pt("5/32+"));
  EXPECT_EQ(va_eval(b, pt("3/1024-")), pt("5/2048-"));
}

TEST(VAElement, EvalAgreesWithOracle) {
  std::mt19937_64 rng(31);
  std::vector<VAElement> elems;
  for (const auto& [name, make] : fixtures::registry()) {
    elems.push_back(make());
  }
  for (int i = 0; i < 40; ++i) {
    elems.push_back(random_element(rng, 1 + rng() % 5));
  }
  for (const auto& e : elems) {
    for (int j = 0; j < 50; ++j) {
      CantorPoint x = random_point(rng);
      EXPECT_EQ(va_eval(e, x), oracle_eval(e, x)) << to_string(e) << " at " << x;
    }
  }
}

TEST(VAElement, ComposeMatchesPointwise) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    VAElement f = random_element(rng, 1 + rng() % 4);
    VAElement g = random_element(rng, 1 + rng() % 4);
    VAElement fg = va_compose(f, g);
    EXPECT_TRUE(va_validate(fg).valid) << va_validate(fg).violation;
    for (int j = 0; j < 30; ++j) {
      CantorPoint x = random_point(rng);
      EXPECT_EQ(va_eval(fg, x), oracle_eval(g, oracle_eval(f, x)));
    }
  }
}

TEST(VAElement, CancelsExactly) {
  VAElement b = fixtures::beta();
  VAElement bb = va_compose(b, va_invert(b));
  EXPECT_TRUE(bb.is_identity());
  EXPECT_TRUE(va_singularities(bb).empty());
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    VAElement f = random_element(rng, 1 + rng() % 5);
    VAElement g = random_element(rng, 1 + rng() % 5);
    EXPECT_EQ(va_invert(va_invert(f)), f);
    EXPECT_EQ(va_compose(va_compose(f, g), va_invert(g)), f);
    EXPECT_EQ(va_compose(f, VAElement()), f);
  }
}

TEST(VAElement, Singularities) {
  EXPECT_TRUE(va_singularities(VAElement()).empty());
  EXPECT_EQ(va_singularities(va_compose(fixtures::x0(), fixtures::beta())),
            sing_of({"0+", "1-"}));
  EXPECT_EQ(va_singularities(va_invert(fixtures::beta())), sing_of({"0+", "1-"}));
  std::mt19937_64 rng(34);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(va_singularities(to_va(random_plmap(rng(), 4))).empty());
  }
  // a germ moved by an affine map keeps its shape at the new anchor
  VAElement moved = va_compose(fixtures::beta_left(), fixtures::swap_halves());
  EXPECT_EQ(va_singularities(moved), sing_of({"0+"}));
  EXPECT_EQ(va_eval(moved, pt("0+")), pt("1/2+"));
  EXPECT_EQ(va_eval(moved, pt("3/16+")), pt("21/32+"));
}

TEST(VAElement, Powers) {
  VAElement b = fixtures::beta();
  EXPECT_TRUE(va_power(b, 0).is_identity());
  for (std::int64_t k = 1; k <= 12; ++k) {
    EXPECT_EQ(va_max_abs_log2_slope(va_power(b, k)), k);
  }
  EXPECT_EQ(va_power(b, -3), va_invert(va_power(b, 3)));
  EXPECT_THROW(va_power(fixtures::infinite_orbit(), 200, 500), ResourceLimit);
}

TEST(VAElement, CanonicalRadius) {
  // beta written with a smaller germ at 0+ and its first annulus spelled out
  Germ small = fixtures::beta_germ(0, Side::Plus, q(1, 2));
  std::vector<Segment> segs{small};
  for (const auto& p : fixtures::beta_germ(0, Side::Plus, q(1, 1)).annulus) {
    segs.push_back(p);
  }
  segs.push_back(fixtures::beta_germ(1, Side::Minus, q(1, 1)));
  EXPECT_EQ(make_element(segs), fixtures::beta());
  EXPECT_EQ(va_peel(fixtures::beta(), pt("1-"), 3), va_peel(fixtures::beta(), pt("1-"), 3));
  EXPECT_TRUE(va_equal(va_peel(fixtures::beta(), pt("1-"), 3), fixtures::beta()));
  EXPECT_FALSE(va_equal(fixtures::beta(), VAElement()));
}

TEST(VAElement, PlmapEmbedding) {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 30; ++i) {
    PLMap f = random_plmap(rng(), 4);
    auto back = to_plmap(to_va(f));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, f);
  }
  EXPECT_FALSE(to_plmap(fixtures::beta()).has_value());
}

TEST(VAElement, TextRoundTrip) {
  std::mt19937_64 rng(36);
  std::vector<VAElement> elems;
  for (const auto& [name, make] : fixtures::registry()) {
    elems.push_back(make());
  }
  for (int i = 0; i < 50; ++i) {
    elems.push_back(random_element(rng, 1 + rng() % 6));
  }
  for (const auto& e : elems) {
    std::string text = to_string(e);
    EXPECT_EQ(to_string(parse_vaelement(text)), text);
    EXPECT_EQ(parse_vaelement(text), e);
  }
}

TEST(VAElement, ParseErrors) {
  EXPECT_THROW(parse_vaelement("va{ [0,1) -> [0,1/2) }"), ValidationError);
  EXPECT_THROW(parse_vaelement("va{ [0,1) -> [0,1) "), ParseError);
  std::string text = to_string(fixtures::beta());
  text.replace(text.find("eps=1/2^1"), 9, "eps=-1/2^1");
  try {
    parse_vaelement(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("1:1: ", 0), 0u) << e.what();
    EXPECT_NE(std::string(e.what()).find("radius"), std::string::npos) << e.what();
  }
}
