#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vagroup/fixtures.hpp"
#include "vagroup/wordlen.hpp"

using namespace vagroup;

namespace {

const GenSet& gens() {
  static const GenSet s = default_genset();
  return s;
}

const Ball& ball3() {
  static const Ball b = bfs_ball(gens(), 3);
  return b;
}

}  // namespace

TEST(GenSet, Default) {
  const GenSet& s = gens();
  for (const auto& g : s.generators()) {
    EXPECT_FALSE(g.element.is_identity()) << g.name;
    EXPECT_TRUE(va_validate(g.element).valid) << g.name;
    EXPECT_LE(va_singularities(g.element).size(), 2u) << g.name;
    EXPECT_LE(va_max_abs_log2_slope(g.element), 2) << g.name;
  }
  EXPECT_EQ(s.stats().max_sing, 2u);
  EXPECT_EQ(s.stats().max_log2_slope, 1);
  // the tree-pair texts are the standard generators
  auto v = generators::standard();
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(s.generators()[i].element, to_va(v[i]));
  }
  // pi0 and pi1 are involutions, so only five inverses are adjoined
  EXPECT_EQ(s.size(), 12u);
  for (const auto& g : s.generators()) {
    bool has_inverse = false;
    for (const auto& h : s.generators()) {
      has_inverse = has_inverse || va_compose(g.element, h.element).is_identity();
    }
    EXPECT_TRUE(has_inverse) << g.name;
  }
}

TEST(Ball, SmallRadii) {
  Ball b0 = bfs_ball(gens(), 0);
  EXPECT_EQ(b0.length.size(), 1u);
  EXPECT_EQ(*exact_length(VAElement(), b0), 0u);
  Ball b1 = bfs_ball(gens(), 1);
  EXPECT_EQ(b1.length.size(), 1 + gens().size());
  for (const auto& g : gens().generators()) {
    EXPECT_EQ(*exact_length(g.element, b1), 1u);
  }
  std::size_t prev = 1;
  for (std::size_t r = 1; r <= 3; ++r) {
    Ball b = bfs_ball(gens(), r);
    EXPECT_LE(b.length.size(), static_cast<std::size_t>(std::pow(static_cast<double>(gens().size()), static_cast<double>(r))) + prev);
    EXPECT_GE(b.length.size(), prev);
    prev = b.length.size();
  }
}

TEST(Ball, OracleConsistency) {
  const Ball& b = ball3();
  for (std::size_t i = 0; i < b.elements.size(); ++i) {
    std::size_t len = b.element_length[i];
    for (const auto& g : gens().generators()) {
      if (auto l = exact_length(va_compose(b.elements[i], g.element), b)) {
        EXPECT_LE(*l, len + 1);
        EXPECT_LE(len, *l + 1);
      } else {
        EXPECT_EQ(len, 3u);
      }
    }
  }
}

TEST(Ball, PowersAreSubadditive) {
  const Ball& b = ball3();
  for (std::size_t i = 0; i < b.elements.size(); ++i) {
    VAElement p = b.elements[i];
    for (std::size_t m = 2; m <= 3; ++m) {
      p = va_compose(p, b.elements[i]);
      if (auto l = exact_length(p, b)) {
        EXPECT_LE(*l, m * b.element_length[i]);
      }
    }
  }
}

TEST(Ball, LowerBoundIsSound) {
  const Ball& b = ball3();
  for (std::size_t i = 0; i < b.elements.size(); ++i) {
    auto lb = word_length_lower_bound(b.elements[i], gens().stats());
    EXPECT_LE(lb.value, Rat(static_cast<long>(b.element_length[i])));
  }
}

TEST(Ball, NotInBall) {
  Ball b = bfs_ball(gens(), 2);
  VAElement x0 = fixtures::x0();
  EXPECT_FALSE(exact_length(va_power(x0, 3), b).has_value());
  EXPECT_EQ(*exact_length(va_power(x0, 2), b), 2u);
}

TEST(Ball, PersistenceRoundTrip) {
  Ball b = bfs_ball(gens(), 2);
  std::string text = ball_to_string(b);
  EXPECT_EQ(text.rfind("# vagroup ball v1\nradius 2\ngenerator x0\n", 0), 0u);
  EXPECT_EQ(text, ball_to_string(bfs_ball(gens(), 2)));
  std::istringstream in(text);
  Ball back = read_ball(in);
  EXPECT_EQ(back.length, b.length);
  EXPECT_EQ(back.radius, 2u);
  EXPECT_EQ(ball_to_string(back), text);
  std::istringstream bad("# vagroup ball v0\n");
  EXPECT_THROW(read_ball(bad), ParseError);
}

TEST(RandomWord, Deterministic) {
  EXPECT_EQ(random_word(gens(), 5, 6), random_word(gens(), 5, 6));
  EXPECT_TRUE(random_word(gens(), 5, 0).is_identity());
}
