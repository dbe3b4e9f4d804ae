#include <gtest/gtest.h>

#include <random>

#include "vagroup/treepair.hpp"

using namespace vagroup;

namespace {

TreePair swap_pair() { return parse_treepair("tp{(,); (,); 2 1}"); }

// Adds a caret under source leaf i and under its partner.
TreePair expand(const TreePair& t, std::size_t i) {
  std::size_t j = t.perm[i];
  TreePair r;
  for (std::size_t a = 0; a < t.source.size(); ++a) {
    if (a == i) {
      r.source.push_back(t.source[a] + "0");
      r.source.push_back(t.source[a] + "1");
    } else {
      r.source.push_back(t.source[a]);
    }
  }
  for (std::size_t b = 0; b < t.target.size(); ++b) {
    if (b == j) {
      r.target.push_back(t.target[b] + "0");
      r.target.push_back(t.target[b] + "1");
    } else {
      r.target.push_back(t.target[b]);
    }
  }
  auto shift = [&](std::size_t b) { return b > j ? b + 1 : b; };
  for (std::size_t a = 0; a < t.source.size(); ++a) {
    if (a == i) {
      r.perm.push_back(j);
      r.perm.push_back(j + 1);
    } else {
      r.perm.push_back(shift(t.perm[a]));
    }
  }
  return r;
}

}  // namespace

TEST(TreePair, Identity) {
  EXPECT_TRUE(tp_to_plmap(tp_identity()).is_identity());
  EXPECT_EQ(tp_from_plmap(PLMap()), tp_identity());
}

TEST(TreePair, X0Diagram) {
  TreePair t = tp_from_plmap(generators::x0());
  EXPECT_EQ(t.source, (std::vector<Address>{"0", "10", "11"}));
  EXPECT_EQ(t.target, (std::vector<Address>{"00", "01", "1"}));
  EXPECT_EQ(t.perm, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(address_arc("10"), (Arc{Dyadic::frac(1, 1), Dyadic::frac(3, 2)}));
}

TEST(TreePair, RoundTrip) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_plmap(rng(), 5);
    TreePair t = tp_from_plmap(f);
    EXPECT_EQ(check_treepair(t), "");
    EXPECT_EQ(tp_to_plmap(t), f);
    EXPECT_EQ(tp_reduce(t), t);
    EXPECT_EQ(parse_treepair(to_string(t)), t);
  }
}

TEST(TreePair, ReductionIsConfluent) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    TreePair a = tp_from_plmap(random_plmap(rng(), 3));
    TreePair big = a;
    for (int k = 0; k < 6; ++k) {
      big = expand(big, rng() % big.size());
    }
    ASSERT_EQ(check_treepair(big), "");
    EXPECT_EQ(tp_to_plmap(big), tp_to_plmap(a));
    EXPECT_EQ(tp_reduce(big), a);
    EXPECT_EQ(tp_reduce_random(big, rng), a);
  }
}

TEST(TreePair, MultiplyCommutesWithMaps) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_plmap(rng(), 4);
    PLMap g = random_plmap(rng(), 4);
    TreePair a = tp_from_plmap(f);
    TreePair b = tp_from_plmap(g);
    EXPECT_EQ(tp_to_plmap(tp_multiply(a, b)), pl_compose(f, g));
    EXPECT_TRUE(tp_multiply(a, tp_invert(a)).is_trivial());
  }
}

TEST(TreePair, Higman) {
  TreePair x0 = tp_from_plmap(generators::x0());
  auto w = tp_higman_contraction(x0, 8);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->n, 1u);
  EXPECT_EQ(w->source_leaf, "0");
  EXPECT_EQ(w->target_leaf, "00");
  EXPECT_TRUE(verify_witness(x0, *w));
  EXPECT_FALSE(tp_higman_contraction(swap_pair(), 64).has_value());
  EXPECT_FALSE(tp_higman_contraction(tp_identity(), 64).has_value());
}

TEST(TreePair, Order) {
  auto order = [](const TreePair& t) { return tp_order(t, 64); };
  EXPECT_EQ(std::get<FiniteOrder>(order(tp_identity())).n, 1u);
  EXPECT_EQ(std::get<FiniteOrder>(order(swap_pair())).n, 2u);
  EXPECT_EQ(std::get<FiniteOrder>(order(tp_from_plmap(generators::c()))).n, 3u);
  EXPECT_EQ(std::get<InfiniteCertified>(order(tp_from_plmap(generators::x0()))).witness.n,
            1u);
  EXPECT_TRUE(std::holds_alternative<OrderUnknown>(
      tp_order(tp_from_plmap(pl_power(generators::c(), 1)), 2)));
}

TEST(TreePair, ParseErrors) {
  EXPECT_THROW(parse_treepair("tp{(,); (,); 1 1}"), DomainError);
  EXPECT_THROW(parse_treepair("tp{(,); (,(,)); 1 2}"), DomainError);
  EXPECT_THROW(parse_treepair("tp{(,; (,); 1 2}"), ParseError);
}
