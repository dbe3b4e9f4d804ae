#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vagroup/dynamics.hpp"
#include "vagroup/fixtures.hpp"

using namespace vagroup;

namespace {

CantorPoint pt(const char* s) { return parse_point(s); }

}  // namespace

TEST(Orbit, Trace) {
  auto fixed = orbit_trace(fixtures::beta(), pt("0+"));
  ASSERT_TRUE(fixed.periodic());
  EXPECT_EQ(fixed.cycle().preperiod, 0u);
  EXPECT_EQ(fixed.cycle().period, 1u);

  auto two = orbit_trace(fixtures::swap_halves(), pt("1/4+"));
  ASSERT_TRUE(two.periodic());
  EXPECT_EQ(two.cycle().period, 2u);
  EXPECT_EQ(two.trace[1], pt("3/4+"));

  for (std::size_t bound : {10u, 100u, 1000u}) {
    auto down = orbit_trace(fixtures::x0(), pt("1/2+"), bound, 4096);
    ASSERT_FALSE(down.periodic());
    EXPECT_EQ(std::get<Unresolved>(down.classification).trend, "decreasing");
  }
  // stops on coordinate size rather than step count
  auto big = orbit_trace(fixtures::x0(), pt("1/3"), 100000, 64);
  EXPECT_FALSE(big.periodic());
  EXPECT_LT(big.trace.size(), 100u);
}

TEST(Orbit, TraceMatchesIteration) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    VAElement f = vagroup::testing::random_element(rng, 1 + rng() % 4);
    CantorPoint x = vagroup::testing::random_point(rng);
    auto r = orbit_trace(f, x, 50, 4096);
    for (std::size_t j = 0; j + 1 < r.trace.size(); ++j) {
      EXPECT_EQ(r.trace[j + 1], vagroup::testing::oracle_eval(f, r.trace[j]));
    }
    if (r.periodic()) {
      const auto& c = r.cycle();
      EXPECT_EQ(r.trace[c.preperiod], r.trace[c.preperiod + c.period]);
    }
  }
}

TEST(SameOrbit, Cases) {
  VAElement b = fixtures::beta();
  EXPECT_EQ(std::get<SameOrbitYes>(same_orbit(b, pt("0+"), pt("0+"), 0)).shift, 0);
  EXPECT_TRUE(std::holds_alternative<SameOrbitNo>(same_orbit(b, pt("0+"), pt("1-"), 10)));
  VAElement x0 = fixtures::x0();
  EXPECT_TRUE(
      std::holds_alternative<SameOrbitUnknown>(same_orbit(x0, pt("1/2+"), pt("1/8+"), 0)));
  EXPECT_EQ(std::get<SameOrbitYes>(same_orbit(x0, pt("1/2+"), pt("1/8+"), 10)).shift, 2);
  EXPECT_EQ(std::get<SameOrbitYes>(same_orbit(x0, pt("1/8+"), pt("1/2+"), 10)).shift, -2);
  EXPECT_TRUE(std::holds_alternative<SameOrbitUnknown>(
      same_orbit(x0, pt("1/2+"), pt("1/2-"), 10)));
}

TEST(Partition, Fixtures) {
  EXPECT_TRUE(sing_orbit_partition(fixtures::x0()).classes.empty());

  auto b = sing_orbit_partition(fixtures::beta());
  ASSERT_EQ(b.classes.size(), 2u);
  EXPECT_TRUE(b.unresolved_pairs.empty());

  auto p = sing_orbit_partition(fixtures::planted());
  ASSERT_EQ(p.classes.size(), 2u);
  const OrbitClass& moving = p.classes[0];
  ASSERT_EQ(moving.members.size(), 2u);
  EXPECT_EQ(moving.members[0].first, pt("1/4+"));
  EXPECT_EQ(moving.members[1].first, pt("1/2+"));
  // f(1/2+) = 1/4+, so 1/2+ sits one step before 1/4+
  EXPECT_EQ(moving.members[1].second - moving.members[0].second, -1);
  EXPECT_EQ(va_eval(fixtures::planted(), pt("1/2+")), pt("1/4+"));

  auto cs = sing_orbit_partition(fixtures::conjugated_swap());
  ASSERT_EQ(cs.classes.size(), 2u);
  for (const auto& c : cs.classes) {
    EXPECT_EQ(c.period, std::optional<std::size_t>(2));
    EXPECT_EQ(c.members.size(), 2u);
  }
}

TEST(SingGrowth, Counts) {
  auto id = sing_growth(VAElement(), 5);
  EXPECT_EQ(id.counts, (std::vector<std::size_t>{0, 0, 0, 0, 0}));
  auto b = sing_growth(fixtures::beta(), 6);
  EXPECT_EQ(b.counts, (std::vector<std::size_t>{2, 2, 2, 2, 2, 2}));
  auto io = sing_growth(fixtures::infinite_orbit(), 8);
  EXPECT_EQ(io.counts, (std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(io.check, SingGrowth::Check::Verified) << io.detail;
}
