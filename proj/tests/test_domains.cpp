#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "frobgeom/domains.hpp"

using namespace frobgeom;

namespace {

// every a in T*D with gcd 1, by direct nested loops
std::set<IntVector> brute_points(const Domain& dom, Real T, i64 min_coord = 1) {
  std::set<IntVector> out;
  const int d = dom.dim();
  IntVector a(d, 1);
  const i64 top = static_cast<i64>(std::ceil(T));
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      std::vector<Real> x(d);
      for (int k = 0; k < d; ++k) x[k] = static_cast<Real>(a[k]) / T;
      if (gcd(a) == 1 && dom.contains(x)) out.insert(a);
      return;
    }
    for (i64 v = min_coord; v <= top; ++v) {
      a[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST(Domain, ContainsExamples) {
  const auto cube = Domain::unit_cube(3);
  const auto d0 = Domain::d0_wedge(3);
  EXPECT_TRUE(cube.contains(std::vector<Real>{0.5, 0.5, 0.5}));
  EXPECT_TRUE(d0.contains(std::vector<Real>{0.2, 0.3, 0.9}));
  EXPECT_FALSE(d0.contains(std::vector<Real>{0.9, 0.3, 0.5}));
  EXPECT_FALSE(cube.contains(std::vector<Real>{0.0, 0.5, 0.5}));
  EXPECT_FALSE(cube.contains(std::vector<Real>{1.0, 0.5, 0.5}));
  EXPECT_THROW(cube.contains(std::vector<Real>{0.5, 0.5}), Error);
}

TEST(Domain, Volumes) {
  EXPECT_EQ(Domain::unit_cube(4).volume(), 1);
  EXPECT_NEAR(static_cast<double>(Domain::d0_wedge(3).volume()), 1.0 / 3, 1e-15);
  EXPECT_NEAR(static_cast<double>(Domain::d0_wedge(5).volume()), 1.0 / 5, 1e-15);
}

TEST(Domain, MembershipImpliesUnitCube) {
  Stream rng(1, 0);
  for (const auto& dom : {Domain::unit_cube(3), Domain::d0_wedge(3), Domain::d0_wedge(4)})
    for (int k = 0; k < 2000; ++k) {
      std::vector<Real> x(dom.dim());
      for (auto& v : x) v = 1.4 * rng.uniform01() - 0.2;
      if (dom.contains(x))
        for (Real v : x) EXPECT_TRUE(v > 0 && v < 1);
    }
}

TEST(Domain, CustomHalfSpaces) {
  // the d0 wedge in d = 2 written as half-spaces: x2 - x1 > 0, 1 - x2 > 0, x1 > 0
  std::istringstream in("# wedge\n0 -1 1\n1 0 -1\n0 1 0\n");
  const auto dom = Domain::parse_halfspaces(in, 2, 0.5);
  EXPECT_TRUE(dom.contains(std::vector<Real>{0.2, 0.5}));
  EXPECT_FALSE(dom.contains(std::vector<Real>{0.6, 0.5}));
  EXPECT_EQ(dom.name(), "custom");
  std::istringstream bad("1 2\n");
  EXPECT_THROW(Domain::parse_halfspaces(bad, 2, 0.5), Error);
}

TEST(Enumerate, Examples) {
  const auto cube = Domain::unit_cube(3);
  const auto t2 = enumerate_primitive(cube, 2);
  ASSERT_EQ(t2.size(), 1u);
  EXPECT_EQ(t2[0].coords(), (IntVector{1, 1, 1}));
  EXPECT_EQ(enumerate_primitive(cube, 4).size(), 25u);
  const auto w = enumerate_primitive(Domain::d0_wedge(3), 4);
  std::vector<IntVector> got;
  for (const auto& p : w) got.push_back(p.coords());
  EXPECT_EQ(got, (std::vector<IntVector>{{1, 1, 2}, {1, 1, 3}, {1, 2, 3}, {2, 1, 3}, {2, 2, 3}}));
}

TEST(Enumerate, MatchesBruteForceAndIsLexicographic) {
  for (const auto& dom : {Domain::unit_cube(3), Domain::d0_wedge(3), Domain::d0_wedge(4), Domain::unit_cube(2)})
    for (Real T : {5.0L, 9.5L, 17.0L}) {
      const auto pts = enumerate_primitive(dom, T);
      std::set<IntVector> got;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        got.insert(pts[i].coords());
        if (i) EXPECT_LT(pts[i - 1], pts[i]);
      }
      EXPECT_EQ(got, brute_points(dom, T));
    }
}

TEST(Enumerate, MinCoordFilter) {
  const auto cube = Domain::unit_cube(3);
  const auto pts = enumerate_primitive(cube, 12, PointFilter{2});
  EXPECT_EQ(std::set<IntVector>(), [&] {
    std::set<IntVector> diff = brute_points(cube, 12, 2);
    for (const auto& p : pts) diff.erase(p.coords());
    return diff;
  }());
  for (const auto& p : pts) EXPECT_GE(p.min(), 2);
}

TEST(Enumerate, BoundaryPointsExcluded) {
  // a_i / T == 1 is on the boundary of the open cube
  for (const auto& p : enumerate_primitive(Domain::unit_cube(3), 6))
    for (i64 c : p.coords()) EXPECT_LT(c, 6);
}

TEST(Enumerate, BudgetRefusal) {
  try {
    enumerate_primitive(Domain::unit_cube(3), 1000, {}, 1000);
    FAIL() << "expected refusal";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 999u * 999u * 999u);
  }
}

TEST(Count, Examples) {
  const auto cube = Domain::unit_cube(3);
  const Real z3 = 1.2020569031595942854L;
  auto c = count_primitive(cube, 2);
  EXPECT_EQ(c.count, 1u);
  EXPECT_NEAR(static_cast<double>(c.asymptotic_ratio), static_cast<double>(z3 / 8), 1e-12);
  c = count_primitive(cube, 4);
  EXPECT_EQ(c.count, 25u);
  EXPECT_NEAR(static_cast<double>(c.asymptotic_ratio), static_cast<double>(25 * z3 / 64), 1e-12);
}

TEST(Count, DoublingImprovesRatio) {
  const auto cube = Domain::unit_cube(3);
  Real prev = 1e9;
  for (Real T : {25.0L, 50.0L, 100.0L}) {
    const Real err = std::fabs(count_primitive(cube, T).asymptotic_ratio - 1);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LE(prev, 0.03);
}

TEST(Zeta, KnownValues) {
  const Real pi = std::numbers::pi_v<Real>;
  EXPECT_NEAR(static_cast<double>(zeta(2)), static_cast<double>(pi * pi / 6), 1e-13);
  EXPECT_NEAR(static_cast<double>(zeta(4)), static_cast<double>(pi * pi * pi * pi / 90), 1e-13);
  EXPECT_NEAR(static_cast<double>(zeta(3)), 1.2020569031595942854, 1e-13);
  EXPECT_THROW(zeta(1), Error);
}

TEST(Sample, ContractAndDeterminism) {
  const auto cube = Domain::unit_cube(3);
  const auto s1 = sample_primitive(cube, 10, 5, 42);
  const auto s2 = sample_primitive(cube, 10, 5, 42);
  const auto s3 = sample_primitive(cube, 10, 5, 43);
  ASSERT_EQ(s1.size(), 5u);
  EXPECT_EQ(s1, s2);
  EXPECT_NE(s1, s3);
  for (const auto& p : s1) {
    EXPECT_EQ(gcd(p.coords()), 1);
    for (i64 c : p.coords()) EXPECT_TRUE(c >= 1 && c <= 9);
  }
}

TEST(Sample, IndependentOfThreadsAndPrefixStable) {
  const auto d0 = Domain::d0_wedge(3);
  const auto a = sample_primitive(d0, 300, 500, 7, {}, 1);
  const auto b = sample_primitive(d0, 300, 500, 7, {}, 8);
  EXPECT_EQ(a, b);
  // index i uses stream (seed, i): a shorter run is a prefix
  const auto c = sample_primitive(d0, 300, 100, 7);
  EXPECT_TRUE(std::equal(c.begin(), c.end(), a.begin()));
  for (const auto& p : a) {
    std::vector<Real> x;
    for (i64 v : p.coords()) x.push_back(static_cast<Real>(v) / 300);
    EXPECT_TRUE(d0.contains(x));
  }
}

TEST(Sample, DegenerateDomainRefused) {
  // a sliver of volume far below the acceptance floor
  std::istringstream in("0 1 0\n0 -1 1\n1e-7 0 -1\n");
  const auto dom = Domain::parse_halfspaces(in, 2, 5e-15);
  EXPECT_THROW(sample_primitive(dom, 10, 3, 0), Error);
  EXPECT_THROW(sample_primitive(Domain::unit_cube(3), 10, 0, 0), Error);
}

TEST(PrimitivePoint, Invariants) {
  EXPECT_THROW(PrimitivePoint(IntVector{2, 4}), Error);
  EXPECT_THROW(PrimitivePoint(IntVector{0, 1}), Error);
  const PrimitivePoint p(IntVector{5, 2, 5, 3});
  const auto perm = p.sorted_perm();
  EXPECT_EQ(perm, (std::vector<int>{1, 3, 0, 2}));
  IntVector s;
  for (int i : perm) s.push_back(p[i]);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(s, p.sorted());
}
