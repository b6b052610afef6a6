#include <gtest/gtest.h>

#include "frobgeom/covering.hpp"
#include "oracles.hpp"

using namespace frobgeom;

namespace {

std::pair<Real, Real> grid_bracket(const RealLatticeBasis& b, int steps) {
  const RealMatrix c = b.columns();
  const Real b1[2] = {c(0, 0), c(1, 0)}, b2[2] = {c(0, 1), c(1, 1)};
  return oracle::grid_covering_radius(b1, b2, steps);
}

const RealLatticeBasis kZ2(IntMatrix::identity(2));
const RealLatticeBasis kDiag = RealLatticeBasis::from_real(RealMatrix{{2, 0}, {0, 0.5}});

}  // namespace

TEST(Identity, Examples) {
  EXPECT_NEAR(static_cast<double>(covering_radius_via_frobenius(IntVector{1, 1, 1}).value), 2.0, 1e-15);
  const Real v235 = (oracle::brute_frobenius({2, 3, 5}) + 10) / std::sqrt(30.0L);
  EXPECT_NEAR(static_cast<double>(covering_radius_via_frobenius(IntVector{2, 3, 5}).value), static_cast<double>(v235), 1e-15);
  EXPECT_NEAR(static_cast<double>(v235), 2.00832, 1e-5);
  const Real v345 = (oracle::brute_frobenius({3, 4, 5}) + 12) / std::sqrt(60.0L);
  EXPECT_NEAR(static_cast<double>(covering_radius_via_frobenius(IntVector{3, 4, 5}).value), static_cast<double>(v345), 1e-15);
  EXPECT_NEAR(static_cast<double>(v345), 1.80739, 1e-5);
  const auto r = covering_radius_via_frobenius(IntVector{3, 4, 5});
  EXPECT_EQ(r.method, CoveringMethod::frobenius_identity);
  EXPECT_LE(r.lower, r.value);
  EXPECT_LE(r.value, r.upper + 1e-9L);
}

TEST(Planar, Examples) {
  auto r = covering_radius_planar(kZ2, 1e-6L);
  EXPECT_NEAR(static_cast<double>(r.value), 2.0, 1e-6);
  auto grid = grid_bracket(kZ2, 400);
  EXPECT_LE(grid.first, r.upper + 1e-12L);
  EXPECT_GE(grid.second, r.lower - 1e-12L);

  r = covering_radius_planar(kDiag, 1e-6L);
  EXPECT_NEAR(static_cast<double>(r.value), 2.5, 1e-6);
  grid = grid_bracket(kDiag, 400);
  EXPECT_LE(grid.first, r.upper + 1e-12L);
  EXPECT_GE(grid.second, r.lower - 1e-12L);

  r = covering_radius_planar(L_a_basis(IntVector{2, 3, 5}), 1e-6L);
  EXPECT_NEAR(static_cast<double>(r.value), static_cast<double>(covering_radius_via_frobenius(IntVector{2, 3, 5}).value), 1e-6);
  EXPECT_EQ(r.method, CoveringMethod::planar_exact);
}

TEST(Planar, BracketContract) {
  for (Real tol : {1e-3L, 1e-6L, 1e-9L}) {
    const auto r = covering_radius_planar(L_a_basis(IntVector{4, 9, 11}), tol);
    EXPECT_LE(r.lower, r.value);
    EXPECT_LE(r.value, r.upper);
    EXPECT_LE(r.upper - r.lower, 2 * tol);
  }
}

TEST(Planar, Refusals) {
  EXPECT_THROW(covering_radius_planar(RealLatticeBasis(IntMatrix::identity(3)), 1e-6L), Error);
  EXPECT_THROW(covering_radius_planar(kZ2, 0), Error);
  EXPECT_THROW(covering_radius_planar(kZ2, 1e-20L), Error);
  EXPECT_THROW(covering_radius_planar(RealLatticeBasis(IntMatrix{{1, 2}, {2, 4}}), 1e-6L), Error);
}

TEST(Planar, AgreesWithGridOracleOnRandomLattices) {
  Stream rng(31, 0);
  for (int trial = 0; trial < 12; ++trial) {
    IntMatrix N(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) N(i, j) = rng.uniform_int(-4, 4);
    } while (determinant(N) == 0);
    const RealLatticeBasis B(N);
    const auto r = covering_radius_planar(B, 1e-7L);
    const auto grid = grid_bracket(RealLatticeBasis(lll_reduce(N).basis), 300);
    EXPECT_LE(grid.first, r.upper + 1e-12L) << N;
    EXPECT_GE(grid.second, r.lower - 1e-12L) << N;
  }
}

TEST(Planar, CoveragePredicateMonotoneAtProbes) {
  const auto L = L_a_basis(IntVector{5, 8, 13});
  const auto r = covering_radius_planar(L, 1e-8L);
  detail::PlanarCoverage cover(lll_reduce(L.numer()).basis);
  const Real f = L.factor();
  // probes in integer units around the answer
  auto at = [&](Real t) {
    mpq_class q(static_cast<double>(t / f));
    return cover.covered(q);
  };
  EXPECT_FALSE(at(r.lower * (1 - 1e-6L)));
  EXPECT_TRUE(at(r.upper * (1 + 1e-6L)));
  bool seen_cover = false;
  for (int k = 0; k <= 40; ++k) {
    const bool c = at(r.value * (0.6L + 0.02L * k));
    if (seen_cover) EXPECT_TRUE(c);
    seen_cover = seen_cover || c;
  }
  EXPECT_TRUE(seen_cover);
}

TEST(Planar, ExactProbeOnTangentConfiguration) {
  // t = 2 on Z^2 is exactly the covering radius: the float area is within the
  // filter band and the exact pass decides
  detail::PlanarCoverage cover(IntMatrix::identity(2));
  EXPECT_TRUE(cover.covered(mpq_class(2)));
  EXPECT_FALSE(cover.covered(mpq_class(2) - mpq_class(1, 1 << 30)));
  EXPECT_GE(cover.exact_probes(), 1u);
}

TEST(Bounds, Examples) {
  auto b = covering_bounds(kZ2);
  EXPECT_EQ(b.lower, 1);
  EXPECT_EQ(b.upper, 2);
  b = covering_bounds(kDiag);
  EXPECT_NEAR(static_cast<double>(b.lower), 2, 1e-15);
  EXPECT_NEAR(static_cast<double>(b.upper), 2.5, 1e-15);
  b = covering_bounds(L_a_basis(IntVector{2, 3, 5}));
  const Real q = covering_radius_via_frobenius(IntVector{2, 3, 5}).value;
  EXPECT_LE(b.lower, q + 1e-9L);
  EXPECT_GE(b.upper, q - 1e-9L);
}

TEST(Bounds, SandwichAndLambdaRelation) {
  for (i64 c = 2; c <= 24; ++c)
    for (i64 b = 1; b <= c; ++b)
      for (i64 a = 1; a <= b; ++a) {
        const IntVector v{a, b, c};
        if (gcd(v) != 1) continue;
        const auto r = covering_radius_via_frobenius(v);
        EXPECT_LE(r.lower, r.value + 1e-9L);
        EXPECT_LE(r.value, r.upper + 1e-9L);
        EXPECT_GE(r.lower, r.value / 2 - 1e-9L);
      }
  for (const IntVector& v : std::vector<IntVector>{{2, 3, 5, 7}, {4, 5, 6, 7}, {3, 7, 11, 17}}) {
    const auto r = covering_radius_via_frobenius(v);
    EXPECT_LE(r.lower, r.value + 1e-9L);
    EXPECT_LE(r.value, r.upper + 1e-9L);
  }
}

TEST(VerifyIdentity, Examples) {
  EXPECT_LT(verify_identity(IntVector{1, 1, 1}, 1e-6L).residual, 1e-6L);
  EXPECT_LT(verify_identity(IntVector{2, 3, 5}, 1e-6L).residual, 1e-6L);
  EXPECT_THROW(verify_identity(IntVector{2, 3, 5, 7}, 1e-6L), Error);
}

TEST(VerifyIdentity, SmallSweepIncludingPermutedInputs) {
  for (i64 c = 2; c <= 12; ++c)
    for (i64 b = 1; b < c; ++b)
      for (i64 a = 1; a < c; ++a) {
        const IntVector v{a, b, c};
        if (gcd(v) != 1) continue;
        EXPECT_LT(verify_identity(v, 1e-6L).residual, 1e-6L) << a << "," << b << "," << c;
      }
  EXPECT_LT(verify_identity(IntVector{7, 2, 3}, 1e-6L).residual, 1e-6L);
}

TEST(Compactness, ProfilePositive) {
  std::vector<Real> q, l1;
  for (i64 c = 2; c <= 20; ++c)
    for (i64 b = 1; b <= c; ++b)
      for (i64 a = 1; a <= b; ++a) {
        const IntVector v{a, b, c};
        if (gcd(v) != 1) continue;
        q.push_back(covering_radius_via_frobenius(v, true).value);
        l1.push_back(successive_minima(L_a_basis(v), Gauge{GaugeKind::diff_simplex, 2}).lambdas[0]);
      }
  const std::vector<Real> grid{2, 3, 5, 8};
  const auto prof = compactness_profile(q, l1, grid);
  ASSERT_EQ(prof.size(), grid.size());
  for (std::size_t k = 0; k < prof.size(); ++k) {
    ASSERT_TRUE(prof[k]);
    EXPECT_GT(*prof[k], 0);
    if (k) EXPECT_LE(*prof[k], *prof[k - 1]);
  }
  EXPECT_FALSE(compactness_profile(q, l1, std::vector<Real>{0.1})[0]);
}
