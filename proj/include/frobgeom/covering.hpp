#pragma once

// Covering radius Q(Delta, L) of the standard simplex:
//  * from the Frobenius number, (F(a) + sum a_i) / (a_1 ... a_d)^{1/(d-1)};
//  * directly in the plane, by bisection on t with an exact coverage test
//    (union area of the translates t*Delta + v inside a fundamental cell);
//  * bracketed in every dimension by lambda_{d-1} <= Q <= sum lambda_i for
//    the difference body.

#include <gmpxx.h>

#include <optional>

#include "frobgeom/convexgeom.hpp"
#include "frobgeom/frobenius.hpp"

namespace frobgeom {

enum class CoveringMethod { frobenius_identity, planar_exact, sandwich_only };

inline std::string to_string(CoveringMethod m) {
  switch (m) {
    case CoveringMethod::frobenius_identity: return "frobenius_identity";
    case CoveringMethod::planar_exact: return "planar_exact";
    case CoveringMethod::sandwich_only: return "sandwich_only";
  }
  return "?";
}

struct CoveringResult {
  Real value;
  CoveringMethod method;
  Real lower, upper;  // bracket containing value
  Real tol;
};

struct CoveringBounds {
  Real lower;  // lambda_{n}(Delta - Delta, L)
  Real upper;  // sum_i lambda_i(Delta - Delta, L)
};

inline CoveringBounds covering_bounds(const RealLatticeBasis& b, std::uint64_t budget = kDefaultMinimaBudget) {
  const auto mins = successive_minima(b, Gauge{GaugeKind::diff_simplex, b.dim()}, budget);
  Real sum = 0;
  for (Real l : mins.lambdas) sum += l;
  return {mins.lambdas.back(), sum};
}

/// Identity value (F + sum a) / (prod a)^{1/(d-1)}; the bracket is the
/// difference-body sandwich of L_a unless skip_bounds is set.
inline CoveringResult covering_radius_via_frobenius(std::span<const i64> a, bool skip_bounds = false) {
  if (a.size() < 2) throw Error("covering radius needs d >= 2");
  const Real value = normalized_statistic(a, true);
  CoveringResult r{value, CoveringMethod::frobenius_identity, value, value, 0};
  // precision of the extended-precision root
  r.tol = value * 64 * std::numeric_limits<Real>::epsilon();
  if (!skip_bounds) {
    const auto bounds = covering_bounds(L_a_basis(a));
    r.lower = bounds.lower;
    r.upper = bounds.upper;
  }
  return r;
}

inline CoveringResult covering_radius_via_frobenius(const PrimitivePoint& a, bool skip_bounds = false) {
  return covering_radius_via_frobenius(std::span<const i64>(a.coords()), skip_bounds);
}

namespace detail {

/// Union area of the triangles (u, v) + t*Delta clipped to the parallelogram
/// spanned by b1, b2 at the origin. Num is long double (fast pass) or
/// mpq_class (exact pass).
template <class Num>
Num union_area_in_cell(const IntVector& b1, const IntVector& b2, const Num& t,
                       const std::vector<std::pair<i64, i64>>& translates) {
  struct Pt {
    Num x, y;
  };
  const Pt cell[4] = {{Num(0), Num(0)},
                      {Num(b1[0]), Num(b1[1])},
                      {Num(b1[0] + b2[0]), Num(b1[1] + b2[1])},
                      {Num(b2[0]), Num(b2[1])}};
  Num xmin = cell[0].x, xmax = cell[0].x;
  for (const auto& p : cell) {
    if (p.x < xmin) xmin = p.x;
    if (p.x > xmax) xmax = p.x;
  }

  std::vector<Num> xs;
  auto add = [&](const Num& x) {
    if (x > xmin && x < xmax) xs.push_back(x);
  };
  xs.push_back(xmin);
  xs.push_back(xmax);
  for (const auto& p : cell) add(p.x);

  std::vector<Pt> corner;
  corner.reserve(translates.size());
  for (const auto& [u, v] : translates) corner.push_back({Num(u), Num(v)});

  for (const auto& c : corner) {
    add(c.x);
    add(c.x + t);
  }
  // bottom edge of A against hypotenuse of B
  for (const auto& a : corner)
    for (const auto& b : corner) {
      const Num x = b.x + b.y + t - a.y;
      if (x >= a.x && x <= a.x + t && x >= b.x && x <= b.x + t) add(x);
    }
  // cell edges against bottoms and hypotenuses
  for (int e = 0; e < 4; ++e) {
    const Pt& p = cell[e];
    const Pt& q = cell[(e + 1) % 4];
    const Num dx = q.x - p.x, dy = q.y - p.y;
    for (const auto& c : corner) {
      if (dy != 0) {
        const Num s = (c.y - p.y) / dy;
        if (s >= 0 && s <= 1) add(p.x + s * dx);
      }
      const Num den = dx + dy;
      if (den != 0) {
        const Num s = (c.x + c.y + t - p.x - p.y) / den;
        if (s >= 0 && s <= 1) add(p.x + s * dx);
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  Num area(0);
  std::vector<std::pair<Num, Num>> spans;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const Num& x0 = xs[k];
    const Num& x1 = xs[k + 1];
    const Num xm = (x0 + x1) / 2;
    // vertical cross-section of the cell
    bool have = false;
    Num lo(0), hi(0);
    for (int e = 0; e < 4; ++e) {
      const Pt& p = cell[e];
      const Pt& q = cell[(e + 1) % 4];
      if (p.x == q.x) continue;
      const bool spans_x = (p.x < xm && xm < q.x) || (q.x < xm && xm < p.x);
      if (!spans_x) continue;
      const Num y = p.y + (xm - p.x) * (q.y - p.y) / (q.x - p.x);
      if (!have) {
        lo = hi = y;
        have = true;
      } else {
        if (y < lo) lo = y;
        if (y > hi) hi = y;
      }
    }
    if (!have) continue;
    spans.clear();
    for (const auto& c : corner) {
      if (!(c.x < xm && xm < c.x + t)) continue;
      Num a = c.y, b = c.y + t - (xm - c.x);
      if (a < lo) a = lo;
      if (b > hi) b = hi;
      if (a < b) spans.emplace_back(a, b);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    Num len(0);
    Num cur_a = spans[0].first, cur_b = spans[0].second;
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first > cur_b) {
        len += cur_b - cur_a;
        cur_a = spans[i].first;
        cur_b = spans[i].second;
      } else if (spans[i].second > cur_b) {
        cur_b = spans[i].second;
      }
    }
    len += cur_b - cur_a;
    area += (x1 - x0) * len;
  }
  return area;
}

/// Exact decision of t*Delta + L = R^2 for an integer lattice with reduced
/// basis columns b1, b2.
class PlanarCoverage {
 public:
  explicit PlanarCoverage(const IntMatrix& reduced) : b1_(reduced.column(0)), b2_(reduced.column(1)) {
    det_ = b1_[0] * b2_[1] - b1_[1] * b2_[0];
    if (det_ == 0) throw Error("planar coverage of a singular lattice");
    if (det_ < 0) {
      std::swap(b1_, b2_);
      det_ = -det_;
    }
    const RealMatrix inv = inverse(frobgeom::to_real(reduced));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) inv_[i][j] = inv(i, j);
    if (b1_ != reduced.column(0)) std::swap(inv_[0], inv_[1]);
  }

  i64 cell_area() const { return det_; }
  std::uint64_t exact_probes() const { return exact_probes_; }

  bool covered(const mpq_class& t) {
    const auto translates = candidate_translates(t.get_d());
    const Real area = union_area_in_cell<Real>(b1_, b2_, as_real(t), translates);
    const Real cell = static_cast<Real>(det_);
    if (std::fabs(area - cell) > 1e-9L * cell) return area > cell;
    ++exact_probes_;
    const mpq_class exact = union_area_in_cell<mpq_class>(b1_, b2_, t, translates);
    return exact == mpq_class(det_);
  }

 private:
  static Real as_real(const mpq_class& q) {
    // t is dyadic with a short numerator, so this is exact in practice
    return static_cast<Real>(q.get_num().get_d()) / static_cast<Real>(q.get_den().get_d());
  }

  /// Lattice points v with (v + t*Delta) meeting the cell; separating axes
  /// are the cell's coordinate functionals and the triangle normals.
  std::vector<std::pair<i64, i64>> candidate_translates(double t) const {
    const double margin = 1e-7 * (1 + t);
    const double xs[4] = {0, double(b1_[0]), double(b1_[0] + b2_[0]), double(b2_[0])};
    const double ys[4] = {0, double(b1_[1]), double(b1_[1] + b2_[1]), double(b2_[1])};
    double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0], smin = 0, smax = 0;
    for (int k = 0; k < 4; ++k) {
      xmin = std::min(xmin, xs[k]), xmax = std::max(xmax, xs[k]);
      ymin = std::min(ymin, ys[k]), ymax = std::max(ymax, ys[k]);
      smin = std::min(smin, xs[k] + ys[k]), smax = std::max(smax, xs[k] + ys[k]);
    }
    // coefficient box of bbox(cell) - [0,t]^2
    double cmin[2] = {1e300, 1e300}, cmax[2] = {-1e300, -1e300};
    for (double x : {xmin - t, xmax})
      for (double y : {ymin - t, ymax})
        for (int i = 0; i < 2; ++i) {
          const double c = static_cast<double>(inv_[i][0]) * x + static_cast<double>(inv_[i][1]) * y;
          cmin[i] = std::min(cmin[i], c), cmax[i] = std::max(cmax[i], c);
        }
    std::vector<std::pair<i64, i64>> out;
    const auto i0 = static_cast<i64>(std::floor(cmin[0])) - 1, i1 = static_cast<i64>(std::ceil(cmax[0])) + 1;
    const auto j0 = static_cast<i64>(std::floor(cmin[1])) - 1, j1 = static_cast<i64>(std::ceil(cmax[1])) + 1;
    for (i64 i = i0; i <= i1; ++i)
      for (i64 j = j0; j <= j1; ++j) {
        const i64 u = i * b1_[0] + j * b2_[0], v = i * b1_[1] + j * b2_[1];
        const double du = double(u), dv = double(v);
        if (du > xmax + margin || du + t < xmin - margin) continue;
        if (dv > ymax + margin || dv + t < ymin - margin) continue;
        if (du + dv > smax + margin || du + dv + t < smin - margin) continue;
        bool apart = false;
        for (int c = 0; c < 2 && !apart; ++c) {
          const double a = static_cast<double>(inv_[c][0]), b = static_cast<double>(inv_[c][1]);
          const double p0 = a * du + b * dv, p1 = p0 + a * t, p2 = p0 + b * t;
          const double lo = std::min({p0, p1, p2}), hi = std::max({p0, p1, p2});
          apart = lo > 1 + 1e-9 || hi < -1e-9;
        }
        if (!apart) out.emplace_back(u, v);
      }
    return out;
  }

  IntVector b1_, b2_;
  i64 det_;
  Real inv_[2][2];
  std::uint64_t exact_probes_ = 0;
};

}  // namespace detail

/// Bisection for Q(Delta, L) of a planar lattice, started from the
/// difference-body bracket [lambda_2, lambda_1 + lambda_2]. Every probe is
/// decided exactly, so the returned bracket always contains Q.
inline CoveringResult covering_radius_planar(const RealLatticeBasis& b, Real tol) {
  if (b.dim() != 2) throw Error("planar covering radius needs a 2-dimensional lattice");
  if (!(tol > 0)) throw Error("tolerance must be positive");
  if (determinant(b.numer()) == 0) throw Error("planar covering radius of a singular basis");

  const auto mins = successive_minima(RealLatticeBasis(b.numer()), Gauge{GaugeKind::diff_simplex, 2});
  const Real factor = b.factor();
  const Real upper_est = factor * static_cast<Real>(mins.integer_gauges[0] + mins.integer_gauges[1]);
  if (tol < upper_est * 1e-15L) throw Error("tolerance below what the extended-precision result can represent");

  detail::PlanarCoverage cover(lll_reduce(b.numer()).basis);
  mpq_class lo(static_cast<long>(mins.integer_gauges[1]));
  mpq_class hi(static_cast<long>(mins.integer_gauges[0] + mins.integer_gauges[1]));
  if (!cover.covered(hi)) throw Error("coverage fails at the upper sandwich bound");
  if (cover.covered(lo)) {
    hi = lo;
  } else {
    // integer-unit half-width target; stored as a dyadic bound on hi - lo
    const Real target = 2 * tol / factor;
    int steps = 0;
    while (static_cast<Real>(mpq_class(hi - lo).get_d()) > target) {
      if (++steps > 200) throw Error("bisection did not reach the tolerance");
      mpq_class mid = (lo + hi) / 2;
      if (cover.covered(mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  const Real lo_r = factor * static_cast<Real>(lo.get_d());
  const Real hi_r = factor * static_cast<Real>(hi.get_d());
  return {(lo_r + hi_r) / 2, CoveringMethod::planar_exact, lo_r, hi_r, tol};
}

struct IdentityResidual {
  Real planar;
  Real identity;
  Real residual;
};

/// |planar Q(L_a) - (F + sum a) / sqrt(prod a)| for d = 3, with the planar
/// bisection run at tol / 10.
inline IdentityResidual verify_identity(std::span<const i64> a, Real tol) {
  if (a.size() != 3) throw Error("verify_identity needs d = 3");
  const auto planar = covering_radius_planar(L_a_basis(a), tol / 10);
  const auto ident = covering_radius_via_frobenius(a, true);
  return {planar.value, ident.value, std::fabs(planar.value - ident.value)};
}

inline IdentityResidual verify_identity(const PrimitivePoint& a, Real tol) {
  return verify_identity(std::span<const i64>(a.coords()), tol);
}

/// For each R of the grid, the smallest lambda_1 among lattices with Q <= R
/// (nullopt when no lattice qualifies). Bounded away from zero on any
/// ensemble when the sublevel sets of Q are compact.
inline std::vector<std::optional<Real>> compactness_profile(std::span<const Real> q, std::span<const Real> lambda1,
                                                            std::span<const Real> r_grid) {
  if (q.size() != lambda1.size()) throw Error("compactness_profile needs matching inputs");
  std::vector<std::optional<Real>> out(r_grid.size());
  for (std::size_t k = 0; k < r_grid.size(); ++k)
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] <= r_grid[k] && (!out[k] || lambda1[i] < *out[k])) out[k] = lambda1[i];
  return out;
}

}  // namespace frobgeom
