#pragma once

// Integer and real lattice bases attached to a primitive vector a:
//   M_a = {b in Z^{d-1} : sum a_i b_i = 0 mod a_d}        (integer, det a_d)
//   L_a = m'(a^) a_d^{-1/(d-1)} M_a                          (unimodular)
//   L_a = m(a^) D(a_d) n(a^) Z^d  intersected with e_d^perp  (same lattice)
// Real bases are kept as (scale / denom) * integer matrix so that lattice
// identities can be decided exactly.

#include <optional>

#include "frobgeom/domains.hpp"
#include "frobgeom/matrix.hpp"

namespace frobgeom {

/// Square integer basis (columns) with |det| > 0.
struct IntegerLatticeBasis {
  IntMatrix columns;
  i64 det_abs;

  int dim() const { return columns.rows(); }
};

/// Lower-triangular column Hermite normal form of a nonsingular integer
/// basis: positive diagonal, 0 <= H(i,j) < H(i,i) for j < i.
inline IntMatrix hermite_normal_form(IntMatrix h) {
  const int n = h.rows();
  if (!h.square()) throw Error("HNF expects a square basis");
  auto col_axpy = [&](int dst, int src, i64 f) {  // col_dst += f * col_src
    for (int r = 0; r < n; ++r) h(r, dst) = checked_add(h(r, dst), checked_mul(f, h(r, src)));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      const auto e = ext_gcd(h(i, i), h(i, j));
      const i64 p = h(i, i) / e.g, q = h(i, j) / e.g;
      // [col_i col_j] <- [col_i col_j] * [[x, -q], [y, p]], determinant 1
      for (int r = 0; r < n; ++r) {
        const i64 ci = h(r, i), cj = h(r, j);
        h(r, i) = checked_add(checked_mul(ci, e.x), checked_mul(cj, e.y));
        h(r, j) = checked_add(checked_mul(-ci, q), checked_mul(cj, p));
      }
    }
    if (h(i, i) == 0) throw Error("HNF of a singular basis");
    if (h(i, i) < 0)
      for (int r = 0; r < n; ++r) h(r, i) = -h(r, i);
    for (int j = 0; j < i; ++j) col_axpy(j, i, -floor_div(h(i, j), h(i, i)));
  }
  return h;
}

/// Basis of M_a for a sorted so that a_d = max, built directly from the
/// congruence: column j has minimal positive j-th entry among the vectors of
/// M_a vanishing in the first j-1 coordinates.
inline IntegerLatticeBasis basis_M_a(std::span<const i64> a) {
  const int d = static_cast<int>(a.size());
  if (d < 2) throw Error("M_a needs d >= 2");
  if (gcd(a) != 1) throw Error("a is not primitive");
  const i64 m = a[d - 1];
  for (i64 x : a)
    if (x < 1 || x > m) throw Error("M_a needs positive a with a_d = max");
  const int n = d - 1;
  IntVector c(n);
  for (int i = 0; i < n; ++i) c[i] = a[i] % m;

  IntMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    // solvability of sum_{i>j} c_i b_i = -c_j t (mod m) needs c_j t = 0 mod G
    IntVector tail(c.begin() + j + 1, c.end());
    tail.push_back(m);
    const auto bez = ext_gcd_list(tail);
    const i64 G = bez.g;
    const i64 diag = G / std::gcd(c[j], G);
    h(j, j) = diag;
    const i64 rhs = mod_floor(-checked_mul(c[j], diag), m);  // multiple of G
    const i64 k = rhs / G;
    for (int i = j + 1; i < n; ++i) h(i, j) = mod_floor(checked_mul(bez.coeffs[i - j - 1] % m, k), m);
  }
  return {hermite_normal_form(h), m};
}

inline IntegerLatticeBasis basis_M_a(const PrimitivePoint& a) {
  return basis_M_a(std::span<const i64>(a.sorted()));
}

/// Lattice basis (scale / denom) * numer with integer numer.
class RealLatticeBasis {
 public:
  RealLatticeBasis() = default;
  RealLatticeBasis(IntMatrix numer, i64 denom = 1, Real scale = 1)
      : numer_(std::move(numer)), denom_(denom), scale_(scale) {
    if (!numer_.square() || numer_.rows() < 1) throw Error("lattice basis must be square and nonempty");
    if (denom_ == 0) throw Error("zero denominator in lattice basis");
    if (!(scale_ > 0)) throw Error("lattice scale must be positive");
    if (denom_ < 0) {
      denom_ = -denom_;
      for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) numer_(i, j) = -numer_(i, j);
    }
    i64 g = denom_;
    for (i64 v : numer_.data()) g = std::gcd(g, v);
    if (g > 1) {
      denom_ /= g;
      for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) numer_(i, j) /= g;
    }
  }

  /// Rationalizes each real entry (continued fractions, denominators up to
  /// max_denom) and factors out a common denominator.
  static RealLatticeBasis from_real(const RealMatrix& cols, i64 max_denom = i64(1) << 20, Real tol = 1e-12L) {
    const int n = cols.rows();
    if (!cols.square() || n < 1) throw Error("lattice basis must be square and nonempty");
    std::vector<std::pair<i64, i64>> fr;
    i64 common = 1;
    for (Real v : cols.data()) {
      auto f = rationalize(v, max_denom, tol);
      fr.push_back(f);
      common = checked_mul(common / std::gcd(common, f.second), f.second);
      if (common > (i64(1) << 40)) throw Error("basis entries need too large a common denominator");
    }
    IntMatrix num(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& f = fr[static_cast<std::size_t>(i) * n + j];
        num(i, j) = checked_mul(f.first, common / f.second);
      }
    return RealLatticeBasis(std::move(num), common, 1);
  }

  int dim() const { return numer_.rows(); }
  const IntMatrix& numer() const { return numer_; }
  i64 denom() const { return denom_; }
  Real scale() const { return scale_; }
  /// Multiplier turning numer into the actual basis.
  Real factor() const { return scale_ / static_cast<Real>(denom_); }

  RealMatrix columns() const {
    RealMatrix m = to_real(numer_);
    const Real f = factor();
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) m(i, j) *= f;
    return m;
  }

  Real det() const { return static_cast<Real>(determinant(numer_)) * std::pow(factor(), static_cast<Real>(dim())); }

  /// Lattice vector with integer coordinates z in this basis.
  std::vector<Real> point(std::span<const i64> z) const {
    std::vector<Real> x(dim(), 0);
    const Real f = factor();
    for (int i = 0; i < dim(); ++i) {
      i128 s = 0;
      for (int j = 0; j < dim(); ++j) s += static_cast<i128>(numer_(i, j)) * z[j];
      x[i] = static_cast<Real>(s) * f;
    }
    return x;
  }

  static std::pair<i64, i64> rationalize(Real v, i64 max_denom, Real tol) {
    // best rational approximation by continued fraction convergents
    i64 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real x = v;
    for (int iter = 0; iter < 64; ++iter) {
      const Real fl = std::floor(x);
      if (std::fabs(fl) > 9e18L) break;
      const auto a = static_cast<i64>(fl);
      const i64 q2 = a * q1 + q0;
      if (q2 > max_denom) break;
      const i64 p2 = a * p1 + p0;
      p0 = p1, q0 = q1, p1 = p2, q1 = q2;
      if (std::fabs(v - static_cast<Real>(p1) / q1) <= tol * std::max<Real>(1, std::fabs(v))) return {p1, q1};
      const Real frac = x - fl;
      if (frac == 0) break;
      x = 1 / frac;
    }
    if (q1 != 0 && std::fabs(v - static_cast<Real>(p1) / q1) <= tol * std::max<Real>(1, std::fabs(v))) return {p1, q1};
    throw Error("basis entry is not representable as a small rational");
  }

 private:
  IntMatrix numer_;
  i64 denom_ = 1;
  Real scale_ = 1;
};

/// Dual lattice: inverse transpose, kept in exact form.
inline RealLatticeBasis dual_basis(const RealLatticeBasis& b) {
  const i64 det = determinant(b.numer());
  if (det == 0) throw Error("dual of a singular basis");
  IntMatrix cof = cofactor(b.numer());
  for (int i = 0; i < cof.rows(); ++i)
    for (int j = 0; j < cof.cols(); ++j) cof(i, j) = checked_mul(cof(i, j), b.denom());
  return RealLatticeBasis(std::move(cof), det, 1 / b.scale());
}

/// True iff B1^{-1} B2 is integral with determinant +-1. Exact when the two
/// scales agree within tol; otherwise entries are compared to integers
/// within tol.
inline bool lattice_equal(const RealLatticeBasis& b1, const RealLatticeBasis& b2, Real tol = 1e-9L) {
  if (b1.dim() != b2.dim()) throw Error("lattice_equal needs equal dimensions");
  const int n = b1.dim();
  const i64 det1 = determinant(b1.numer());
  if (det1 == 0) throw Error("lattice_equal with a singular first basis");
  const Real ratio = b2.scale() / b1.scale();
  if (std::fabs(ratio - 1) <= tol) {
    // X = (d1 / d2) adj(N1) N2 / det(N1)
    const IntMatrix adj = cofactor(b1.numer()).transpose();
    const i128 divisor = static_cast<i128>(b2.denom()) * det1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        i128 s = 0;
        for (int k = 0; k < n; ++k) s += static_cast<i128>(adj(i, k)) * b2.numer()(k, j);
        s *= b1.denom();
        if (s % divisor != 0) return false;
      }
    // integral X has det +-1 iff |det N2| d1^n == |det N1| d2^n
    i128 lhs = determinant(b2.numer()), rhs = det1;
    if (lhs < 0) lhs = -lhs;
    if (rhs < 0) rhs = -rhs;
    for (int k = 0; k < n; ++k) {
      lhs *= b1.denom();
      rhs *= b2.denom();
    }
    return lhs == rhs;
  }
  const RealMatrix x = inverse(b1.columns()) * b2.columns();
  for (Real v : x.data())
    if (std::fabs(v - std::nearbyint(v)) > tol) return false;
  IntMatrix xi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) xi(i, j) = static_cast<i64>(std::nearbyint(x(i, j)));
  const i64 det = determinant(xi);
  return det == 1 || det == -1;
}

// ---------------------------------------------------------------------------
// Group elements D(T), n(x), m(y), m'(y).

enum class GroupKind { D_of_T, n_of_x, m_of_y, m_prime_of_y, general };

struct GroupElement {
  GroupKind kind = GroupKind::general;
  RealMatrix matrix;

  int dim() const { return matrix.rows(); }
  Real det() const { return determinant(matrix); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return {GroupKind::general, a.matrix * b.matrix};
  }
};

/// D(T) in SL_d: T^{-1/(d-1)} on the first d-1 diagonal entries, T last.
inline GroupElement group_D(int d, Real T) {
  if (d < 2) throw Error("D(T) needs d >= 2");
  if (!(T > 0)) throw Error("D(T) needs T > 0");
  RealMatrix m = RealMatrix::identity(d);
  const Real s = std::pow(T, -1 / static_cast<Real>(d - 1));
  for (int i = 0; i + 1 < d; ++i) m(i, i) = s;
  m(d - 1, d - 1) = T;
  return {GroupKind::D_of_T, m};
}

/// n(x): identity with x^t in the last row.
inline GroupElement group_n(std::span<const Real> x) {
  const int d = static_cast<int>(x.size()) + 1;
  RealMatrix m = RealMatrix::identity(d);
  for (int j = 0; j + 1 < d; ++j) m(d - 1, j) = x[j];
  return {GroupKind::n_of_x, m};
}

/// m'(y) = (y_1 ... y_{d-1})^{-1/(d-1)} diag(y) in SL_{d-1}.
inline GroupElement group_m_prime(std::span<const Real> y) {
  const int n = static_cast<int>(y.size());
  if (n < 1) throw Error("m'(y) needs at least one coordinate");
  Real log_prod = 0;
  int negatives = 0;
  for (Real v : y) {
    if (v == 0) throw Error("m(y) needs every coordinate nonzero");
    log_prod += std::log(std::fabs(v));
    negatives += v < 0;
  }
  if (negatives % 2 && n % 2 == 0) throw Error("m'(y) needs a positive product in even dimension");
  Real s = std::exp(-log_prod / n);
  if (negatives % 2) s = -s;
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = s * y[i];
  return {GroupKind::m_prime_of_y, m};
}

/// m(y) = blockdiag(m'(y), 1).
inline GroupElement group_m(std::span<const Real> y) {
  const auto mp = group_m_prime(y);
  const int d = static_cast<int>(y.size()) + 1;
  RealMatrix m = RealMatrix::identity(d);
  for (int i = 0; i + 1 < d; ++i) m(i, i) = mp.matrix(i, i);
  return {GroupKind::m_of_y, m};
}

/// Generic constructor; D_of_T takes {T} and needs the ambient dimension d.
inline GroupElement group_element(GroupKind kind, std::span<const Real> parameter, int d = 0) {
  switch (kind) {
    case GroupKind::D_of_T:
      if (parameter.size() != 1) throw Error("D(T) takes one parameter");
      return group_D(d, parameter[0]);
    case GroupKind::n_of_x: return group_n(parameter);
    case GroupKind::m_of_y: return group_m(parameter);
    case GroupKind::m_prime_of_y: return group_m_prime(parameter);
    case GroupKind::general: break;
  }
  throw Error("group_element cannot build a general element from parameters");
}

/// Exact form of a block lower-triangular element
///   [[ scale * top / top_den, 0 ], [ bottom / bottom_den ]]
/// (the last column is zero above the corner). The product X * Y stays exact
/// when X has a zero bottom-left block or Y has unit scale.
struct ExactBlockElement {
  IntMatrix top;
  i64 top_den = 1;
  Real scale = 1;
  bool unit_scale = true;
  IntVector bottom;  // length d, last entry is the corner
  i64 bottom_den = 1;

  int dim() const { return top.rows() + 1; }

  bool bottom_left_zero() const {
    return std::all_of(bottom.begin(), bottom.end() - 1, [](i64 v) { return v == 0; });
  }

  RealMatrix to_real() const {
    const int d = dim();
    RealMatrix m(d, d);
    for (int i = 0; i + 1 < d; ++i)
      for (int j = 0; j + 1 < d; ++j) m(i, j) = scale * static_cast<Real>(top(i, j)) / top_den;
    for (int j = 0; j < d; ++j) m(d - 1, j) = static_cast<Real>(bottom[j]) / bottom_den;
    return m;
  }

  friend ExactBlockElement operator*(const ExactBlockElement& x, const ExactBlockElement& y) {
    if (x.dim() != y.dim()) throw Error("group element dimension mismatch");
    const int n = x.dim() - 1;
    ExactBlockElement r;
    r.top = x.top * y.top;
    r.top_den = checked_mul(x.top_den, y.top_den);
    r.scale = x.scale * y.scale;
    r.unit_scale = x.unit_scale && y.unit_scale;
    r.bottom.assign(n + 1, 0);
    if (x.bottom_left_zero()) {
      for (int j = 0; j <= n; ++j) r.bottom[j] = checked_mul(x.bottom[n], y.bottom[j]);
      r.bottom_den = checked_mul(x.bottom_den, y.bottom_den);
    } else if (y.unit_scale) {
      // (x_bl * y_top / y_top_den + x_c * y_bl) / (x_bden * y_bden) over a common denominator
      r.bottom_den = checked_mul(checked_mul(x.bottom_den, y.top_den), y.bottom_den);
      for (int j = 0; j < n; ++j) {
        i64 s = 0;
        for (int k = 0; k < n; ++k) s = checked_add(s, checked_mul(x.bottom[k], y.top(k, j)));
        r.bottom[j] = checked_add(checked_mul(s, y.bottom_den), checked_mul(checked_mul(x.bottom[n], y.bottom[j]), y.top_den));
      }
      r.bottom[n] = checked_mul(checked_mul(x.bottom[n], y.bottom[n]), y.top_den);
    } else {
      throw Error("product leaves the exact block form");
    }
    i64 g = r.top_den;
    for (i64 v : r.top.data()) g = std::gcd(g, v);
    if (g > 1) {
      r.top_den /= g;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.top(i, j) /= g;
    }
    g = r.bottom_den;
    for (i64 v : r.bottom) g = std::gcd(g, v);
    if (g > 1) {
      r.bottom_den /= g;
      for (i64& v : r.bottom) v /= g;
    }
    return r;
  }
};

/// D(T) for integer T.
inline ExactBlockElement exact_D(int d, i64 T) {
  ExactBlockElement e;
  e.top = IntMatrix::identity(d - 1);
  e.scale = std::pow(static_cast<Real>(T), -1 / static_cast<Real>(d - 1));
  e.unit_scale = (T == 1);
  e.bottom.assign(d, 0);
  e.bottom[d - 1] = T;
  return e;
}

/// n(x) for x = numer / den.
inline ExactBlockElement exact_n(std::span<const i64> numer, i64 den) {
  const int d = static_cast<int>(numer.size()) + 1;
  ExactBlockElement e;
  e.top = IntMatrix::identity(d - 1);
  e.bottom.assign(numer.begin(), numer.end());
  e.bottom.push_back(den);
  e.bottom_den = den;
  return e;
}

/// m(y) for y = numer / den with positive entries.
inline ExactBlockElement exact_m(std::span<const i64> numer, i64 den) {
  const int n = static_cast<int>(numer.size());
  ExactBlockElement e;
  e.top = IntMatrix::diagonal(numer);
  e.top_den = den;
  Real log_prod = 0;
  for (i64 v : numer) {
    if (v <= 0 || den <= 0) throw Error("exact m(y) needs positive coordinates");
    log_prod += std::log(static_cast<Real>(v) / static_cast<Real>(den));
  }
  e.scale = std::exp(-log_prod / n);
  e.unit_scale = false;
  e.bottom.assign(n + 1, 0);
  e.bottom[n] = 1;
  return e;
}

/// Integer basis (columns) of {y in Z^d : row . y = 0}, from a unimodular
/// column reduction of the row vector.
inline IntMatrix integer_kernel(std::span<const i64> row) {
  const int d = static_cast<int>(row.size());
  IntVector r(row.begin(), row.end());
  IntMatrix u = IntMatrix::identity(d);
  int pivot = -1;
  for (int j = 0; j < d; ++j) {
    if (r[j] == 0) continue;
    if (pivot < 0) {
      pivot = j;
      continue;
    }
    const auto e = ext_gcd(r[pivot], r[j]);
    const i64 p = r[pivot] / e.g, q = r[j] / e.g;
    for (int i = 0; i < d; ++i) {
      const i64 ci = u(i, pivot), cj = u(i, j);
      u(i, pivot) = checked_add(checked_mul(ci, e.x), checked_mul(cj, e.y));
      u(i, j) = checked_add(checked_mul(-ci, q), checked_mul(cj, p));
    }
    r[pivot] = e.g;
    r[j] = 0;
  }
  IntMatrix k(d, d - 1);
  for (int j = 0, c = 0; j < d; ++j) {
    if (j == pivot || (pivot < 0 && j == d - 1)) continue;
    for (int i = 0; i < d; ++i) k(i, c) = u(i, j);
    ++c;
  }
  return k;
}

namespace detail {
inline IntVector sorted_primitive(std::span<const i64> a) {
  IntVector s(a.begin(), a.end());
  std::stable_sort(s.begin(), s.end());
  if (s.size() < 2) throw Error("lattice constructions need d >= 2");
  if (s.front() < 1) throw Error("coordinates must be positive");
  if (gcd(s) != 1) throw Error("a is not primitive");
  return s;
}
}  // namespace detail

/// L_a = m'(a^) a_d^{-1/(d-1)} M_a, with a sorted so that a_d = max.
inline RealLatticeBasis L_a_basis(std::span<const i64> a) {
  const IntVector s = detail::sorted_primitive(a);
  const int d = static_cast<int>(s.size());
  const int n = d - 1;
  const i64 ad = s[n];
  const IntMatrix M = basis_M_a(s).columns;
  // m'(a^) = mu * diag(a_1 .. a_{d-1}) / a_d
  Real log_hat = 0;
  for (int i = 0; i < n; ++i) log_hat += std::log(static_cast<Real>(s[i]) / static_cast<Real>(ad));
  const Real mu = std::exp(-log_hat / n);
  const Real tau = std::pow(static_cast<Real>(ad), -1 / static_cast<Real>(n));
  const IntMatrix diag = IntMatrix::diagonal(std::span<const i64>(s.data(), n));
  return RealLatticeBasis(diag * M, ad, mu * tau);
}

inline RealLatticeBasis L_a_basis(const PrimitivePoint& a) { return L_a_basis(std::span<const i64>(a.coords())); }

/// Rank d-1 sublattice of m(a^) D(a_d) n(a^) Z^d inside x_d = 0, returned in
/// the first d-1 coordinates.
inline RealLatticeBasis construction_via_intersection(std::span<const i64> a) {
  const IntVector s = detail::sorted_primitive(a);
  const int d = static_cast<int>(s.size());
  const i64 ad = s[d - 1];
  const std::span<const i64> head(s.data(), d - 1);
  const ExactBlockElement g = exact_m(head, ad) * (exact_D(d, ad) * exact_n(head, ad));
  // lattice points g*y with vanishing last coordinate <=> bottom . y = 0
  const IntMatrix kernel = integer_kernel(g.bottom);
  IntMatrix top_rows(d - 1, d - 1);
  for (int i = 0; i + 1 < d; ++i)
    for (int j = 0; j + 1 < d; ++j) top_rows(i, j) = kernel(i, j);

  // the real product must agree with the exact one and kill the last coordinate
  std::vector<Real> hat(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) hat[i] = static_cast<Real>(head[i]) / static_cast<Real>(ad);
  const GroupElement real_g = group_m(hat) * (group_D(d, static_cast<Real>(ad)) * group_n(hat));
  const RealMatrix image = real_g.matrix * to_real(kernel);
  Real worst = 0;
  for (int j = 0; j + 1 < d; ++j) worst = std::max(worst, std::fabs(image(d - 1, j)));
  if (worst > 1e-9L * static_cast<Real>(ad)) throw Error("intersection basis leaves the hyperplane x_d = 0");

  return RealLatticeBasis(g.top * top_rows, g.top_den, g.scale);
}

inline RealLatticeBasis construction_via_intersection(const PrimitivePoint& a) {
  return construction_via_intersection(std::span<const i64>(a.coords()));
}

}  // namespace frobgeom
