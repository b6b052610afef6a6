#pragma once

// Gauge functions of the standard simplex, its difference body and the polar
// of the difference body; short-vector enumeration; successive minima and
// the Minkowski / transference checks built on them.

#include <functional>
#include <limits>

#include "frobgeom/lattice.hpp"

namespace frobgeom {

enum class GaugeKind { simplex, diff_simplex, polar_diff_simplex };

inline std::string to_string(GaugeKind k) {
  switch (k) {
    case GaugeKind::simplex: return "simplex";
    case GaugeKind::diff_simplex: return "diff-simplex";
    case GaugeKind::polar_diff_simplex: return "polar-diff-simplex";
  }
  return "?";
}

inline GaugeKind gauge_kind_from_string(const std::string& s) {
  if (s == "simplex") return GaugeKind::simplex;
  if (s == "diff-simplex" || s == "diff_simplex") return GaugeKind::diff_simplex;
  if (s == "polar-diff-simplex" || s == "polar_diff_simplex") return GaugeKind::polar_diff_simplex;
  throw Error("unknown gauge '" + s + "'");
}

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

struct Gauge {
  GaugeKind kind;
  int dim;

  bool symmetric() const { return kind != GaugeKind::simplex; }

  template <class T>
  Real eval(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != dim) throw Error("dimension mismatch in gauge evaluation");
    switch (kind) {
      case GaugeKind::simplex: {
        Real s = 0;
        for (T v : x) {
          if (v < 0) return kInfinity;
          s += static_cast<Real>(v);
        }
        return s;
      }
      case GaugeKind::diff_simplex: {
        Real pos = 0, neg = 0;
        for (T v : x) (v > 0 ? pos : neg) += std::fabs(static_cast<Real>(v));
        return std::max(pos, neg);
      }
      case GaugeKind::polar_diff_simplex: {
        Real hi = 0, lo = 0;
        for (T v : x) {
          hi = std::max(hi, static_cast<Real>(v));
          lo = std::max(lo, -static_cast<Real>(v));
        }
        return hi + lo;
      }
    }
    return kInfinity;
  }

  /// Exact gauge of an integer vector (always an integer); -1 encodes +inf.
  i64 eval_integer(std::span<const i64> x) const {
    switch (kind) {
      case GaugeKind::simplex: {
        i64 s = 0;
        for (i64 v : x) {
          if (v < 0) return -1;
          s += v;
        }
        return s;
      }
      case GaugeKind::diff_simplex: {
        i64 pos = 0, neg = 0;
        for (i64 v : x) (v > 0 ? pos : neg) += (v > 0 ? v : -v);
        return std::max(pos, neg);
      }
      case GaugeKind::polar_diff_simplex: {
        i64 hi = 0, lo = 0;
        for (i64 v : x) {
          hi = std::max(hi, v);
          lo = std::max(lo, -v);
        }
        return hi + lo;
      }
    }
    return -1;
  }

  /// Vertices of the unit body (for the simplex: its n+1 corners).
  std::vector<std::vector<Real>> vertices() const {
    std::vector<std::vector<Real>> v;
    const int n = dim;
    switch (kind) {
      case GaugeKind::simplex:
        v.emplace_back(n, 0);
        for (int i = 0; i < n; ++i) {
          v.emplace_back(n, 0);
          v.back()[i] = 1;
        }
        break;
      case GaugeKind::diff_simplex:
        for (int i = 0; i < n; ++i)
          for (int sgn : {1, -1}) {
            v.emplace_back(n, 0);
            v.back()[i] = sgn;
          }
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            v.emplace_back(n, 0);
            v.back()[i] = 1;
            v.back()[j] = -1;
          }
        break;
      case GaugeKind::polar_diff_simplex:
        // {|y_i| <= 1, y_i - y_j <= 1}: nonzero 0/1 vectors and their negatives
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
          for (int sgn : {1, -1}) {
            v.emplace_back(n, 0);
            for (int i = 0; i < n; ++i)
              if (mask & (1u << i)) v.back()[i] = sgn;
          }
        break;
    }
    return v;
  }

  /// Largest Euclidean norm over the unit body: |x| <= circumradius * g(x).
  Real circumradius() const {
    Real r = 0;
    for (const auto& p : vertices()) {
      Real s = 0;
      for (Real c : p) s += c * c;
      r = std::max(r, std::sqrt(s));
    }
    return r;
  }
};

inline Real gauge_eval(const Gauge& g, std::span<const Real> x) { return g.eval(x); }

struct Fraction {
  i64 num, den;
  Real value() const { return static_cast<Real>(num) / static_cast<Real>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Volume of (Delta - Delta) in R^{d-1}: binom(2(d-1), d-1) / (d-1)!.
inline Fraction vol_diff_simplex(int d) {
  if (d < 2) throw Error("vol_diff_simplex needs d >= 2");
  const int n = d - 1;
  i64 binom = 1;
  for (int k = 1; k <= n; ++k) binom = binom * (n + k) / k;
  i64 fact = 1;
  for (int k = 2; k <= n; ++k) fact = checked_mul(fact, k);
  const i64 g = std::gcd(binom, fact);
  return {binom / g, fact / g};
}

// ---------------------------------------------------------------------------
// Enumeration of lattice vectors in a Euclidean ball.

inline constexpr std::uint64_t kDefaultMinimaBudget = 10'000'000;

/// LLL-reduced copy of an integer basis (columns) with the unimodular
/// transform: reduced = basis * transform.
struct ReducedBasis {
  IntMatrix basis;
  IntMatrix transform;
};

namespace detail {
struct GramSchmidt {
  RealMatrix mu;
  std::vector<Real> norms;  // |b*_i|^2
};

inline GramSchmidt gram_schmidt(const IntMatrix& b) {
  const int n = b.cols(), m = b.rows();
  GramSchmidt gs{RealMatrix(n, n), std::vector<Real>(n)};
  std::vector<std::vector<Real>> star(n, std::vector<Real>(m));
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < m; ++r) star[i][r] = static_cast<Real>(b(r, i));
    for (int j = 0; j < i; ++j) {
      Real dot = 0;
      for (int r = 0; r < m; ++r) dot += static_cast<Real>(b(r, i)) * star[j][r];
      gs.mu(i, j) = dot / gs.norms[j];
      for (int r = 0; r < m; ++r) star[i][r] -= gs.mu(i, j) * star[j][r];
    }
    Real s = 0;
    for (int r = 0; r < m; ++r) s += star[i][r] * star[i][r];
    gs.norms[i] = s;
  }
  return gs;
}
}  // namespace detail

inline ReducedBasis lll_reduce(const IntMatrix& basis, Real delta = 0.99L) {
  const int n = basis.cols(), m = basis.rows();
  ReducedBasis r{basis, IntMatrix::identity(n)};
  auto col_sub = [&](int k, int j, i64 q) {  // b_k -= q b_j
    for (int i = 0; i < m; ++i) r.basis(i, k) = checked_add(r.basis(i, k), -checked_mul(q, r.basis(i, j)));
    for (int i = 0; i < n; ++i) r.transform(i, k) = checked_add(r.transform(i, k), -checked_mul(q, r.transform(i, j)));
  };
  auto col_swap = [&](int a, int b) {
    for (int i = 0; i < m; ++i) std::swap(r.basis(i, a), r.basis(i, b));
    for (int i = 0; i < n; ++i) std::swap(r.transform(i, a), r.transform(i, b));
  };
  int k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw Error("LLL did not converge");
    auto gs = detail::gram_schmidt(r.basis);
    for (int j = k - 1; j >= 0; --j) {
      const Real q = std::nearbyint(gs.mu(k, j));
      if (q != 0) {
        col_sub(k, j, static_cast<i64>(q));
        gs = detail::gram_schmidt(r.basis);
      }
    }
    if (gs.norms[k] >= (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.norms[k - 1]) {
      ++k;
    } else {
      col_swap(k, k - 1);
      k = std::max(k - 1, 1);
    }
  }
  return r;
}

/// Calls visit(z) for every nonzero integer z with |basis * z| <= radius,
/// z given in the coordinates of `basis` (not of its reduction).
class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const IntMatrix& basis)
      : original_(basis), reduced_(lll_reduce(basis)), gs_(detail::gram_schmidt(reduced_.basis)) {}

  const ReducedBasis& reduced() const { return reduced_; }

  template <class Visit>
  std::uint64_t enumerate(Real radius, Visit&& visit, std::uint64_t budget = kDefaultMinimaBudget) const {
    const int n = original_.cols();
    const Real r2 = radius * radius * (1 + 1e-12L) + 1e-12L;
    std::vector<i64> z(n, 0), zo(n);
    std::vector<Real> partial(n + 1, 0);
    std::uint64_t nodes = 0;
    std::function<void(int)> rec = [&](int i) {
      if (++nodes > budget) throw BudgetExceeded("short-vector enumeration exceeds its budget", nodes);
      Real center = 0;
      for (int j = i + 1; j < n; ++j) center -= gs_.mu(j, i) * static_cast<Real>(z[j]);
      const Real slack = r2 - partial[i + 1];
      if (slack < 0) return;
      const Real width = std::sqrt(slack / gs_.norms[i]);
      const auto lo = static_cast<i64>(std::ceil(center - width));
      const auto hi = static_cast<i64>(std::floor(center + width));
      for (i64 v = lo; v <= hi; ++v) {
        const Real dv = static_cast<Real>(v) - center;
        partial[i] = partial[i + 1] + dv * dv * gs_.norms[i];
        if (partial[i] > r2) continue;
        z[i] = v;
        if (i == 0) {
          bool zero = true;
          for (i64 c : z) zero = zero && c == 0;
          if (zero) continue;
          for (int a = 0; a < n; ++a) {
            i64 s = 0;
            for (int b = 0; b < n; ++b) s = checked_add(s, checked_mul(reduced_.transform(a, b), z[b]));
            zo[a] = s;
          }
          visit(std::as_const(zo));
        } else {
          rec(i - 1);
        }
      }
      z[i] = 0;
    };
    rec(n - 1);
    return nodes;
  }

 private:
  IntMatrix original_;
  ReducedBasis reduced_;
  detail::GramSchmidt gs_;
};

// ---------------------------------------------------------------------------
// Successive minima.

struct MinimaResult {
  std::vector<Real> lambdas;
  std::vector<IntVector> witnesses;  // coordinates in the input basis
  std::vector<i64> integer_gauges;   // lambda_i = factor * integer_gauges[i]
};

namespace detail {
/// Exact incremental rank test on integer vectors.
class IndependenceTracker {
 public:
  explicit IndependenceTracker(int n) : n_(n) {}

  bool try_add(std::span<const i64> v) {
    std::vector<i128> w(v.begin(), v.end());
    for (const auto& [pivot, row] : rows_) {
      if (w[pivot] == 0) continue;
      const i128 a = row[pivot], b = w[pivot];
      for (int k = 0; k < n_; ++k) w[k] = w[k] * a - row[k] * b;
      normalize(w);
    }
    for (int k = 0; k < n_; ++k)
      if (w[k] != 0) {
        rows_.emplace_back(k, std::move(w));
        return true;
      }
    return false;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  static void normalize(std::vector<i128>& w) {
    i128 g = 0;
    for (i128 x : w) {
      i128 a = x < 0 ? -x : x;
      while (a) {
        const i128 t = g % a;
        g = a;
        a = t;
      }
    }
    if (g > 1)
      for (i128& x : w) x /= g;
  }

  int n_;
  std::vector<std::pair<int, std::vector<i128>>> rows_;
};

inline bool lex_greater(const IntVector& a, const IntVector& b) { return a > b; }
}  // namespace detail

/// Successive minima of a symmetric gauge by enumeration. Candidates are
/// ordered by (gauge, Euclidean norm, lexicographically larger witness first)
/// with each +-v pair represented by the vector whose first nonzero
/// coordinate is positive.
inline MinimaResult successive_minima(const RealLatticeBasis& b, const Gauge& g,
                                      std::uint64_t budget = kDefaultMinimaBudget) {
  if (!g.symmetric()) throw Error("successive minima need a symmetric gauge");
  if (g.dim != b.dim()) throw Error("gauge and lattice dimensions differ");
  const int n = b.dim();
  if (determinant(b.numer()) == 0) throw Error("successive minima of a singular basis");
  const IntMatrix& N = b.numer();
  const ShortVectorEnumerator en(N);

  i64 t_max = std::numeric_limits<i64>::max();
  for (int j = 0; j < n; ++j) {
    const auto col = en.reduced().basis.column(j);
    t_max = std::min(t_max, g.eval_integer(col));
  }
  const Real r0 = g.circumradius();
  std::uint64_t spent = 0;

  struct Candidate {
    i64 gauge;
    i128 norm2;
    IntVector z;
  };
  while (true) {
    std::vector<Candidate> cands;
    std::vector<i64> x(n);
    spent += en.enumerate(
        r0 * static_cast<Real>(t_max),
        [&](const IntVector& z) {
          for (int i = 0; i < n; ++i) {
            i128 s = 0;
            for (int j = 0; j < n; ++j) s += static_cast<i128>(N(i, j)) * z[j];
            x[i] = narrow(s);
          }
          const i64 gv = g.eval_integer(x);
          if (gv > t_max) return;
          for (i64 c : z) {
            if (c == 0) continue;
            if (c < 0) return;  // keep the representative with positive leading coordinate
            break;
          }
          i128 n2 = 0;
          for (i64 c : x) n2 += static_cast<i128>(c) * c;
          cands.push_back({gv, n2, z});
        },
        budget > spent ? budget - spent : 0);
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& c) {
      if (a.gauge != c.gauge) return a.gauge < c.gauge;
      if (a.norm2 != c.norm2) return a.norm2 < c.norm2;
      return detail::lex_greater(a.z, c.z);
    });
    detail::IndependenceTracker tracker(n);
    MinimaResult out;
    for (const auto& c : cands) {
      if (!tracker.try_add(c.z)) continue;
      out.integer_gauges.push_back(c.gauge);
      out.lambdas.push_back(b.factor() * static_cast<Real>(c.gauge));
      out.witnesses.push_back(c.z);
      if (tracker.rank() == n) return out;
    }
    if (t_max > std::numeric_limits<i64>::max() / 2) throw Error("successive minima search diverged");
    t_max *= 2;
  }
}

struct MinkowskiCheck {
  bool lower_ok;
  bool upper_ok;
  Real product;  // vol(Delta - Delta) * prod(lambda_i) for a unimodular lattice
};

inline constexpr Real kMinkowskiSlack = 1e-6L;

inline MinkowskiCheck minkowski_check(const RealLatticeBasis& b, int d, std::uint64_t budget = kDefaultMinimaBudget) {
  if (b.dim() != d - 1) throw Error("minkowski_check: basis dimension must be d-1");
  if (std::fabs(std::fabs(b.det()) - 1) > 1e-9L) throw Error("minkowski_check needs a unimodular lattice");
  const auto mins = successive_minima(b, Gauge{GaugeKind::diff_simplex, d - 1}, budget);
  Real product = vol_diff_simplex(d).value();
  for (Real l : mins.lambdas) product *= l;
  const int n = d - 1;
  Real fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  const Real upper = std::ldexp(Real(1), n);
  return {product >= upper / fact - kMinkowskiSlack, product <= upper + kMinkowskiSlack, product};
}

/// lambda_{n}(Delta - Delta, L) * lambda_1((Delta - Delta)^*, L^*).
inline Real transference_product(const RealLatticeBasis& b, std::uint64_t budget = kDefaultMinimaBudget) {
  const int n = b.dim();
  const auto direct = successive_minima(b, Gauge{GaugeKind::diff_simplex, n}, budget);
  const auto dual = successive_minima(dual_basis(b), Gauge{GaugeKind::polar_diff_simplex, n}, budget);
  return direct.lambdas.back() * dual.lambdas.front();
}

}  // namespace frobgeom
