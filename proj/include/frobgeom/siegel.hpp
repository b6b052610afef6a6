#pragma once

// Monte Carlo checks over the family {L_a}: mean number of nonzero lattice
// vectors in a centred body against its volume, and the small-ball
// frequencies of lambda_1.

#include <numbers>

#include "frobgeom/convexgeom.hpp"

namespace frobgeom {

enum class BodyKind { centered_box, centered_ball };

struct TestBody {
  BodyKind kind;
  int dim;
  std::vector<Real> params;  // half-widths (box) or {radius} (ball)
  Real volume;

  static TestBody box(std::vector<Real> half_widths) {
    if (half_widths.empty()) throw Error("box needs at least one half-width");
    Real v = 1;
    for (Real h : half_widths) {
      if (h < 0) throw Error("half-widths must be nonnegative");
      v *= 2 * h;
    }
    const int n = static_cast<int>(half_widths.size());
    return {BodyKind::centered_box, n, std::move(half_widths), v};
  }

  static TestBody ball(int dim, Real radius) {
    if (dim < 1 || radius < 0) throw Error("ball needs dim >= 1 and radius >= 0");
    const Real n = dim;
    const Real v = std::pow(std::numbers::pi_v<Real>, n / 2) / std::tgamma(n / 2 + 1) * std::pow(radius, n);
    return {BodyKind::centered_ball, dim, {radius}, v};
  }

  /// "box:h1,h2" or "ball:r" (ball needs the dimension).
  static TestBody parse(const std::string& text, int dim) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("body must look like box:h1,h2 or ball:r");
    const std::string kind = text.substr(0, colon);
    std::vector<Real> vals;
    std::stringstream ss(text.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) vals.push_back(std::stold(tok));
    if (kind == "box") {
      if (static_cast<int>(vals.size()) != dim) throw Error("box needs one half-width per dimension");
      return box(vals);
    }
    if (kind == "ball" && vals.size() == 1) return ball(dim, vals[0]);
    throw Error("unknown body: " + text);
  }

  Real circumradius() const {
    if (kind == BodyKind::centered_ball) return params[0];
    Real s = 0;
    for (Real h : params) s += h * h;
    return std::sqrt(s);
  }

  bool contains(std::span<const Real> x) const {
    if (kind == BodyKind::centered_ball) {
      Real s = 0;
      for (Real v : x) s += v * v;
      return s <= params[0] * params[0];
    }
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::fabs(x[i]) > params[i]) return false;
    return true;
  }

  std::string describe() const {
    std::string s = kind == BodyKind::centered_box ? "box:" : "ball:";
    for (std::size_t i = 0; i < params.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.12Lg", i ? "," : "", params[i]);
      s += buf;
    }
    return s;
  }
};

/// Nonzero vectors of the lattice lying in the body, as real points.
inline std::vector<std::vector<Real>> lattice_points_in_body(const RealLatticeBasis& b, const TestBody& body,
                                                             std::uint64_t budget = kDefaultMinimaBudget) {
  if (body.dim != b.dim()) throw Error("body and lattice dimensions differ");
  std::vector<std::vector<Real>> out;
  const Real R = body.circumradius();
  if (!(R > 0)) return out;
  const ShortVectorEnumerator en(b.numer());
  en.enumerate(
      R / b.factor(),
      [&](const IntVector& z) {
        auto x = b.point(z);
        if (body.contains(x)) out.push_back(std::move(x));
      },
      budget);
  return out;
}

inline std::size_t count_in_body(const RealLatticeBasis& b, const TestBody& body,
                                 std::uint64_t budget = kDefaultMinimaBudget) {
  return lattice_points_in_body(b, body, budget).size();
}

struct SiegelStatistic {
  Real mean_count;
  Real predicted;  // volume of the body
  std::size_t lattices;
};

inline SiegelStatistic siegel_statistic(const std::vector<RealLatticeBasis>& bases, const TestBody& body,
                                        unsigned threads = 1, std::uint64_t budget = kDefaultMinimaBudget) {
  if (bases.empty()) throw Error("siegel_statistic needs at least one lattice");
  const auto counts =
      parallel_map<std::size_t>(bases.size(), threads, [&](std::size_t i) { return count_in_body(bases[i], body, budget); });
  Real total = 0;
  for (auto c : counts) total += static_cast<Real>(c);
  return {total / static_cast<Real>(bases.size()), body.volume, bases.size()};
}

struct SmallBallPoint {
  Real r;
  Real fraction;  // fraction of lattices with lambda_1 < r
};

inline std::vector<Real> lambda1_values(const std::vector<RealLatticeBasis>& bases, const Gauge& gauge,
                                        unsigned threads = 1, std::uint64_t budget = kDefaultMinimaBudget) {
  if (!gauge.symmetric()) throw Error("small-ball statistic needs a symmetric gauge");
  return parallel_map<Real>(bases.size(), threads,
                            [&](std::size_t i) { return successive_minima(bases[i], gauge, budget).lambdas.front(); });
}

inline std::vector<SmallBallPoint> small_ball_fractions(std::span<const Real> lambda1, std::span<const Real> r_grid) {
  if (lambda1.empty()) throw Error("small-ball statistic needs at least one lattice");
  for (std::size_t k = 0; k < r_grid.size(); ++k)
    if (!(r_grid[k] > 0) || (k && !(r_grid[k] > r_grid[k - 1])))
      throw Error("small-ball grid must be positive and increasing");
  std::vector<Real> s(lambda1.begin(), lambda1.end());
  std::sort(s.begin(), s.end());
  std::vector<SmallBallPoint> out;
  for (Real r : r_grid) {
    const auto k = std::lower_bound(s.begin(), s.end(), r) - s.begin();
    out.push_back({r, static_cast<Real>(k) / static_cast<Real>(s.size())});
  }
  return out;
}

inline std::vector<SmallBallPoint> lambda1_small_ball(const std::vector<RealLatticeBasis>& bases, const Gauge& gauge,
                                                      std::span<const Real> r_grid, unsigned threads = 1) {
  const auto l1 = lambda1_values(bases, gauge, threads);
  return small_ball_fractions(l1, r_grid);
}

}  // namespace frobgeom
