#pragma once

// Ensembles of (a, F(a), normalized statistics) over T*D, empirical
// distribution functions, tail fractions and log-log tail fits, and the
// convergence-in-T diagnostics.

#include <optional>

#include "frobgeom/domains.hpp"
#include "frobgeom/frobenius.hpp"

namespace frobgeom {

struct EnsembleRecord {
  PrimitivePoint a;
  i64 F;
  i64 sum_a;
  Real root_prod;
  Real q_stat;        // (F + sum_a) / root_prod
  Real q_stat_nosum;  // F / root_prod
};

inline EnsembleRecord make_record(const PrimitivePoint& a) {
  EnsembleRecord r;
  r.a = a;
  r.F = frobenius_number(a).value;
  r.sum_a = a.sum();
  r.root_prod = root_product(a.coords());
  r.q_stat = static_cast<Real>(r.F + r.sum_a) / r.root_prod;
  r.q_stat_nosum = static_cast<Real>(r.F) / r.root_prod;
  return r;
}

struct EnsembleMode {
  enum Kind { exhaustive, sample } kind = exhaustive;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  static EnsembleMode exhaustive_mode() { return {}; }
  static EnsembleMode sampled(std::size_t n, std::uint64_t seed) { return {sample, n, seed}; }
  std::string name() const { return kind == exhaustive ? "exhaustive" : "sample"; }
};

struct Ensemble {
  Domain domain;
  Real T;
  EnsembleMode mode;
  PointFilter filter;
  std::vector<EnsembleRecord> records;
};

namespace detail {
inline constexpr std::size_t kRecordBatch = 1 << 16;
}

/// Calls fn(record) for every point of T*D in lexicographic order; records
/// are computed in batches across threads and delivered in order.
template <class Fn>
void for_each_record(const Domain& domain, Real T, Fn&& fn, const PointFilter& filter = {}, unsigned threads = 1,
                     std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<IntVector> batch;
  batch.reserve(detail::kRecordBatch);
  auto flush = [&] {
    auto recs = parallel_map<EnsembleRecord>(batch.size(), threads,
                                             [&](std::size_t i) { return make_record(PrimitivePoint(batch[i])); });
    for (const auto& r : recs) fn(r);
    batch.clear();
  };
  for_each_primitive(
      domain, T,
      [&](const IntVector& a) {
        batch.push_back(a);
        if (batch.size() == detail::kRecordBatch) flush();
      },
      filter, budget);
  if (!batch.empty()) flush();
}

inline Ensemble build_ensemble(const Domain& domain, Real T, const EnsembleMode& mode, const PointFilter& filter = {},
                               unsigned threads = 1, std::uint64_t budget = kDefaultEnumerationBudget) {
  Ensemble e{domain, T, mode, filter, {}};
  if (mode.kind == EnsembleMode::exhaustive) {
    for_each_record(
        domain, T, [&](const EnsembleRecord& r) { e.records.push_back(r); }, filter, threads, budget);
  } else {
    const auto pts = sample_primitive(domain, T, mode.n, mode.seed, filter, threads);
    e.records = parallel_map<EnsembleRecord>(pts.size(), threads, [&](std::size_t i) { return make_record(pts[i]); });
  }
  return e;
}

inline std::vector<Real> q_stats(const std::vector<EnsembleRecord>& records, bool include_sum = true) {
  std::vector<Real> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(include_sum ? r.q_stat : r.q_stat_nosum);
  return v;
}

/// Empirical distribution function of a finite sample (stored sorted).
class ECDF {
 public:
  ECDF() = default;
  explicit ECDF(std::vector<Real> values) : values_(std::move(values)) { std::sort(values_.begin(), values_.end()); }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<Real>& sorted_values() const { return values_; }

  /// Fraction of values <= r.
  Real operator()(Real r) const {
    if (values_.empty()) throw Error("evaluating an empty ECDF");
    const auto k = std::upper_bound(values_.begin(), values_.end(), r) - values_.begin();
    return static_cast<Real>(k) / static_cast<Real>(values_.size());
  }

  /// Number of values > r.
  std::size_t count_above(Real r) const {
    return values_.end() - std::upper_bound(values_.begin(), values_.end(), r);
  }

 private:
  std::vector<Real> values_;
};

inline Real ecdf_eval(const ECDF& e, Real r) { return e(r); }

/// Sup-distance between two ECDFs, evaluated exactly on the merged jump set.
inline Real ks_distance(const ECDF& e1, const ECDF& e2) {
  if (e1.empty() || e2.empty()) throw Error("KS distance needs nonempty samples");
  const auto& x = e1.sorted_values();
  const auto& y = e2.sorted_values();
  const Real n1 = static_cast<Real>(x.size()), n2 = static_cast<Real>(y.size());
  std::size_t i = 0, j = 0;
  Real best = 0;
  while (i < x.size() || j < y.size()) {
    Real v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    best = std::max(best, std::fabs(static_cast<Real>(i) / n1 - static_cast<Real>(j) / n2));
  }
  return best;
}

struct DistributionValue {
  Real lhs;        // T^-d #{q_stat <= R}
  Real reference;  // vol(D) / zeta(d)
};

inline DistributionValue distribution_value(const Ensemble& e, Real R) {
  if (e.mode.kind != EnsembleMode::exhaustive) throw Error("distribution_value needs an exhaustive ensemble");
  const int d = e.domain.dim();
  std::size_t count = 0;
  for (const auto& r : e.records)
    if (r.q_stat <= R) ++count;
  return {static_cast<Real>(count) / std::pow(e.T, static_cast<Real>(d)), e.domain.volume() / zeta(d)};
}

struct TailFit {
  std::vector<Real> r_grid;
  std::vector<Real> psi_hat;  // fraction of values > R
  Real slope = 0, intercept = 0, r2 = 0;
  std::size_t points_used = 0;
};

inline constexpr std::size_t kMinTailSample = 1000;

/// Geometric grid from the sample median to the value at rank n - 30.
inline std::vector<Real> default_tail_grid(std::span<const Real> values, std::size_t points = 12) {
  if (values.size() < kMinTailSample) throw Error("tail grid needs at least 1000 values");
  std::vector<Real> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const Real lo = s[s.size() / 2], hi = s[s.size() - 30];
  if (!(lo > 0) || !(hi > lo)) throw Error("degenerate tail: no spread above the median");
  std::vector<Real> g(points);
  for (std::size_t k = 0; k < points; ++k)
    g[k] = lo * std::pow(hi / lo, static_cast<Real>(k) / static_cast<Real>(points - 1));
  return g;
}

inline std::vector<Real> geometric_grid(Real lo, Real hi, std::size_t points) {
  if (!(lo > 0) || !(hi > lo) || points < 2) throw Error("geometric grid needs 0 < lo < hi and >= 2 points");
  std::vector<Real> g(points);
  for (std::size_t k = 0; k < points; ++k)
    g[k] = lo * std::pow(hi / lo, static_cast<Real>(k) / static_cast<Real>(points - 1));
  return g;
}

struct LineFit {
  Real slope, intercept, r2;
};

inline LineFit least_squares(std::span<const Real> x, std::span<const Real> y) {
  const auto n = static_cast<Real>(x.size());
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  Real sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error("least squares on a degenerate abscissa");
  const Real slope = sxy / sxx;
  return {slope, my - slope * mx, syy == 0 ? 1 : sxy * sxy / (sxx * syy)};
}

/// Psi-hat(R) on the grid and the least-squares slope of log Psi-hat
/// against log R over the grid points with Psi-hat > 0.
inline TailFit tail_fit(std::span<const Real> values, std::span<const Real> r_grid) {
  if (values.size() < kMinTailSample) throw Error("tail fit needs at least 1000 values");
  if (std::all_of(values.begin(), values.end(), [&](Real v) { return v == values[0]; }))
    throw Error("degenerate tail: constant sample");
  const ECDF e(std::vector<Real>(values.begin(), values.end()));
  TailFit fit;
  fit.r_grid.assign(r_grid.begin(), r_grid.end());
  std::vector<Real> lx, ly;
  for (Real r : r_grid) {
    if (!(r > 0)) throw Error("tail grid must be positive");
    const Real psi = static_cast<Real>(e.count_above(r)) / static_cast<Real>(e.size());
    fit.psi_hat.push_back(psi);
    if (psi > 0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(psi));
    }
  }
  if (lx.size() < 3) throw Error("tail fit needs at least 3 grid points with positive tail fraction");
  const auto lf = least_squares(lx, ly);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.r2 = lf.r2;
  fit.points_used = lx.size();
  return fit;
}

inline TailFit tail_fit(const std::vector<EnsembleRecord>& records, std::span<const Real> r_grid) {
  const auto v = q_stats(records);
  return tail_fit(v, r_grid);
}

struct ConvergenceStep {
  Real T_from, T_to;
  Real ks;
};

struct ConvergenceReport {
  std::vector<Real> T;
  std::vector<std::size_t> counts;
  std::vector<std::vector<Real>> ecdf_on_grid;  // per T, the ECDF at each grid point
  std::vector<ConvergenceStep> steps;           // KS between consecutive T
};

/// Exhaustive q_stat ECDFs for each T and KS distances between consecutive
/// ones. Only the statistic is kept, so large T stays within memory.
inline ConvergenceReport convergence_report(const Domain& domain, std::span<const Real> T_list,
                                            std::span<const Real> r_grid, const PointFilter& filter = {},
                                            unsigned threads = 1,
                                            std::uint64_t budget = kDefaultEnumerationBudget) {
  if (T_list.size() < 2) throw Error("convergence report needs at least two values of T");
  ConvergenceReport rep;
  std::vector<ECDF> ecdfs;
  for (Real T : T_list) {
    std::vector<Real> q;
    for_each_record(
        domain, T, [&](const EnsembleRecord& r) { q.push_back(r.q_stat); }, filter, threads, budget);
    if (q.empty()) throw Error("empty ensemble in convergence report");
    ecdfs.emplace_back(std::move(q));
    rep.T.push_back(T);
    rep.counts.push_back(ecdfs.back().size());
    std::vector<Real> row;
    for (Real r : r_grid) row.push_back(ecdfs.back()(r));
    rep.ecdf_on_grid.push_back(std::move(row));
  }
  for (std::size_t k = 0; k + 1 < ecdfs.size(); ++k)
    rep.steps.push_back({T_list[k], T_list[k + 1], ks_distance(ecdfs[k], ecdfs[k + 1])});
  return rep;
}

struct BoundViolation {
  IntVector a;  // sorted
  i64 F;
  std::string bound;
  i64 value;
};

struct DominanceReport {
  std::size_t checked = 0;  // records with all coordinates >= 2
  std::size_t comparisons = 0;
  std::size_t skipped_vacuous = 0;
  std::vector<BoundViolation> violations;
};

/// F <= each nonvacuous (nonnegative) classical bound, over the records
/// whose coordinates are all >= 2.
inline DominanceReport check_bound_dominance(const std::vector<EnsembleRecord>& records) {
  DominanceReport rep;
  for (const auto& r : records) {
    if (r.a.min() < 2 || r.a.dim() < 2) continue;
    ++rep.checked;
    const IntVector s = r.a.sorted();
    const auto b = classical_bounds(s);
    auto check = [&](const char* name, i64 value) {
      if (value < 0) {
        ++rep.skipped_vacuous;
        return;
      }
      ++rep.comparisons;
      if (r.F > value) rep.violations.push_back({s, r.F, name, value});
    };
    check("erdos_graham", b.erdos_graham);
    check("selmer", b.selmer);
    if (b.vitek) check("vitek", *b.vitek);
  }
  return rep;
}

}  // namespace frobgeom
