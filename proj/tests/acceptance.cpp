// Acceptance checks. Usage: acceptance <n> runs criterion n, acceptance all
// runs every criterion. One [PASS]/[FAIL] line per criterion; the exit code
// is nonzero if any criterion ran fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <thread>

#include "cli_runner.hpp"
#include "frobgeom/frobgeom.hpp"
#include "oracles.hpp"

using namespace frobgeom;

namespace {

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<IntVector> sorted_primitive(int d, i64 top) {
  std::vector<IntVector> out;
  IntVector a(d, 1);
  std::function<void(int, i64)> rec = [&](int i, i64 from) {
    if (i == d) {
      if (gcd(a) == 1) out.push_back(a);
      return;
    }
    for (i64 v = from; v <= top; ++v) {
      a[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, 1);
  return out;
}

Outcome c1() {
  Timer t;
  std::size_t pairs = 0, bad = 0;
  for (i64 a = 2; a <= 200; ++a)
    for (i64 b = a + 1; b <= 200; ++b) {
      if (std::gcd(a, b) != 1) continue;
      ++pairs;
      const auto r = frobenius_residue_graph(IntVector{a, b});
      bad += r.algorithm != FrobeniusAlgorithm::residue_graph || r.value != a * b - a - b;
    }
  const double s = t.seconds();
  return {bad == 0 && s < 1, fmt("%zu coprime pairs, %zu mismatches, %.3f s (limit 1 s)", pairs, bad, s)};
}

Outcome c2() {
  Timer t;
  const auto all = sorted_primitive(3, 30);
  std::size_t bad = 0;
  for (const auto& a : all) bad += frobenius_number(a).value != oracle::brute_frobenius(a);
  const double s = t.seconds();
  return {bad == 0 && s < 60, fmt("%zu triples, %zu mismatches, %.2f s (limit 60 s)", all.size(), bad, s)};
}

Outcome c3() {
  Timer t;
  const auto pts = enumerate_primitive(Domain::d0_wedge(3), 25);
  const auto res = parallel_map<IdentityResidual>(pts.size(), threads(),
                                                  [&](std::size_t i) { return verify_identity(pts[i], 1e-6L); });
  Real worst = 0;
  std::size_t bad = 0;
  for (const auto& r : res) {
    worst = std::max(worst, r.residual);
    bad += !(r.residual <= 1e-6L);
  }
  const double s = t.seconds();
  return {bad == 0 && s < 600,
          fmt("%zu points of 25*D0, %zu residuals > 1e-6, max %.3Le, %.1f s (limit 600 s)", pts.size(), bad, worst, s)};
}

Outcome c4() {
  Timer t;
  std::size_t n = 0, bad = 0;
  for (int d : {3, 4})
    for (const auto& a : sorted_primitive(d, 20)) {
      ++n;
      bad += !lattice_equal(L_a_basis(a), construction_via_intersection(a));
    }
  const double s = t.seconds();
  return {bad == 0 && s < 60, fmt("%zu vectors (d = 3, 4), %zu unequal, %.2f s (limit 60 s)", n, bad, s)};
}

Outcome c5() {
  Timer t;
  const auto c = count_primitive(Domain::unit_cube(3), 100);
  const double s = t.seconds();
  const Real dev = std::fabs(c.count * zeta(3) / 1e6L - 1);
  return {dev <= 0.03L && s < 30, fmt("count %llu, |count*zeta(3)/T^3 - 1| = %.5Lf, %.2f s (limit 30 s)",
                                      static_cast<unsigned long long>(c.count), dev, s)};
}

Outcome c6() {
  const auto pts = enumerate_primitive(Domain::unit_cube(3), 50);
  const auto res = parallel_map<MinkowskiCheck>(pts.size(), threads(),
                                                [&](std::size_t i) { return minkowski_check(L_a_basis(pts[i]), 3); });
  std::size_t bad = 0;
  Real lo = kInfinity, hi = 0;
  for (const auto& r : res) {
    bad += !(r.lower_ok && r.upper_ok);
    lo = std::min(lo, r.product);
    hi = std::max(hi, r.product);
  }
  return {bad == 0, fmt("%zu lattices, %zu violations, product in [%.6Lf, %.6Lf] vs [2, 4]", pts.size(), bad, lo, hi)};
}

Outcome c7() {
  constexpr Real slack = 1e-9L;
  std::size_t n = 0, bad = 0;
  const auto cube = enumerate_primitive(Domain::unit_cube(3), 50);
  const auto ident = parallel_map<CoveringResult>(cube.size(), threads(),
                                                  [&](std::size_t i) { return covering_radius_via_frobenius(cube[i]); });
  for (const auto& r : ident) {
    ++n;
    bad += !(r.lower <= r.value + slack && r.value <= r.upper + slack);
  }
  const auto d0 = enumerate_primitive(Domain::d0_wedge(3), 25);
  const auto planar = parallel_map<std::pair<CoveringResult, CoveringBounds>>(d0.size(), threads(), [&](std::size_t i) {
    const auto L = L_a_basis(d0[i]);
    return std::pair{covering_radius_planar(L, 1e-7L), covering_bounds(L)};
  });
  for (const auto& [r, b] : planar) {
    ++n;
    bad += !(b.lower <= r.value + slack && r.value <= b.upper + slack);
  }
  return {bad == 0, fmt("%zu identity values (50*cube) and %zu planar values (25*D0), %zu violations", ident.size(),
                        planar.size(), bad)};
}

Outcome c8() {
  const auto e = build_ensemble(Domain::unit_cube(3), 100, EnsembleMode::exhaustive_mode(), PointFilter{2}, threads());
  const auto rep = check_bound_dominance(e.records);
  std::map<std::string, std::size_t> by;
  for (const auto& v : rep.violations) ++by[v.bound];
  auto show = [](const char* label, const BoundViolation& v) {
    return fmt("; %s (%lld,%lld,%lld) F=%lld > %s %lld", label, static_cast<long long>(v.a[0]),
               static_cast<long long>(v.a[1]), static_cast<long long>(v.a[2]), static_cast<long long>(v.F),
               v.bound.c_str(), static_cast<long long>(v.value));
  };
  std::string first;
  std::size_t distinct = 0;
  for (const auto& v : rep.violations)
    if (v.a[0] < v.a[1] && v.a[1] < v.a[2] && distinct++ == 0) first += show("first with distinct coordinates", v);
  if (!rep.violations.empty()) first = show("first", rep.violations.front()) + first;
  first += fmt("; %zu violations have distinct coordinates", distinct);
  return {rep.violations.empty(),
          fmt("%zu records, %zu comparisons, %zu vacuous skipped, violations: erdos_graham %zu, selmer %zu, vitek %zu",
              rep.checked, rep.comparisons, rep.skipped_vacuous, by["erdos_graham"], by["selmer"], by["vitek"]) +
              first};
}

Outcome c9() {
  Timer t;
  const auto e = build_ensemble(Domain::unit_cube(3), 300, EnsembleMode::sampled(20000, 0), {}, threads());
  const auto grid = geometric_grid(2, 6, 9);
  const auto fit = tail_fit(e.records, grid);
  const double s = t.seconds();
  return {fit.slope >= -2.5L && fit.slope <= -1.5L && s < 600,
          fmt("n = %zu, seed 0, 9-point geometric grid on [2, 6]: slope %.4Lf (r2 %.4Lf), %.1f s", e.records.size(),
              fit.slope, fit.r2, s)};
}

Outcome c10() {
  Timer t;
  const std::vector<Real> Ts{50, 100, 200};
  const auto rep = convergence_report(Domain::unit_cube(3), Ts, geometric_grid(1, 8, 8), {}, threads());
  const double s = t.seconds();
  const Real k1 = rep.steps[0].ks, k2 = rep.steps[1].ks;
  return {k2 <= k1 + 0.01L && s < 900, fmt("KS(50,100) = %.5Lf, KS(100,200) = %.5Lf, %.1f s (limit 900 s)", k1, k2, s)};
}

std::vector<RealLatticeBasis> d0_lattices(Real T) {
  std::vector<RealLatticeBasis> out;
  for (const auto& a : enumerate_primitive(Domain::d0_wedge(3), T)) out.push_back(L_a_basis(a));
  return out;
}

Outcome c11() {
  const auto bases = d0_lattices(100);
  const auto body = TestBody::box({0.75, 1.0});
  const auto st = siegel_statistic(bases, body, threads());
  const Real rel = std::fabs(st.mean_count - st.predicted) / st.predicted;
  return {rel <= 0.1L, fmt("%zu lattices, %s (volume %.3Lf): mean count %.4Lf, relative deviation %.4Lf (limit 0.1)",
                           st.lattices, body.describe().c_str(), st.predicted, st.mean_count, rel)};
}

Outcome c12() {
  const auto bases = d0_lattices(100);
  const auto grid = geometric_grid(0.25, 0.5, 8);
  const auto fr = lambda1_small_ball(bases, Gauge{GaugeKind::diff_simplex, 2}, grid, threads());
  std::vector<Real> x, y;
  for (const auto& p : fr)
    if (p.fraction > 0) {
      x.push_back(std::log(p.r));
      y.push_back(std::log(p.fraction));
    }
  if (x.size() < 3) return {false, "fewer than 3 grid points with positive fraction"};
  const auto lf = least_squares(x, y);
  return {std::fabs(lf.slope - 2) <= 0.5L,
          fmt("%zu lattices, 8-point geometric grid on [0.25, 0.5]: slope %.4Lf (r2 %.4Lf)", bases.size(), lf.slope,
              lf.r2)};
}

Outcome c13() {
  const std::string dir = "acceptance_c13_";
  const std::vector<std::pair<std::string, std::string>> runs{
      {"ens_exh.csv", "ensemble --domain cube --dim 3 --T 60 --mode exhaustive"},
      {"ens_smp.csv", "ensemble --domain cube --dim 3 --T 300 --mode sample --n 5000 --seed 11"},
      {"ens_sum.json", "ensemble --domain cube --dim 3 --T 60 --format json"},
      {"tail.json", "tail --domain cube --dim 3 --T 300 --n 5000 --seed 3"},
      {"siegel.json", "siegel --domain d0 --dim 3 --T 40 --body box:0.75,1 --r-grid 0.3,0.4,0.5"},
  };
  std::size_t same = 0;
  std::string diff;
  for (const auto& [file, args] : runs) {
    const std::string p1 = dir + "t1_" + file, p8 = dir + "t8_" + file;
    const int r1 = run_cli(args + " --threads 1 --out " + p1).code;
    const int r8 = run_cli(args + " --threads 8 --out " + p8).code;
    const std::string a = slurp(p1), b = slurp(p8);
    if (r1 == 0 && r8 == 0 && !a.empty() && a == b)
      ++same;
    else
      diff += " " + file;
    std::remove(p1.c_str());
    std::remove(p8.c_str());
  }
  return {same == runs.size(),
          fmt("%zu of %zu artifacts byte-identical across --threads 1 and 8%s%s", same, runs.size(),
              diff.empty() ? "" : "; differing:", diff.c_str())};
}

const std::vector<std::pair<const char*, Outcome (*)()>> kCriteria{
    {"Sylvester exactness", c1},
    {"brute-force oracle agreement", c2},
    {"central identity", c3},
    {"construction equality", c4},
    {"counting", c5},
    {"Minkowski sandwich", c6},
    {"covering sandwich", c7},
    {"bound dominance", c8},
    {"tail exponent", c9},
    {"convergence trend", c10},
    {"Siegel mean count", c11},
    {"small-ball slope", c12},
    {"determinism", c13},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc < 2 || std::string(argv[1]) == "all") {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) which.push_back(i);
  } else {
    for (int k = 1; k < argc; ++k) which.push_back(std::atoi(argv[k]));
  }
  bool ok = true;
  for (int c : which) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << c << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = kCriteria[c - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << 'C' << c << ' ' << kCriteria[c - 1].first << ": " << o.detail
              << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
