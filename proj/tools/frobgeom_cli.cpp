// frobgeom: command-line front end. Every artifact carries the run
// configuration; output does not depend on --threads.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>

#include "frobgeom/frobgeom.hpp"

using namespace frobgeom;

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitUsage = 1;

struct Options {
  RunConfig cfg;
  unsigned threads = 1;
  std::string r_grid;
  std::string T_list;
  std::string a_list;
  std::string lattice_path;
  std::string method = "both";
  std::string custom_path;
  Real custom_volume = 0;
  bool apery = false;
  std::size_t max_list = 20;
  std::vector<i64> positional;
};

std::vector<Real> parse_reals(const std::string& s) {
  std::vector<Real> v;
  if (s.empty()) return v;
  if (s.rfind("geom:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(s.substr(5));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error("grid must be geom:lo:hi:points");
    return geometric_grid(std::stold(parts[0]), std::stold(parts[1]), std::stoul(parts[2]));
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) v.push_back(std::stold(p));
  return v;
}

std::vector<i64> parse_ints(const std::string& s) {
  std::vector<i64> v;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) v.push_back(std::stoll(p));
  return v;
}

void emit(const Options& o, const std::string& text) {
  if (o.cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.cfg.out, std::ios::binary);
  if (!f) throw Error("cannot write " + o.cfg.out);
  f << text;
}

Domain make_domain(const Options& o) {
  if (o.cfg.domain == "custom") {
    if (o.custom_path.empty() || !(o.custom_volume > 0))
      throw Error("custom domain needs --halfspaces and --volume");
    return load_custom_domain(o.custom_path, o.cfg.dim, o.custom_volume);
  }
  return domain_from_name(o.cfg.domain, o.cfg.dim);
}

Json real_array(std::span<const Real> v) {
  Json a = Json::array();
  for (Real x : v) a.push_back(static_cast<double>(x));
  return a;
}

Json minima_json(const MinimaResult& m) {
  Json j;
  j["lambdas"] = real_array(m.lambdas);
  j["witnesses"] = m.witnesses;
  return j;
}

Json covering_json(const CoveringResult& r) {
  Json j;
  j["value"] = static_cast<double>(r.value);
  j["method"] = to_string(r.method);
  j["bracket"] = {static_cast<double>(r.lower), static_cast<double>(r.upper)};
  j["tol"] = static_cast<double>(r.tol);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int run_frobenius(Options& o) {
  auto& a = o.positional.empty() ? o.cfg.a : o.positional;
  o.cfg.a = a;
  const PrimitivePoint p(a);
  const auto r = frobenius_number(p, o.apery);
  Json j;
  j["a"] = a;
  j["F"] = r.value;
  j["algorithm"] = to_string(r.algorithm);
  if (r.apery) j["apery"] = *r.apery;
  const IntVector s = p.sorted();
  if (s.size() >= 2 && s.front() >= 2) {
    const auto b = classical_bounds(s);
    j["bounds"] = {{"erdos_graham", b.erdos_graham}, {"selmer", b.selmer}};
    if (b.vitek) j["bounds"]["vitek"] = *b.vitek;
  }
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

int run_lattice(Options& o) {
  if (!o.positional.empty()) o.cfg.a = o.positional;
  const PrimitivePoint p(o.cfg.a);
  const IntVector s = p.sorted();
  const auto M = basis_M_a(s);
  const auto L = L_a_basis(s);
  const auto C = construction_via_intersection(s);
  Json mcols = Json::array();
  for (int j = 0; j < M.columns.cols(); ++j) mcols.push_back(M.columns.column(j));
  Json j;
  j["a"] = o.cfg.a;
  j["sorted"] = s;
  j["M_a"] = {{"columns", mcols}, {"det", M.det_abs}};
  j["L_a"] = lattice_to_json(L);
  j["L_a"]["det"] = static_cast<double>(L.det());
  j["intersection"] = lattice_to_json(C);
  j["equal"] = lattice_equal(L, C);
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

RealLatticeBasis lattice_input(Options& o) {
  if (!o.lattice_path.empty()) return load_lattice(o.lattice_path);
  if (o.cfg.a.empty()) throw Error("give --lattice <json> or --a a1,...,ad");
  return L_a_basis(o.cfg.a);
}

int run_minima(Options& o) {
  if (o.cfg.gauge.empty()) o.cfg.gauge = "diff-simplex";
  const auto b = lattice_input(o);
  const Gauge g{gauge_kind_from_string(o.cfg.gauge), b.dim()};
  Json j = minima_json(successive_minima(b, g));
  j["gauge"] = o.cfg.gauge;
  j["lattice"] = lattice_to_json(b);
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

int run_covering(Options& o) {
  Json j;
  if (!o.lattice_path.empty()) {
    const auto b = load_lattice(o.lattice_path);
    j["bounds"] = {static_cast<double>(covering_bounds(b).lower), static_cast<double>(covering_bounds(b).upper)};
    if (b.dim() == 2) j["planar"] = covering_json(covering_radius_planar(b, o.cfg.tol));
  } else {
    if (o.cfg.a.empty()) throw Error("give --a a1,...,ad or --lattice <json>");
    const PrimitivePoint p(o.cfg.a);
    const auto ident = covering_radius_via_frobenius(p);
    const bool planar_ok = p.dim() == 3;
    if (o.method == "identity" || o.method == "both" || !planar_ok) {
      auto r = ident;
      if (!planar_ok) r.method = CoveringMethod::sandwich_only;
      j["identity"] = covering_json(r);
    }
    if ((o.method == "planar" || o.method == "both") && planar_ok) {
      const auto planar = covering_radius_planar(L_a_basis(p), o.cfg.tol);
      j["planar"] = covering_json(planar);
      if (o.method == "both") j["residual"] = static_cast<double>(std::fabs(planar.value - ident.value));
    }
    if (o.method != "identity" && o.method != "planar" && o.method != "both")
      throw Error("--method must be identity, planar or both");
  }
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

Ensemble ensemble_for(Options& o) {
  const Domain dom = make_domain(o);
  const PointFilter filter{o.cfg.min_coord};
  if (o.cfg.mode == "exhaustive") return build_ensemble(dom, o.cfg.T, EnsembleMode::exhaustive_mode(), filter, o.threads);
  if (o.cfg.mode == "sample") {
    if (o.cfg.n == 0) throw Error("sample mode needs --n");
    return build_ensemble(dom, o.cfg.T, EnsembleMode::sampled(o.cfg.n, o.cfg.seed), filter, o.threads);
  }
  throw Error("--mode must be exhaustive or sample");
}

int run_ensemble(Options& o) {
  const auto e = ensemble_for(o);
  if (o.cfg.format == "csv") {
    std::ostringstream os;
    write_ensemble_csv(os, o.cfg, e.records, e.domain.dim());
    emit(o, os.str());
  } else if (o.cfg.format == "json") {
    std::vector<Real> grid = o.cfg.r_grid;
    if (grid.empty() && e.records.size() >= kMinTailSample) grid = default_tail_grid(q_stats(e.records));
    emit(o, dump(to_json(summarize(e, grid), o.cfg)));
  } else {
    throw Error("--format must be csv or json");
  }
  return 0;
}

int run_distribution(Options& o) {
  if (o.cfg.mode != "exhaustive") throw Error("distribution needs --mode exhaustive");
  if (o.cfg.r_grid.empty()) throw Error("distribution needs --r-grid");
  const auto e = ensemble_for(o);
  std::ostringstream os;
  os << kConfigPrefix << o.cfg.to_json().dump() << "\nR,lhs,reference\n";
  for (Real R : o.cfg.r_grid) {
    const auto v = distribution_value(e, R);
    os << format_real(R) << ',' << format_real(v.lhs) << ',' << format_real(v.reference) << '\n';
  }
  emit(o, os.str());
  return 0;
}

int run_tail(Options& o) {
  const auto e = ensemble_for(o);
  const auto q = q_stats(e.records);
  const std::vector<Real> grid = o.cfg.r_grid.empty() ? default_tail_grid(q) : o.cfg.r_grid;
  const auto fit = tail_fit(q, grid);
  Json j;
  j["count"] = e.records.size();
  j["r_grid"] = real_array(fit.r_grid);
  j["psi_hat"] = real_array(fit.psi_hat);
  j["slope"] = static_cast<double>(fit.slope);
  j["intercept"] = static_cast<double>(fit.intercept);
  j["r2"] = static_cast<double>(fit.r2);
  j["expected_slope"] = -(e.domain.dim() - 1);
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

int run_convergence(Options& o) {
  if (o.cfg.T_list.size() < 2) throw Error("convergence needs --T-list with at least two values");
  const auto rep = convergence_report(make_domain(o), o.cfg.T_list, o.cfg.r_grid, PointFilter{o.cfg.min_coord}, o.threads);
  Json steps = Json::array();
  for (const auto& s : rep.steps)
    steps.push_back({{"T_from", static_cast<double>(s.T_from)}, {"T_to", static_cast<double>(s.T_to)},
                     {"ks", static_cast<double>(s.ks)}});
  Json ecdf = Json::array();
  for (const auto& row : rep.ecdf_on_grid) ecdf.push_back(real_array(row));
  Json j;
  j["T"] = real_array(rep.T);
  j["counts"] = rep.counts;
  j["r_grid"] = real_array(o.cfg.r_grid);
  j["ecdf_on_grid"] = ecdf;
  j["ks"] = steps;
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

int run_siegel(Options& o) {
  if (o.cfg.body.empty()) throw Error("siegel needs --body box:h1,h2 or ball:r");
  const auto e = ensemble_for(o);
  std::vector<RealLatticeBasis> bases;
  bases.reserve(e.records.size());
  for (const auto& r : e.records) bases.push_back(L_a_basis(r.a));
  const TestBody body = TestBody::parse(o.cfg.body, o.cfg.dim - 1);
  const auto st = siegel_statistic(bases, body, o.threads);
  Json j;
  j["mean"] = static_cast<double>(st.mean_count);
  j["predicted"] = static_cast<double>(st.predicted);
  j["n"] = st.lattices;
  if (!o.cfg.r_grid.empty()) {
    const Gauge g{o.cfg.gauge.empty() ? GaugeKind::diff_simplex : gauge_kind_from_string(o.cfg.gauge), o.cfg.dim - 1};
    Json sb = Json::array();
    for (const auto& p : lambda1_small_ball(bases, g, o.cfg.r_grid, o.threads))
      sb.push_back({static_cast<double>(p.r), static_cast<double>(p.fraction)});
    j["small_ball"] = sb;
  }
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  return 0;
}

int run_verify_identity(Options& o) {
  if (o.cfg.dim != 3) throw Error("verify-identity needs --dim 3");
  const Domain dom = make_domain(o);
  const auto pts = enumerate_primitive(dom, o.cfg.T, PointFilter{o.cfg.min_coord});
  const auto res = parallel_map<IdentityResidual>(pts.size(), o.threads, [&](std::size_t i) {
    return verify_identity(PrimitivePoint(pts[i].sorted()), o.cfg.tol);
  });
  Real worst = 0;
  Json offenders = Json::array();
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, res[i].residual);
    if (res[i].residual > o.cfg.tol) {
      ++violations;
      if (offenders.size() < o.max_list)
        offenders.push_back({{"a", pts[i].coords()}, {"residual", static_cast<double>(res[i].residual)}});
    }
  }
  Json j;
  j["checked"] = pts.size();
  j["max_residual"] = static_cast<double>(worst);
  j["tol"] = static_cast<double>(o.cfg.tol);
  j["violations"] = violations;
  j["offenders"] = offenders;
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  std::cerr << "verify-identity: " << pts.size() << " points, max residual " << format_real(worst) << ", "
            << violations << " above tol\n";
  return violations ? kExitViolation : 0;
}

int run_verify_bounds(Options& o) {
  const auto e = ensemble_for(o);
  const auto rep = check_bound_dominance(e.records);
  std::map<std::string, std::size_t> by_bound;
  Json offenders = Json::array();
  for (const auto& v : rep.violations) {
    ++by_bound[v.bound];
    if (offenders.size() < o.max_list)
      offenders.push_back({{"a", v.a}, {"F", v.F}, {"bound", v.bound}, {"value", v.value}});
  }
  Json j;
  j["checked"] = rep.checked;
  j["comparisons"] = rep.comparisons;
  j["skipped_vacuous"] = rep.skipped_vacuous;
  j["violations"] = rep.violations.size();
  j["violations_by_bound"] = by_bound;
  j["offenders"] = offenders;
  j["config"] = o.cfg.to_json();
  emit(o, dump(j));
  std::cerr << "verify-bounds: " << rep.comparisons << " comparisons, " << rep.violations.size() << " violations\n";
  return rep.violations.empty() ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frobenius numbers, the lattices L_a and their covering radii"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--threads", o.threads, "worker threads (output does not depend on it)");
    s->add_option("--seed", o.cfg.seed, "seed for all randomness (default 0)");
    s->add_option("--out", o.cfg.out, "output path (default stdout)");
    s->add_option("--format", o.cfg.format, "csv or json");
  };
  auto ensemble_opts = [&](CLI::App* s) {
    s->add_option("--domain", o.cfg.domain, "cube, d0 or custom");
    s->add_option("--dim", o.cfg.dim, "dimension d");
    s->add_option("--T", o.cfg.T, "dilation");
    s->add_option("--mode", o.cfg.mode, "exhaustive or sample");
    s->add_option("--n", o.cfg.n, "sample size");
    s->add_option("--min-coord", o.cfg.min_coord, "smallest admissible coordinate (1 or 2)");
    s->add_option("--halfspaces", o.custom_path, "half-space file for --domain custom");
    s->add_option("--volume", o.custom_volume, "volume of the custom domain");
    s->add_option("--r-grid", o.r_grid, "comma list or geom:lo:hi:points");
  };

  auto* frob = app.add_subcommand("frobenius", "F(a) and the classical bounds");
  frob->add_option("a", o.positional, "generators")->required();
  frob->add_flag("--apery", o.apery, "include the Apery set");
  common(frob);

  auto* lat = app.add_subcommand("lattice", "M_a, L_a by both constructions, and their equality");
  lat->add_option("a", o.positional, "generators")->required();
  common(lat);

  auto* mins = app.add_subcommand("minima", "successive minima");
  mins->add_option("--lattice", o.lattice_path, "lattice JSON");
  mins->add_option("--a", o.a_list, "use L_a for a1,...,ad");
  mins->add_option("--gauge", o.cfg.gauge, "diff-simplex or polar-diff-simplex");
  common(mins);

  auto* cov = app.add_subcommand("covering", "covering radius of the simplex");
  cov->add_option("--a", o.a_list, "a1,...,ad");
  cov->add_option("--lattice", o.lattice_path, "lattice JSON");
  cov->add_option("--method", o.method, "identity, planar or both");
  cov->add_option("--tol", o.cfg.tol, "planar tolerance");
  common(cov);

  auto* ens = app.add_subcommand("ensemble", "records over T*D");
  ensemble_opts(ens);
  common(ens);

  auto* dist = app.add_subcommand("distribution", "T^-d #{q_stat <= R} on a grid");
  ensemble_opts(dist);
  common(dist);

  auto* tail = app.add_subcommand("tail", "tail fractions and log-log slope");
  ensemble_opts(tail);
  common(tail);

  auto* conv = app.add_subcommand("convergence", "KS distances between consecutive T");
  ensemble_opts(conv);
  conv->add_option("--T-list", o.T_list, "comma list of T")->required();
  common(conv);

  auto* sieg = app.add_subcommand("siegel", "mean lattice-point count in a centred body");
  ensemble_opts(sieg);
  sieg->add_option("--body", o.cfg.body, "box:h1,h2 or ball:r")->required();
  sieg->add_option("--gauge", o.cfg.gauge, "gauge for the small-ball fractions");
  common(sieg);

  auto* vid = app.add_subcommand("verify-identity", "planar covering radius against the Frobenius identity");
  ensemble_opts(vid);
  vid->add_option("--tol", o.cfg.tol, "residual tolerance");
  vid->add_option("--max-list", o.max_list, "offenders listed");
  common(vid);

  auto* vb = app.add_subcommand("verify-bounds", "F against the classical upper bounds");
  ensemble_opts(vb);
  vb->add_option("--max-list", o.max_list, "offenders listed");
  common(vb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    o.cfg.subcommand = sub->get_name();
    o.cfg.r_grid = parse_reals(o.r_grid);
    o.cfg.T_list = parse_reals(o.T_list);
    if (!o.a_list.empty()) o.cfg.a = parse_ints(o.a_list);
    if (o.cfg.subcommand == "verify-identity" && sub->count("--domain") == 0) o.cfg.domain = "d0";
    if (o.cfg.subcommand == "verify-bounds" && sub->count("--min-coord") == 0) o.cfg.min_coord = 2;
    if (o.cfg.subcommand == "tail" && sub->count("--mode") == 0) o.cfg.mode = "sample";
    if (o.cfg.subcommand == "ensemble" || o.cfg.subcommand == "distribution" || o.cfg.subcommand == "tail" ||
        o.cfg.subcommand == "siegel" || o.cfg.subcommand == "verify-identity" || o.cfg.subcommand == "verify-bounds")
      if (!(o.cfg.T > 0)) throw Error("--T must be positive");
    if (o.threads < 1) throw Error("--threads must be >= 1");

    const std::string& s = o.cfg.subcommand;
    if (s == "frobenius") return run_frobenius(o);
    if (s == "lattice") return run_lattice(o);
    if (s == "minima") return run_minima(o);
    if (s == "covering") return run_covering(o);
    if (s == "ensemble") return run_ensemble(o);
    if (s == "distribution") return run_distribution(o);
    if (s == "tail") return run_tail(o);
    if (s == "convergence") return run_convergence(o);
    if (s == "siegel") return run_siegel(o);
    if (s == "verify-identity") return run_verify_identity(o);
    if (s == "verify-bounds") return run_verify_bounds(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
