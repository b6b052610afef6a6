#pragma once

// Run configuration and the CSV / JSON artifacts, with readers for each.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "frobgeom/ensemble.hpp"
#include "frobgeom/lattice.hpp"

namespace frobgeom {

using Json = nlohmann::ordered_json;

inline std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  return buf;
}

/// Everything that determines an artifact. The thread count is deliberately
/// not part of it: output does not depend on it.
struct RunConfig {
  std::string subcommand;
  std::string domain = "cube";
  int dim = 3;
  Real T = 0;
  std::string mode = "exhaustive";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Real tol = 1e-6L;
  std::vector<Real> r_grid;
  std::vector<Real> T_list;
  i64 min_coord = 1;
  std::string body;
  std::string gauge;
  std::vector<i64> a;
  std::string out;
  std::string format = "csv";

  Json to_json() const {
    Json j;
    j["subcommand"] = subcommand;
    j["domain"] = domain;
    j["dim"] = dim;
    j["T"] = static_cast<double>(T);
    j["mode"] = mode;
    j["n"] = n;
    j["seed"] = seed;
    j["tol"] = static_cast<double>(tol);
    Json g = Json::array();
    for (Real r : r_grid) g.push_back(static_cast<double>(r));
    j["r_grid"] = g;
    Json tl = Json::array();
    for (Real t : T_list) tl.push_back(static_cast<double>(t));
    j["T_list"] = tl;
    j["min_coord"] = min_coord;
    j["body"] = body;
    j["gauge"] = gauge;
    j["a"] = a;
    j["format"] = format;
    return j;
  }

  static RunConfig from_json(const Json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.domain = j.at("domain").get<std::string>();
    c.dim = j.at("dim").get<int>();
    c.T = j.at("T").get<double>();
    c.mode = j.at("mode").get<std::string>();
    c.n = j.at("n").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.tol = j.at("tol").get<double>();
    for (double r : j.at("r_grid")) c.r_grid.push_back(r);
    for (double t : j.at("T_list")) c.T_list.push_back(t);
    c.min_coord = j.at("min_coord").get<i64>();
    c.body = j.at("body").get<std::string>();
    c.gauge = j.at("gauge").get<std::string>();
    c.a = j.at("a").get<std::vector<i64>>();
    c.format = j.at("format").get<std::string>();
    return c;
  }
};

// ---------------------------------------------------------------------------
// Ensemble CSV: "# config: {...}" then the header and one row per record.

inline constexpr const char* kConfigPrefix = "# config: ";

inline std::string csv_header(int d) {
  std::string h;
  for (int i = 1; i <= d; ++i) h += "a" + std::to_string(i) + ",";
  return h + "F,sum_a,root_prod,q_stat,q_stat_nosum";
}

inline void write_record_row(std::ostream& os, const EnsembleRecord& r) {
  for (i64 c : r.a.coords()) os << c << ',';
  os << r.F << ',' << r.sum_a << ',' << format_real(r.root_prod) << ',' << format_real(r.q_stat) << ','
     << format_real(r.q_stat_nosum) << '\n';
}

inline void write_ensemble_csv(std::ostream& os, const RunConfig& cfg, const std::vector<EnsembleRecord>& records,
                               int d) {
  os << kConfigPrefix << cfg.to_json().dump() << '\n' << csv_header(d) << '\n';
  for (const auto& r : records) write_record_row(os, r);
}

struct EnsembleCsv {
  std::optional<RunConfig> config;
  std::vector<EnsembleRecord> records;
};

inline EnsembleCsv read_ensemble_csv(std::istream& in) {
  EnsembleCsv out;
  std::string line;
  int d = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind(kConfigPrefix, 0) == 0) {
      out.config = RunConfig::from_json(Json::parse(line.substr(std::string(kConfigPrefix).size())));
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (d < 0) {
      if (cells.size() < 6 || cells[0] != "a1") throw Error("ensemble CSV: missing header");
      d = static_cast<int>(cells.size()) - 5;
      if (line != csv_header(d)) throw Error("ensemble CSV: unexpected header");
      continue;
    }
    if (static_cast<int>(cells.size()) != d + 5) throw Error("ensemble CSV: wrong number of cells");
    IntVector a(d);
    for (int i = 0; i < d; ++i) a[i] = std::stoll(cells[i]);
    EnsembleRecord r;
    r.a = PrimitivePoint(a);
    r.F = std::stoll(cells[d]);
    r.sum_a = std::stoll(cells[d + 1]);
    r.root_prod = std::stold(cells[d + 2]);
    r.q_stat = std::stold(cells[d + 3]);
    r.q_stat_nosum = std::stold(cells[d + 4]);
    out.records.push_back(std::move(r));
  }
  if (d < 0) throw Error("ensemble CSV: missing header");
  return out;
}

// ---------------------------------------------------------------------------
// Summary JSON.

struct EnsembleSummary {
  std::string domain;
  int dim;
  Real T;
  std::string mode;
  std::uint64_t seed;
  std::size_t count;
  Real zeta_d;
  std::vector<std::pair<Real, Real>> ecdf_grid;  // (R, ECDF(R))
  std::vector<std::pair<Real, Real>> psi_grid;   // (R, fraction > R)
  std::optional<Real> tail_slope;
};

/// ECDF and tail fractions on the grid; the slope is left empty when the
/// fit is refused (too few records or too few positive fractions).
inline EnsembleSummary summarize(const Ensemble& e, std::span<const Real> r_grid) {
  EnsembleSummary s{e.domain.name(), e.domain.dim(), e.T, e.mode.name(), e.mode.seed, e.records.size(),
                    zeta(e.domain.dim()), {}, {}, std::nullopt};
  if (e.records.empty()) return s;
  const ECDF ecdf(q_stats(e.records));
  for (Real r : r_grid) {
    s.ecdf_grid.emplace_back(r, ecdf(r));
    s.psi_grid.emplace_back(r, static_cast<Real>(ecdf.count_above(r)) / static_cast<Real>(ecdf.size()));
  }
  try {
    s.tail_slope = tail_fit(e.records, r_grid).slope;
  } catch (const Error&) {
  }
  return s;
}

inline Json to_json(const EnsembleSummary& s, const RunConfig& cfg) {
  auto pairs = [](const std::vector<std::pair<Real, Real>>& v) {
    Json a = Json::array();
    for (const auto& [x, y] : v) a.push_back({static_cast<double>(x), static_cast<double>(y)});
    return a;
  };
  Json j;
  j["domain"] = s.domain;
  j["dim"] = s.dim;
  j["T"] = static_cast<double>(s.T);
  j["mode"] = s.mode;
  j["seed"] = s.seed;
  j["count"] = s.count;
  j["zeta_d"] = static_cast<double>(s.zeta_d);
  j["ecdf_grid"] = pairs(s.ecdf_grid);
  j["psi_grid"] = pairs(s.psi_grid);
  j["tail_slope"] = s.tail_slope ? Json(static_cast<double>(*s.tail_slope)) : Json(nullptr);
  j["config"] = cfg.to_json();
  return j;
}

inline EnsembleSummary summary_from_json(const Json& j) {
  auto pairs = [](const Json& a) {
    std::vector<std::pair<Real, Real>> v;
    for (const auto& p : a) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return v;
  };
  EnsembleSummary s;
  s.domain = j.at("domain").get<std::string>();
  s.dim = j.at("dim").get<int>();
  s.T = j.at("T").get<double>();
  s.mode = j.at("mode").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.count = j.at("count").get<std::size_t>();
  s.zeta_d = j.at("zeta_d").get<double>();
  s.ecdf_grid = pairs(j.at("ecdf_grid"));
  s.psi_grid = pairs(j.at("psi_grid"));
  if (!j.at("tail_slope").is_null()) s.tail_slope = j.at("tail_slope").get<double>();
  return s;
}

// ---------------------------------------------------------------------------
// Lattice JSON: {"numer": [[...]], "denom": k, "scale": s} (rows of the
// matrix whose columns are basis vectors) or {"columns": [[...], ...]} with
// one real basis vector per entry.

inline Json lattice_to_json(const RealLatticeBasis& b) {
  Json rows = Json::array();
  for (int i = 0; i < b.dim(); ++i) {
    Json r = Json::array();
    for (int j = 0; j < b.dim(); ++j) r.push_back(b.numer()(i, j));
    rows.push_back(r);
  }
  Json cols = Json::array();
  const RealMatrix c = b.columns();
  for (int j = 0; j < b.dim(); ++j) {
    Json v = Json::array();
    for (int i = 0; i < b.dim(); ++i) v.push_back(static_cast<double>(c(i, j)));
    cols.push_back(v);
  }
  Json j;
  j["numer"] = rows;
  j["denom"] = b.denom();
  j["scale"] = static_cast<double>(b.scale());
  j["columns"] = cols;
  return j;
}

inline RealLatticeBasis lattice_from_json(const Json& j) {
  if (j.contains("numer")) {
    const auto rows = j.at("numer").get<std::vector<std::vector<i64>>>();
    const int n = static_cast<int>(rows.size());
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) throw Error("lattice JSON: numer must be square");
      for (int k = 0; k < n; ++k) m(i, k) = rows[i][k];
    }
    const i64 den = j.value("denom", i64(1));
    const Real scale = j.value("scale", 1.0);
    return RealLatticeBasis(m, den, scale);
  }
  if (j.contains("columns")) {
    const auto cols = j.at("columns").get<std::vector<std::vector<double>>>();
    const int n = static_cast<int>(cols.size());
    RealMatrix m(n, n);
    for (int k = 0; k < n; ++k) {
      if (static_cast<int>(cols[k].size()) != n) throw Error("lattice JSON: columns must be square");
      for (int i = 0; i < n; ++i) m(i, k) = cols[k][i];
    }
    return RealLatticeBasis::from_real(m);
  }
  throw Error("lattice JSON needs \"numer\" or \"columns\"");
}

inline RealLatticeBasis load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read lattice file " + path);
  return lattice_from_json(Json::parse(in));
}

}  // namespace frobgeom
