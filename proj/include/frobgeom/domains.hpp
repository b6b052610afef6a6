#pragma once

// Dilated domains T*D inside (0,1)^d, primitive point enumeration, sampling
// and the primitive-point counting ratio.

#include <fstream>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "frobgeom/core.hpp"

namespace frobgeom {

/// Integer vector with positive coprime coordinates.
class PrimitivePoint {
 public:
  PrimitivePoint() = default;
  explicit PrimitivePoint(IntVector coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw Error("primitive point needs at least one coordinate");
    for (i64 c : coords_)
      if (c < 1) throw Error("primitive point coordinates must be >= 1");
    if (gcd(coords_) != 1) throw Error("coordinates are not coprime");
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  const IntVector& coords() const { return coords_; }
  i64 operator[](int i) const { return coords_[i]; }

  /// Stable permutation carrying coords to nondecreasing order.
  std::vector<int> sorted_perm() const {
    std::vector<int> p(coords_.size());
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return coords_[a] < coords_[b]; });
    return p;
  }

  IntVector sorted() const {
    IntVector s = coords_;
    std::sort(s.begin(), s.end());
    return s;
  }

  i64 min() const { return *std::min_element(coords_.begin(), coords_.end()); }
  i64 sum() const {
    i64 s = 0;
    for (i64 c : coords_) s = checked_add(s, c);
    return s;
  }

  friend bool operator==(const PrimitivePoint&, const PrimitivePoint&) = default;
  friend auto operator<=>(const PrimitivePoint& a, const PrimitivePoint& b) { return a.coords_ <=> b.coords_; }

 private:
  IntVector coords_;
};

enum class DomainKind { unit_cube, d0_wedge, custom };

/// Strict inequality c[0] + c[1] x_1 + ... + c[d] x_d > 0.
struct HalfSpace {
  std::vector<Real> c;
};

/// Bounded open region D inside (0,1)^d.
class Domain {
 public:
  static Domain unit_cube(int dim) {
    check_dim(dim);
    Domain d(DomainKind::unit_cube, dim, 1);
    return d;
  }

  /// {x : 0 < x_i < x_d, 0 < x_d < 1}, volume 1/d.
  static Domain d0_wedge(int dim) {
    check_dim(dim);
    return Domain(DomainKind::d0_wedge, dim, Real(1) / dim);
  }

  /// Intersection of (0,1)^d with the given open half-spaces. The volume is
  /// not estimated and must be supplied.
  static Domain custom(int dim, std::vector<HalfSpace> halfspaces, Real volume) {
    check_dim(dim);
    if (!(volume > 0 && volume <= 1)) throw Error("custom domain volume must lie in (0, 1]");
    for (const auto& h : halfspaces)
      if (static_cast<int>(h.c.size()) != dim + 1)
        throw Error("half-space needs " + std::to_string(dim + 1) + " coefficients");
    Domain d(DomainKind::custom, dim, volume);
    d.halfspaces_ = std::move(halfspaces);
    return d;
  }

  /// Parses one inequality per line as whitespace-separated c0 c1 ... cd.
  /// Blank lines and lines starting with '#' are ignored.
  static Domain parse_halfspaces(std::istream& in, int dim, Real volume) {
    std::vector<HalfSpace> hs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      HalfSpace h;
      Real v;
      while (ls >> v) h.c.push_back(v);
      if (!ls.eof()) throw Error("malformed half-space on line " + std::to_string(lineno));
      if (static_cast<int>(h.c.size()) != dim + 1)
        throw Error("line " + std::to_string(lineno) + ": expected " + std::to_string(dim + 1) + " coefficients");
      hs.push_back(std::move(h));
    }
    return custom(dim, std::move(hs), volume);
  }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  Real volume() const { return volume_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }

  std::string name() const {
    switch (kind_) {
      case DomainKind::unit_cube: return "cube";
      case DomainKind::d0_wedge: return "d0";
      case DomainKind::custom: return "custom";
    }
    return "custom";
  }

  /// Axis-aligned box containing D (always (0,1)^d here).
  std::pair<std::vector<Real>, std::vector<Real>> bounding_box() const {
    return {std::vector<Real>(dim_, 0), std::vector<Real>(dim_, 1)};
  }

  bool contains(std::span<const Real> x) const {
    if (static_cast<int>(x.size()) != dim_) throw Error("dimension mismatch in Domain::contains");
    for (Real xi : x)
      if (!(xi > 0 && xi < 1)) return false;
    switch (kind_) {
      case DomainKind::unit_cube: return true;
      case DomainKind::d0_wedge:
        for (int i = 0; i + 1 < dim_; ++i)
          if (!(x[i] < x[dim_ - 1])) return false;
        return true;
      case DomainKind::custom:
        for (const auto& h : halfspaces_) {
          Real s = h.c[0];
          for (int i = 0; i < dim_; ++i) s += h.c[i + 1] * x[i];
          if (!(s > 0)) return false;
        }
        return true;
    }
    return false;
  }

  /// Membership of a / T in D without forming the quotient.
  bool contains_scaled(std::span<const i64> a, Real T) const {
    if (static_cast<int>(a.size()) != dim_) throw Error("dimension mismatch in Domain::contains_scaled");
    for (i64 ai : a)
      if (!(ai > 0 && static_cast<Real>(ai) < T)) return false;
    switch (kind_) {
      case DomainKind::unit_cube: return true;
      case DomainKind::d0_wedge:
        for (int i = 0; i + 1 < dim_; ++i)
          if (!(a[i] < a[dim_ - 1])) return false;
        return true;
      case DomainKind::custom:
        for (const auto& h : halfspaces_) {
          Real s = h.c[0] * T;
          for (int i = 0; i < dim_; ++i) s += h.c[i + 1] * static_cast<Real>(a[i]);
          if (!(s > 0)) return false;
        }
        return true;
    }
    return false;
  }

 private:
  Domain(DomainKind kind, int dim, Real volume) : kind_(kind), dim_(dim), volume_(volume) {}

  static void check_dim(int dim) {
    if (dim < 2) throw Error("domain dimension must be >= 2");
  }

  DomainKind kind_;
  int dim_;
  Real volume_;
  std::vector<HalfSpace> halfspaces_;
};

inline Domain domain_from_name(const std::string& name, int dim) {
  if (name == "cube") return Domain::unit_cube(dim);
  if (name == "d0") return Domain::d0_wedge(dim);
  throw Error("unknown domain '" + name + "' (expected cube or d0)");
}

inline Domain load_custom_domain(const std::string& path, int dim, Real volume) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read domain file " + path);
  return Domain::parse_halfspaces(in, dim, volume);
}

/// Options shared by enumeration and sampling.
struct PointFilter {
  i64 min_coord = 1;  // 2 restricts to coordinates >= 2
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 50'000'000;

/// Integer range strictly inside (T*lo, T*hi).
inline std::pair<i64, i64> open_integer_range(Real lo, Real hi, Real T) {
  const Real a = T * lo, b = T * hi;
  i64 first = static_cast<i64>(std::floor(a)) + 1;
  i64 last = static_cast<i64>(std::ceil(b)) - 1;
  return {first, last};
}

/// Number of integer points of T*(bounding box) that enumeration would scan.
inline std::uint64_t candidate_count(const Domain& domain, Real T, const PointFilter& filter = {}) {
  auto [lo, hi] = domain.bounding_box();
  long double total = 1;
  for (int i = 0; i < domain.dim(); ++i) {
    auto [first, last] = open_integer_range(lo[i], hi[i], T);
    first = std::max(first, filter.min_coord);
    total *= static_cast<long double>(std::max<i64>(0, last - first + 1));
  }
  return total > 1.8e19L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(total);
}

/// Visits the points of T*D with gcd 1 in lexicographic order.
template <class Fn>
void for_each_primitive(const Domain& domain, Real T, Fn&& fn, const PointFilter& filter = {},
                        std::uint64_t budget = kDefaultEnumerationBudget) {
  if (!(T > 0)) throw Error("dilation T must be positive");
  const std::uint64_t need = candidate_count(domain, T, filter);
  if (need > budget) throw BudgetExceeded("enumeration of T*D exceeds the candidate budget", need);
  const int d = domain.dim();
  auto [lo, hi] = domain.bounding_box();
  std::vector<i64> first(d), last(d);
  for (int i = 0; i < d; ++i) {
    std::tie(first[i], last[i]) = open_integer_range(lo[i], hi[i], T);
    first[i] = std::max(first[i], filter.min_coord);
    if (first[i] > last[i]) return;
  }
  IntVector a(first);
  // prefix gcds let the innermost loop test coprimality with one gcd call
  std::vector<i64> prefix(d + 1, 0);
  for (int i = 0; i < d; ++i) prefix[i + 1] = std::gcd(prefix[i], a[i]);
  while (true) {
    if (prefix[d] == 1 && domain.contains_scaled(a, T)) fn(std::as_const(a));
    int i = d - 1;
    while (i >= 0 && a[i] == last[i]) {
      a[i] = first[i];
      --i;
    }
    if (i < 0) break;
    ++a[i];
    for (int j = i; j < d; ++j) prefix[j + 1] = std::gcd(prefix[j], a[j]);
  }
}

inline std::vector<PrimitivePoint> enumerate_primitive(const Domain& domain, Real T, const PointFilter& filter = {},
                                                       std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<PrimitivePoint> out;
  for_each_primitive(
      domain, T, [&](const IntVector& a) { out.emplace_back(a); }, filter, budget);
  return out;
}

struct CountResult {
  std::uint64_t count;
  Real asymptotic_ratio;  // count * zeta(d) / (T^d vol(D))
};

inline CountResult count_primitive(const Domain& domain, Real T, const PointFilter& filter = {},
                                   std::uint64_t budget = kDefaultEnumerationBudget) {
  std::uint64_t count = 0;
  for_each_primitive(
      domain, T, [&](const IntVector&) { ++count; }, filter, budget);
  const Real ratio = static_cast<Real>(count) * zeta(domain.dim()) /
                     (std::pow(T, static_cast<Real>(domain.dim())) * domain.volume());
  return {count, ratio};
}

/// Lowest acceptance probability accepted by sample_primitive.
inline constexpr Real kMinAcceptance = 1e-4L;

/// Rejection-samples n primitive points of T*D; sample i draws from the
/// stream (seed, i) only.
inline std::vector<PrimitivePoint> sample_primitive(const Domain& domain, Real T, std::size_t n, std::uint64_t seed,
                                                    const PointFilter& filter = {}, unsigned threads = 1) {
  if (n < 1) throw Error("sample size must be >= 1");
  if (!(T > 0)) throw Error("dilation T must be positive");
  const int d = domain.dim();
  auto [lo, hi] = domain.bounding_box();
  std::vector<i64> first(d), last(d);
  Real box = 1;
  for (int i = 0; i < d; ++i) {
    std::tie(first[i], last[i]) = open_integer_range(lo[i], hi[i], T);
    first[i] = std::max(first[i], filter.min_coord);
    if (first[i] > last[i]) throw Error("T*D contains no admissible integer points");
    box *= static_cast<Real>(last[i] - first[i] + 1);
  }
  const Real expected = std::pow(T, static_cast<Real>(d)) * domain.volume() / zeta(d) / box;
  if (expected < kMinAcceptance)
    throw Error("acceptance probability below floor; domain is degenerate at this T");
  const std::uint64_t max_attempts = static_cast<std::uint64_t>(200.0L / std::max(expected, kMinAcceptance)) + 10'000;
  return parallel_map<PrimitivePoint>(n, threads, [&](std::size_t i) {
    Stream rng(seed, i);
    IntVector a(d);
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
      for (int k = 0; k < d; ++k) a[k] = rng.uniform_int(first[k], last[k]);
      if (gcd(a) == 1 && domain.contains_scaled(a, T)) return PrimitivePoint(a);
    }
    throw Error("rejection sampler exhausted its attempts; domain is degenerate at this T");
  });
}

}  // namespace frobgeom
