#pragma once

// Frobenius numbers: Sylvester's formula for two generators and shortest
// paths on the residue graph (Apery set) otherwise; the classical upper
// bounds; the normalized statistics.

#include <optional>
#include <span>
#include <string>

#include "frobgeom/domains.hpp"

namespace frobgeom {

enum class FrobeniusAlgorithm { sylvester, residue_graph };

inline std::string to_string(FrobeniusAlgorithm a) {
  return a == FrobeniusAlgorithm::sylvester ? "sylvester" : "residue_graph";
}

struct FrobeniusResult {
  i64 value;  // -1 when some generator equals 1
  std::optional<IntVector> apery;  // apery[r]: least representable integer = r mod min(a)
  FrobeniusAlgorithm algorithm;
};

namespace detail {

/// Dijkstra from residue 0 on the graph r -> (r + g) mod m, weight g, using a
/// circular bucket queue (Dial) with an occupancy bitmap. Buffers are reused
/// across calls on the same thread.
class ResidueGraphSolver {
 public:
  static constexpr i64 kInf = std::numeric_limits<i64>::max();

  const std::vector<i64>& solve(i64 m, std::span<const i64> generators) {
    gens_.clear();
    i64 max_w = 1;
    for (i64 g : generators) {
      if (g % m == 0) continue;
      if (std::find(gens_.begin(), gens_.end(), g) != gens_.end()) continue;
      gens_.push_back(g);
      max_w = std::max(max_w, g);
    }
    std::size_t width = 64;
    while (static_cast<i64>(width) <= max_w) width <<= 1;
    const std::size_t mask = width - 1;
    head_.assign(width, -1);
    bits_.assign(width / 64, 0);
    next_.clear();
    node_.clear();
    dist_.assign(static_cast<std::size_t>(m), kInf);
    done_.assign(static_cast<std::size_t>(m), 0);

    auto push = [&](i64 v, i64 d) {
      const std::size_t b = static_cast<std::size_t>(d) & mask;
      next_.push_back(head_[b]);
      node_.push_back(static_cast<std::int32_t>(v));
      head_[b] = static_cast<std::int32_t>(node_.size() - 1);
      bits_[b >> 6] |= (1ULL << (b & 63));
    };

    dist_[0] = 0;
    push(0, 0);
    i64 current = 0;
    i64 settled = 0;
    while (settled < m) {
      const std::size_t start = static_cast<std::size_t>(current) & mask;
      const std::size_t b = find_next(start, mask);
      current += static_cast<i64>((b - start) & mask);
      std::int32_t e = head_[b];
      head_[b] = -1;
      bits_[b >> 6] &= ~(1ULL << (b & 63));
      for (; e >= 0; e = next_[e]) {
        const i64 v = node_[e];
        if (done_[v] || dist_[v] != current) continue;
        done_[v] = 1;
        ++settled;
        for (i64 g : gens_) {
          i64 r = v + g % m;
          if (r >= m) r -= m;
          const i64 nd = current + g;
          if (nd < dist_[r]) {
            dist_[r] = nd;
            push(r, nd);
          }
        }
      }
    }
    return dist_;
  }

 private:
  std::size_t find_next(std::size_t start, std::size_t mask) const {
    const std::size_t words = bits_.size();
    std::size_t w = start >> 6;
    std::uint64_t word = bits_[w] & (~0ULL << (start & 63));
    for (std::size_t k = 0; k <= words; ++k) {
      if (word) return ((w << 6) | static_cast<std::size_t>(__builtin_ctzll(word))) & mask;
      w = (w + 1) % words;
      word = bits_[w];
    }
    throw Error("residue graph is disconnected; generators are not coprime");
  }

  IntVector gens_;
  std::vector<std::int32_t> head_, next_, node_;
  std::vector<std::uint64_t> bits_;
  std::vector<i64> dist_;
  std::vector<char> done_;
};

inline ResidueGraphSolver& thread_solver() {
  thread_local ResidueGraphSolver solver;
  return solver;
}

}  // namespace detail

namespace detail {
inline void check_generators(std::span<const i64> a) {
  if (a.empty()) throw Error("frobenius_number needs at least one generator");
  for (i64 x : a)
    if (x < 1) throw Error("generators must be positive");
  if (gcd(a) != 1) throw Error("generators are not coprime; the Frobenius number is undefined");
  if (*std::min_element(a.begin(), a.end()) > std::numeric_limits<std::int32_t>::max())
    throw Error("smallest generator too large for the residue graph");
}
}  // namespace detail

/// Shortest paths on the residue graph mod min(a), for any number of
/// generators (including two).
inline FrobeniusResult frobenius_residue_graph(std::span<const i64> a, bool with_apery = false) {
  detail::check_generators(a);
  const i64 m = *std::min_element(a.begin(), a.end());
  if (m == 1) {
    FrobeniusResult r{-1, std::nullopt, FrobeniusAlgorithm::residue_graph};
    if (with_apery) r.apery = IntVector{0};
    return r;
  }
  // distances stay below m * max(a)
  checked_mul(m, *std::max_element(a.begin(), a.end()));
  const auto& dist = detail::thread_solver().solve(m, a);
  const i64 top = *std::max_element(dist.begin(), dist.end());
  FrobeniusResult r{top - m, std::nullopt, FrobeniusAlgorithm::residue_graph};
  if (with_apery) r.apery = IntVector(dist.begin(), dist.end());
  return r;
}

/// Largest integer not representable as a nonnegative combination of a.
inline FrobeniusResult frobenius_number(std::span<const i64> a, bool with_apery = false) {
  detail::check_generators(a);
  if (a.size() != 2) return frobenius_residue_graph(a, with_apery);
  const i64 m = std::min(a[0], a[1]);
  const i64 x = a[0], y = a[1];
  FrobeniusResult r{checked_mul(x, y) - x - y, std::nullopt, FrobeniusAlgorithm::sylvester};
  if (with_apery) {
    const i64 other = (x == m) ? y : x;
    IntVector apery(static_cast<std::size_t>(m));
    for (i64 k = 0; k < m; ++k) apery[static_cast<std::size_t>(checked_mul(k, other) % m)] = k * other;
    r.apery = std::move(apery);
  }
  return r;
}

inline FrobeniusResult frobenius_number(const PrimitivePoint& a, bool with_apery = false) {
  return frobenius_number(std::span<const i64>(a.coords()), with_apery);
}

/// The three classical upper bounds (Erdos-Graham, Selmer, Vitek) evaluated
/// verbatim; they may be negative (vacuous) for small a_1.
struct ClassicalBounds {
  i64 erdos_graham;
  i64 selmer;
  std::optional<i64> vitek;  // absent for d = 2
};

inline ClassicalBounds classical_bounds(std::span<const i64> sorted) {
  const auto d = static_cast<i64>(sorted.size());
  if (d < 2) throw Error("classical bounds need at least two generators");
  if (!std::is_sorted(sorted.begin(), sorted.end())) throw Error("classical bounds need sorted generators");
  for (i64 x : sorted)
    if (x < 2) throw Error("classical bounds need every generator >= 2");
  const i64 a1 = sorted[0], ad = sorted[d - 1], ad1 = sorted[d - 2];
  ClassicalBounds b{};
  b.erdos_graham = checked_mul(2 * ad, a1 / d) - a1;
  b.selmer = checked_mul(2 * ad1, ad / d) - ad;
  if (d >= 3) b.vitek = checked_mul(ad - 2, sorted[1] - 1) / 2 - 1;
  return b;
}

/// (a_1 ... a_d)^{1/(d-1)} in extended precision.
inline Real root_product(std::span<const i64> a) {
  const auto d = a.size();
  if (d < 2) throw Error("root_product needs d >= 2");
  Real prod = 1;
  bool exact = true;
  i128 iprod = 1;
  for (i64 x : a) {
    prod *= static_cast<Real>(x);
    if (exact) {
      iprod *= x;
      if (iprod > (i128(1) << 63)) exact = false;
    }
  }
  if (d == 2) return prod;
  if (d == 3) return exact ? std::sqrt(static_cast<Real>(static_cast<i64>(iprod))) : std::sqrt(prod);
  Real log_sum = 0;
  for (i64 x : a) log_sum += std::log(static_cast<Real>(x));
  return std::exp(log_sum / static_cast<Real>(d - 1));
}

/// (F(a) + [include_sum] * sum(a)) / (a_1 ... a_d)^{1/(d-1)}.
inline Real normalized_statistic(std::span<const i64> a, bool include_sum) {
  const i64 F = frobenius_number(a).value;
  i64 num = F;
  if (include_sum)
    for (i64 x : a) num = checked_add(num, x);
  return static_cast<Real>(num) / root_product(a);
}

inline Real normalized_statistic(const PrimitivePoint& a, bool include_sum) {
  return normalized_statistic(std::span<const i64>(a.coords()), include_sum);
}

}  // namespace frobgeom
