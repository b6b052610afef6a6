#pragma once

// Shared scalar types, errors, integer helpers, zeta values, seeded streams
// and a deterministic parallel map.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace frobgeom {

/// Extended-precision real (80-bit on x86-64).
using Real = long double;
using i64 = std::int64_t;
using i128 = __int128;
using IntVector = std::vector<i64>;

/// Base class of every refusal raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or sampling job would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required)
      : Error(what + " (required budget " + std::to_string(required) + ")"),
        required_(required) {}
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 gcd(std::span<const i64> v) {
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, x);
  return g;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct ExtGcd {
  i64 g, x, y;
};

inline ExtGcd ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Bezout coefficients for a list: sum(values[i] * coeffs[i]) == g.
struct ExtGcdList {
  i64 g;
  IntVector coeffs;
};

inline ExtGcdList ext_gcd_list(std::span<const i64> values) {
  ExtGcdList out{0, IntVector(values.size(), 0)};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto e = ext_gcd(out.g, values[i]);
    for (std::size_t j = 0; j < i; ++j) out.coeffs[j] *= e.x;
    out.coeffs[i] = e.y;
    out.g = e.g;
  }
  return out;
}

/// Floor of a/b for b > 0.
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i64 mod_floor(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error("integer overflow in product");
  return out;
}

inline i64 checked_add(i64 a, i64 b) {
  i64 out;
  if (__builtin_add_overflow(a, b, &out)) throw Error("integer overflow in sum");
  return out;
}

inline i64 narrow(i128 v) {
  if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
    throw Error("integer overflow narrowing 128-bit value");
  return static_cast<i64>(v);
}

/// Riemann zeta at an integer s >= 2: partial sum plus Euler-Maclaurin tail,
/// accurate to well beyond 12 digits.
inline Real zeta(int s) {
  if (s < 2) throw Error("zeta(s) requires s >= 2");
  constexpr int kTerms = 2000;
  Real sum = 0;
  for (int n = kTerms; n >= 1; --n) sum += std::pow(static_cast<Real>(n), -static_cast<Real>(s));
  const Real N = kTerms;
  // Tail sum_{n>N} n^-s = N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12 - ...
  sum += std::pow(N, 1 - static_cast<Real>(s)) / (s - 1) - std::pow(N, -static_cast<Real>(s)) / 2 +
         s * std::pow(N, -static_cast<Real>(s) - 1) / 12;
  return sum;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-derived random stream; stream (seed, index) never depends on the
/// order in which other indices are evaluated.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : state_(splitmix64(seed ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi] (Lemire's multiply-shift with rejection).
  i64 uniform_int(i64 lo, i64 hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<i64>(next());
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return lo + static_cast<i64>(m >> 64);
  }

  /// Uniform real in (0, 1).
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Evaluates fn(i) for i in [0, n) over `threads` workers with a fixed
/// contiguous partition; the result vector is identical for any thread count.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<T> out(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace frobgeom
