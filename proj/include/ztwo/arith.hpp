#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ztwo/error.hpp"

namespace ztwo {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxSquarefree = u64{1} << 40;

// Odd positive squarefree integer together with its (sorted, distinct) prime factors.
struct OddSquarefree {
  u64 value = 0;
  std::vector<u64> factors;

  bool is_prime() const { return factors.size() == 1; }
  friend bool operator==(const OddSquarefree&, const OddSquarefree&) = default;
};

namespace arith {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod_u(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Canonical residue of a signed value in [0, m).
inline u64 reduce_signed(i64 a, u64 m) {
  if (a >= 0) return static_cast<u64>(a) % m;
  u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
  return (m - 1 - r);
}

inline u64 isqrt(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(__builtin_sqrt(static_cast<double>(n)));
  while (u128(r) * r > n) --r;
  while (u128(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(u64 n, u64* root = nullptr) {
  u64 r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct ExtGcd {
  i128 g, x, y;
};

inline ExtGcd ext_gcd(i128 a, i128 b) {
  i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 d, int s, u64 a) {
  u64 x = powmod_u(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    const u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace detail

// Deterministic for every 64-bit input: the first twelve prime bases are a
// complete witness set below 3.3e24.
inline bool is_prime(u64 n) {
  if (n < 2) throw Error(Errc::invalid_input, "is_prime requires n > 1, got " + std::to_string(n));
  constexpr std::array<u64, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : bases)
    if (detail::miller_rabin_witness(n, d, s, a)) return false;
  return true;
}

// Total variant used internally where n may be 0 or 1.
inline bool probably_prime_total(u64 n) { return n >= 2 && is_prime(n); }

// Prime factorization with multiplicity, ascending. Trial division up to
// 2^20, Pollard-Brent rho on any composite cofactor left over.
inline std::vector<u64> factor(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  constexpr u64 trial_limit = u64{1} << 20;
  while (n % 2 == 0) {
    out.push_back(2);
    n /= 2;
  }
  for (u64 p = 3; p <= trial_limit && p * p <= n; p += 2) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  std::vector<u64> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    u64 m = stack.back();
    stack.pop_back();
    if (is_prime(m)) {
      out.push_back(m);
      continue;
    }
    u64 g = detail::pollard_brent(m);
    stack.push_back(g);
    stack.push_back(m / g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
  auto f = factor(n);
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

inline bool is_squarefree(u64 n) {
  auto f = factor(n);
  return std::adjacent_find(f.begin(), f.end()) == f.end();
}

inline OddSquarefree factor_squarefree(u64 n) {
  if (n < 3 || n >= kMaxSquarefree)
    throw Error(Errc::invalid_input, "value " + std::to_string(n) + " outside [3, 2^40)");
  if (n % 2 == 0) throw Error(Errc::invalid_input, "value " + std::to_string(n) + " is even");
  auto f = factor(n);
  if (std::adjacent_find(f.begin(), f.end()) != f.end())
    throw Error(Errc::not_squarefree, std::to_string(n) + " is not squarefree");
  return OddSquarefree{n, std::move(f)};
}

// base^exp mod modulus for signed base, result in [0, modulus).
inline u64 modpow(i64 base, u64 exp, u64 modulus) {
  if (modulus == 0) throw Error(Errc::invalid_input, "modpow modulus must be positive");
  return powmod_u(reduce_signed(base, modulus), exp, modulus);
}

}  // namespace arith
}  // namespace ztwo
