#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ztwo/arith.hpp"
#include "ztwo/symbols.hpp"

namespace ztwo {

// p = u^2 - 2 v^2 with u = 1 mod 8.
struct PellRepresentation {
  u64 p = 0;
  u64 u = 0, v = 0;

  friend bool operator==(const PellRepresentation&, const PellRepresentation&) = default;
};

// 2q = k^2 X^2 + 2 l X Y + 2 m Y^2 and p = l^2 - 2 k^2 m.
struct KaplanParams {
  u64 p = 0, q = 0;
  i64 k = 0, l = 0, m = 0, X = 0, Y = 0;

  friend bool operator==(const KaplanParams&, const KaplanParams&) = default;
};

// p X'^2 + q Y'^2 = Z^2 with the coprimality and parity normalization
// X' odd, Y' even, Z = 1 mod 4.
struct LegendreSolution {
  u64 p = 0, q = 0;
  u64 Xp = 0, Yp = 0, Z = 0;

  friend bool operator==(const LegendreSolution&, const LegendreSolution&) = default;
};

namespace diophantine {

inline constexpr u64 kDefaultBound = 1'000'000;

// Independent validators. These recheck the type invariants from scratch and
// share no code with the solvers.
inline bool valid_pell(const PellRepresentation& r) {
  if (r.u == 0 || r.v == 0 || r.u % 8 != 1) return false;
  return i128(r.u) * r.u - i128(2) * r.v * r.v == i128(r.p);
}

inline bool valid_kaplan(const KaplanParams& k) {
  const i128 lhs_q = i128(k.k) * k.k * k.X * k.X + i128(2) * k.l * k.X * k.Y + i128(2) * k.m * k.Y * k.Y;
  const i128 lhs_p = i128(k.l) * k.l - i128(2) * k.k * k.k * k.m;
  return lhs_q == i128(2) * k.q && lhs_p == i128(k.p);
}

inline bool valid_legendre(const LegendreSolution& s) {
  if (s.Xp == 0 || s.Yp == 0 || s.Z == 0) return false;
  const u128 lhs = u128(s.p) * s.Xp * s.Xp + u128(s.q) * s.Yp * s.Yp;
  if (lhs != u128(s.Z) * s.Z) return false;
  auto g = [](u64 a, u64 b) { return std::gcd(a, b); };
  if (g(s.Xp, s.Yp) != 1 || g(s.Yp, s.Z) != 1 || g(s.Z, s.Xp) != 1) return false;
  // (p, Y'Z) = 1 and (q, X'Z) = 1, checked factorwise to avoid overflow
  if (g(s.p, s.Yp) != 1 || g(s.p, s.Z) != 1) return false;
  if (g(s.q, s.Xp) != 1 || g(s.q, s.Z) != 1) return false;
  return s.Xp % 2 == 1 && s.Yp % 2 == 0 && s.Z % 4 == 1;
}

namespace detail {

inline void require_prime(u64 x, const char* name) {
  if (x < 2 || !arith::is_prime(x))
    throw Error(Errc::precond_violated, std::string(name) + " = " + std::to_string(x) + " is not prime");
}

}  // namespace detail

// Smallest v >= 1 (within bound) with p + 2 v^2 = u^2 and u = 1 mod 8.
inline PellRepresentation solve_pell_rep(u64 p, u64 bound = kDefaultBound) {
  if (p % 8 != 1) throw Error(Errc::bad_prime_class, std::to_string(p) + " is not 1 mod 8");
  detail::require_prime(p, "p");
  for (u64 v = 1; v <= bound; ++v) {
    u64 u = 0;
    if (arith::is_square(p + 2 * v * v, &u) && u % 8 == 1) return {p, u, v};
  }
  throw Error(Errc::no_representation_in_bound,
              "no u = 1 mod 8 representation of " + std::to_string(p) + " with v <= " + std::to_string(bound));
}

inline void check_kaplan_preconditions(u64 p, u64 q) {
  if (p % 8 != 3 || q % 8 != 3)
    throw Error(Errc::precond_violated, "Kaplan parametrization needs p = q = 3 mod 8");
  detail::require_prime(p, "p");
  detail::require_prime(q, "q");
  if (p == q) throw Error(Errc::precond_violated, "p and q must differ");
  if (!symbols::jacobi(static_cast<i64>(p), static_cast<i64>(q)).is_plus())
    throw Error(Errc::precond_violated, "(p/q) must be +1");
}

// Search for (k, l, m, X, Y). Normalization: smallest k >= 1, then smallest
// Y >= 1, then smallest |m|, then smallest l >= 0, then the positive square
// root first.
//
// Multiplying the form identity by k^2 gives s^2 - p Y^2 = 2 q k^2 with
// s = k^2 X + l Y, so each Y costs one square test. Since k is odd,
// X + lY = s (mod 8), and (-2/|X + lY|) agrees with (-2/|s|) only when the two
// have the same sign; the criterion is a class invariant only on such
// sign-coherent witnesses, so no others are returned. For k = 1 every witness
// is coherent.
inline KaplanParams solve_kaplan(u64 p, u64 q, u64 bound = kDefaultBound) {
  check_kaplan_preconditions(p, q);
  constexpr i64 max_k = 25;
  const i64 P = static_cast<i64>(p);
  for (i64 k = 1; k <= max_k; ++k) {
    const i64 k2 = k * k, two_k2 = 2 * k2;
    std::vector<std::pair<i64, i64>> cands;  // (|m|, l), l on both sides of sqrt(p)
    const i64 l_max = static_cast<i64>(arith::isqrt(p)) + 2 * two_k2;
    for (i64 l = 0; l <= l_max; ++l) {
      const i64 diff = l * l - P;
      if (diff % two_k2 == 0) cands.emplace_back(std::llabs(diff / two_k2), l);
    }
    if (cands.empty()) continue;
    std::sort(cands.begin(), cands.end());
    const u128 rhs0 = u128(2) * q * static_cast<u64>(k2);
    for (u64 Y = 1; Y <= bound; ++Y) {
      const u128 s2 = rhs0 + u128(p) * Y * Y;
      if (s2 > ~u64{0}) break;
      u64 s = 0;
      if (!arith::is_square(static_cast<u64>(s2), &s)) continue;
      const i64 Yi = static_cast<i64>(Y);
      for (const auto& cand : cands) {
        const i64 l = cand.second;
        for (i64 root : {static_cast<i64>(s), -static_cast<i64>(s)}) {
          const i64 num = root - l * Yi;
          if (num % k2) continue;
          const i64 X = num / k2;
          const i64 n = X + l * Yi;
          if ((n & 1) == 0 || (n > 0) != (root > 0)) continue;
          KaplanParams out{p, q, k, l, (l * l - P) / two_k2, X, Yi};
          if (valid_kaplan(out)) return out;
        }
      }
    }
  }
  throw Error(Errc::no_solution_in_bound,
              "no Kaplan parameters for (" + std::to_string(p) + ", " + std::to_string(q) + ") in bound");
}

inline void check_legendre_preconditions(u64 p, u64 q) {
  if (p % 8 != 5 || q % 8 != 3)
    throw Error(Errc::precond_violated, "Legendre criterion needs p = 5 and q = 3 mod 8");
  detail::require_prime(p, "p");
  detail::require_prime(q, "q");
  if (!symbols::jacobi(static_cast<i64>(p), static_cast<i64>(q)).is_plus())
    throw Error(Errc::precond_violated, "(p/q) must be +1");
  if (!symbols::quartic_residue(-static_cast<i64>(q), p).is_plus())
    throw Error(Errc::precond_violated, "(-q/p)_4 must be +1");
}

namespace detail {

// Admissible solutions with Z <= z_max in ascending (Z, X') order; stops after
// `limit` hits.
inline std::vector<LegendreSolution> scan_legendre(u64 p, u64 q, u64 z_max, std::size_t limit) {
  std::vector<LegendreSolution> out;
  for (u64 Z = 5; Z <= z_max; Z += 4) {
    const u128 z2 = u128(Z) * Z;
    for (u64 X = 1; u128(p) * X * X < z2; X += 2) {
      const u128 rest = z2 - u128(p) * X * X;
      if (rest % q) continue;
      const u128 y2 = rest / q;
      if (y2 > ~u64{0}) continue;
      u64 Y = 0;
      if (!arith::is_square(static_cast<u64>(y2), &Y) || Y == 0 || Y % 2) continue;
      LegendreSolution s{p, q, X, Y, Z};
      if (!valid_legendre(s)) continue;
      out.push_back(s);
      if (out.size() >= limit) return out;
    }
  }
  return out;
}

}  // namespace detail

// Admissible solution with the smallest Z (ties broken by smallest X').
inline LegendreSolution solve_legendre(u64 p, u64 q, u64 bound = kDefaultBound) {
  check_legendre_preconditions(p, q);
  auto found = detail::scan_legendre(p, q, bound, 1);
  if (found.empty())
    throw Error(Errc::no_solution_in_bound,
                "no admissible Legendre solution for (" + std::to_string(p) + ", " + std::to_string(q) +
                    ") with Z <= " + std::to_string(bound));
  return found.front();
}

// Every admissible solution with Z <= z_max.
inline std::vector<LegendreSolution> legendre_solutions(u64 p, u64 q, u64 z_max) {
  check_legendre_preconditions(p, q);
  return detail::scan_legendre(p, q, z_max, static_cast<std::size_t>(-1));
}

// +1 when (Z/p)_4 differs from (2X'/Z), i.e. the criterion fires; -1 otherwise.
inline SymbolValue williams_criterion(const LegendreSolution& sol) {
  if (!valid_legendre(sol)) throw Error(Errc::invalid_input, "not an admissible Legendre solution");
  const SymbolValue quartic = symbols::quartic_residue(static_cast<i64>(sol.Z % sol.p), sol.p);
  const SymbolValue quad = symbols::jacobi(static_cast<i64>(2 * sol.Xp % sol.Z), static_cast<i64>(sol.Z));
  return SymbolValue::from_sign(quartic != quad);
}

}  // namespace diophantine
}  // namespace ztwo
