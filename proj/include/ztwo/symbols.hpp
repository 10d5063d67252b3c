#pragma once

#include <numeric>
#include <ostream>
#include <string>

#include "ztwo/arith.hpp"

namespace ztwo {

// A residue-symbol value. Only +1 and -1 are representable; the 0 of the
// non-coprime case is reported as an Errc::non_coprime error instead.
class SymbolValue {
 public:
  static constexpr SymbolValue plus() { return SymbolValue(1); }
  static constexpr SymbolValue minus() { return SymbolValue(-1); }
  static constexpr SymbolValue from_sign(bool positive) { return SymbolValue(positive ? 1 : -1); }

  constexpr int value() const { return v_; }
  constexpr bool is_plus() const { return v_ == 1; }

  constexpr SymbolValue operator*(SymbolValue o) const { return SymbolValue(v_ * o.v_); }
  constexpr SymbolValue operator-() const { return SymbolValue(-v_); }
  friend constexpr bool operator==(SymbolValue, SymbolValue) = default;

  std::string str() const { return v_ > 0 ? "+1" : "-1"; }
  friend std::ostream& operator<<(std::ostream& os, SymbolValue s) { return os << s.str(); }

 private:
  constexpr explicit SymbolValue(int v) : v_(v) {}
  int v_;
};

namespace symbols {

// Jacobi symbol (a/n) for odd n >= 1, via binary reciprocity. (a/1) = +1.
inline SymbolValue jacobi(i64 a, i64 n) {
  if (n < 1 || n % 2 == 0)
    throw Error(Errc::invalid_modulus, "jacobi modulus must be odd and positive, got " + std::to_string(n));
  u64 m = static_cast<u64>(n);
  u64 x = arith::reduce_signed(a, m);
  if (std::gcd(x, m) != 1)
    throw Error(Errc::non_coprime,
                "gcd(" + std::to_string(a) + ", " + std::to_string(n) + ") > 1");
  int sign = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      u64 r = m & 7;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(x, m);
    if ((x & 3) == 3 && (m & 3) == 3) sign = -sign;
    x %= m;
  }
  return SymbolValue::from_sign(sign > 0);
}

// (a/p)_4 by the Euler criterion a^((p-1)/4) mod p. Defined only when a is a
// quadratic residue mod p, where the value is +1 or -1.
inline SymbolValue quartic_residue(i64 a, u64 p) {
  if (p < 2 || !arith::is_prime(p))
    throw Error(Errc::invalid_input, std::to_string(p) + " is not prime");
  if (p % 4 != 1) throw Error(Errc::bad_prime_class, std::to_string(p) + " is not 1 mod 4");
  u64 x = arith::reduce_signed(a, p);
  if (x == 0)
    throw Error(Errc::non_coprime, std::to_string(p) + " divides " + std::to_string(a));
  if (!jacobi(static_cast<i64>(x), static_cast<i64>(p)).is_plus())
    throw Error(Errc::not_quadratic_residue,
                std::to_string(a) + " is not a square mod " + std::to_string(p));
  u64 t = arith::powmod_u(x, (p - 1) / 4, p);
  if (t == 1) return SymbolValue::plus();
  if (t == p - 1) return SymbolValue::minus();
  throw std::logic_error("Euler criterion produced a non-real fourth root of unity");
}

// The rational symbol (p/2)_4 = (-1)^((p-1)/8) for p = 1 mod 8.
inline SymbolValue quartic_2_reciprocal(u64 p) {
  if (p < 2 || !arith::is_prime(p))
    throw Error(Errc::invalid_input, std::to_string(p) + " is not prime");
  if (p % 8 != 1) throw Error(Errc::bad_prime_class, std::to_string(p) + " is not 1 mod 8");
  return SymbolValue::from_sign(((p - 1) / 8) % 2 == 0);
}

}  // namespace symbols
}  // namespace ztwo
