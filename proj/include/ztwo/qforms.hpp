#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ztwo/abelian.hpp"
#include "ztwo/arith.hpp"

namespace ztwo {

// Negative quadratic discriminant, D = 0 or 1 mod 4, |D| < 2^40.
struct Discriminant {
  i64 value = 0;
  bool fundamental = false;

  friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

// Arbitrary (not necessarily reduced) binary quadratic form a x^2 + b xy + c y^2.
struct Form {
  i64 a = 0, b = 0, c = 0;

  i128 discriminant() const { return i128(b) * b - i128(4) * a * c; }
  friend bool operator==(const Form&, const Form&) = default;
};

// A reduced positive definite form: |b| <= a <= c, and b >= 0 when |b| = a or
// a = c. Only reduce() and the enumerators construct these.
class FormClass {
 public:
  i64 a() const { return f_.a; }
  i64 b() const { return f_.b; }
  i64 c() const { return f_.c; }
  i64 discriminant() const { return static_cast<i64>(f_.discriminant()); }
  const Form& form() const { return f_; }

  friend bool operator==(const FormClass&, const FormClass&) = default;
  friend auto operator<=>(const FormClass& x, const FormClass& y) {
    if (x.f_.a != y.f_.a) return x.f_.a <=> y.f_.a;
    if (x.f_.b != y.f_.b) return x.f_.b <=> y.f_.b;
    return x.f_.c <=> y.f_.c;
  }
  friend std::ostream& operator<<(std::ostream& os, const FormClass& f) {
    return os << '(' << f.a() << ", " << f.b() << ", " << f.c() << ')';
  }

  static bool is_reduced(const Form& f) {
    if (f.a <= 0) return false;
    if (std::llabs(f.b) > f.a || f.a > f.c) return false;
    if ((std::llabs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
  }

 private:
  explicit FormClass(Form f) : f_(f) {}
  Form f_;

  friend FormClass reduce(const Form&);
  friend std::vector<FormClass> enumerate_reduced_forms(const Discriminant&);
};

struct ClassGroupStructure {
  Discriminant D;
  u64 h = 0;
  std::vector<u64> divisors;  // invariant factors d1 | d2 | ... , each > 1
  u64 h2 = 1;                 // 2-part of h
  int two_rank = 0;           // number of even invariant factors

  friend bool operator==(const ClassGroupStructure&, const ClassGroupStructure&) = default;
};

inline constexpr u64 kMaxDiscriminant = u64{1} << 40;
inline constexpr u64 kEnumerationBound = u64{1} << 32;

namespace qforms {

inline i64 mod4(i64 x) { return ((x % 4) + 4) % 4; }

inline bool is_fundamental(i64 D) {
  if (D >= 0) return false;
  u64 m = static_cast<u64>(-D);
  if (mod4(D) == 1) return arith::is_squarefree(m);
  if (mod4(D) != 0) return false;
  u64 q = m / 4;
  i64 qs = -static_cast<i64>(q);
  i64 r = mod4(qs);
  return (r == 2 || r == 3) && arith::is_squarefree(q);
}

inline Discriminant make_discriminant(i64 D) {
  if (D >= 0) throw Error(Errc::invalid_input, "discriminant must be negative, got " + std::to_string(D));
  if (static_cast<u64>(-D) >= kMaxDiscriminant)
    throw Error(Errc::invalid_input, "|D| must be below 2^40");
  if (mod4(D) > 1) throw Error(Errc::invalid_input, std::to_string(D) + " is not 0 or 1 mod 4");
  return Discriminant{D, is_fundamental(D)};
}

// Field discriminant of Q(sqrt(m)) for negative squarefree m.
inline Discriminant discriminant_of(i64 m) {
  if (m >= 0) throw Error(Errc::invalid_input, "expected a negative integer, got " + std::to_string(m));
  if (static_cast<u64>(-m) >= kMaxDiscriminant) throw Error(Errc::invalid_input, "|m| must be below 2^40");
  if (m != -1 && !arith::is_squarefree(static_cast<u64>(-m)))
    throw Error(Errc::not_squarefree, std::to_string(m) + " is not squarefree");
  if (mod4(m) == 1) return Discriminant{m, true};
  if (static_cast<u64>(-m) >= kMaxDiscriminant / 4) throw Error(Errc::invalid_input, "|4m| must be below 2^40");
  return Discriminant{4 * m, true};
}

}  // namespace qforms

// Gauss reduction of a positive definite form.
inline FormClass reduce(const Form& f) {
  i128 D = f.discriminant();
  if (D >= 0) throw Error(Errc::indefinite_form, "reduce requires a negative discriminant");
  if (f.a <= 0) throw Error(Errc::invalid_input, "reduce requires a > 0");
  i128 a = f.a, b = f.b, c = f.c;
  auto normalize = [&] {
    i128 two_a = 2 * a;
    i128 r = b % two_a;
    if (r < 0) r += two_a;
    if (r > a) r -= two_a;
    b = r;
    c = (b * b - D) / (4 * a);
  };
  normalize();
  while (a > c) {
    std::swap(a, c);
    b = -b;
    normalize();
  }
  if (a == c && b < 0) b = -b;
  return FormClass(Form{static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)});
}

inline FormClass principal_form(const Discriminant& D) {
  i64 b = qforms::mod4(D.value) == 1 ? 1 : 0;
  return reduce(Form{1, b, (b * b - D.value) / 4});
}

inline FormClass inverse(const FormClass& f) { return reduce(Form{f.a(), -f.b(), f.c()}); }

// Composition of classes (Dirichlet/Cohen): with u a1 + v a2 + w (b1+b2)/2 = g,
// A = a1 a2 / g^2 and B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / g mod 2A.
inline FormClass compose(const FormClass& f, const FormClass& g) {
  const i64 D = f.discriminant();
  if (g.discriminant() != D)
    throw Error(Errc::mismatched_discriminant,
                "cannot compose forms of discriminants " + std::to_string(D) + " and " +
                    std::to_string(g.discriminant()));
  const i128 a1 = f.a(), b1 = f.b(), a2 = g.a(), b2 = g.b();
  const i128 s = (b1 + b2) / 2;
  auto e1 = arith::ext_gcd(a1, a2);
  auto e2 = arith::ext_gcd(e1.g, s);
  const i128 gg = e2.g;
  const i128 u = e2.x * e1.x, v = e2.x * e1.y, w = e2.y;
  const i128 A = (a1 / gg) * (a2 / gg);
  i128 B = (u * a1 * b2 + v * a2 * b1 + w * ((b1 * b2 + D) / 2)) / gg;
  const i128 two_A = 2 * A;
  B %= two_A;
  if (B < 0) B += two_A;
  const i128 C = (B * B - D) / (4 * A);
  return reduce(Form{static_cast<i64>(A), static_cast<i64>(B), static_cast<i64>(C)});
}

inline FormClass power(const FormClass& f, u64 e) {
  FormClass result = principal_form(qforms::make_discriminant(f.discriminant()));
  FormClass base = f;
  while (e) {
    if (e & 1) result = compose(result, base);
    base = compose(base, base);
    e >>= 1;
  }
  return result;
}

// All reduced forms of discriminant D, sorted by (a, b). Scans b >= 0 and the
// divisors a of (b^2 - D)/4 with b <= a <= c.
inline std::vector<FormClass> enumerate_reduced_forms(const Discriminant& D) {
  const i64 d = D.value;
  std::vector<FormClass> out;
  const i64 bmax = static_cast<i64>(arith::isqrt(static_cast<u64>(-d) / 3));
  for (i64 b = (d & 1) ? 1 : 0; b <= bmax; b += 2) {
    const i64 N = (b * b - d) / 4;
    for (i64 a = std::max<i64>(b, 1); a * a <= N; ++a) {
      if (N % a) continue;
      const i64 c = N / a;
      out.push_back(FormClass(Form{a, b, c}));
      if (b != 0 && b != a && a != c) out.push_back(FormClass(Form{a, -b, c}));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace qforms {

inline void check_enumerable(const Discriminant& D) {
  if (!D.fundamental)
    throw Error(Errc::invalid_input, std::to_string(D.value) + " is not a fundamental discriminant");
  if (static_cast<u64>(-D.value) > kEnumerationBound)
    throw Error(Errc::enumeration_bound_exceeded,
                "|D| = " + std::to_string(-D.value) + " exceeds the enumeration bound 2^32");
}

// Number of reduced forms of discriminant D by a direct scan over (a, b),
// independent of enumerate_reduced_forms and of composition.
inline u64 count_reduced_forms(const Discriminant& D) {
  const i64 d = D.value;
  u64 count = 0;
  for (i64 a = 1; 3 * a * a <= -d; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 N = b * b - d;
      if (N % (4 * a)) continue;
      const i64 c = N / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      ++count;
    }
  }
  return count;
}

struct ClassGroupElements {
  std::vector<FormClass> forms;  // sorted; forms[0] is the principal form
  std::vector<u64> orders;       // orders[i] is the order of forms[i]
};

// Reduced forms together with their orders. Each unvisited element's cyclic
// subgroup is walked once; x^j in a cycle of length m has order m / gcd(j, m).
inline ClassGroupElements class_group_elements(const Discriminant& D) {
  check_enumerable(D);
  ClassGroupElements out;
  out.forms = enumerate_reduced_forms(D);
  const std::size_t h = out.forms.size();
  std::unordered_map<u64, std::size_t> index;
  index.reserve(h * 2);
  auto key = [](const FormClass& f) {
    return (static_cast<u64>(f.a()) << 24) ^ static_cast<u64>(f.b() + (i64{1} << 22));
  };
  for (std::size_t i = 0; i < h; ++i) index.emplace(key(out.forms[i]), i);
  auto lookup = [&](const FormClass& f) {
    auto it = index.find(key(f));
    if (it == index.end() || !(out.forms[it->second] == f))
      throw std::logic_error("composition left the set of reduced forms");
    return it->second;
  };

  out.orders.assign(h, 0);
  out.orders[0] = 1;
  std::vector<std::size_t> cycle;
  for (std::size_t i = 1; i < h; ++i) {
    if (out.orders[i]) continue;
    cycle.clear();
    FormClass cur = out.forms[i];
    std::size_t idx = i;
    while (idx != 0) {
      cycle.push_back(idx);
      cur = compose(cur, out.forms[i]);
      idx = lookup(cur);
    }
    const u64 m = cycle.size() + 1;
    for (std::size_t j = 0; j < cycle.size(); ++j)
      if (!out.orders[cycle[j]]) out.orders[cycle[j]] = m / std::gcd<u64>(j + 1, m);
  }
  return out;
}

inline ClassGroupStructure structure_of(const Discriminant& D, const ClassGroupElements& elems) {
  ClassGroupStructure s;
  s.D = D;
  s.h = elems.forms.size();
  s.divisors = abelian::invariant_factors_from_orders(elems.orders);
  s.h2 = s.h & (~s.h + 1);
  s.two_rank = static_cast<int>(std::count_if(s.divisors.begin(), s.divisors.end(),
                                              [](u64 x) { return x % 2 == 0; }));
  return s;
}

}  // namespace qforms

inline ClassGroupStructure class_group(const Discriminant& D) {
  return qforms::structure_of(D, qforms::class_group_elements(D));
}

// 2-rank predicted by genus theory: (number of primes dividing D) - 1.
inline int genus_two_rank(const Discriminant& D) {
  if (!D.fundamental)
    throw Error(Errc::invalid_input, std::to_string(D.value) + " is not a fundamental discriminant");
  return static_cast<int>(arith::distinct_prime_factors(static_cast<u64>(-D.value)).size()) - 1;
}

}  // namespace ztwo
