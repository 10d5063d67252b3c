#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ztwo/arith.hpp"
#include "ztwo/diophantine.hpp"
#include "ztwo/qforms.hpp"
#include "ztwo/symbols.hpp"

namespace ztwo {

enum class Family { A1, A2, B, C7, Unclassified };
enum class Tower { L, K };
enum class RSource { Oracle, Corollary };

constexpr std::string_view family_name(Family f) {
  switch (f) {
    case Family::A1: return "A1";
    case Family::A2: return "A2";
    case Family::B: return "B";
    case Family::C7: return "C7";
    case Family::Unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (Family f : {Family::A1, Family::A2, Family::B, Family::C7, Family::Unclassified})
    if (family_name(f) == s) return f;
  return std::nullopt;
}

constexpr std::string_view tower_name(Tower t) { return t == Tower::L ? "L" : "K"; }
constexpr std::string_view r_source_name(RSource s) { return s == RSource::Oracle ? "oracle" : "corollary"; }

inline bool is_a_family(Family f) { return f == Family::A1 || f == Family::A2; }
inline bool has_exact_prediction(Family f) { return is_a_family(f) || f == Family::B; }

struct SymbolWitness {
  std::string name;  // e.g. "(2/p)_4", "(p/q)"
  SymbolValue value = SymbolValue::plus();

  friend bool operator==(const SymbolWitness&, const SymbolWitness&) = default;
};

struct FamilyTag {
  Family tag = Family::Unclassified;
  u64 d = 0;
  std::vector<u64> primes;  // ordered as the family's criteria use them: (p) or (p, q)
  std::vector<SymbolWitness> symbols;

  u64 p() const { return primes.at(0); }
  u64 q() const { return primes.at(1); }
  friend bool operator==(const FamilyTag&, const FamilyTag&) = default;
};

// Cyclic orders of the 2-class group, ascending; each a power of two >= 2.
struct GroupShape {
  std::vector<u64> divisors;
  bool exact = true;
  std::string note;

  int log2_order() const {
    int e = 0;
    for (u64 x : divisors) e += std::countr_zero(x);
    return e;
  }
  friend bool operator==(const GroupShape&, const GroupShape&) = default;
};

struct Prediction {
  u64 d = 0;
  Tower tower = Tower::L;
  int n = 1;
  GroupShape shape;
  std::optional<int> r;
  RSource r_source = RSource::Oracle;
  std::string theorem;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct IwasawaInvariants {
  int lambda = 0;
  int mu = 0;
  int nu = 0;
  int valid_from = 1;

  int exponent_at(int n) const { return lambda * n + mu * (1 << n) + nu; }
  friend bool operator==(const IwasawaInvariants&, const IwasawaInvariants&) = default;
};

// Exponent r as read off a corollary: either exact, or only a lower bound.
struct RBound {
  int value = 0;
  bool lower_bound = false;

  bool admits(int r) const { return lower_bound ? r >= value : r == value; }
  std::string str() const { return (lower_bound ? ">=" : "") + std::to_string(value); }
  friend bool operator==(const RBound&, const RBound&) = default;
};

using ClassGroupOracle = std::function<ClassGroupStructure(const Discriminant&)>;

inline ClassGroupOracle direct_oracle() {
  return [](const Discriminant& D) { return class_group(D); };
}

namespace classifier {

inline int log2_exact(u64 x) { return std::countr_zero(x); }

inline FamilyTag classify(const OddSquarefree& d) {
  FamilyTag out;
  out.d = d.value;
  const auto& f = d.factors;
  if (f.size() == 1) {
    const u64 p = f[0];
    if (p % 16 == 9) {
      SymbolValue s = symbols::quartic_residue(2, p);
      if (s.is_plus()) {
        out.tag = Family::A1;
        out.primes = {p};
        out.symbols = {{"(2/p)_4", s}};
        return out;
      }
    }
    if (p % 16 == 7) {
      out.tag = Family::C7;
      out.primes = {p};
      return out;
    }
  } else if (f.size() == 2) {
    u64 p = f[0], q = f[1];
    if (p % 8 == 3 && q % 8 == 3) {
      SymbolValue s = symbols::jacobi(static_cast<i64>(p), static_cast<i64>(q));
      // For p = q = 3 mod 4 exactly one ordering has (p/q) = +1.
      if (!s.is_plus()) {
        std::swap(p, q);
        s = symbols::jacobi(static_cast<i64>(p), static_cast<i64>(q));
      }
      out.tag = Family::A2;
      out.primes = {p, q};
      out.symbols = {{"(p/q)", s}};
      return out;
    }
    if (p % 8 == 3 && q % 8 == 5) std::swap(p, q);
    if (p % 8 == 5 && q % 8 == 3) {
      out.tag = Family::B;
      out.primes = {p, q};
      out.symbols = {{"(p/q)", symbols::jacobi(static_cast<i64>(p), static_cast<i64>(q))}};
      return out;
    }
  }
  out.tag = Family::Unclassified;
  out.primes = f;
  return out;
}

inline FamilyTag classify(u64 d) { return classify(arith::factor_squarefree(d)); }

inline void require_exact_family(const FamilyTag& tag) {
  if (!has_exact_prediction(tag.tag))
    throw Error(tag.tag == Family::Unclassified ? Errc::unsupported_family : Errc::precond_violated,
                "d = " + std::to_string(tag.d) + " is in family " + std::string(family_name(tag.tag)) +
                    ", which has no exponent r");
}

// Discriminant whose 2-class number defines r: Q(sqrt(-2d)) for the A
// families, Q(sqrt(-pq)) for family B.
inline Discriminant defining_discriminant(const FamilyTag& tag) {
  require_exact_family(tag);
  const i64 d = static_cast<i64>(tag.d);
  return is_a_family(tag.tag) ? qforms::discriminant_of(-2 * d) : qforms::discriminant_of(-d);
}

// r from the class-group oracle: 2^r = h2(-2d) (A1, A2) or 2^r = 2 h2(-pq) (B).
inline int exponent_r_oracle(const FamilyTag& tag, const ClassGroupOracle& oracle = direct_oracle()) {
  const auto cg = oracle(defining_discriminant(tag));
  const int e = log2_exact(cg.h2);
  return is_a_family(tag.tag) ? e : e + 1;
}

// r (or a lower bound for it) from the symbol criteria alone.
inline RBound exponent_r_corollary(const FamilyTag& tag, u64 bound = diophantine::kDefaultBound) {
  require_exact_family(tag);
  switch (tag.tag) {
    case Family::A1: {
      const auto rep = diophantine::solve_pell_rep(tag.p(), bound);
      const auto s = symbols::quartic_residue(static_cast<i64>(rep.u), tag.p());
      return s.is_plus() ? RBound{4, true} : RBound{3, false};
    }
    case Family::A2: {
      const auto kp = diophantine::solve_kaplan(tag.p(), tag.q(), bound);
      const i64 n = std::llabs(kp.X + kp.l * kp.Y);
      return symbols::jacobi(-2, n).is_plus() ? RBound{4, true} : RBound{3, false};
    }
    case Family::B: {
      const i64 p = static_cast<i64>(tag.p()), q = static_cast<i64>(tag.q());
      if (!symbols::jacobi(p, q).is_plus()) return {2, false};
      if (symbols::quartic_residue(q, tag.p()).is_plus()) return {3, false};
      if (symbols::quartic_residue(-q, tag.p()).is_plus()) {
        const auto sol = diophantine::solve_legendre(tag.p(), tag.q(), bound);
        return diophantine::williams_criterion(sol).is_plus() ? RBound{4, false} : RBound{5, true};
      }
      return {4, true};
    }
    default: break;
  }
  throw std::logic_error("unreachable");
}

// Shape of the 2-class group of layer n >= 1, given the family and r.
inline GroupShape shape_for(Family family, Tower tower, int n, int r) {
  if (n < 1) throw Error(Errc::invalid_input, "layer index must be >= 1");
  auto pow2 = [](int e) {
    if (e < 1 || e > 62) throw Error(Errc::invalid_input, "2-power exponent " + std::to_string(e) + " out of range");
    return u64{1} << e;
  };
  if (is_a_family(family)) {
    const int big = tower == Tower::L ? n + r - 2 : n + r - 1;
    return GroupShape{{2, pow2(big)}, true, ""};
  }
  if (family == Family::B) return GroupShape{{pow2(n + r - 1)}, true, ""};
  if (family == Family::C7)
    return GroupShape{{}, false, "cyclic non-trivial, order not determined"};
  throw Error(Errc::unsupported_family, "no prediction for unclassified d");
}

inline std::string theorem_for(Family family, Tower tower) {
  if (is_a_family(family))
    return tower == Tower::L ? "Cl2(L_n,d) = Z/2 x Z/2^(n+r-2), 2^r = h2(-2d)"
                             : "Cl2(K_n,d) = Z/2 x Z/2^(n+r-1), 2^r = h2(-2d)";
  if (family == Family::B)
    return tower == Tower::L ? "Cl2(L_n,d) = Z/2^(n+r-1), 2^r = 2 h2(-pq)"
                             : "Cl2(K_n,d) = Z/2^(n+r-1), 2^r = 2 h2(-pq)";
  if (family == Family::C7) return "Cl2(L_n,d) cyclic non-trivial for d prime = 7 mod 16";
  return "";
}

inline Prediction predict(const FamilyTag& tag, int n, Tower tower, int r) {
  Prediction out;
  out.d = tag.d;
  out.tower = tower;
  out.n = n;
  out.shape = shape_for(tag.tag, tower, n, r);
  if (has_exact_prediction(tag.tag)) out.r = r;
  out.r_source = RSource::Oracle;
  out.theorem = theorem_for(tag.tag, tower);
  return out;
}

inline Prediction predict(const FamilyTag& tag, int n, Tower tower, const ClassGroupOracle& oracle = direct_oracle()) {
  if (tag.tag == Family::Unclassified)
    throw Error(Errc::unsupported_family, "d = " + std::to_string(tag.d) + " matches no family");
  if (tag.tag == Family::C7) {
    if (tower == Tower::K)
      throw Error(Errc::unsupported_family, "no K-tower statement for d prime = 7 mod 16");
    return predict(tag, n, tower, 0);
  }
  return predict(tag, n, tower, exponent_r_oracle(tag, oracle));
}

inline Prediction predict(u64 d, int n, Tower tower, const ClassGroupOracle& oracle = direct_oracle()) {
  return predict(classify(d), n, tower, oracle);
}

// 2a + b - 1, a = #{primes = 7, 9 mod 16}, b = #{primes = 3, 5 mod 8}.
inline int lambda_minus(const OddSquarefree& d) {
  int a = 0, b = 0;
  for (u64 p : d.factors) {
    if (p % 16 == 7 || p % 16 == 9)
      ++a;
    else if (p % 8 == 3 || p % 8 == 5)
      ++b;
    else
      throw Error(Errc::hypothesis_not_met,
                  "prime " + std::to_string(p) + " of d is neither 7, 9 mod 16 nor 3, 5 mod 8");
  }
  return 2 * a + b - 1;
}

// Whether the class number of the real layers L_n,d^+ is odd.
inline bool plus_part_odd(const OddSquarefree& d) {
  const auto& f = d.factors;
  if (f.size() == 2) {
    return f[0] % 4 == 3 && f[1] % 4 == 3 && (f[0] % 8 == 3 || f[1] % 8 == 3);
  }
  if (f.size() != 1) return false;
  const u64 p = f[0];
  if (p % 4 == 3 || p % 8 == 5) return true;
  if (p % 8 == 1)
    return (symbols::quartic_residue(2, p) * symbols::quartic_2_reciprocal(p)) == SymbolValue::minus();
  return false;
}

struct CyclicityVerdict {
  bool cyclic = false;
  bool greenberg_holds = false;  // bounded 2-class numbers along L_n,d^+

  explicit operator bool() const { return cyclic; }
};

// Whether Cl2(L_n,d) is cyclic non-trivial for n >= 2.
inline CyclicityVerdict is_cyclic_tower(const OddSquarefree& d) {
  const auto& f = d.factors;
  bool cyclic = false;
  if (f.size() == 1) cyclic = f[0] % 16 == 7;
  if (f.size() == 2)
    cyclic = (f[0] % 8 == 5 && f[1] % 8 == 3) || (f[0] % 8 == 3 && f[1] % 8 == 5);
  return {cyclic, cyclic};
}

inline IwasawaInvariants iwasawa_invariants(const FamilyTag& tag, Tower tower, int r) {
  require_exact_family(tag);
  IwasawaInvariants inv;
  inv.lambda = 1;
  inv.mu = 0;
  inv.nu = (tower == Tower::K && is_a_family(tag.tag)) ? r : r - 1;
  inv.valid_from = 1;
  return inv;
}

inline IwasawaInvariants iwasawa_invariants(const FamilyTag& tag, Tower tower,
                                            const ClassGroupOracle& oracle = direct_oracle()) {
  if (tag.tag == Family::Unclassified || tag.tag == Family::C7)
    throw Error(Errc::unsupported_family, "no Iwasawa invariants for family " + std::string(family_name(tag.tag)));
  return iwasawa_invariants(tag, tower, exponent_r_oracle(tag, oracle));
}

// ---------------------------------------------------------------------------
// Corollary vs oracle cross-check

struct CrossCheckEntry {
  u64 d = 0;
  Family tag = Family::Unclassified;
  std::vector<u64> primes;
  int r_oracle = 0;
  RBound r_corollary;
  std::optional<int> r_alt;  // A families: log2 h2(-d), the alternative reading of r
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

struct CrossCheckReport {
  u64 d_max = 0;
  std::vector<CrossCheckEntry> entries;  // ascending d
  // A families: how many corollary verdicts are consistent with r defined by
  // h2(-2d) and with r defined by h2(-d).
  std::size_t a_family_checked = 0;
  std::size_t consistent_with_h2_minus_2d = 0;
  std::size_t consistent_with_h2_minus_d = 0;

  std::size_t violation_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.violations.size();
    return n;
  }
};

struct CrossCheckOptions {
  std::optional<Family> family;
  unsigned threads = 0;  // 0: hardware concurrency
  u64 solver_bound = diophantine::kDefaultBound;
  ClassGroupOracle oracle = direct_oracle();
};

inline CrossCheckEntry cross_check_one(const FamilyTag& tag, const CrossCheckOptions& opt) {
  CrossCheckEntry e;
  e.d = tag.d;
  e.tag = tag.tag;
  e.primes = tag.primes;
  auto fail = [&](std::string msg) { e.violations.push_back(std::move(msg)); };
  try {
    e.r_oracle = exponent_r_oracle(tag, opt.oracle);
    e.r_corollary = exponent_r_corollary(tag, opt.solver_bound);
  } catch (const Error& err) {
    fail(err.what());
    return e;
  }
  if (!e.r_corollary.admits(e.r_oracle))
    fail("corollary gives r " + e.r_corollary.str() + " but oracle gives r = " + std::to_string(e.r_oracle));
  const OddSquarefree d{tag.d, [&] {
                          auto f = tag.primes;
                          std::sort(f.begin(), f.end());
                          return f;
                        }()};
  if (lambda_minus(d) != 1) fail("lambda^- != 1");
  if (is_a_family(tag.tag)) {
    if (e.r_oracle < 3) fail("h2(-2d) not divisible by 8");
    if (!plus_part_odd(d)) fail("class number of L_n,d^+ not odd");
    const auto alt = opt.oracle(qforms::discriminant_of(-static_cast<i64>(tag.d)));
    e.r_alt = log2_exact(alt.h2);
  } else {
    const auto cg = opt.oracle(defining_discriminant(tag));
    if (cg.h % 2 != 0 || cg.two_rank != 1)
      fail("Cl(-pq) 2-part is not cyclic of even order (2-rank " + std::to_string(cg.two_rank) + ")");
    if (!is_cyclic_tower(d).cyclic) fail("family B not flagged cyclic");
  }
  return e;
}

// For every classified d <= d_max (families A1, A2, B), compare the corollary
// verdict with the oracle value of r. Violations become report entries.
inline CrossCheckReport cross_check(u64 d_max, const CrossCheckOptions& opt = {}) {
  CrossCheckReport report;
  report.d_max = d_max;
  std::vector<FamilyTag> work;
  for (u64 d = 3; d <= d_max; d += 2) {
    if (!arith::is_squarefree(d)) continue;
    FamilyTag tag = classify(d);
    if (!has_exact_prediction(tag.tag)) continue;
    if (opt.family && *opt.family != tag.tag) continue;
    work.push_back(std::move(tag));
  }
  report.entries.resize(work.size());
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, work.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < work.size(); i += threads) report.entries[i] = cross_check_one(work[i], opt);
    });
  }
  for (auto& th : pool) th.join();

  for (const auto& e : report.entries) {
    if (!is_a_family(e.tag) || !e.r_alt) continue;
    ++report.a_family_checked;
    if (e.r_corollary.admits(e.r_oracle)) ++report.consistent_with_h2_minus_2d;
    if (e.r_corollary.admits(*e.r_alt)) ++report.consistent_with_h2_minus_d;
  }
  return report;
}

}  // namespace classifier
}  // namespace ztwo
