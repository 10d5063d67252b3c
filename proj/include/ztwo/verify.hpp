#pragma once

#include <string>
#include <vector>

#include "ztwo/classifier.hpp"

namespace ztwo::verify {

struct SuiteResult {
  std::string suite;
  std::size_t checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Genus theory against the composition engine for every fundamental D with
// |D| <= genus_max, and exhaustive group axioms for |D| <= axioms_max.
inline SuiteResult oracle_suite(u64 genus_max, u64 axioms_max) {
  SuiteResult res{"oracle", 0, {}};
  for (u64 m = 3; m <= genus_max; ++m) {
    const i64 D = -static_cast<i64>(m);
    if (qforms::mod4(D) > 1 || !qforms::is_fundamental(D)) continue;
    const Discriminant disc{D, true};
    const auto elems = qforms::class_group_elements(disc);
    const auto cg = qforms::structure_of(disc, elems);
    ++res.checked;
    const auto where = "D = " + std::to_string(D) + ": ";
    if (genus_two_rank(disc) != cg.two_rank)
      res.violations.push_back(where + "genus 2-rank " + std::to_string(genus_two_rank(disc)) +
                               " != class group 2-rank " + std::to_string(cg.two_rank));
    if (qforms::count_reduced_forms(disc) != cg.h) res.violations.push_back(where + "form count mismatch");
    u64 prod = 1;
    for (u64 x : cg.divisors) prod *= x;
    if (prod != cg.h) res.violations.push_back(where + "divisor product != h");
    for (std::size_t i = 1; i < cg.divisors.size(); ++i)
      if (cg.divisors[i] % cg.divisors[i - 1]) res.violations.push_back(where + "divisor chain broken");

    if (m > axioms_max) continue;
    const auto& F = elems.forms;
    const FormClass e = principal_form(disc);
    for (const auto& f : F) {
      if (!(compose(e, f) == f) || !(compose(f, e) == f)) res.violations.push_back(where + "identity law fails");
      if (!(compose(f, inverse(f)) == e)) res.violations.push_back(where + "inverse law fails");
      for (const auto& g : F) {
        const auto fg = compose(f, g);
        if (!(fg == compose(g, f))) res.violations.push_back(where + "not commutative");
        for (const auto& k : F)
          if (!(compose(fg, k) == compose(f, compose(g, k)))) res.violations.push_back(where + "not associative");
      }
    }
  }
  return res;
}

// The corollary-vs-oracle cross-check, flattened into a suite result.
inline SuiteResult corollary_suite(u64 d_max, const classifier::CrossCheckOptions& opt = {}) {
  const auto report = classifier::cross_check(d_max, opt);
  SuiteResult res{"corollary", report.entries.size(), {}};
  for (const auto& e : report.entries)
    for (const auto& v : e.violations) res.violations.push_back("d = " + std::to_string(e.d) + ": " + v);
  return res;
}

struct WilliamsObservation {
  u64 p = 0, q = 0;
  std::size_t solutions = 0;
  int fires = 0;      // solutions on which the criterion fires
  int r_oracle = 0;
};

// For every family-B pair with pq <= d_max meeting the Legendre-criterion
// hypotheses: evaluate the criterion on every admissible solution with
// Z <= z_max. It must not depend on the solution, and it must fire exactly
// when the oracle gives r = 4.
inline SuiteResult williams_suite(u64 d_max, u64 z_max, std::vector<WilliamsObservation>* observations = nullptr,
                                  const ClassGroupOracle& oracle = direct_oracle()) {
  SuiteResult res{"williams", 0, {}};
  for (u64 d = 15; d <= d_max; d += 2) {
    if (!arith::is_squarefree(d)) continue;
    const auto tag = classifier::classify(d);
    if (tag.tag != Family::B) continue;
    const u64 p = tag.p(), q = tag.q();
    try {
      diophantine::check_legendre_preconditions(p, q);
    } catch (const Error&) {
      continue;
    }
    WilliamsObservation obs{p, q, 0, 0, classifier::exponent_r_oracle(tag, oracle)};
    const auto where = "(p, q) = (" + std::to_string(p) + ", " + std::to_string(q) + "): ";
    auto sols = diophantine::legendre_solutions(p, q, z_max);
    if (sols.empty()) sols.push_back(diophantine::solve_legendre(p, q));
    obs.solutions = sols.size();
    for (const auto& s : sols)
      if (diophantine::williams_criterion(s).is_plus()) ++obs.fires;
    ++res.checked;
    if (obs.fires != 0 && static_cast<std::size_t>(obs.fires) != obs.solutions)
      res.violations.push_back(where + "criterion depends on the chosen solution (" + std::to_string(obs.fires) +
                               " of " + std::to_string(obs.solutions) + " fire)");
    const bool fires = obs.fires > 0;
    if (fires != (obs.r_oracle == 4))
      res.violations.push_back(where + "criterion " + (fires ? "fires" : "does not fire") + " but oracle r = " +
                               std::to_string(obs.r_oracle));
    if (observations) observations->push_back(obs);
  }
  return res;
}

}  // namespace ztwo::verify
