#pragma once

#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ztwo/cache.hpp"
#include "ztwo/classifier.hpp"
#include "ztwo/serialize.hpp"
#include "ztwo/verify.hpp"

namespace ztwo::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kNoPrediction = 2, kViolations = 3 };

inline constexpr u64 kScanMax = 1'000'000;

inline std::string format_shape(const GroupShape& s, char sep = 'x') {
  if (!s.exact) return "cyclic";
  std::string out;
  for (std::size_t i = 0; i < s.divisors.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(s.divisors[i]);
  }
  return out;
}

inline std::string format_list(const std::vector<u64>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

inline std::string describe(const FamilyTag& t) {
  std::string out(family_name(t.tag));
  if (t.tag == Family::Unclassified) return out;
  static const char* names[] = {"p", "q"};
  for (std::size_t i = 0; i < t.primes.size() && i < 2; ++i)
    out += " " + std::string(names[i]) + "=" + std::to_string(t.primes[i]);
  for (const auto& s : t.symbols) out += " " + s.name + "=" + s.value.str();
  return out;
}

// Shared state for one invocation: the oracle, optionally backed by a cache.
struct Context {
  std::unique_ptr<ClassGroupCache> cache;
  ClassGroupOracle oracle = direct_oracle();

  void open_cache(const std::string& path, std::ostream& err) {
    if (path.empty()) return;
    cache = std::make_unique<ClassGroupCache>(path, err);
    oracle = cache->oracle();
  }
};

inline u64 parse_d(i64 raw) {
  if (raw <= 0) throw Error(Errc::invalid_input, "d must be positive");
  return static_cast<u64>(raw);
}

struct ScanRow {
  u64 d = 0;
  FamilyTag tag;
  std::string r_oracle, r_corollary, shape_L, shape_K, lambda, nu_L, nu_K;
};

inline ScanRow scan_row(const FamilyTag& tag, const Context& ctx, u64 bound) {
  ScanRow row;
  row.d = tag.d;
  row.tag = tag;
  if (tag.tag == Family::C7) {
    row.shape_L = "cyclic";
    row.lambda = "1";
    return row;
  }
  if (!has_exact_prediction(tag.tag)) return row;
  int r = 0;
  try {
    r = classifier::exponent_r_oracle(tag, ctx.oracle);
    row.r_oracle = std::to_string(r);
  } catch (const Error& e) {
    row.r_oracle = "skipped";
  }
  try {
    row.r_corollary = classifier::exponent_r_corollary(tag, bound).str();
  } catch (const Error& e) {
    row.r_corollary = "skipped";
  }
  if (row.r_oracle == "skipped") {
    row.shape_L = row.shape_K = row.nu_L = row.nu_K = "skipped";
    row.lambda = "1";
    return row;
  }
  row.shape_L = format_shape(classifier::shape_for(tag.tag, Tower::L, 1, r));
  row.shape_K = format_shape(classifier::shape_for(tag.tag, Tower::K, 1, r));
  const auto invL = classifier::iwasawa_invariants(tag, Tower::L, r);
  const auto invK = classifier::iwasawa_invariants(tag, Tower::K, r);
  row.lambda = std::to_string(invL.lambda);
  row.nu_L = std::to_string(invL.nu);
  row.nu_K = std::to_string(invK.nu);
  return row;
}

inline std::string csv_line(const ScanRow& r) {
  const auto& t = r.tag;
  auto prime = [&](std::size_t i) { return i < t.primes.size() && t.tag != Family::Unclassified ? std::to_string(t.primes[i]) : std::string(); };
  std::ostringstream os;
  os << r.d << ',' << family_name(t.tag) << ',' << prime(0) << ',' << prime(1) << ',' << r.r_oracle << ','
     << r.r_corollary << ',' << r.shape_L << ',' << r.shape_K << ',' << r.lambda << ',' << r.nu_L << ','
     << r.nu_K;
  return os.str();
}

inline json scan_json(const ScanRow& r) {
  const auto& t = r.tag;
  json j{{"schema", kSchema}, {"d", r.d}, {"tag", std::string(family_name(t.tag))}};
  j["primes"] = t.tag == Family::Unclassified ? json::array() : json(t.primes);
  j["r_oracle"] = r.r_oracle;
  j["r_corollary"] = r.r_corollary;
  j["shape_L_n1"] = r.shape_L;
  j["shape_K_n1"] = r.shape_K;
  j["lambda"] = r.lambda;
  j["nu_L"] = r.nu_L;
  j["nu_K"] = r.nu_K;
  return j;
}

inline constexpr const char* kCsvHeader = "d,tag,p,q,r_oracle,r_corollary,shape_L_n1,shape_K_n1,lambda,nu_L,nu_K";

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact 2-class groups along cyclotomic Z2-towers over Q(sqrt(d), i) and Q(sqrt(-d))", "ztwo"};
  app.require_subcommand(1);
  std::string cache_path;
  if (const char* env = std::getenv("ZTWO_CACHE")) cache_path = env;
  app.add_option("--cache", cache_path, "JSON-lines class group cache (default: $ZTWO_CACHE)");

  // classify
  auto* c_classify = app.add_subcommand("classify", "Assign d to its family");
  i64 cl_d = 0;
  bool cl_json = false;
  c_classify->add_option("d", cl_d, "odd squarefree d")->required();
  c_classify->add_flag("--json", cl_json);

  // predict
  auto* c_predict = app.add_subcommand("predict", "2-class group of layer n of the L and/or K tower");
  i64 pr_d = 0;
  int pr_n = 1;
  std::string pr_tower = "both";
  bool pr_json = false;
  c_predict->add_option("d", pr_d)->required();
  c_predict->add_option("--n", pr_n, "layer index >= 1")->check(CLI::PositiveNumber);
  c_predict->add_option("--tower", pr_tower)->check(CLI::IsMember({"L", "K", "both"}));
  c_predict->add_flag("--json", pr_json);

  // scan
  auto* c_scan = app.add_subcommand("scan", "One row per odd squarefree d in a range");
  u64 sc_min = 3, sc_max = 1000, sc_bound = diophantine::kDefaultBound;
  std::string sc_family, sc_format = "csv";
  unsigned sc_threads = 0;
  c_scan->add_option("--min", sc_min);
  c_scan->add_option("--max", sc_max);
  c_scan->add_option("--family", sc_family)->check(CLI::IsMember({"A1", "A2", "B", "C7", "UNCLASSIFIED"}));
  c_scan->add_option("--format", sc_format)->check(CLI::IsMember({"csv", "json"}));
  c_scan->add_option("--bound", sc_bound, "search bound for the representation solvers");
  c_scan->add_option("--threads", sc_threads);

  // classgroup
  auto* c_cg = app.add_subcommand("classgroup", "Class group of an imaginary quadratic discriminant");
  i64 cg_D = 0;
  bool cg_json = false;
  c_cg->add_option("D", cg_D, "negative fundamental discriminant")->required();
  c_cg->add_flag("--json", cg_json);

  // symbol
  auto* c_sym = app.add_subcommand("symbol", "Residue symbols");
  std::vector<i64> sy_jacobi, sy_quartic;
  i64 sy_q2 = 0;
  auto* o_jac = c_sym->add_option("--jacobi", sy_jacobi, "a n: Jacobi symbol (a/n)")->expected(2);
  auto* o_quart = c_sym->add_option("--quartic", sy_quartic, "a p: quartic symbol (a/p)_4")->expected(2);
  auto* o_q2 = c_sym->add_option("--quartic2", sy_q2, "p: (p/2)_4 for p = 1 mod 8");
  o_jac->excludes(o_quart)->excludes(o_q2);
  o_quart->excludes(o_q2);

  // witness
  auto* c_wit = app.add_subcommand("witness", "Solve a representation problem and print the witness as JSON");
  std::string wi_kind;
  std::vector<i64> wi_primes;
  u64 wi_bound = diophantine::kDefaultBound;
  c_wit->add_option("kind", wi_kind)->required()->check(CLI::IsMember({"pell", "kaplan", "legendre"}));
  c_wit->add_option("primes", wi_primes, "p [q]")->required();
  c_wit->add_option("--bound", wi_bound);

  // verify
  auto* c_ver = app.add_subcommand("verify", "Consistency suites; exit 3 on any violation");
  u64 ve_max = 10'000, ve_zmax = 2'000;
  std::string ve_suite = "corollary";
  unsigned ve_threads = 0;
  c_ver->add_option("--max", ve_max);
  c_ver->add_option("--suite", ve_suite)->check(CLI::IsMember({"corollary", "oracle", "williams", "all"}));
  c_ver->add_option("--zmax", ve_zmax, "largest Z for the solution-invariance check");
  c_ver->add_option("--threads", ve_threads);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  Context ctx;
  try {
    ctx.open_cache(cache_path, err);

    if (*c_classify) {
      const auto tag = classifier::classify(parse_d(cl_d));
      if (cl_json)
        out << to_json(tag).dump() << "\n";
      else
        out << describe(tag) << "\n";
      return kOk;
    }

    if (*c_predict) {
      const auto tag = classifier::classify(parse_d(pr_d));
      if (!has_exact_prediction(tag.tag)) {
        err << "no exact prediction: d = " << tag.d << " is " << family_name(tag.tag)
            << (tag.tag == Family::C7 ? " (tower is cyclic, order not determined)" : "") << "\n";
        return kNoPrediction;
      }
      std::vector<Tower> towers;
      if (pr_tower != "K") towers.push_back(Tower::L);
      if (pr_tower != "L") towers.push_back(Tower::K);
      const int r = classifier::exponent_r_oracle(tag, ctx.oracle);
      for (Tower t : towers) {
        const auto p = classifier::predict(tag, pr_n, t, r);
        if (pr_json)
          out << to_json(p).dump() << "\n";
        else
          out << tower_name(t) << ": " << format_list(p.shape.divisors) << "  d=" << p.d << " n=" << p.n
              << " r=" << r << " (" << r_source_name(p.r_source) << ")  " << p.theorem << "\n";
      }
      return kOk;
    }

    if (*c_scan) {
      if (sc_min > sc_max || sc_max > kScanMax) throw Error(Errc::invalid_input, "need min <= max <= 10^6");
      std::optional<Family> fam;
      if (!sc_family.empty()) fam = parse_family(sc_family);
      std::vector<FamilyTag> tags;
      for (u64 d = std::max<u64>(sc_min, 3) | 1; d <= sc_max; d += 2) {
        if (!arith::is_squarefree(d)) continue;
        auto tag = classifier::classify(d);
        if (fam && tag.tag != *fam) continue;
        tags.push_back(std::move(tag));
      }
      std::vector<ScanRow> rows(tags.size());
      unsigned threads = sc_threads ? sc_threads : std::max(1u, std::thread::hardware_concurrency());
      threads = std::min<unsigned>(threads, std::max<std::size_t>(1, tags.size()));
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
          for (std::size_t i = t; i < tags.size(); i += threads) rows[i] = scan_row(tags[i], ctx, sc_bound);
        });
      for (auto& th : pool) th.join();
      if (sc_format == "csv") out << kCsvHeader << "\n";
      for (const auto& row : rows) out << (sc_format == "csv" ? csv_line(row) : scan_json(row).dump()) << "\n";
      return kOk;
    }

    if (*c_cg) {
      const auto D = qforms::make_discriminant(cg_D);
      if (!D.fundamental) throw Error(Errc::invalid_input, std::to_string(cg_D) + " is not a fundamental discriminant");
      const auto s = ctx.oracle(D);
      if (cg_json)
        out << to_json(s).dump() << "\n";
      else
        out << "D=" << s.D.value << " h=" << s.h << " divisors " << format_list(s.divisors) << " h2=" << s.h2
            << " two_rank=" << s.two_rank << "\n";
      return kOk;
    }

    if (*c_sym) {
      if (!sy_jacobi.empty()) {
        out << symbols::jacobi(sy_jacobi[0], sy_jacobi[1]) << "\n";
      } else if (!sy_quartic.empty()) {
        if (sy_quartic[1] <= 0) throw Error(Errc::invalid_input, "p must be positive");
        out << symbols::quartic_residue(sy_quartic[0], static_cast<u64>(sy_quartic[1])) << "\n";
      } else if (*o_q2) {
        if (sy_q2 <= 0) throw Error(Errc::invalid_input, "p must be positive");
        out << symbols::quartic_2_reciprocal(static_cast<u64>(sy_q2)) << "\n";
      } else {
        throw Error(Errc::invalid_input, "symbol needs one of --jacobi, --quartic, --quartic2");
      }
      return kOk;
    }

    if (*c_wit) {
      for (i64 x : wi_primes)
        if (x <= 0) throw Error(Errc::invalid_input, "primes must be positive");
      const std::size_t need = wi_kind == "pell" ? 1 : 2;
      if (wi_primes.size() != need)
        throw Error(Errc::invalid_input, wi_kind + " needs " + std::to_string(need) + " prime(s)");
      const u64 p = static_cast<u64>(wi_primes[0]);
      if (wi_kind == "pell") {
        out << to_json(diophantine::solve_pell_rep(p, wi_bound)).dump() << "\n";
      } else if (wi_kind == "kaplan") {
        out << to_json(diophantine::solve_kaplan(p, static_cast<u64>(wi_primes[1]), wi_bound)).dump() << "\n";
      } else {
        const auto sol = diophantine::solve_legendre(p, static_cast<u64>(wi_primes[1]), wi_bound);
        auto j = to_json(sol);
        j["criterion"] = diophantine::williams_criterion(sol).value();
        out << j.dump() << "\n";
      }
      return kOk;
    }

    if (*c_ver) {
      std::vector<verify::SuiteResult> results;
      const bool all = ve_suite == "all";
      if (all || ve_suite == "oracle") results.push_back(verify::oracle_suite(ve_max, std::min<u64>(ve_max, 2000)));
      if (all || ve_suite == "corollary") {
        classifier::CrossCheckOptions opt;
        opt.threads = ve_threads;
        opt.oracle = ctx.oracle;
        const auto report = classifier::cross_check(ve_max, opt);
        verify::SuiteResult res{"corollary", report.entries.size(), {}};
        for (const auto& e : report.entries)
          for (const auto& v : e.violations) res.violations.push_back("d = " + std::to_string(e.d) + ": " + v);
        out << "corollary: A-family verdicts consistent with 2^r = h2(-2d): " << report.consistent_with_h2_minus_2d
            << "/" << report.a_family_checked << "; with 2^r = h2(-d): " << report.consistent_with_h2_minus_d << "/"
            << report.a_family_checked << "\n";
        results.push_back(std::move(res));
      }
      if (all || ve_suite == "williams") results.push_back(verify::williams_suite(ve_max, ve_zmax, nullptr, ctx.oracle));
      std::size_t violations = 0;
      for (const auto& r : results) {
        out << r.suite << ": checked " << r.checked << ", violations " << r.violations.size() << "\n";
        for (const auto& v : r.violations) out << "  " << v << "\n";
        violations += r.violations.size();
      }
      return violations ? kViolations : kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::unsupported_family ? kNoPrediction : kInvalidInput;
  }
  return kInvalidInput;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace ztwo::cli
