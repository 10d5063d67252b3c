#pragma once

#include <sstream>
#include <string>

#include "json.hpp"
#include "ztwo/classifier.hpp"
#include "ztwo/diophantine.hpp"
#include "ztwo/qforms.hpp"

// JSON encodings of the public types. Every top-level document carries
// "schema": "ztwo/1".
namespace ztwo {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ztwo/1";

namespace serialize_detail {

inline void check_schema(const json& j) {
  if (!j.contains("schema") || j.at("schema") != kSchema)
    throw Error(Errc::invalid_input, "missing or unknown schema tag");
}

inline SymbolValue symbol_from_int(int v) {
  if (v == 1) return SymbolValue::plus();
  if (v == -1) return SymbolValue::minus();
  throw Error(Errc::invalid_input, "symbol value must be +1 or -1");
}

inline Tower tower_from_string(const std::string& s) {
  if (s == "L") return Tower::L;
  if (s == "K") return Tower::K;
  throw Error(Errc::invalid_input, "unknown tower '" + s + "'");
}

}  // namespace serialize_detail

inline json to_json(const ClassGroupStructure& s) {
  return json{{"schema", kSchema}, {"D", s.D.value},         {"fundamental", s.D.fundamental}, {"h", s.h},
              {"divisors", s.divisors}, {"h2", s.h2}, {"two_rank", s.two_rank}};
}

inline ClassGroupStructure class_group_from_json(const json& j) {
  serialize_detail::check_schema(j);
  ClassGroupStructure s;
  s.D = Discriminant{j.at("D").get<i64>(), j.at("fundamental").get<bool>()};
  s.h = j.at("h").get<u64>();
  s.divisors = j.at("divisors").get<std::vector<u64>>();
  s.h2 = j.at("h2").get<u64>();
  s.two_rank = j.at("two_rank").get<int>();
  return s;
}

inline json to_json(const FamilyTag& t) {
  json syms = json::array();
  for (const auto& s : t.symbols) syms.push_back(json{{"name", s.name}, {"value", s.value.value()}});
  return json{{"schema", kSchema},
              {"d", t.d},
              {"tag", std::string(family_name(t.tag))},
              {"primes", t.primes},
              {"symbols", syms}};
}

inline FamilyTag family_tag_from_json(const json& j) {
  serialize_detail::check_schema(j);
  FamilyTag t;
  t.d = j.at("d").get<u64>();
  auto fam = parse_family(j.at("tag").get<std::string>());
  if (!fam) throw Error(Errc::invalid_input, "unknown family tag");
  t.tag = *fam;
  t.primes = j.at("primes").get<std::vector<u64>>();
  for (const auto& s : j.at("symbols"))
    t.symbols.push_back({s.at("name").get<std::string>(), serialize_detail::symbol_from_int(s.at("value").get<int>())});
  return t;
}

inline json to_json(const Prediction& p) {
  return json{{"schema", kSchema},
              {"d", p.d},
              {"tower", std::string(tower_name(p.tower))},
              {"n", p.n},
              {"shape", p.shape.divisors},
              {"exact", p.shape.exact},
              {"note", p.shape.note},
              {"r", p.r ? json(*p.r) : json(nullptr)},
              {"r_source", std::string(r_source_name(p.r_source))},
              {"theorem", p.theorem}};
}

inline Prediction prediction_from_json(const json& j) {
  serialize_detail::check_schema(j);
  Prediction p;
  p.d = j.at("d").get<u64>();
  p.tower = serialize_detail::tower_from_string(j.at("tower").get<std::string>());
  p.n = j.at("n").get<int>();
  p.shape.divisors = j.at("shape").get<std::vector<u64>>();
  p.shape.exact = j.at("exact").get<bool>();
  p.shape.note = j.at("note").get<std::string>();
  if (!j.at("r").is_null()) p.r = j.at("r").get<int>();
  const auto src = j.at("r_source").get<std::string>();
  if (src != "oracle" && src != "corollary") throw Error(Errc::invalid_input, "unknown r_source");
  p.r_source = src == "oracle" ? RSource::Oracle : RSource::Corollary;
  p.theorem = j.at("theorem").get<std::string>();
  return p;
}

inline json to_json(const IwasawaInvariants& inv) {
  return json{{"schema", kSchema},
              {"lambda", inv.lambda},
              {"mu", inv.mu},
              {"nu", inv.nu},
              {"valid_from", inv.valid_from}};
}

inline IwasawaInvariants iwasawa_from_json(const json& j) {
  serialize_detail::check_schema(j);
  return IwasawaInvariants{j.at("lambda").get<int>(), j.at("mu").get<int>(), j.at("nu").get<int>(),
                           j.at("valid_from").get<int>()};
}

inline json to_json(const PellRepresentation& r) {
  return json{{"schema", kSchema}, {"kind", "pell"}, {"p", r.p}, {"u", r.u}, {"v", r.v}};
}

inline json to_json(const KaplanParams& k) {
  return json{{"schema", kSchema}, {"kind", "kaplan"}, {"p", k.p}, {"q", k.q}, {"k", k.k},
              {"l", k.l},          {"m", k.m},         {"X", k.X}, {"Y", k.Y}};
}

inline json to_json(const LegendreSolution& s) {
  return json{{"schema", kSchema}, {"kind", "legendre"}, {"p", s.p}, {"q", s.q},
              {"X'", s.Xp},        {"Y'", s.Yp},         {"Z", s.Z}};
}

inline PellRepresentation pell_from_json(const json& j) {
  serialize_detail::check_schema(j);
  return {j.at("p").get<u64>(), j.at("u").get<u64>(), j.at("v").get<u64>()};
}

inline KaplanParams kaplan_from_json(const json& j) {
  serialize_detail::check_schema(j);
  return {j.at("p").get<u64>(), j.at("q").get<u64>(), j.at("k").get<i64>(), j.at("l").get<i64>(),
          j.at("m").get<i64>(), j.at("X").get<i64>(), j.at("Y").get<i64>()};
}

inline LegendreSolution legendre_from_json(const json& j) {
  serialize_detail::check_schema(j);
  return {j.at("p").get<u64>(), j.at("q").get<u64>(), j.at("X'").get<u64>(), j.at("Y'").get<u64>(),
          j.at("Z").get<u64>()};
}

}  // namespace ztwo
