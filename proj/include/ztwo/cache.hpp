#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>

#include "json.hpp"
#include "ztwo/classifier.hpp"
#include "ztwo/qforms.hpp"

namespace ztwo {

struct CacheRecord {
  i64 D = 0;
  u64 h = 0;
  std::vector<u64> divisors;
  std::string computed_at;

  // Timestamps are excluded: two computations of the same D must agree here.
  bool same_data(const CacheRecord& o) const { return D == o.D && h == o.h && divisors == o.divisors; }
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::ordered_json cache_record_to_json(const CacheRecord& r) {
  return {{"D", r.D}, {"h", r.h}, {"divisors", r.divisors}, {"computed_at", r.computed_at}};
}

inline CacheRecord cache_record_from_json(const nlohmann::ordered_json& j) {
  CacheRecord r;
  r.D = j.at("D").get<i64>();
  r.h = j.at("h").get<u64>();
  r.divisors = j.at("divisors").get<std::vector<u64>>();
  r.computed_at = j.at("computed_at").get<std::string>();
  u64 prod = 1;
  for (u64 x : r.divisors) prod *= x;
  if (r.D >= 0 || r.h == 0 || prod != r.h) throw Error(Errc::invalid_input, "inconsistent cache record");
  return r;
}

// Append-only JSON-lines store of class groups, one record per discriminant.
// Lookups and inserts may come from many threads; the file has one writer.
class ClassGroupCache {
 public:
  explicit ClassGroupCache(std::filesystem::path path, std::ostream& warn = std::cerr)
      : path_(std::move(path)), warn_(&warn) {
    load();
  }

  const std::filesystem::path& path() const { return path_; }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return records_.size();
  }

  std::optional<CacheRecord> find(i64 D) const {
    std::lock_guard lock(mu_);
    auto it = records_.find(D);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  ClassGroupStructure get_or_compute(const Discriminant& D) {
    if (auto rec = find(D.value)) return from_record(*rec, D);
    ClassGroupStructure s = class_group(D);
    CacheRecord rec{D.value, s.h, s.divisors, utc_timestamp()};
    std::lock_guard lock(mu_);
    if (records_.emplace(D.value, rec).second) append(rec);
    return s;
  }

  ClassGroupOracle oracle() {
    return [this](const Discriminant& D) { return get_or_compute(D); };
  }

  std::size_t skipped_lines() const { return skipped_; }

 private:
  static ClassGroupStructure from_record(const CacheRecord& r, const Discriminant& D) {
    ClassGroupStructure s;
    s.D = D;
    s.h = r.h;
    s.divisors = r.divisors;
    s.h2 = s.h & (~s.h + 1);
    s.two_rank = static_cast<int>(std::count_if(s.divisors.begin(), s.divisors.end(), [](u64 x) { return x % 2 == 0; }));
    return s;
  }

  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        auto rec = cache_record_from_json(nlohmann::ordered_json::parse(line));
        records_.emplace(rec.D, std::move(rec));
      } catch (const std::exception&) {
        ++skipped_;
        *warn_ << "warning: " << path_.string() << ":" << lineno << ": skipping corrupt cache line\n";
      }
    }
  }

  void append(const CacheRecord& rec) {
    std::ofstream out(path_, std::ios::app);
    if (!out) {
      *warn_ << "warning: cannot write cache file " << path_.string() << "\n";
      return;
    }
    out << cache_record_to_json(rec).dump() << '\n';
  }

  std::filesystem::path path_;
  std::ostream* warn_;
  mutable std::mutex mu_;
  std::map<i64, CacheRecord> records_;
  std::size_t skipped_ = 0;
};

}  // namespace ztwo
