#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "ztwo/arith.hpp"

namespace ztwo::abelian {

// Invariant factors d1 | d2 | ... | dk (each > 1) of a finite abelian group,
// recovered from the multiset of its element orders.
//
// For each prime l, |G[l^k]| = l^(sum_i min(k, e_i)) where the e_i are the
// exponents of the l-primary cyclic factors; successive differences give how
// many e_i are >= k.
inline std::vector<u64> invariant_factors_from_orders(std::span<const u64> orders) {
  const u64 h = orders.size();
  if (h == 0) throw std::invalid_argument("empty group");
  std::vector<u64> primes = arith::distinct_prime_factors(h);

  // exponents[l] = list of e_i for the l-primary part, descending
  std::map<u64, std::vector<int>> exponents;
  for (u64 l : primes) {
    std::vector<int> at_least;  // at_least[k-1] = #{i : e_i >= k}
    int prev_log = 0;
    u64 lk = 1;
    for (int k = 1;; ++k) {
      lk *= l;
      u64 count = 0;
      for (u64 o : orders)
        if (lk % o == 0) ++count;
      int log = 0;
      for (u64 c = count; c > 1; c /= l) ++log;
      if (log == prev_log) break;
      at_least.push_back(log - prev_log);
      prev_log = log;
    }
    std::vector<int> e;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
      int exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
      for (int i = 0; i < exactly; ++i) e.push_back(static_cast<int>(k) + 1);
    }
    std::sort(e.rbegin(), e.rend());
    exponents[l] = std::move(e);
  }

  std::size_t rank = 0;
  for (auto& [l, e] : exponents) rank = std::max(rank, e.size());
  // Largest factor takes the largest exponent of each prime, and so on down.
  std::vector<u64> factors(rank, 1);
  for (auto& [l, e] : exponents)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int j = 0; j < e[i]; ++j) factors[rank - 1 - i] *= l;
  return factors;
}

// Multiset of element orders of Z/d1 x ... x Z/dk, by brute-force enumeration.
inline std::vector<u64> element_orders_of(std::span<const u64> cyclic_orders) {
  std::vector<u64> out{1};
  for (u64 n : cyclic_orders) {
    std::vector<u64> next;
    next.reserve(out.size() * n);
    for (u64 o : out)
      for (u64 x = 0; x < n; ++x) {
        u64 ox = n / std::gcd(x, n);
        next.push_back(std::lcm(o, ox));
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ztwo::abelian
