#pragma once

// Test-only reference computations. Nothing here may call into the
// incremental enumeration or the float-assisted ordering of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ifszeta/ifs.hpp"

namespace ifszeta::oracle {

struct NaiveCylinder {
  FieldElement left;
  Rational weight;
  std::uint64_t multiplicity = 0;
};

// (1 - rho) * sum_k a_{w_k} rho^(k-1), with explicit powers.
inline FieldElement endpoint_by_powers(const IfsParams& p, const std::vector<std::size_t>& word) {
  const auto& ctx = p.ctx;
  FieldElement sum = ctx.zero();
  FieldElement power = ctx.one();
  for (std::size_t letter : word) {
    sum += power * Rational(Integer(static_cast<unsigned long>(p.digits[letter])));
    power *= ctx.rho();
  }
  return (ctx.one() - ctx.rho()) * sum;
}

// Every one of the m^n words, deduplicated by exact key, sorted with exact
// comparisons only.
inline std::vector<NaiveCylinder> naive_level(const IfsParams& p, unsigned n) {
  const std::size_t m = p.size();
  std::vector<std::size_t> word(n, 0);
  std::map<std::string, NaiveCylinder> by_key;
  for (;;) {
    FieldElement left = endpoint_by_powers(p, word);
    Rational w = 1;
    for (std::size_t letter : word) w *= p.probs[letter];
    auto key = canonical_key(left);
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      by_key.emplace(std::move(key), NaiveCylinder{std::move(left), w, 1});
    } else {
      it->second.weight += w;
      it->second.multiplicity += 1;
    }
    std::size_t pos = 0;
    while (pos < n && ++word[pos] == m) word[pos++] = 0;
    if (pos == n) break;
  }
  std::vector<NaiveCylinder> out;
  for (auto& [key, c] : by_key) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(),
            [](const NaiveCylinder& a, const NaiveCylinder& b) { return sign(b.left - a.left) > 0; });
  return out;
}

inline double naive_entropy(const std::vector<NaiveCylinder>& level) {
  double h = 0;
  for (const auto& c : level) {
    const double w = c.weight.get_d();
    h -= w * std::log(w);
  }
  return h;
}

// Central value of a root by exact-rational bisection on the polynomial, to
// about 1e-30.
inline double root_by_bisection(const std::vector<Integer>& poly, Rational lo, Rational hi) {
  auto eval = [&](const Rational& x) {
    Rational acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
  };
  const int s_lo = sgn(eval(lo));
  for (int i = 0; i < 110; ++i) {
    Rational mid = (lo + hi) / 2;
    if (sgn(eval(mid)) == s_lo) lo = mid;
    else hi = mid;
  }
  return Rational((lo + hi) / 2).get_d();
}

}  // namespace ifszeta::oracle
