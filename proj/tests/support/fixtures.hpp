#pragma once

#include <random>
#include <string>
#include <vector>

#include "ifszeta/ifs.hpp"

namespace ifszeta::testing {

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// rho = 1/3, digits {0, 2}: the middle-thirds Cantor measure.
inline IfsParams cantor13() {
  return IfsParams::make(AlgebraicContext::rational(q(1, 3)), {0, 2}, {q(1, 2), q(1, 2)});
}

// rho = (sqrt 5 - 1)/2, digits {0, 1}: the golden Bernoulli convolution.
inline IfsParams golden() {
  return IfsParams::make(AlgebraicContext::make({-1, 1, 1}, q(3, 5), q(7, 10)), {0, 1}, {q(1, 2), q(1, 2)});
}

// rho = 1/plastic number, root of 1 - x^2 - x^3 in (0.75, 0.76).
inline IfsParams plastic() {
  return IfsParams::make(AlgebraicContext::make({1, 0, -1, -1}, q(3, 4), q(19, 25)), {0, 1}, {q(1, 2), q(1, 2)});
}

struct NamedPreset {
  std::string name;
  IfsParams params;
};

inline std::vector<NamedPreset> all_presets() {
  return {{"cantor13", cantor13()}, {"golden", golden()}, {"plastic", plastic()}};
}

// Random element with small rational coefficients.
inline FieldElement random_element(const AlgebraicContext& ctx, std::mt19937_64& rng, long range = 9) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, range);
  std::vector<Rational> c;
  for (std::size_t k = 0; k < ctx.degree(); ++k) c.push_back(q(num(rng), den(rng)));
  return ctx.from_coeffs(std::move(c));
}

}  // namespace ifszeta::testing
