#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ifszeta/error.hpp"

namespace ifszeta {

using Integer = mpz_class;
using Rational = mpq_class;

struct RationalInterval {
  Rational lo;
  Rational hi;
};

class FieldElement;

/// The number field Q(rho) for a real algebraic rho in (0, 1).
///
/// rho is given by an integer polynomial (coefficients in ascending order of
/// degree) together with a rational isolating interval. The polynomial must be
/// irreducible over Q; this is not checked. Without it the test "zero iff all
/// coefficients vanish" is unsound.
///
/// Contexts are cheap handles onto immutable shared state and may be used from
/// any number of threads.
class AlgebraicContext {
 public:
  static AlgebraicContext make(std::vector<Integer> poly, const Rational& lo, const Rational& hi);

  // Degree-one field for a rational ratio p/q: poly = q*x - p.
  static AlgebraicContext rational(const Rational& rho);

  std::size_t degree() const;
  const std::vector<Integer>& poly() const;

  // Isolating interval after the initial refinement (width < 2^-16).
  RationalInterval isolating_interval() const;

  // Root enclosure after `level` extra refinement rounds; width shrinks by
  // 2^-32 per round.
  RationalInterval root_interval(std::size_t level) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement rho() const;
  FieldElement inv_rho() const;
  FieldElement from_rational(const Rational& q) const;
  FieldElement from_coeffs(std::vector<Rational> coeffs) const;

  friend bool operator==(const AlgebraicContext& a, const AlgebraicContext& b) {
    return a.impl_ == b.impl_;
  }

  struct Impl;

 private:
  explicit AlgebraicContext(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend class FieldElement;
  friend RationalInterval evaluate_enclosure(const FieldElement&, std::size_t);
};

/// Element sum_k coeffs[k] * rho^k of Q(rho), with exactly degree() coefficients.
class FieldElement {
 public:
  const AlgebraicContext& context() const { return ctx_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  FieldElement& operator+=(const FieldElement& other);
  FieldElement& operator-=(const FieldElement& other);
  FieldElement& operator*=(const FieldElement& other);
  FieldElement& operator*=(const Rational& q);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, const Rational& q) { return a *= q; }
  friend FieldElement operator*(const Rational& q, FieldElement a) { return a *= q; }
  FieldElement operator-() const;

  // Structural equality of coefficient vectors (same context required).
  friend bool operator==(const FieldElement& a, const FieldElement& b);

 private:
  FieldElement(AlgebraicContext ctx, std::vector<Rational> coeffs)
      : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {}
  void require_same_context(const FieldElement& other) const;

  AlgebraicContext ctx_;
  std::vector<Rational> coeffs_;

  friend class AlgebraicContext;
  friend RationalInterval evaluate_enclosure(const FieldElement&, std::size_t);
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement negate(const FieldElement& a);
FieldElement inv_rho(const AlgebraicContext& ctx);

// Sign of the real number represented by x, decided by interval evaluation
// over successively refined root enclosures.
int sign(const FieldElement& x);

// sign(a - b).
int compare(const FieldElement& a, const FieldElement& b);

// Closest double to x within abs_err. abs_err should be well above the
// double resolution at |x|; zero maps to 0.0 exactly.
double to_float(const FieldElement& x, double abs_err);

// Byte string that is equal for two elements iff they are equal in the field
// (given irreducibility of the defining polynomial).
std::string canonical_key(const FieldElement& x);

// Exact enclosure of the value of x over a root interval.
RationalInterval evaluate_enclosure(const FieldElement& x, std::size_t level);

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

}  // namespace ifszeta
