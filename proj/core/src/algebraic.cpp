#include "ifszeta/algebraic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>

namespace ifszeta {

namespace {

constexpr std::size_t kInitialBisections = 17;  // width < 2^-16 from width < 1
constexpr std::size_t kBisectionsPerRung = 32;
constexpr std::size_t kMaxRungs = 64;

Rational eval_poly(const std::vector<Integer>& poly, const Rational& x) {
  Rational acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    acc *= x;
    acc += Rational(*it);
  }
  return acc;
}

void bisect(const std::vector<Integer>& poly, RationalInterval& iv, int sign_lo, std::size_t steps) {
  for (std::size_t i = 0; i < steps; ++i) {
    Rational mid = (iv.lo + iv.hi) / 2;
    const int s = sgn(eval_poly(poly, mid));
    if (s == 0) {
      // Exact rational root (degree one): keep a symmetric enclosure.
      Rational quarter = (iv.hi - iv.lo) / 4;
      iv.lo = mid - quarter;
      iv.hi = mid + quarter;
    } else if (s == sign_lo) {
      iv.lo = std::move(mid);
    } else {
      iv.hi = std::move(mid);
    }
  }
}

}  // namespace

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_polynomial: return "InvalidPolynomial";
    case Errc::zero_constant_term: return "ZeroConstantTerm";
    case Errc::root_out_of_unit: return "RootOutOfUnit";
    case Errc::no_sign_change: return "NoSignChange";
    case Errc::context_mismatch: return "ContextMismatch";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::nonpositive_weight: return "NonpositiveWeight";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::grid_too_large: return "GridTooLarge";
    case Errc::grid_too_coarse: return "GridTooCoarse";
    case Errc::overlap_detected: return "OverlapDetected";
    case Errc::precondition_violated: return "PreconditionViolated";
  }
  return "Unknown";
}

struct AlgebraicContext::Impl {
  struct Rung {
    RationalInterval root;
    std::vector<Rational> lo_pow;
    std::vector<Rational> hi_pow;
  };

  std::vector<Integer> poly;
  std::size_t degree = 0;
  int sign_at_lo = 0;
  // x^(d+j) reduced modulo poly, j = 0 .. d-2.
  std::vector<std::vector<Rational>> reduction;
  std::vector<Rational> rho_coeffs;
  std::vector<Rational> inv_rho_coeffs;

  mutable std::mutex mutex;
  mutable std::deque<Rung> ladder;

  Rung make_rung(RationalInterval root) const {
    Rung r{std::move(root), {}, {}};
    r.lo_pow.resize(degree);
    r.hi_pow.resize(degree);
    r.lo_pow[0] = 1;
    r.hi_pow[0] = 1;
    for (std::size_t k = 1; k < degree; ++k) {
      r.lo_pow[k] = r.lo_pow[k - 1] * r.root.lo;
      r.hi_pow[k] = r.hi_pow[k - 1] * r.root.hi;
    }
    return r;
  }

  const Rung& rung(std::size_t level) const {
    std::lock_guard lock(mutex);
    while (ladder.size() <= level) {
      RationalInterval next = ladder.back().root;
      bisect(poly, next, sign_at_lo, kBisectionsPerRung);
      ladder.push_back(make_rung(std::move(next)));
    }
    return ladder[level];
  }
};

AlgebraicContext AlgebraicContext::make(std::vector<Integer> poly, const Rational& lo, const Rational& hi) {
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  if (poly.size() < 2) {
    throw Error(Errc::invalid_polynomial, "polynomial must have degree at least 1", "poly");
  }
  if (poly.front() == 0) {
    throw Error(Errc::zero_constant_term, "polynomial constant term must be nonzero", "poly");
  }
  if (!(lo > 0 && lo < hi && hi < 1)) {
    throw Error(Errc::root_out_of_unit, "isolating interval must satisfy 0 < lo < hi < 1", "iso");
  }
  const int s_lo = sgn(eval_poly(poly, lo));
  const int s_hi = sgn(eval_poly(poly, hi));
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) {
    throw Error(Errc::no_sign_change, "polynomial has no sign change across the isolating interval", "iso");
  }

  auto impl = std::make_shared<Impl>();
  impl->poly = std::move(poly);
  impl->degree = impl->poly.size() - 1;
  impl->sign_at_lo = s_lo;
  const std::size_t d = impl->degree;
  const Rational lead(impl->poly[d]);

  if (d >= 2) {
    std::vector<Rational> top(d);
    for (std::size_t k = 0; k < d; ++k) top[k] = -Rational(impl->poly[k]) / lead;
    impl->reduction.push_back(top);
    for (std::size_t j = 1; j + 1 < d; ++j) {
      const auto& prev = impl->reduction.back();
      std::vector<Rational> next(d);
      for (std::size_t k = 1; k < d; ++k) next[k] = prev[k - 1];
      for (std::size_t k = 0; k < d; ++k) next[k] += prev[d - 1] * top[k];
      impl->reduction.push_back(std::move(next));
    }
    impl->rho_coeffs.assign(d, Rational(0));
    impl->rho_coeffs[1] = 1;
  } else {
    impl->rho_coeffs = {-Rational(impl->poly[0]) / lead};
  }

  const Rational c0(impl->poly[0]);
  impl->inv_rho_coeffs.assign(d, Rational(0));
  for (std::size_t k = 1; k <= d; ++k) impl->inv_rho_coeffs[k - 1] = -Rational(impl->poly[k]) / c0;

  RationalInterval root{lo, hi};
  // Width starts below 1, so 17 halvings bring it under 2^-16.
  bisect(impl->poly, root, s_lo, kInitialBisections);
  impl->ladder.push_back(impl->make_rung(std::move(root)));
  return AlgebraicContext(std::move(impl));
}

AlgebraicContext AlgebraicContext::rational(const Rational& rho) {
  if (!(rho > 0 && rho < 1)) {
    throw Error(Errc::root_out_of_unit, "rational ratio must lie in (0, 1)", "rho");
  }
  std::vector<Integer> poly{-rho.get_num(), rho.get_den()};
  return make(std::move(poly), rho / 2, (rho + 1) / 2);
}

std::size_t AlgebraicContext::degree() const { return impl_->degree; }
const std::vector<Integer>& AlgebraicContext::poly() const { return impl_->poly; }
RationalInterval AlgebraicContext::isolating_interval() const { return impl_->rung(0).root; }
RationalInterval AlgebraicContext::root_interval(std::size_t level) const { return impl_->rung(level).root; }

FieldElement AlgebraicContext::zero() const {
  return FieldElement(*this, std::vector<Rational>(impl_->degree, Rational(0)));
}

FieldElement AlgebraicContext::one() const { return from_rational(Rational(1)); }
FieldElement AlgebraicContext::rho() const { return FieldElement(*this, impl_->rho_coeffs); }
FieldElement AlgebraicContext::inv_rho() const { return FieldElement(*this, impl_->inv_rho_coeffs); }

FieldElement AlgebraicContext::from_rational(const Rational& q) const {
  std::vector<Rational> c(impl_->degree, Rational(0));
  c[0] = q;
  return FieldElement(*this, std::move(c));
}

FieldElement AlgebraicContext::from_coeffs(std::vector<Rational> coeffs) const {
  if (coeffs.size() != impl_->degree) {
    throw Error(Errc::invalid_argument, "coefficient vector length must equal the field degree", "coeffs");
  }
  for (auto& c : coeffs) c.canonicalize();
  return FieldElement(*this, std::move(coeffs));
}

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

void FieldElement::require_same_context(const FieldElement& other) const {
  if (!(ctx_ == other.ctx_)) {
    throw Error(Errc::context_mismatch, "field elements belong to different contexts");
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& other) {
  require_same_context(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& other) {
  require_same_context(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& other) {
  require_same_context(other);
  const std::size_t d = coeffs_.size();
  if (d == 1) {
    coeffs_[0] *= other.coeffs_[0];
    return *this;
  }
  std::vector<Rational> prod(2 * d - 1, Rational(0));
  for (std::size_t i = 0; i < d; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (other.coeffs_[j] == 0) continue;
      prod[i + j] += coeffs_[i] * other.coeffs_[j];
    }
  }
  const auto& reduction = ctx_.impl_->reduction;
  for (std::size_t k = d; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    const auto& r = reduction[k - d];
    for (std::size_t i = 0; i < d; ++i) prod[i] += prod[k] * r[i];
  }
  prod.resize(d);
  coeffs_ = std::move(prod);
  return *this;
}

FieldElement& FieldElement::operator*=(const Rational& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  a.require_same_context(b);
  return a.coeffs_ == b.coeffs_;
}

FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
FieldElement sub(const FieldElement& a, const FieldElement& b) { return a - b; }
FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
FieldElement negate(const FieldElement& a) { return -a; }
FieldElement inv_rho(const AlgebraicContext& ctx) { return ctx.inv_rho(); }

RationalInterval evaluate_enclosure(const FieldElement& x, std::size_t level) {
  const auto& c = x.coeffs_;
  if (c.size() == 1) return {c[0], c[0]};
  const auto& r = x.ctx_.impl_->rung(level);
  RationalInterval out{c[0], c[0]};
  for (std::size_t k = 1; k < c.size(); ++k) {
    const int s = sgn(c[k]);
    if (s == 0) continue;
    if (s > 0) {
      out.lo += c[k] * r.lo_pow[k];
      out.hi += c[k] * r.hi_pow[k];
    } else {
      out.lo += c[k] * r.hi_pow[k];
      out.hi += c[k] * r.lo_pow[k];
    }
  }
  return out;
}

int sign(const FieldElement& x) {
  if (x.is_zero()) return 0;
  for (std::size_t level = 0; level < kMaxRungs; ++level) {
    const auto e = evaluate_enclosure(x, level);
    if (sgn(e.lo) > 0) return 1;
    if (sgn(e.hi) < 0) return -1;
  }
  throw Error(Errc::precondition_violated,
              "sign undecidable: nonzero coefficients but value encloses zero (is the polynomial irreducible?)",
              "poly");
}

int compare(const FieldElement& a, const FieldElement& b) { return sign(a - b); }

double to_float(const FieldElement& x, double abs_err) {
  if (!(abs_err > 0)) throw Error(Errc::invalid_argument, "abs_err must be positive", "abs_err");
  if (x.is_zero()) return 0.0;
  const Rational tol = Rational(abs_err) / 2;
  for (std::size_t level = 0; level < kMaxRungs; ++level) {
    const auto e = evaluate_enclosure(x, level);
    if (e.hi - e.lo <= tol) return Rational((e.lo + e.hi) / 2).get_d();
  }
  throw Error(Errc::precondition_violated, "to_float could not reach the requested accuracy", "abs_err");
}

std::string canonical_key(const FieldElement& x) {
  std::string key;
  key.push_back(static_cast<char>(x.coeffs().size()));
  auto put_magnitude = [&key](const Integer& z) {
    std::size_t count = 0;
    void* raw = mpz_export(nullptr, &count, 1, 1, 1, 0, z.get_mpz_t());
    for (int shift = 24; shift >= 0; shift -= 8) key.push_back(static_cast<char>((count >> shift) & 0xff));
    key.append(static_cast<const char*>(raw), count);
    void (*free_fn)(void*, std::size_t) = nullptr;
    mp_get_memory_functions(nullptr, nullptr, &free_fn);
    free_fn(raw, count);
  };
  for (const auto& c : x.coeffs()) {
    Rational q = c;
    q.canonicalize();
    key.push_back(static_cast<char>(sgn(q) + 1));
    put_magnitude(q.get_num());
    put_magnitude(q.get_den());
  }
  return key;
}

Rational parse_rational(const std::string& text) {
  auto fail = [&text]() -> Rational {
    throw Error(Errc::invalid_argument, "cannot parse rational number '" + text + "'");
  };
  if (text.empty()) return fail();
  try {
    if (text.find('/') != std::string::npos) {
      Rational q(text, 10);
      if (q.get_den() == 0) return fail();
      q.canonicalize();
      return q;
    }
    // Decimal with optional exponent, parsed exactly.
    std::size_t pos = 0;
    std::string digits;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
    long scale = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; pos < text.size(); ++pos) {
      const char ch = text[pos];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        digits.push_back(ch);
        seen_digit = true;
        if (seen_point) --scale;
      } else if (ch == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) return fail();
    if (pos < text.size()) {
      if (text[pos] != 'e' && text[pos] != 'E') return fail();
      const std::string exp = text.substr(pos + 1);
      std::size_t used = 0;
      const long e = std::stol(exp, &used);
      if (used != exp.size()) return fail();
      scale += e;
    }
    Rational q{Integer(digits, 10)};
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale < 0) q /= Rational(ten_pow);
    else q *= Rational(ten_pow);
    if (negative) q = -q;
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    return fail();
  } catch (const std::out_of_range&) {
    return fail();
  }
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace ifszeta
