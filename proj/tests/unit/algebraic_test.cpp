#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "ifszeta/algebraic.hpp"
#include "oracles/naive.hpp"
#include "support/fixtures.hpp"

namespace ifszeta {
namespace {

using testing::q;

AlgebraicContext golden_ctx() { return AlgebraicContext::make({-1, 1, 1}, q(3, 5), q(7, 10)); }
AlgebraicContext third_ctx() { return AlgebraicContext::make({-1, 3}, q(1, 4), q(1, 2)); }
AlgebraicContext plastic_ctx() { return AlgebraicContext::make({1, 0, -1, -1}, q(3, 4), q(19, 25)); }

TEST(AlgebraicContext, RationalRatioIsDegreeOne) {
  const auto ctx = third_ctx();
  EXPECT_EQ(ctx.degree(), 1u);
  EXPECT_EQ(ctx.rho().coeffs(), std::vector<Rational>{q(1, 3)});
  const auto iv = ctx.isolating_interval();
  EXPECT_LT(iv.lo, q(1, 3));
  EXPECT_GT(iv.hi, q(1, 3));
  EXPECT_LT(iv.hi - iv.lo, Rational(1, 65536));
}

TEST(AlgebraicContext, GoldenRatioRefinesIsolatingInterval) {
  const auto ctx = golden_ctx();
  EXPECT_EQ(ctx.degree(), 2u);
  const auto iv = ctx.isolating_interval();
  EXPECT_LT(iv.hi - iv.lo, Rational(1, 65536));
  const double root = (std::sqrt(5.0) - 1) / 2;
  EXPECT_LT(iv.lo.get_d(), root);
  EXPECT_GT(iv.hi.get_d(), root);
}

TEST(AlgebraicContext, RejectsBadInput) {
  // 2x^2 - 1 has its root 0.7071 inside (2/3, 3/4) but not (3/4, 4/5).
  EXPECT_NO_THROW(AlgebraicContext::make({-1, 0, 2}, q(2, 3), q(3, 4)));
  try {
    AlgebraicContext::make({-1, 0, 2}, q(3, 4), q(4, 5));
    FAIL() << "expected NoSignChange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_sign_change);
    EXPECT_EQ(e.field(), "iso");
  }
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::precondition_violated;
  };
  EXPECT_EQ(code_of([] { AlgebraicContext::make({0, 1, 1}, q(1, 4), q(1, 2)); }), Errc::zero_constant_term);
  EXPECT_EQ(code_of([] { AlgebraicContext::make({-1, 1, 1}, q(1, 2), q(3, 2)); }), Errc::root_out_of_unit);
  EXPECT_EQ(code_of([] { AlgebraicContext::make({-1, 1, 1}, q(7, 10), q(3, 5)); }), Errc::root_out_of_unit);
  EXPECT_EQ(code_of([] { AlgebraicContext::make({5}, q(1, 4), q(1, 2)); }), Errc::invalid_polynomial);
}

TEST(FieldElement, GoldenReduction) {
  const auto ctx = golden_ctx();
  const auto r = ctx.rho();
  EXPECT_EQ((r * r).coeffs(), (std::vector<Rational>{q(1), q(-1)}));
  const auto x = ctx.from_coeffs({q(2, 7), q(-5, 3)});
  EXPECT_TRUE(add(x, negate(x)).is_zero());
}

TEST(FieldElement, DegreeOneMultiplication) {
  const auto ctx = third_ctx();
  EXPECT_EQ(mul(ctx.rho(), ctx.rho()).coeffs(), std::vector<Rational>{q(1, 9)});
}

TEST(FieldElement, CubicReductionMatchesFloats) {
  const auto ctx = plastic_ctx();
  const double rho = oracle::root_by_bisection(ctx.poly(), q(3, 4), q(19, 25));
  FieldElement p = ctx.one();
  for (int k = 1; k <= 12; ++k) {
    p *= ctx.rho();
    EXPECT_NEAR(to_float(p, 1e-14), std::pow(rho, k), 1e-13) << "k=" << k;
  }
}

TEST(FieldElement, InverseOfRho) {
  EXPECT_EQ(inv_rho(third_ctx()).coeffs(), std::vector<Rational>{q(3)});
  EXPECT_EQ(inv_rho(golden_ctx()).coeffs(), (std::vector<Rational>{q(1), q(1)}));
  for (const auto& ctx : {third_ctx(), golden_ctx(), plastic_ctx()}) {
    EXPECT_EQ(mul(inv_rho(ctx), ctx.rho()), ctx.one());
  }
}

TEST(FieldElement, MixingContextsThrows) {
  const auto a = golden_ctx().one();
  const auto b = golden_ctx().one();  // distinct context object
  try {
    (void)add(a, b);
    FAIL() << "expected ContextMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::context_mismatch);
  }
}

TEST(Sign, Examples) {
  const auto ctx = golden_ctx();
  const auto r = ctx.rho();
  EXPECT_EQ(sign(r * r + r - ctx.one()), 0);
  EXPECT_EQ(sign(r - ctx.from_rational(q(1, 2))), 1);
  EXPECT_EQ(sign(ctx.zero()), 0);
  EXPECT_EQ(sign(ctx.from_rational(q(-3))), -1);
}

TEST(Sign, NeedsDeepRefinementForCloseValues) {
  // F_31 rho - F_30 is within 1e-12 of zero but positive for odd index.
  const auto ctx = golden_ctx();
  const auto x = ctx.from_coeffs({q(-832040), q(1346269)});  // F_31 rho - F_30
  const double rho = (std::sqrt(5.0) - 1) / 2;
  const double approx = 1346269 * rho - 832040;
  EXPECT_LT(std::abs(approx), 1e-5);
  EXPECT_EQ(sign(x), approx > 0 ? 1 : -1);
}

TEST(ToFloat, Examples) {
  EXPECT_NEAR(to_float(golden_ctx().rho(), 1e-9), 0.6180339887498949, 1e-9);
  EXPECT_EQ(to_float(golden_ctx().zero(), 1e-9), 0.0);
  EXPECT_NEAR(to_float(third_ctx().from_rational(q(5, 3)), 1e-9), 1.666666667, 1e-9);
  EXPECT_NEAR(to_float(golden_ctx().rho(), 1e-15), 0.6180339887498949, 1e-15);
}

TEST(CanonicalKey, Examples) {
  const auto ctx = golden_ctx();
  EXPECT_EQ(canonical_key(ctx.zero()), canonical_key(ctx.zero()));
  EXPECT_EQ(canonical_key(mul(ctx.rho(), ctx.rho())), canonical_key(sub(ctx.one(), ctx.rho())));
  const auto third = third_ctx();
  EXPECT_EQ(canonical_key(third.from_coeffs({Rational(2, 4)})), canonical_key(third.from_coeffs({q(1, 2)})));
  EXPECT_NE(canonical_key(third.from_coeffs({q(1, 2)})), canonical_key(third.from_coeffs({q(-1, 2)})));
}

TEST(ParseRational, AcceptsFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3/5"), q(3, 5));
  EXPECT_EQ(parse_rational("-6/4"), q(-3, 2));
  EXPECT_EQ(parse_rational("0.76"), q(19, 25));
  EXPECT_EQ(parse_rational("2"), q(2));
  EXPECT_EQ(parse_rational("1.5e-1"), q(3, 20));
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

class FieldProperties : public ::testing::TestWithParam<int> {
 protected:
  AlgebraicContext ctx() const {
    switch (GetParam()) {
      case 0: return third_ctx();
      case 1: return golden_ctx();
      default: return plastic_ctx();
    }
  }
};

TEST_P(FieldProperties, RingAxiomsOnRandomTriples) {
  const auto c = ctx();
  std::mt19937_64 rng(1234 + GetParam());
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_element(c, rng);
    const auto b = testing::random_element(c, rng);
    const auto d = testing::random_element(c, rng);
    ASSERT_EQ((a + b) + d, a + (b + d));
    ASSERT_EQ(a * (b + d), a * b + a * d);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a * b) * d, a * (b * d));
  }
}

TEST_P(FieldProperties, SignAgreesWithFloats) {
  const auto c = ctx();
  std::mt19937_64 rng(99 + GetParam());
  const double eps = 1e-12;
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_element(c, rng);
    const auto b = testing::random_element(c, rng);
    const int s = compare(a, b);
    if (s > 0) {
      ASSERT_GE(to_float(a, eps), to_float(b, eps) - 2 * eps);
    } else if (s < 0) {
      ASSERT_LE(to_float(a, eps), to_float(b, eps) + 2 * eps);
    }
    ASSERT_EQ(compare(b, a), -s);
  }
}

TEST_P(FieldProperties, KeysMatchIffDifferenceIsZero) {
  const auto c = ctx();
  std::mt19937_64 rng(7 + GetParam());
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_element(c, rng, 3);
    const auto b = testing::random_element(c, rng, 3);
    ASSERT_EQ(canonical_key(a) == canonical_key(b), (a - b).is_zero());
    // Same value reached along a different route.
    const auto a2 = (a * c.rho()) * c.inv_rho();
    ASSERT_EQ(canonical_key(a), canonical_key(a2));
  }
}

INSTANTIATE_TEST_SUITE_P(Contexts, FieldProperties, ::testing::Values(0, 1, 2));

TEST(AlgebraicContext, ConcurrentSignsAreConsistent) {
  const auto ctx = golden_ctx();
  const auto x = ctx.from_coeffs({q(-832040), q(1346269)});
  const int expected = sign(golden_ctx().from_coeffs({q(-832040), q(1346269)}));
  std::vector<std::thread> pool;
  std::vector<int> results(8);
  for (int i = 0; i < 8; ++i) pool.emplace_back([&, i] { results[i] = sign(x); });
  for (auto& t : pool) t.join();
  for (int r : results) EXPECT_EQ(r, expected);
}

}  // namespace
}  // namespace ifszeta
