#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ifszeta/dimension.hpp"
#include "ifszeta/zeta.hpp"
#include "support/fixtures.hpp"

namespace ifszeta {
namespace {

using testing::q;
constexpr double kLn2 = std::numbers::ln2;
const double kCantorDim = kLn2 / std::log(3.0);

FilteredLevel word_level(const IfsParams& p, unsigned n, const FilterSpec& f = FilterSpec::none(), double D = 1.0) {
  const auto level = enumerate_level(p, n);
  return apply_filter(level, select_weights(level, WeightSource::word_weight), D, f);
}

TEST(ZetaPartial, EqualWeightClosedForms) {
  const auto level = enumerate_level(testing::cantor13(), 4);
  const auto w = select_weights(level, WeightSource::word_weight);
  const auto z2 = zeta_partial(level, w, kCantorDim, FilterSpec::none(), {2.0, 0.0});
  EXPECT_NEAR(z2.value.real(), 0.0625, 1e-12);
  EXPECT_EQ(z2.value.imag(), 0.0);
  const auto z1 = zeta_partial(level, w, kCantorDim, FilterSpec::none(), {1.0, 0.0});
  EXPECT_EQ(z1.value, Complex(1.0, 0.0));
  EXPECT_EQ(z1.passed, 16u);
  const auto zh = zeta_partial(level, w, kCantorDim, FilterSpec::none(), {0.5, 0.0});
  EXPECT_NEAR(zh.value.real(), 4.0, 1e-12);
}

TEST(ZetaPartial, RejectsNonpositiveWeights) {
  const auto level = enumerate_level(testing::cantor13(), 1);
  const std::vector<double> w{0.5, 0.0};
  try {
    zeta_partial(level, w, kCantorDim, FilterSpec::none(), {2.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::nonpositive_weight);
  }
  const std::vector<double> short_w{0.5};
  EXPECT_THROW(zeta_partial(level, short_w, kCantorDim, FilterSpec::none(), {2.0, 0.0}), Error);
  const std::vector<double> ok{0.5, 0.5};
  EXPECT_THROW(zeta_partial(level, ok, kCantorDim, FilterSpec::absolute(0.0), {2.0, 0.0}), Error);
}

TEST(ZetaPartial, MassBookkeepingForWordWeights) {
  for (const auto& preset : testing::all_presets()) {
    for (const auto& f : {FilterSpec::none(), FilterSpec::absolute(0.01), FilterSpec::relative(0.5)}) {
      const auto level = word_level(preset.params, 9, f, 0.9);
      EXPECT_NEAR(level.filtered_mass + level.excluded_mass, 1.0, 1e-12);
      EXPECT_LE(level.passed(), level.total);
    }
  }
}

TEST(ZetaPartial, RelativeFilterKeepsCylindersNearCenter) {
  const auto p = testing::golden();
  const auto level = enumerate_level(p, 8);
  const auto w = select_weights(level, WeightSource::word_weight);
  const double D = 0.99;
  const double c = filter_center(p, D, 8);
  const auto f = apply_filter(level, w, D, FilterSpec::relative(0.25));
  for (double x : f.weights) EXPECT_LT(std::abs(x / c - 1.0), 0.25);
  EXPECT_NEAR(f.center, c, 0);
}

TEST(ZetaPartial, TriangleInequalityOnRandomArguments) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> sigma(0.05, 3.0), t(-30, 30), eps(0.001, 0.5);
  std::uniform_int_distribution<int> mode(0, 2);
  const auto presets = testing::all_presets();
  for (int i = 0; i < 200; ++i) {
    const auto& p = presets[i % 3].params;
    const auto level = enumerate_level(p, 7);
    const auto w = select_weights(level, WeightSource::word_weight);
    const FilterSpec f{static_cast<FilterMode>(mode(rng)), eps(rng)};
    const Complex s(sigma(rng), t(rng));
    const auto fl = apply_filter(level, w, 0.8, f);
    double bound = 0;
    for (double x : fl.weights) bound += std::pow(x, s.real());
    EXPECT_LE(std::abs(evaluate(fl, s)), bound * (1 + 1e-12) + 1e-300);
  }
}

TEST(ZetaPartial, BoundedRightOfOne) {
  for (const auto& preset : testing::all_presets()) {
    for (unsigned n = 1; n <= 9; ++n) {
      const auto level = word_level(preset.params, n);
      for (double sigma : {1.1, 1.5, 2.0, 3.0}) {
        for (double t : {0.0, 1.0, 10.0}) EXPECT_LE(std::abs(evaluate(level, {sigma, t})), 1 + 1e-12);
      }
    }
  }
}

TEST(ZetaPartial, OscAgreesWithClassicalOracleThroughUniformWeights) {
  // With l_j = m^-n, zeta_n(s) = m^n * m^(-n s).
  const auto p = testing::cantor13();
  for (unsigned n = 1; n <= 10; ++n) {
    const auto level = word_level(p, n);
    for (const Complex s : {Complex(0.3, 0.0), Complex(1.7, 2.5), Complex(0.63, -4.0)}) {
      const Complex expected = std::exp(static_cast<double>(n) * std::log(2.0) * (1.0 - s));
      const Complex got = evaluate(level, s);
      EXPECT_NEAR(got.real(), expected.real(), 1e-12 * std::max(1.0, std::abs(expected)));
      EXPECT_NEAR(got.imag(), expected.imag(), 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(ChebyshevReport, Examples) {
  const auto g = testing::golden();
  const auto level = enumerate_level(g, 6);
  const auto w = select_weights(level, WeightSource::word_weight);
  const std::vector<double> big{1.0, 2.0};
  for (const auto& row : chebyshev_report(level, w, 1.0, big)) {
    EXPECT_EQ(row.excluded_mass, 0.0);
    EXPECT_TRUE(row.claim_holds);
  }
  const std::vector<double> grid{0.1, 0.01, 0.001};
  const auto rows = chebyshev_report(level, w, 1.0, grid);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.excluded_mass + row.filtered_mass, 1.0, 1e-12);
    EXPECT_EQ(row.eps_squared, row.eps * row.eps);
    EXPECT_EQ(row.claim_holds, row.excluded_mass < row.eps_squared);
  }

  const auto cantor = enumerate_level(testing::cantor13(), 7);
  const std::vector<double> tiny{1e-6, 1e-9};
  for (const auto& row : chebyshev_report(cantor, select_weights(cantor, WeightSource::word_weight), kCantorDim, tiny)) {
    EXPECT_EQ(row.excluded_mass, 0.0);
  }
}

TEST(ConvergenceScan, CantorGeometricDifferences) {
  const auto report = convergence_scan(testing::cantor13(), {2.0, 0.0}, 1, 10, FilterSpec::none(), kCantorDim);
  ASSERT_EQ(report.rows.size(), 10u);
  for (const auto& row : report.rows) {
    EXPECT_NEAR(row.difference, std::pow(2.0, -static_cast<double>(row.n) - 1), 1e-15);
    EXPECT_NEAR(row.bound, std::pow(1.0 / 3.0, 1 + 2.0 * (row.n + 1)), 1e-15);
  }
}

TEST(ConvergenceScan, StripGrowthIsFlagged) {
  const auto report = convergence_scan(testing::cantor13(), {0.5, 0.0}, 1, 10, FilterSpec::none(), kCantorDim);
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    EXPECT_GT(report.rows[k].difference, report.rows[k - 1].difference);
    EXPECT_LT(report.rows[k].bound, report.rows[k - 1].bound);
  }
  EXPECT_GT(report.drift, 0.5);
  EXPECT_TRUE(report.rows.back().exceeds_fit);
  EXPECT_FALSE(report.rows.front().exceeds_fit);
}

TEST(ConvergenceScan, GoldenDifferencesDecrease) {
  const auto report = convergence_scan(testing::golden(), {1.5, 0.0}, 2, 10, FilterSpec::none(), 1.0);
  ASSERT_EQ(report.rows.size(), 9u);
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    EXPECT_LT(report.rows[k].difference, report.rows[k - 1].difference) << "n=" << report.rows[k].n;
  }
  EXPECT_THROW(convergence_scan(testing::golden(), {-0.5, 0.0}, 2, 4, FilterSpec::none(), 1.0), Error);
}

TEST(StripScan, CantorSlopesAreExact) {
  StripGrid grid{{0.25, 0.5, 0.75, 1.0, 1.5, 2.0}, {0.0, 3.0, -7.5}};
  const auto points = strip_scan(testing::cantor13(), grid, 10, FilterSpec::none(), kCantorDim);
  ASSERT_EQ(points.size(), grid.size());
  for (const auto& pt : points) {
    EXPECT_NEAR(pt.growth_slope, (1 - pt.sigma) * kLn2, 1e-9) << pt.sigma << "," << pt.t;
    EXPECT_NEAR(pt.abs_zeta, std::pow(2.0, 10 * (1 - pt.sigma)), 1e-9 * std::pow(2.0, 10 * (1 - pt.sigma)));
  }
  const auto at_one = strip_scan(testing::cantor13(), StripGrid{{1.0}, {0.0}}, 8, FilterSpec::none(), kCantorDim);
  EXPECT_EQ(at_one[0].abs_zeta, 1.0);
  EXPECT_NEAR(at_one[0].growth_slope, 0.0, 1e-15);
}

TEST(StripScan, GoldenDichotomySigns) {
  StripGrid grid{{0.5, 1.5}, {0.0}};
  const auto points = strip_scan(testing::golden(), grid, 10, FilterSpec::none(), 1.0);
  EXPECT_GT(points[0].growth_slope, 0);
  EXPECT_LE(points[1].growth_slope, 0);
}

TEST(StripScan, RejectsHugeGridsAndIsThreadIndependent) {
  StripGrid huge{range_by_step(0, 1, 0.001), range_by_count(0, 1, 200)};
  EXPECT_THROW(strip_scan(testing::golden(), huge, 6, FilterSpec::none(), 1.0), Error);

  const auto levels = filtered_levels(testing::golden(), 6, 9, WeightSource::word_weight, 1.0, FilterSpec::none());
  StripGrid grid{range_by_step(0.1, 2.0, 0.1), range_by_count(-5, 5, 11)};
  const auto a = strip_scan(levels, grid, 1);
  const auto b = strip_scan(levels, grid, 7);
  std::ostringstream sa, sb;
  write_strip_csv(sa, a);
  write_strip_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(BoundaryF, ValueAtZeroAndConjugateSymmetry) {
  for (const auto& preset : testing::all_presets()) {
    const auto level = word_level(preset.params, 8, FilterSpec::relative(0.6), 0.95);
    std::vector<double> ts = range_by_count(-6, 6, 64);
    ts.push_back(0.0);
    const auto samples = boundary_F(level, ts);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& s = samples[k];
      EXPECT_LE(std::abs(s.value), level.filtered_mass + 1e-12);
      if (s.t == 0) {
        EXPECT_NEAR(s.value.real(), level.filtered_mass, 1e-15);
        EXPECT_EQ(s.value.imag(), 0.0);
      }
      const Complex mirrored = evaluate(level, {1.0, -s.t});
      EXPECT_NEAR(std::abs(mirrored - std::conj(s.value)), 0.0, 1e-12);
    }
    for (std::size_t k = 1; k < samples.size(); ++k) EXPECT_LE(samples[k - 1].t, samples[k].t);
  }
}

TEST(BoundaryF, EqualWeightsHaveUnitModulus) {
  const auto level = word_level(testing::cantor13(), 6);
  for (const auto& s : boundary_F(level, range_by_count(0, 10, 21))) EXPECT_NEAR(std::abs(s.value), 1.0, 1e-12);
}

TEST(BoundaryF, GoldenModulusBelowOne) {
  const auto level = word_level(testing::golden(), 8);
  const std::vector<double> t{5.0};
  EXPECT_LT(std::abs(boundary_F(level, t)[0].value), 1.0);
}

std::vector<BoundarySeries> series_for(const IfsParams& p, unsigned n_lo, unsigned n_hi, const FilterSpec& f,
                                       const std::vector<double>& ts) {
  std::vector<BoundarySeries> out;
  for (auto& level : filtered_levels(p, n_lo, n_hi, WeightSource::word_weight, 1.0, f)) {
    auto samples = boundary_F(level, ts);
    out.push_back(BoundarySeries{std::move(level), std::move(samples)});
  }
  return out;
}

TEST(BoundaryDiagnostics, EqualWeightsArePeriodic) {
  const unsigned n = 8;
  const auto series = series_for(testing::cantor13(), n - 1, n, FilterSpec::none(), range_by_count(0, 8, 64));
  const auto report = boundary_diagnostics(series);
  EXPECT_TRUE(report.periodic);
  const double expected = 2 * std::numbers::pi / (n * kLn2);
  EXPECT_NEAR(report.best_period / expected, 1.0, 1e-6);
  EXPECT_NEAR(report.sup_modulus, 1.0, 1e-12);
  EXPECT_FALSE(report.smoothness.empty());
  EXPECT_TRUE(std::isnan(report.smoothness.front().d1_change));
}

TEST(BoundaryDiagnostics, GoldenIsAperiodic) {
  const auto series = series_for(testing::golden(), 9, 10, FilterSpec::none(), range_by_count(0, 8, 64));
  const auto report = boundary_diagnostics(series);
  EXPECT_FALSE(report.periodic);
  EXPECT_GE(report.periodicity_score, 0.01 * report.sup_modulus);
  EXPECT_LT(report.sup_modulus, 1.0 + 1e-12);
}

TEST(BoundaryDiagnostics, EmptyFilterAndCoarseGrid) {
  const auto ts = range_by_count(0, 4, 32);
  const auto empty = boundary_diagnostics(series_for(testing::golden(), 5, 6, FilterSpec::absolute(1e-30), ts));
  EXPECT_TRUE(empty.empty_filter);
  EXPECT_EQ(empty.sup_modulus, 0.0);

  try {
    boundary_diagnostics(series_for(testing::golden(), 5, 6, FilterSpec::none(), range_by_count(0, 4, 10)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::grid_too_coarse);
  }
  EXPECT_THROW(boundary_diagnostics(series_for(testing::golden(), 5, 5, FilterSpec::none(), ts)), Error);
}

TEST(ClassicalOracle, CantorCriticalAbscissa) {
  const auto p = testing::cantor13();
  const double sigma_star = kLn2 / std::log(3.0);
  for (unsigned n = 2; n <= 10; ++n) {
    const auto v = classical_zeta_oracle(p, {sigma_star, 0.0}, n);
    EXPECT_NEAR(std::abs(v.partial_sum), std::pow(2.0, sigma_star), 1e-9);
    EXPECT_NEAR(std::abs(v.partial_sum - v.closed_form), 0.0, 1e-12);
    EXPECT_NEAR(v.critical_abscissa, sigma_star, 1e-15);
  }
  const auto s1 = classical_zeta_oracle(p, {1.0, 0.0}, 6);
  EXPECT_NEAR(s1.partial_sum.real(), std::pow(2.0 / 3.0, 6) * 2, 1e-12);
  const auto s0 = classical_zeta_oracle(p, {0.0, 0.0}, 6);
  EXPECT_NEAR(s0.partial_sum.real(), 64.0, 1e-12);
}

TEST(ClassicalOracle, RejectsOverlaps) {
  EXPECT_FALSE(satisfies_osc(testing::golden()));
  EXPECT_TRUE(satisfies_osc(testing::cantor13()));
  try {
    classical_zeta_oracle(testing::golden(), {1.0, 0.0}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::overlap_detected);
  }
}

TEST(Ranges, StepAndCount) {
  EXPECT_EQ(range_by_step(0.25, 2.0, 0.25).size(), 8u);
  EXPECT_EQ(range_by_count(-1, 1, 5), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  EXPECT_THROW(range_by_step(1, 0, 0.1), Error);
  EXPECT_THROW(range_by_count(0, 1, 0), Error);
}

}  // namespace
}  // namespace ifszeta
