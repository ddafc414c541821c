#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ifszeta/ifs.hpp"
#include "ifszeta/measure.hpp"

namespace ifszeta {

using Complex = std::complex<double>;

enum class FilterMode { none, absolute, relative };

/// Which cylinders enter the partial sums, relative to the center rho^(Dn):
/// absolute keeps |l - c| < eps, relative keeps |l/c - 1| < eps.
struct FilterSpec {
  FilterMode mode = FilterMode::none;
  double eps = 0;

  static FilterSpec none() { return {}; }
  static FilterSpec absolute(double eps) { return {FilterMode::absolute, eps}; }
  static FilterSpec relative(double eps) { return {FilterMode::relative, eps}; }

  void validate() const;
  bool passes(double weight, double center) const;
};

enum class WeightSource { word_weight, measure_lo, measure_mid };

// Per-cylinder l_j as doubles. Measure sources need bounds aligned with the
// level set.
std::vector<double> select_weights(const LevelSet& levelset, WeightSource source,
                                   std::span<const MeasureBounds> measures = {});

/// Cylinders of one level that pass a filter, in ascending endpoint order,
/// with the mass bookkeeping of the filter.
struct FilteredLevel {
  unsigned n = 0;
  double center = 0;
  std::size_t total = 0;
  std::vector<double> weights;
  std::vector<double> log_weights;
  double filtered_mass = 0;
  double excluded_mass = 0;

  std::size_t passed() const { return weights.size(); }
};

FilteredLevel apply_filter(const LevelSet& levelset, std::span<const double> weights, double D,
                           const FilterSpec& filter);

// sum over passing j of exp(s ln l_j), compensated, fixed order.
Complex evaluate(const FilteredLevel& level, Complex s);

struct ZetaValue {
  Complex s;
  unsigned n = 0;
  Complex value;
  std::size_t passed = 0;
  double filtered_mass = 0;
  double excluded_mass = 0;
};

ZetaValue zeta_partial(const LevelSet& levelset, std::span<const double> weights, double D, const FilterSpec& filter,
                       Complex s);
ZetaValue zeta_partial(const FilteredLevel& level, Complex s);

struct PipelineOptions {
  EnumerationOptions enumeration;
  // Measure depth for level n is n + depth_margin.
  unsigned depth_margin = 20;
};

// Filtered levels n_lo..n_hi (inclusive) built from one enumeration pass.
std::vector<FilteredLevel> filtered_levels(const IfsParams& params, unsigned n_lo, unsigned n_hi,
                                           WeightSource source, double D, const FilterSpec& filter,
                                           const PipelineOptions& options = {});

struct ChebyshevRow {
  double eps = 0;
  double excluded_mass = 0;
  double filtered_mass = 0;
  double eps_squared = 0;
  bool claim_holds = false;  // excluded_mass < eps^2
};

// Mass outside |l_j - rho^(Dn)| < eps, for each eps.
std::vector<ChebyshevRow> chebyshev_report(const LevelSet& levelset, std::span<const double> weights, double D,
                                           std::span<const double> eps_list);

struct ConvergenceRow {
  unsigned n = 0;
  double difference = 0;  // |zeta_{n+1} - zeta_n|
  double bound = 0;       // rho * rho^((n+1) Re s)
  double ratio = 0;       // difference / bound
  bool exceeds_fit = false;
};

/// Successive differences against the shape rho * rho^((n+1) Re s).
///
/// fitted_constant is the least-squares constant on logs with the bound's
/// slope held fixed; rows lying above it are flagged. drift is the
/// least-squares slope of log(ratio) in n: a positive drift means no
/// constant can make the bound hold.
struct ConvergenceReport {
  Complex s;
  std::vector<ConvergenceRow> rows;
  double fitted_constant = 0;
  double drift = 0;
};

// levels must be consecutive in n.
ConvergenceReport convergence_scan(std::span<const FilteredLevel> levels, double rho, Complex s);
ConvergenceReport convergence_scan(const IfsParams& params, Complex s, unsigned n_lo, unsigned n_hi,
                                   const FilterSpec& filter, double D, WeightSource source = WeightSource::word_weight,
                                   const PipelineOptions& options = {});

struct StripGrid {
  std::vector<double> sigmas;
  std::vector<double> ts;

  std::size_t size() const { return sigmas.size() * ts.size(); }
};

inline constexpr std::size_t kMaxGridPoints = 100'000;

// a, a+step, ... up to b (inclusive within rounding).
std::vector<double> range_by_step(double a, double b, double step);
// count evenly spaced points from a to b inclusive.
std::vector<double> range_by_count(double a, double b, std::size_t count);

struct StripPoint {
  double sigma = 0;
  double t = 0;
  double abs_zeta = 0;
  double growth_slope = 0;
};

// Least-squares slope of log|zeta(s, ., k)| against k over the given levels.
double growth_slope(std::span<const FilteredLevel> levels, Complex s);

// |zeta| at the last level and the growth slope over all supplied levels,
// for every grid point, in row-major (sigma, t) order.
std::vector<StripPoint> strip_scan(std::span<const FilteredLevel> levels, const StripGrid& grid, unsigned threads = 1);
// Uses levels max(1, n-3)..n.
std::vector<StripPoint> strip_scan(const IfsParams& params, const StripGrid& grid, unsigned n, const FilterSpec& filter,
                                   double D, WeightSource source = WeightSource::word_weight,
                                   const PipelineOptions& options = {});

struct BoundarySample {
  double t = 0;
  Complex value;
  unsigned n = 0;
};

// F_n(t) = sum over passing j of l_j exp(i t ln l_j); t_grid is sorted first.
std::vector<BoundarySample> boundary_F(const FilteredLevel& level, std::vector<double> t_grid);
std::vector<BoundarySample> boundary_F(const LevelSet& levelset, std::span<const double> weights, double D,
                                       const FilterSpec& filter, std::vector<double> t_grid);

struct BoundarySeries {
  FilteredLevel level;
  std::vector<BoundarySample> samples;
};

struct SmoothnessRow {
  unsigned n = 0;
  double t = 0;
  Complex d1;
  Complex d2;
  // |change| against the previous level at the same t; NaN on the first level.
  double d1_change = 0;
  double d2_change = 0;
};

struct PeriodScanOptions {
  double t_max = 20;
  std::size_t steps = 4000;
  // Score below threshold * sup_modulus counts as periodic.
  double threshold = 0.01;
};

struct BoundaryReport {
  double sup_modulus = 0;
  bool empty_filter = false;
  std::vector<SmoothnessRow> smoothness;
  double periodicity_score = 0;
  double best_period = 0;
  bool periodic = false;
};

/// Diagnostics over boundary samples of several levels sharing one uniform
/// t grid: the largest |F_n(t)|, finite-difference derivatives and their
/// level-to-level change, and a period scan on the last level. The period
/// score of T is the mean of |F(t_k + T) - F(t_k)| over the grid; the scan
/// skips the initial rise from T = 0 and reports the first local minimum
/// under the threshold, or the smallest one found.
BoundaryReport boundary_diagnostics(std::span<const BoundarySeries> series, const PeriodScanOptions& options = {});

struct OracleValue {
  Complex partial_sum;
  Complex closed_form;
  double critical_abscissa = 0;  // ln m / ln(1/rho)
};

// Level-1 cylinders pairwise disjoint (exact test).
bool satisfies_osc(const IfsParams& params);

// sum over level-n intervals of length^s against m^n (rho^n a_m)^s.
OracleValue classical_zeta_oracle(const IfsParams& params, Complex s, unsigned n, const EnumerationOptions& options = {});

void write_strip_csv(std::ostream& out, std::span<const StripPoint> points);
void write_boundary_csv(std::ostream& out, std::span<const BoundarySample> samples);
void write_smoothness_csv(std::ostream& out, std::span<const SmoothnessRow> rows);
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
void write_chebyshev_csv(std::ostream& out, std::span<const ChebyshevRow> rows);
void write_zeta_csv(std::ostream& out, std::span<const ZetaValue> values);

}  // namespace ifszeta
