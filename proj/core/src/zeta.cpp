#include "ifszeta/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include "ifszeta/csv.hpp"
#include "ifszeta/dimension.hpp"
#include "parallel.hpp"

namespace ifszeta {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const auto k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

const char* bool_field(bool b) { return b ? "1" : "0"; }

}  // namespace

void FilterSpec::validate() const {
  if (mode != FilterMode::none && !(eps > 0 && std::isfinite(eps))) {
    throw Error(Errc::invalid_argument, "filter eps must be positive and finite", "filter.eps");
  }
}

bool FilterSpec::passes(double weight, double center) const {
  switch (mode) {
    case FilterMode::none: return true;
    case FilterMode::absolute: return std::abs(weight - center) < eps;
    case FilterMode::relative: return std::abs(weight / center - 1.0) < eps;
  }
  return false;
}

std::vector<double> select_weights(const LevelSet& levelset, WeightSource source, std::span<const MeasureBounds> measures) {
  std::vector<double> out(levelset.size());
  if (source == WeightSource::word_weight) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = levelset.cylinders[j].weight.get_d();
    return out;
  }
  if (measures.size() != levelset.size()) {
    throw Error(Errc::invalid_argument, "measure-based weights need bounds for every cylinder", "weight_source");
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto& b = measures[j];
    out[j] = source == WeightSource::measure_lo ? b.lo.get_d() : Rational((b.lo + b.hi) / 2).get_d();
  }
  return out;
}

FilteredLevel apply_filter(const LevelSet& levelset, std::span<const double> weights, double D,
                           const FilterSpec& filter) {
  filter.validate();
  if (weights.size() != levelset.size()) {
    throw Error(Errc::invalid_argument, "weights are not aligned with the level set", "weights");
  }
  FilteredLevel out;
  out.n = levelset.n;
  out.total = weights.size();
  out.center = filter.mode == FilterMode::none ? std::numeric_limits<double>::quiet_NaN()
                                               : filter_center(levelset.params, D, levelset.n);
  CompensatedSum kept, dropped;
  for (double w : weights) {
    if (!(w > 0)) throw Error(Errc::nonpositive_weight, "cylinder weight must be positive", "weights");
    if (filter.passes(w, out.center)) {
      out.weights.push_back(w);
      out.log_weights.push_back(std::log(w));
      kept.add(w);
    } else {
      dropped.add(w);
    }
  }
  out.filtered_mass = kept.value();
  out.excluded_mass = dropped.value();
  return out;
}

Complex evaluate(const FilteredLevel& level, Complex s) {
  // l^s = l * exp((s - 1) ln l) keeps s = 1 exact.
  const double sigma = s.real() - 1.0;
  const double t = s.imag();
  CompensatedSum re, im;
  for (std::size_t j = 0; j < level.weights.size(); ++j) {
    const double L = level.log_weights[j];
    const double mag = sigma == 0 ? level.weights[j] : level.weights[j] * std::exp(sigma * L);
    if (t == 0) {
      re.add(mag);
    } else {
      re.add(mag * std::cos(t * L));
      im.add(mag * std::sin(t * L));
    }
  }
  return {re.value(), im.value()};
}

ZetaValue zeta_partial(const FilteredLevel& level, Complex s) {
  return ZetaValue{s, level.n, evaluate(level, s), level.passed(), level.filtered_mass, level.excluded_mass};
}

ZetaValue zeta_partial(const LevelSet& levelset, std::span<const double> weights, double D, const FilterSpec& filter,
                       Complex s) {
  return zeta_partial(apply_filter(levelset, weights, D, filter), s);
}

std::vector<FilteredLevel> filtered_levels(const IfsParams& params, unsigned n_lo, unsigned n_hi, WeightSource source,
                                           double D, const FilterSpec& filter, const PipelineOptions& options) {
  if (n_lo < 1 || n_hi < n_lo) throw Error(Errc::invalid_argument, "invalid level range", "n");
  EnumerationOptions enum_opts = options.enumeration;
  enum_opts.track_weights = true;
  LevelEnumerator e(params, enum_opts);
  std::optional<MeasureEvaluator> evaluator;
  if (source != WeightSource::word_weight) evaluator.emplace(params);
  std::vector<FilteredLevel> out;
  for (;;) {
    const LevelSet& level = e.current();
    if (level.n >= n_lo) {
      std::vector<double> weights;
      if (evaluator) {
        const auto bounds =
            cylinder_measures(*evaluator, level, level.n + options.depth_margin, options.enumeration.threads);
        weights = select_weights(level, source, bounds);
      } else {
        weights = select_weights(level, source);
      }
      out.push_back(apply_filter(level, weights, D, filter));
    }
    if (level.n >= n_hi) break;
    e.advance();
  }
  return out;
}

std::vector<ChebyshevRow> chebyshev_report(const LevelSet& levelset, std::span<const double> weights, double D,
                                           std::span<const double> eps_list) {
  std::vector<ChebyshevRow> rows;
  for (double eps : eps_list) {
    const FilteredLevel f = apply_filter(levelset, weights, D, FilterSpec::absolute(eps));
    rows.push_back(ChebyshevRow{eps, f.excluded_mass, f.filtered_mass, eps * eps, f.excluded_mass < eps * eps});
  }
  return rows;
}

ConvergenceReport convergence_scan(std::span<const FilteredLevel> levels, double rho, Complex s) {
  if (!(s.real() > 0)) throw Error(Errc::invalid_argument, "convergence scan needs Re s > 0", "s");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k].n != levels[k - 1].n + 1) {
      throw Error(Errc::invalid_argument, "levels must be consecutive", "n");
    }
  }
  ConvergenceReport report;
  report.s = s;
  std::vector<Complex> values;
  for (const auto& level : levels) values.push_back(evaluate(level, s));
  std::vector<double> ns, log_ratios;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    ConvergenceRow row;
    row.n = levels[k].n;
    row.difference = std::abs(values[k + 1] - values[k]);
    row.bound = rho * std::pow(rho, static_cast<double>(row.n + 1) * s.real());
    row.ratio = row.difference / row.bound;
    if (row.difference > 0 && std::isfinite(row.ratio)) {
      ns.push_back(row.n);
      log_ratios.push_back(std::log(row.ratio));
    }
    report.rows.push_back(row);
  }
  if (!log_ratios.empty()) {
    double mean = 0;
    for (double v : log_ratios) mean += v;
    mean /= static_cast<double>(log_ratios.size());
    report.fitted_constant = std::exp(mean);
    report.drift = least_squares_slope(ns, log_ratios);
  }
  for (auto& row : report.rows) row.exceeds_fit = row.ratio > report.fitted_constant * (1 + 1e-12);
  return report;
}

ConvergenceReport convergence_scan(const IfsParams& params, Complex s, unsigned n_lo, unsigned n_hi,
                                   const FilterSpec& filter, double D, WeightSource source,
                                   const PipelineOptions& options) {
  const auto levels = filtered_levels(params, n_lo, n_hi + 1, source, D, filter, options);
  return convergence_scan(levels, params.rho_float(), s);
}

std::vector<double> range_by_step(double a, double b, double step) {
  if (!(step > 0) || !std::isfinite(a) || !std::isfinite(b) || b < a) {
    throw Error(Errc::invalid_argument, "range needs a <= b and a positive step", "range");
  }
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > kMaxGridPoints) throw Error(Errc::grid_too_large, "range has too many points", "range");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + static_cast<double>(i) * step;
  return out;
}

std::vector<double> range_by_count(double a, double b, std::size_t count) {
  if (count == 0 || !std::isfinite(a) || !std::isfinite(b) || b < a) {
    throw Error(Errc::invalid_argument, "range needs a <= b and a positive count", "range");
  }
  if (count > kMaxGridPoints) throw Error(Errc::grid_too_large, "range has too many points", "range");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  const double h = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + static_cast<double>(i) * h;
  out.back() = b;
  return out;
}

double growth_slope(std::span<const FilteredLevel> levels, Complex s) {
  if (levels.size() < 2) throw Error(Errc::invalid_argument, "growth slope needs at least two levels", "n");
  std::vector<double> ns, logs;
  for (const auto& level : levels) {
    const double a = std::abs(evaluate(level, s));
    if (!(a > 0)) return std::numeric_limits<double>::quiet_NaN();
    ns.push_back(level.n);
    logs.push_back(std::log(a));
  }
  return least_squares_slope(ns, logs);
}

std::vector<StripPoint> strip_scan(std::span<const FilteredLevel> levels, const StripGrid& grid, unsigned threads) {
  if (grid.size() > kMaxGridPoints) throw Error(Errc::grid_too_large, "strip grid exceeds 1e5 points", "sigma_range");
  if (levels.empty()) throw Error(Errc::invalid_argument, "strip scan needs levels", "n");
  std::vector<StripPoint> out(grid.size());
  const std::size_t nt = grid.ts.size();
  detail::parallel_chunks(out.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const double sigma = grid.sigmas[idx / nt];
      const double t = grid.ts[idx % nt];
      const Complex s(sigma, t);
      out[idx] = StripPoint{sigma, t, std::abs(evaluate(levels.back(), s)),
                            levels.size() >= 2 ? growth_slope(levels, s) : std::numeric_limits<double>::quiet_NaN()};
    }
  });
  return out;
}

std::vector<StripPoint> strip_scan(const IfsParams& params, const StripGrid& grid, unsigned n, const FilterSpec& filter,
                                   double D, WeightSource source, const PipelineOptions& options) {
  if (grid.size() > kMaxGridPoints) throw Error(Errc::grid_too_large, "strip grid exceeds 1e5 points", "sigma_range");
  const unsigned n_lo = n > 3 ? n - 3 : 1;
  const auto levels = filtered_levels(params, n_lo, n, source, D, filter, options);
  return strip_scan(levels, grid, options.enumeration.threads);
}

std::vector<BoundarySample> boundary_F(const FilteredLevel& level, std::vector<double> t_grid) {
  std::sort(t_grid.begin(), t_grid.end());
  std::vector<BoundarySample> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(BoundarySample{t, evaluate(level, Complex(1.0, t)), level.n});
  return out;
}

std::vector<BoundarySample> boundary_F(const LevelSet& levelset, std::span<const double> weights, double D,
                                       const FilterSpec& filter, std::vector<double> t_grid) {
  return boundary_F(apply_filter(levelset, weights, D, filter), std::move(t_grid));
}

namespace {

double period_score(const BoundarySeries& top, double period) {
  CompensatedSum acc;
  for (const auto& sample : top.samples) {
    acc.add(std::abs(evaluate(top.level, Complex(1.0, sample.t + period)) - sample.value));
  }
  return acc.value() / static_cast<double>(top.samples.size());
}

// Golden-section minimum of the score on [a, b].
std::pair<double, double> refine_period(const BoundarySeries& top, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = period_score(top, c);
  double fd = period_score(top, d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = period_score(top, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = period_score(top, d);
    }
  }
  const double t = (a + b) / 2;
  return {t, period_score(top, t)};
}

}  // namespace

BoundaryReport boundary_diagnostics(std::span<const BoundarySeries> series, const PeriodScanOptions& options) {
  if (series.size() < 2) {
    throw Error(Errc::precondition_violated, "boundary diagnostics need at least two levels", "n");
  }
  const auto& grid = series.front().samples;
  if (grid.size() < 16) throw Error(Errc::grid_too_coarse, "boundary grid needs at least 16 points", "t_range");
  const double h = grid[1].t - grid[0].t;
  if (!(h > 0)) throw Error(Errc::invalid_argument, "t grid must be increasing", "t_range");
  for (const auto& s : series) {
    if (s.samples.size() != grid.size()) throw Error(Errc::invalid_argument, "levels use different t grids", "t_range");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (s.samples[k].t != grid[k].t) throw Error(Errc::invalid_argument, "levels use different t grids", "t_range");
      if (k > 0 && std::abs((grid[k].t - grid[k - 1].t) - h) > 1e-9 * std::max(1.0, h)) {
        throw Error(Errc::invalid_argument, "t grid must be uniform", "t_range");
      }
    }
  }

  BoundaryReport report;
  bool any_passed = false;
  for (const auto& s : series) {
    any_passed = any_passed || s.level.passed() > 0;
    for (const auto& sample : s.samples) report.sup_modulus = std::max(report.sup_modulus, std::abs(sample.value));
  }
  report.empty_filter = !any_passed;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Complex> prev_d1, prev_d2;
  for (const auto& s : series) {
    std::vector<Complex> d1, d2;
    for (std::size_t k = 1; k + 1 < s.samples.size(); ++k) {
      const Complex f_minus = s.samples[k - 1].value;
      const Complex f = s.samples[k].value;
      const Complex f_plus = s.samples[k + 1].value;
      d1.push_back((f_plus - f_minus) / (2 * h));
      d2.push_back((f_plus - 2.0 * f + f_minus) / (h * h));
    }
    for (std::size_t k = 0; k < d1.size(); ++k) {
      report.smoothness.push_back(SmoothnessRow{s.level.n, s.samples[k + 1].t, d1[k], d2[k],
                                                prev_d1.empty() ? nan : std::abs(d1[k] - prev_d1[k]),
                                                prev_d2.empty() ? nan : std::abs(d2[k] - prev_d2[k])});
    }
    prev_d1 = std::move(d1);
    prev_d2 = std::move(d2);
  }

  if (report.empty_filter) return report;

  const BoundarySeries& top = series.back();
  const std::size_t steps = std::max<std::size_t>(options.steps, 8);
  const double step = options.t_max / static_cast<double>(steps);
  std::vector<double> scores(steps + 1);
  scores[0] = 0;
  for (std::size_t j = 1; j <= steps; ++j) scores[j] = period_score(top, static_cast<double>(j) * step);

  // Skip the initial rise from T = 0.
  std::size_t first_peak = 0;
  for (std::size_t j = 1; j < steps; ++j) {
    if (scores[j] >= scores[j - 1] && scores[j] > scores[j + 1]) {
      first_peak = j;
      break;
    }
  }
  report.periodicity_score = std::numeric_limits<double>::infinity();
  report.best_period = nan;
  if (first_peak == 0) {
    report.periodicity_score = scores[steps];
    report.best_period = options.t_max;
    return report;
  }
  const double limit = options.threshold * report.sup_modulus;
  for (std::size_t j = first_peak + 1; j < steps; ++j) {
    if (!(scores[j] <= scores[j - 1] && scores[j] <= scores[j + 1])) continue;
    const auto [period, score] =
        refine_period(top, static_cast<double>(j - 1) * step, static_cast<double>(j + 1) * step);
    if (score < report.periodicity_score) {
      report.periodicity_score = score;
      report.best_period = period;
    }
    if (score < limit) {
      report.periodicity_score = score;
      report.best_period = period;
      report.periodic = true;
      return report;
    }
  }
  if (scores[steps] < report.periodicity_score) {
    report.periodicity_score = scores[steps];
    report.best_period = options.t_max;
  }
  return report;
}

bool satisfies_osc(const IfsParams& params) {
  const FieldElement reach = params.ctx.rho() * Rational(Integer(static_cast<unsigned long>(params.span())));
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (compare(params.translation(i) + reach, params.translation(i + 1)) >= 0) return false;
  }
  return true;
}

OracleValue classical_zeta_oracle(const IfsParams& params, Complex s, unsigned n, const EnumerationOptions& options) {
  if (!satisfies_osc(params)) {
    throw Error(Errc::overlap_detected, "level-1 cylinders overlap; the classical oracle needs separated pieces",
                "digits");
  }
  EnumerationOptions opts = options;
  opts.track_weights = false;
  const LevelSet level = enumerate_level(params, n, opts);
  const double rho = params.rho_float();
  const double a_m = static_cast<double>(params.span());
  const double approx_len = a_m * std::pow(rho, static_cast<double>(n));
  const double length = to_float(level.length(), approx_len * 1e-15);
  const Complex term = std::exp(s * std::log(length));
  CompensatedSum re, im;
  for (const auto& c : level.cylinders) {
    const auto mult = static_cast<double>(c.multiplicity);
    re.add(mult * term.real());
    im.add(mult * term.imag());
  }
  OracleValue out;
  out.partial_sum = {re.value(), im.value()};
  const double m = static_cast<double>(params.size());
  const double n_d = static_cast<double>(n);
  out.closed_form = std::exp(n_d * std::log(m) + s * (n_d * std::log(rho) + std::log(a_m)));
  out.critical_abscissa = std::log(m) / -std::log(rho);
  return out;
}

void write_strip_csv(std::ostream& out, std::span<const StripPoint> points) {
  csv::write_row(out, {"sigma", "t", "abs_zeta", "growth_slope"});
  for (const auto& p : points) {
    csv::write_row(out, {csv::format_float(p.sigma), csv::format_float(p.t), csv::format_float(p.abs_zeta),
                         csv::format_float(p.growth_slope)});
  }
}

void write_boundary_csv(std::ostream& out, std::span<const BoundarySample> samples) {
  csv::write_row(out, {"t", "re_F", "im_F", "abs_F", "n"});
  for (const auto& s : samples) {
    csv::write_row(out, {csv::format_float(s.t), csv::format_float(s.value.real()), csv::format_float(s.value.imag()),
                         csv::format_float(std::abs(s.value)), std::to_string(s.n)});
  }
}

void write_smoothness_csv(std::ostream& out, std::span<const SmoothnessRow> rows) {
  csv::write_row(out, {"n", "t", "re_d1", "im_d1", "re_d2", "im_d2", "d1_change", "d2_change"});
  for (const auto& r : rows) {
    csv::write_row(out, {std::to_string(r.n), csv::format_float(r.t), csv::format_float(r.d1.real()),
                         csv::format_float(r.d1.imag()), csv::format_float(r.d2.real()), csv::format_float(r.d2.imag()),
                         csv::format_float(r.d1_change), csv::format_float(r.d2_change)});
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  csv::write_row(out, {"n", "difference", "bound", "ratio", "exceeds_fit"});
  for (const auto& r : report.rows) {
    csv::write_row(out, {std::to_string(r.n), csv::format_float(r.difference), csv::format_float(r.bound),
                         csv::format_float(r.ratio), bool_field(r.exceeds_fit)});
  }
}

void write_chebyshev_csv(std::ostream& out, std::span<const ChebyshevRow> rows) {
  csv::write_row(out, {"eps", "excluded_mass", "filtered_mass", "eps_squared", "claim_holds"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format_float(r.eps), csv::format_float(r.excluded_mass),
                         csv::format_float(r.filtered_mass), csv::format_float(r.eps_squared),
                         bool_field(r.claim_holds)});
  }
}

void write_zeta_csv(std::ostream& out, std::span<const ZetaValue> values) {
  csv::write_row(out, {"n", "sigma", "t", "re_zeta", "im_zeta", "abs_zeta", "passed", "filtered_mass", "excluded_mass"});
  for (const auto& v : values) {
    csv::write_row(out, {std::to_string(v.n), csv::format_float(v.s.real()), csv::format_float(v.s.imag()),
                         csv::format_float(v.value.real()), csv::format_float(v.value.imag()),
                         csv::format_float(std::abs(v.value)), std::to_string(v.passed),
                         csv::format_float(v.filtered_mass), csv::format_float(v.excluded_mass)});
  }
}

}  // namespace ifszeta
