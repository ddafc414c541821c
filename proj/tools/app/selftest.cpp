#include "app/selftest.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ifszeta/csv.hpp"
#include "ifszeta/dimension.hpp"
#include "ifszeta/measure.hpp"
#include "ifszeta/zeta.hpp"

namespace ifszeta::app {

namespace {

using nlohmann::json;

const double kLn2 = std::numbers::ln2;
const double kLn3 = std::log(3.0);

class Checks {
 public:
  explicit Checks(std::ostream& log) : log_(log) {}

  void record(const std::string& name, bool ok, const std::string& detail = {}) {
    log_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) log_ << " (" << detail << ")";
    log_ << "\n";
    results_[name] = ok;
    if (!ok) ++failed_;
  }

  json results() const { return results_; }
  int failed() const { return failed_; }

 private:
  std::ostream& log_;
  json results_ = json::object();
  int failed_ = 0;
};

std::string fmt(double v) { return csv::format_float(v); }

}  // namespace

CommandOutput selftest(const RunConfig& cfg, std::ostream& log, const std::filesystem::path& preset_dir) {
  CommandOutput out;
  Checks checks(log);
  EnumerationOptions en;
  en.threads = cfg.threads;
  en.budget = cfg.budget;
  PipelineOptions pipe;
  pipe.enumeration = en;

  const IfsParams cantor = make_params(load_preset("cantor13", preset_dir));
  const IfsParams golden = make_params(load_preset("golden", preset_dir));
  const IfsParams plastic = make_params(load_preset("plastic", preset_dir));

  // Normalization and distinct counts.
  {
    std::ostringstream csv;
    csv::write_row(csv, {"preset", "n", "distinct", "weight_total"});
    bool normalized = true;
    std::vector<std::size_t> golden_counts;
    for (const auto& [name, params] : {std::pair<std::string, const IfsParams*>{"cantor13", &cantor},
                                       {"golden", &golden},
                                       {"plastic", &plastic}}) {
      LevelEnumerator e(*params, en);
      for (unsigned n = 1; n <= 8; ++n) {
        const LevelSet& level = n == 1 ? e.current() : e.advance();
        Rational total = 0;
        for (const auto& c : level.cylinders) total += c.weight;
        normalized = normalized && total == 1;
        if (name == "golden") golden_counts.push_back(level.size());
        csv::write_row(csv, {name, std::to_string(n), std::to_string(level.size()), csv::format_fraction(total)});
      }
    }
    out.files["selftest_levels.csv"] = csv.str();
    checks.record("weights sum to 1 for n <= 8", normalized);
    checks.record("golden distinct counts 4, 7 at n = 2, 3", golden_counts[1] == 4 && golden_counts[2] == 7);
  }

  // Dimension.
  {
    const auto est = dimension_estimate(cantor, 8, en);
    bool ok = true;
    for (const auto& p : est.sequence) ok = ok && std::abs(p.dimension - kLn2 / kLn3) < 1e-9;
    out.files["selftest_entropy_cantor13.csv"] = [&] {
      std::ostringstream o;
      write_entropy_csv(o, est);
      return o.str();
    }();
    checks.record("cantor13 D_n = ln2/ln3", ok);
    const double h3 = garsia_entropy(golden, 3, en).entropy;
    checks.record("golden H_3 = (11/4) ln 2", std::abs(h3 - 2.75 * kLn2) < 1e-12, fmt(h3));
  }

  // Measures.
  {
    const auto& ctx = cantor.ctx;
    const auto m1 = measure_bounds(cantor, {ctx.zero(), ctx.from_rational(Rational(2, 3))}, 1);
    const auto m2 = measure_bounds(cantor, {ctx.zero(), ctx.from_rational(Rational(1, 3))}, 2);
    checks.record("cantor13 mu([0,2/3]) = 1/2 at depth 1", m1.lo == Rational(1, 2) && m1.hi == Rational(1, 2));
    checks.record("cantor13 mu([0,1/3]) = 1/4 at depth 2", m2.lo == Rational(1, 4) && m2.hi == Rational(1, 4));

    const LevelSet level = enumerate_level(golden, 6, en);
    const auto measures = cylinder_measures(level, default_measure_depth(6), cfg.threads);
    bool consistent = true;
    for (std::size_t j = 0; j < measures.size(); ++j) {
      consistent = consistent && measures[j].lo <= measures[j].hi && measures[j].hi - measures[j].lo <= measures[j].unresolved_mass;
    }
    out.files["selftest_measures_golden.csv"] = [&] {
      std::ostringstream o;
      write_measures_csv(o, level, measures);
      return o.str();
    }();
    checks.record("golden n = 6 measure bounds are consistent", consistent);
  }

  // Strip growth and boundedness.
  {
    StripGrid grid{{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0}, {0.0}};
    const auto points = strip_scan(cantor, grid, 8, FilterSpec::none(), 1.0, WeightSource::word_weight, pipe);
    bool ok = true;
    for (const auto& p : points) ok = ok && std::abs(p.growth_slope - (1 - p.sigma) * kLn2) < 1e-9;
    checks.record("cantor13 growth slope = (1 - sigma) ln 2", ok);

    StripGrid golden_grid{{0.5, 1.5}, {0.0}};
    const auto gp = strip_scan(golden, golden_grid, 8, FilterSpec::none(), 1.0, WeightSource::word_weight, pipe);
    checks.record("golden growth slope > 0 at 0.5 and ~0 or below at 1.5",
                  gp[0].growth_slope > 0 && gp[1].growth_slope <= 1e-6);

    StripGrid bounded{{1.1, 1.5, 2.0, 3.0}, {0.0, 1.0, 10.0}};
    bool within = true;
    std::ostringstream csv;
    csv::write_row(csv, {"preset", "sigma", "t", "abs_zeta", "growth_slope"});
    for (const auto& [name, params] : {std::pair<std::string, const IfsParams*>{"cantor13", &cantor},
                                       {"golden", &golden},
                                       {"plastic", &plastic}}) {
      for (const auto& p : strip_scan(*params, bounded, 8, FilterSpec::none(), 1.0, WeightSource::word_weight, pipe)) {
        within = within && p.abs_zeta <= 1 + 1e-12;
        csv::write_row(csv, {name, fmt(p.sigma), fmt(p.t), fmt(p.abs_zeta), fmt(p.growth_slope)});
      }
    }
    for (const auto& p : points) {
      csv::write_row(csv, {"cantor13", fmt(p.sigma), fmt(p.t), fmt(p.abs_zeta), fmt(p.growth_slope)});
    }
    out.files["selftest_strip.csv"] = csv.str();
    checks.record("|zeta| <= 1 for Re s > 1", within);
  }

  // Boundary function.
  {
    const unsigned n = 6;
    const auto levels = filtered_levels(cantor, n - 1, n, WeightSource::word_weight, 1.0, FilterSpec::none(), pipe);
    std::vector<BoundarySeries> series;
    std::vector<BoundarySample> all;
    for (const auto& level : levels) {
      auto samples = boundary_F(level, range_by_count(0, 8, 64));
      all.insert(all.end(), samples.begin(), samples.end());
      series.push_back({level, std::move(samples)});
    }
    const auto report = boundary_diagnostics(series);
    const double expected = 2 * std::numbers::pi / (n * kLn2);
    checks.record("equal weights give period 2 pi / (n ln 2)",
                  report.periodic && std::abs(report.best_period / expected - 1) < 1e-6, fmt(report.best_period));

    const auto golden_levels = filtered_levels(golden, 8, 8, WeightSource::word_weight, 1.0, FilterSpec::none(), pipe);
    const auto& gl = golden_levels.front();
    std::vector<double> ts = range_by_count(-5, 5, 64);
    const auto samples = boundary_F(gl, ts);
    bool symmetric = true;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& mirror = samples[samples.size() - 1 - k];
      symmetric = symmetric && std::abs(samples[k].value - std::conj(mirror.value)) < 1e-12;
    }
    const auto at_zero = boundary_F(gl, {0.0});
    checks.record("F_n(0) = filtered mass", std::abs(at_zero[0].value - Complex(gl.filtered_mass, 0)) < 1e-12);
    checks.record("F_n(-t) = conj F_n(t)", symmetric);
    all.insert(all.end(), samples.begin(), samples.end());
    out.files["selftest_boundary.csv"] = [&] {
      std::ostringstream o;
      write_boundary_csv(o, all);
      return o.str();
    }();
  }

  // Chebyshev masses.
  {
    const LevelSet level = enumerate_level(golden, 6, en);
    const auto weights = select_weights(level, WeightSource::word_weight);
    const double D = dimension_estimate(golden, 8, en).D;
    const std::vector<double> eps{0.1, 0.01, 0.001};
    const auto rows = chebyshev_report(level, weights, D, eps);
    bool ok = true;
    for (const auto& r : rows) ok = ok && std::abs(r.excluded_mass + r.filtered_mass - 1) < 1e-12;
    out.files["selftest_chebyshev_golden.csv"] = [&] {
      std::ostringstream o;
      write_chebyshev_csv(o, rows);
      return o.str();
    }();
    checks.record("chebyshev masses sum to 1", ok);
  }

  // Classical oracle.
  {
    const double critical = kLn2 / kLn3;
    std::ostringstream csv;
    csv::write_row(csv, {"n", "abs_partial", "abs_closed"});
    double first = 0;
    bool constant = true;
    for (unsigned n = 2; n <= 10; ++n) {
      const auto v = classical_zeta_oracle(cantor, Complex(critical, 0), n, en);
      if (n == 2) first = std::abs(v.partial_sum);
      constant = constant && std::abs(std::abs(v.partial_sum) - first) < 1e-9;
      csv::write_row(csv, {std::to_string(n), fmt(std::abs(v.partial_sum)), fmt(std::abs(v.closed_form))});
    }
    out.files["selftest_oracle_cantor13.csv"] = csv.str();
    checks.record("cantor13 partial sum constant at the critical abscissa", constant);
  }

  out.results["checks"] = checks.results();
  out.results["failed"] = checks.failed();
  out.status = checks.failed() == 0 ? exit_ok : exit_numeric;
  return out;
}

}  // namespace ifszeta::app
