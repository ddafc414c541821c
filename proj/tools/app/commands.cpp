#include "app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "app/selftest.hpp"
#include "ifszeta/csv.hpp"
#include "ifszeta/dimension.hpp"
#include "ifszeta/measure.hpp"

#ifndef IFSZETA_VERSION
#define IFSZETA_VERSION "unknown"
#endif

namespace ifszeta::app {

namespace {

using nlohmann::json;

template <class Writer>
std::string render(Writer&& w) {
  std::ostringstream out;
  w(out);
  return out.str();
}

unsigned measure_depth(const RunConfig& cfg, unsigned n, std::ostream& log) {
  const unsigned depth = cfg.depth.value_or(default_measure_depth(n));
  if (depth < n) log << "warning: depth " << depth << " is below n = " << n << "; bounds will be wide\n";
  return depth;
}

PipelineOptions pipeline(const RunConfig& cfg, unsigned n) {
  PipelineOptions o;
  o.enumeration = cfg.enumeration();
  if (cfg.depth) o.depth_margin = *cfg.depth > n ? *cfg.depth - n : 0;
  return o;
}

// D only matters when a filter is active.
double resolve_dimension(const RunConfig& cfg, const IfsParams& params, json& results) {
  if (cfg.dimension) {
    results["dimension"] = {{"D", *cfg.dimension}, {"source", "override"}};
    return *cfg.dimension;
  }
  if (cfg.filter_mode == FilterMode::none) {
    results["dimension"] = {{"D", 1.0}, {"source", "unused"}};
    return 1.0;
  }
  const auto est = dimension_estimate(params, std::max(2u, cfg.n_max), cfg.enumeration());
  results["dimension"] = {{"D", est.D}, {"source", "estimate"}, {"n_used", est.n_used}, {"capped", est.is_capped}};
  return est.D;
}

std::vector<double> level_weights(const RunConfig& cfg, const LevelSet& level, std::ostream& log) {
  if (cfg.weight_source == WeightSource::word_weight) return select_weights(level, cfg.weight_source);
  const auto measures = cylinder_measures(level, measure_depth(cfg, level.n, log), cfg.threads);
  return select_weights(level, cfg.weight_source, measures);
}

Complex single_s(const RunConfig& cfg, double default_sigma) {
  return {cfg.sigma.value_or(default_sigma), cfg.t.value_or(0.0)};
}

void cmd_levelset(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream&) {
  GrowthReport growth;
  LevelEnumerator en(params, cfg.enumeration());
  while (true) {
    const LevelSet& cur = en.current();
    const double rho_pow = std::pow(params.rho_float(), cur.n);
    growth.rows.push_back({cur.n, cur.size(), 1.0 / rho_pow, static_cast<double>(cur.size()) * rho_pow});
    if (cur.n >= cfg.n) break;
    en.advance();
  }
  const LevelSet& level = en.current();
  const auto [wmin, wmax] = min_max_weights(level);
  out.files["levelset.csv"] = render([&](std::ostream& o) { write_levelset_csv(o, level); });
  out.files["growth.csv"] = render([&](std::ostream& o) { write_growth_csv(o, growth); });
  out.results["n"] = level.n;
  out.results["distinct"] = level.size();
  out.results["words"] = level.word_count.get_str();
  out.results["min_weight"] = format_rational(wmin);
  out.results["max_weight"] = format_rational(wmax);
}

void cmd_measures(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream& log) {
  const LevelSet level = enumerate_level(params, cfg.n, cfg.enumeration());
  const unsigned depth = measure_depth(cfg, cfg.n, log);
  const auto measures = cylinder_measures(level, depth, cfg.threads);
  const auto report = discrepancy_report(level, measures);
  Rational max_unresolved = 0;
  for (const auto& m : measures) max_unresolved = std::max(max_unresolved, m.unresolved_mass);
  out.files["measures.csv"] = render([&](std::ostream& o) { write_measures_csv(o, level, measures); });
  out.files["discrepancy.csv"] = render([&](std::ostream& o) { write_discrepancy_csv(o, report); });
  out.results["n"] = cfg.n;
  out.results["depth"] = depth;
  out.results["weight_total"] = format_rational(report.weight_total);
  out.results["mu_lo_total"] = format_rational(report.mu_lo_total);
  out.results["mu_hi_total"] = format_rational(report.mu_hi_total);
  out.results["max_unresolved_mass"] = format_rational(max_unresolved);
}

void cmd_dimension(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream& log) {
  if (cfg.n_max < 2) throw ConfigError("n_max", "dimension needs n_max >= 2");
  const auto est = dimension_estimate(params, cfg.n_max, cfg.enumeration());
  if (est.truncated) log << "warning: budget reached, estimate uses levels up to " << est.n_used << "\n";
  out.files["entropy.csv"] = render([&](std::ostream& o) { write_entropy_csv(o, est); });
  out.results["D"] = est.D;
  out.results["n_used"] = est.n_used;
  out.results["capped"] = est.is_capped;
  out.results["truncated"] = est.truncated;
}

void cmd_zeta(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream& log) {
  cfg.filter().validate();
  const double D = resolve_dimension(cfg, params, out.results);
  if (cfg.sigma) {
    if (cfg.n_min > cfg.n) throw ConfigError("n_min", "must not exceed n");
    const Complex s = single_s(cfg, 0);
    const auto levels =
        filtered_levels(params, cfg.n_min, cfg.n, cfg.weight_source, D, cfg.filter(), pipeline(cfg, cfg.n));
    std::vector<ZetaValue> values;
    for (const auto& level : levels) values.push_back(zeta_partial(level, s));
    out.files["zeta.csv"] = render([&](std::ostream& o) { write_zeta_csv(o, values); });
    out.results["value"] = {values.back().value.real(), values.back().value.imag()};
    return;
  }
  StripGrid grid{range_by_step(cfg.sigma_range.a, cfg.sigma_range.b, cfg.sigma_range.step),
                 range_by_count(cfg.t_range.a, cfg.t_range.b, cfg.t_range.count)};
  if (grid.size() > kMaxGridPoints) {
    throw ConfigError("sigma_range", "grid has " + std::to_string(grid.size()) + " points, limit is " +
                                         std::to_string(kMaxGridPoints));
  }
  const auto points = strip_scan(params, grid, cfg.n, cfg.filter(), D, cfg.weight_source, pipeline(cfg, cfg.n));
  out.files["strip.csv"] = render([&](std::ostream& o) { write_strip_csv(o, points); });
  out.results["points"] = points.size();
  (void)log;
}

void cmd_boundary(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream&) {
  if (cfg.n < 2) throw ConfigError("n", "boundary needs n >= 2 to compare levels");
  if (cfg.t_range.count < 16) throw ConfigError("t_range", "needs at least 16 points");
  cfg.filter().validate();
  const double D = resolve_dimension(cfg, params, out.results);
  const unsigned n_lo = std::max(1u, cfg.n - std::min(cfg.n - 1, 3u));
  const auto levels = filtered_levels(params, n_lo, cfg.n, cfg.weight_source, D, cfg.filter(), pipeline(cfg, cfg.n));
  const auto ts = range_by_count(cfg.t_range.a, cfg.t_range.b, cfg.t_range.count);
  std::vector<BoundarySeries> series;
  std::vector<BoundarySample> all;
  for (const auto& level : levels) {
    auto samples = boundary_F(level, ts);
    all.insert(all.end(), samples.begin(), samples.end());
    series.push_back({level, std::move(samples)});
  }
  PeriodScanOptions scan;
  scan.t_max = cfg.period_max;
  const auto report = boundary_diagnostics(series, scan);
  out.files["boundary.csv"] = render([&](std::ostream& o) { write_boundary_csv(o, all); });
  out.files["smoothness.csv"] = render([&](std::ostream& o) { write_smoothness_csv(o, report.smoothness); });
  out.results["sup_modulus"] = report.sup_modulus;
  out.results["empty_filter"] = report.empty_filter;
  out.results["periodic"] = report.periodic;
  out.results["best_period"] = report.best_period;
  out.results["periodicity_score"] = report.periodicity_score;
  out.results["filtered_mass"] = levels.back().filtered_mass;
}

void cmd_converge(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream&) {
  if (cfg.n_min >= cfg.n) throw ConfigError("n", "converge needs n > n_min");
  cfg.filter().validate();
  const Complex s = single_s(cfg, 1.5);
  if (!(s.real() > 0)) throw ConfigError("s.sigma", "converge needs Re s > 0");
  const double D = resolve_dimension(cfg, params, out.results);
  const auto report =
      convergence_scan(params, s, cfg.n_min, cfg.n, cfg.filter(), D, cfg.weight_source, pipeline(cfg, cfg.n));
  out.files["convergence.csv"] = render([&](std::ostream& o) { write_convergence_csv(o, report); });
  out.results["s"] = {s.real(), s.imag()};
  out.results["fitted_constant"] = report.fitted_constant;
  out.results["drift"] = report.drift;
}

void cmd_chebyshev(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream& log) {
  if (cfg.eps_list.empty()) throw ConfigError("eps_list", "must not be empty");
  const double D = cfg.dimension ? *cfg.dimension
                                 : dimension_estimate(params, std::max(2u, cfg.n_max), cfg.enumeration()).D;
  out.results["D"] = D;
  const LevelSet level = enumerate_level(params, cfg.n, cfg.enumeration());
  const auto weights = level_weights(cfg, level, log);
  const auto rows = chebyshev_report(level, weights, D, cfg.eps_list);
  out.files["chebyshev.csv"] = render([&](std::ostream& o) { write_chebyshev_csv(o, rows); });
  json holds = json::array();
  for (const auto& r : rows) holds.push_back(r.claim_holds);
  out.results["claim_holds"] = holds;
}

void cmd_oracle(const RunConfig& cfg, const IfsParams& params, CommandOutput& out, std::ostream&) {
  if (cfg.n_min > cfg.n) throw ConfigError("n_min", "must not exceed n");
  const double critical =
      std::log(static_cast<double>(params.size())) / std::log(1.0 / params.rho_float());
  const Complex s = single_s(cfg, critical);
  std::ostringstream csv;
  csv::write_row(csv, {"n", "sigma", "t", "re_partial", "im_partial", "abs_partial", "re_closed", "im_closed",
                       "abs_closed", "critical_abscissa"});
  OracleValue last;
  for (unsigned n = cfg.n_min; n <= cfg.n; ++n) {
    last = classical_zeta_oracle(params, s, n, cfg.enumeration());
    csv::write_row(csv, {std::to_string(n), csv::format_float(s.real()), csv::format_float(s.imag()),
                         csv::format_float(last.partial_sum.real()), csv::format_float(last.partial_sum.imag()),
                         csv::format_float(std::abs(last.partial_sum)), csv::format_float(last.closed_form.real()),
                         csv::format_float(last.closed_form.imag()), csv::format_float(std::abs(last.closed_form)),
                         csv::format_float(last.critical_abscissa)});
  }
  out.files["oracle.csv"] = csv.str();
  out.results["critical_abscissa"] = last.critical_abscissa;
  out.results["abs_partial"] = std::abs(last.partial_sum);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"levelset", "measures", "dimension", "zeta",    "boundary",
                                              "converge", "chebyshev", "oracle",   "selftest"};
  return names;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_polynomial:
    case Errc::zero_constant_term:
    case Errc::root_out_of_unit:
    case Errc::no_sign_change:
    case Errc::invalid_params:
    case Errc::invalid_argument:
    case Errc::grid_too_large:
    case Errc::grid_too_coarse:
    case Errc::overlap_detected:
      return exit_config;
    case Errc::budget_exceeded:
      return exit_budget;
    default:
      return exit_numeric;
  }
}

CommandOutput execute(const std::string& command, const RunConfig& cfg, std::ostream& log,
                      const std::filesystem::path& preset_dir) {
  if (command == "selftest") return selftest(cfg, log, preset_dir);
  const IfsParams params = make_params(cfg);
  CommandOutput out;
  if (command == "levelset") cmd_levelset(cfg, params, out, log);
  else if (command == "measures") cmd_measures(cfg, params, out, log);
  else if (command == "dimension") cmd_dimension(cfg, params, out, log);
  else if (command == "zeta") cmd_zeta(cfg, params, out, log);
  else if (command == "boundary") cmd_boundary(cfg, params, out, log);
  else if (command == "converge") cmd_converge(cfg, params, out, log);
  else if (command == "chebyshev") cmd_chebyshev(cfg, params, out, log);
  else if (command == "oracle") cmd_oracle(cfg, params, out, log);
  else throw ConfigError("command", "unknown command '" + command + "'");
  return out;
}

int run(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err,
        const std::filesystem::path& preset_dir) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutput out;
  try {
    out = execute(command, cfg, log, preset_dir);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const Error& e) {
    const std::string field = e.field().empty() ? std::string(to_string(e.code())) : e.field();
    err << "error: field '" << field << "': " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: field 'budget': out of memory\n";
    return exit_budget;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: field 'out': cannot create " << dir << ": " << ec.message() << "\n";
    return exit_config;
  }
  json meta{{"command", command},
            {"version", IFSZETA_VERSION},
            {"config", to_json(cfg)},
            {"timings", {{"seconds", seconds}}},
            {"results", out.results}};
  out.files["run.json"] = meta.dump(2) + "\n";
  for (const auto& [name, content] : out.files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) {
      err << "error: field 'out': cannot write " << (dir / name) << "\n";
      return exit_config;
    }
    log << "wrote " << (dir / name).string() << "\n";
  }
  if (out.status != exit_ok) err << "error: " << command << " reported failures, see " << (dir / "run.json").string() << "\n";
  return out.status;
}

}  // namespace ifszeta::app
