#include "ifszeta/dimension.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "ifszeta/csv.hpp"

namespace ifszeta {

namespace {

double log_integer(const Integer& z) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double log_inv_rho(const IfsParams& params) { return -std::log(params.rho_float()); }

}  // namespace

double log_rational(const Rational& q) {
  if (sgn(q) <= 0) throw Error(Errc::nonpositive_weight, "logarithm of a nonpositive rational", "weight");
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

EntropyPoint garsia_entropy(const LevelSet& levelset) {
  // Group equal weights so each logarithm is taken once.
  std::map<Rational, std::uint64_t> groups;
  for (const auto& c : levelset.cylinders) ++groups[c.weight];
  double h = 0;
  for (const auto& [w, count] : groups) {
    const double term = w.get_d() * log_rational(w);
    h -= static_cast<double>(count) * term;
  }
  if (h < 0) h = 0;
  EntropyPoint p;
  p.n = levelset.n;
  p.entropy = h;
  p.dimension = h / (static_cast<double>(levelset.n) * log_inv_rho(levelset.params));
  return p;
}

EntropyPoint garsia_entropy(const IfsParams& params, unsigned n, const EnumerationOptions& options) {
  EnumerationOptions opts = options;
  opts.track_weights = true;
  return garsia_entropy(enumerate_level(params, n, opts));
}

DimensionEstimate dimension_estimate(const IfsParams& params, unsigned n_max, const EnumerationOptions& options) {
  if (n_max < 2) throw Error(Errc::invalid_argument, "n_max must be at least 2", "n_max");
  EnumerationOptions opts = options;
  opts.track_weights = true;
  DimensionEstimate est;
  try {
    LevelEnumerator e(params, opts);
    est.sequence.push_back(garsia_entropy(e.current()));
    while (e.current().n < n_max) {
      e.advance();
      est.sequence.push_back(garsia_entropy(e.current()));
    }
  } catch (const BudgetExceeded&) {
    est.truncated = true;
    if (est.sequence.size() < 2) throw;
  }
  double best = 0;
  for (const auto& p : est.sequence) {
    if (p.n < 2) continue;
    if (est.n_used == 0 || p.dimension < best) {
      best = p.dimension;
      est.n_used = p.n;
    }
  }
  est.is_capped = best > 1;
  est.D = est.is_capped ? 1.0 : best;
  return est;
}

double filter_center(const IfsParams& params, double D, unsigned n) {
  if (!(D > 0 && D <= 1)) throw Error(Errc::invalid_argument, "dimension must lie in (0, 1]", "dimension");
  if (n < 1) throw Error(Errc::invalid_argument, "level must be at least 1", "n");
  return std::exp(-D * static_cast<double>(n) * log_inv_rho(params));
}

void write_entropy_csv(std::ostream& out, const DimensionEstimate& estimate) {
  csv::write_row(out, {"n", "H_n", "D_n", "capped_flag"});
  for (const auto& p : estimate.sequence) {
    csv::write_row(out, {std::to_string(p.n), csv::format_float(p.entropy), csv::format_float(p.dimension),
                         p.dimension > 1 ? "1" : "0"});
  }
}

}  // namespace ifszeta
