#include "ifszeta/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "ifszeta/csv.hpp"
#include "parallel.hpp"

namespace ifszeta {

IfsParams IfsParams::make(AlgebraicContext ctx, std::vector<std::uint64_t> digits, std::vector<Rational> probs) {
  if (digits.size() < 2) throw Error(Errc::invalid_params, "at least two digits are required", "digits");
  if (digits.front() != 0) throw Error(Errc::invalid_params, "the first digit must be 0", "digits");
  for (std::size_t i = 1; i < digits.size(); ++i) {
    if (digits[i] <= digits[i - 1]) {
      throw Error(Errc::invalid_params, "digits must be strictly increasing", "digits");
    }
  }
  if (probs.size() != digits.size()) {
    throw Error(Errc::invalid_params, "need exactly one probability per digit", "probs");
  }
  Rational total = 0;
  for (auto& p : probs) {
    p.canonicalize();
    if (!(p > 0 && p < 1)) throw Error(Errc::invalid_params, "probabilities must lie in (0, 1)", "probs");
    total += p;
  }
  if (total != 1) {
    throw Error(Errc::invalid_params, "probabilities must sum to exactly 1, got " + format_rational(total), "probs");
  }
  return IfsParams{std::move(ctx), std::move(digits), std::move(probs)};
}

FieldElement IfsParams::translation(std::size_t i) const {
  return (ctx.one() - ctx.rho()) * Rational(Integer(static_cast<unsigned long>(digits.at(i))));
}

FieldElement IfsParams::cylinder_length(unsigned n) const {
  FieldElement len = ctx.from_rational(Rational(Integer(static_cast<unsigned long>(span()))));
  const FieldElement rho = ctx.rho();
  for (unsigned k = 0; k < n; ++k) len *= rho;
  return len;
}

double IfsParams::rho_float() const { return to_float(ctx.rho(), 1e-15); }

FieldElement cylinder_endpoint(const IfsParams& params, std::span<const std::size_t> word) {
  const auto& ctx = params.ctx;
  FieldElement acc = ctx.zero();
  const FieldElement rho = ctx.rho();
  // Horner from the innermost map outwards: x -> rho*x + (1-rho)*a.
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it >= params.size()) {
      throw Error(Errc::index_out_of_range, "word letter " + std::to_string(*it) + " out of range", "word");
    }
    acc = rho * acc + params.translation(*it);
  }
  return acc;
}

namespace {

struct Candidate {
  std::string key;
  FieldElement left;
  Rational weight;
  std::uint64_t multiplicity;
};

double endpoint_tolerance(const IfsParams& params) {
  return 1e-12 * std::max(1.0, static_cast<double>(params.span()));
}

}  // namespace

LevelEnumerator::LevelEnumerator(IfsParams params, EnumerationOptions options)
    : params_(std::move(params)),
      options_(options),
      level_{params_, 1, {}, Integer(static_cast<unsigned long>(params_.size()))} {
  if (params_.size() > options_.budget) throw BudgetExceeded(0, options_.budget);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    level_.cylinders.push_back(
        Cylinder{params_.translation(i), options_.track_weights ? params_.probs[i] : Rational(0), 1});
  }
}

const LevelSet& LevelEnumerator::advance() {
  const auto& frontier = level_.cylinders;
  const std::size_t m = params_.size();
  const FieldElement rho = params_.ctx.rho();
  std::vector<FieldElement> shifts;
  for (std::size_t i = 0; i < m; ++i) shifts.push_back(params_.translation(i));

  const std::size_t workers = detail::chunk_count(frontier.size(), options_.threads);
  std::vector<std::vector<Candidate>> partial(workers);
  detail::parallel_chunks(frontier.size(), options_.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::unordered_map<std::string, std::size_t> index;
    auto& out = partial[w];
    for (std::size_t j = begin; j < end; ++j) {
      const Cylinder& c = frontier[j];
      const FieldElement scaled = rho * c.left;
      for (std::size_t i = 0; i < m; ++i) {
        FieldElement image = scaled + shifts[i];
        std::string key = canonical_key(image);
        Rational w_new = options_.track_weights ? Rational(c.weight * params_.probs[i]) : Rational(0);
        auto [it, inserted] = index.try_emplace(key, out.size());
        if (inserted) {
          out.push_back(Candidate{std::move(key), std::move(image), std::move(w_new), c.multiplicity});
        } else {
          auto& existing = out[it->second];
          existing.weight += w_new;
          existing.multiplicity += c.multiplicity;
        }
      }
    }
  });

  std::unordered_map<std::string, std::size_t> index;
  std::vector<Candidate> merged;
  for (auto& part : partial) {
    for (auto& cand : part) {
      auto [it, inserted] = index.try_emplace(cand.key, merged.size());
      if (inserted) {
        merged.push_back(std::move(cand));
        if (merged.size() > options_.budget) throw BudgetExceeded(level_.n, options_.budget);
      } else {
        merged[it->second].weight += cand.weight;
        merged[it->second].multiplicity += cand.multiplicity;
      }
    }
    part.clear();
  }

  // Approximations decide the order whenever they are far enough apart;
  // otherwise the exact sign of the difference does.
  const double tol = endpoint_tolerance(params_);
  std::vector<double> approx(merged.size());
  detail::parallel_chunks(merged.size(), options_.threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t j = begin; j < end; ++j) approx[j] = to_float(merged[j].left, tol);
  });
  std::vector<std::size_t> order(merged.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double gap = approx[b] - approx[a];
    if (gap > 4 * tol) return true;
    if (gap < -4 * tol) return false;
    return compare(merged[a].left, merged[b].left) < 0;
  });

  LevelSet next{params_, level_.n + 1, {}, Integer(level_.word_count * static_cast<unsigned long>(m))};
  next.cylinders.reserve(merged.size());
  for (std::size_t j : order) {
    auto& c = merged[j];
    next.cylinders.push_back(Cylinder{std::move(c.left), std::move(c.weight), c.multiplicity});
  }
  level_ = std::move(next);
  return level_;
}

LevelSet enumerate_level(const IfsParams& params, unsigned n, const EnumerationOptions& options) {
  if (n < 1) throw Error(Errc::invalid_argument, "level must be at least 1", "n");
  LevelEnumerator e(params, options);
  while (e.current().n < n) e.advance();
  return e.current();
}

std::size_t count_distinct(const IfsParams& params, unsigned n, EnumerationOptions options) {
  options.track_weights = false;
  return enumerate_level(params, n, options).size();
}

GrowthReport growth_report(const IfsParams& params, unsigned n_max, EnumerationOptions options) {
  if (n_max < 1) throw Error(Errc::invalid_argument, "n_max must be at least 1", "n_max");
  options.track_weights = false;
  GrowthReport report;
  const double rho = params.rho_float();
  try {
    LevelEnumerator e(params, options);
    for (;;) {
      const auto& level = e.current();
      const double inv_pow = std::pow(rho, -static_cast<double>(level.n));
      report.rows.push_back(
          GrowthRow{level.n, level.size(), inv_pow, static_cast<double>(level.size()) / inv_pow});
      if (level.n >= n_max) break;
      e.advance();
    }
  } catch (const BudgetExceeded&) {
    report.truncated = true;
  }
  return report;
}

std::pair<Rational, Rational> min_max_weights(const LevelSet& levelset) {
  if (levelset.cylinders.empty()) {
    throw Error(Errc::invalid_argument, "level set is empty", "levelset");
  }
  Rational lo = levelset.cylinders.front().weight;
  Rational hi = lo;
  for (const auto& c : levelset.cylinders) {
    if (c.weight < lo) lo = c.weight;
    if (c.weight > hi) hi = c.weight;
  }
  return {lo, hi};
}

void write_levelset_csv(std::ostream& out, const LevelSet& levelset) {
  csv::write_row(out, {"n", "endpoint_float", "weight_num", "weight_den", "multiplicity"});
  const double tol = 1e-18 * std::max(1.0, static_cast<double>(levelset.params.span()));
  const std::string n = std::to_string(levelset.n);
  for (const auto& c : levelset.cylinders) {
    csv::write_row(out, {n, csv::format_float(to_float(c.left, tol)), c.weight.get_num().get_str(),
                         c.weight.get_den().get_str(), std::to_string(c.multiplicity)});
  }
}

void write_growth_csv(std::ostream& out, const GrowthReport& report) {
  csv::write_row(out, {"n", "distinct", "rho_inv_pow", "ratio"});
  for (const auto& r : report.rows) {
    csv::write_row(out, {std::to_string(r.n), std::to_string(r.distinct), csv::format_float(r.rho_inv_pow),
                         csv::format_float(r.ratio)});
  }
}

}  // namespace ifszeta
