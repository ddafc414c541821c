#include "ifszeta/measure.hpp"

#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "ifszeta/csv.hpp"
#include "parallel.hpp"

namespace ifszeta {

namespace {

// Bounds for a unit branch weight: mu in [lo, lo + unresolved].
struct Normalized {
  Rational lo;
  Rational unresolved;
};

}  // namespace

struct MeasureEvaluator::State {
  IfsParams params;
  FieldElement inv_rho;
  FieldElement support_end;
  std::vector<FieldElement> preimage_shift;  // inv_rho * (1 - rho) * a_i

  mutable std::shared_mutex mutex;
  mutable std::unordered_map<std::string, Normalized> memo;

  explicit State(IfsParams p)
      : params(std::move(p)),
        inv_rho(params.ctx.inv_rho()),
        support_end(params.ctx.from_rational(Rational(Integer(static_cast<unsigned long>(params.span()))))) {
    for (std::size_t i = 0; i < params.size(); ++i) preimage_shift.push_back(inv_rho * params.translation(i));
  }

  enum class Position { contains, misses, degenerate, partial };

  // Classifies [lo, hi] against the support and clips it in place.
  Position clip(FieldElement& lo, FieldElement& hi) const {
    const int lo_sign = sign(lo);
    const int hi_vs_end = compare(hi, support_end);
    if (lo_sign <= 0 && hi_vs_end >= 0) return Position::contains;
    if (sign(hi) < 0 || compare(lo, support_end) > 0) return Position::misses;
    if (lo_sign < 0) lo = params.ctx.zero();
    if (hi_vs_end > 0) hi = support_end;
    if ((hi - lo).is_zero()) return Position::degenerate;
    return Position::partial;
  }

  static std::string memo_key(const FieldElement& lo, const FieldElement& hi, unsigned depth) {
    std::string key = canonical_key(lo);
    key += canonical_key(hi);
    for (int shift = 24; shift >= 0; shift -= 8) key.push_back(static_cast<char>((depth >> shift) & 0xff));
    return key;
  }

  // [lo, hi] is clipped to the support and strictly inside it (partial).
  Normalized eval_partial(const FieldElement& lo, const FieldElement& hi, unsigned depth) const {
    if (depth == 0) return {Rational(0), Rational(1)};
    const std::string key = memo_key(lo, hi, depth);
    {
      std::shared_lock lock(mutex);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Normalized acc{Rational(0), Rational(0)};
    const FieldElement lo_scaled = inv_rho * lo;
    const FieldElement hi_scaled = inv_rho * hi;
    for (std::size_t i = 0; i < params.size(); ++i) {
      FieldElement pre_lo = lo_scaled - preimage_shift[i];
      FieldElement pre_hi = hi_scaled - preimage_shift[i];
      switch (clip(pre_lo, pre_hi)) {
        case Position::contains:
          acc.lo += params.probs[i];
          break;
        case Position::misses:
        case Position::degenerate:
          break;
        case Position::partial: {
          const Normalized sub = eval_partial(pre_lo, pre_hi, depth - 1);
          acc.lo += params.probs[i] * sub.lo;
          acc.unresolved += params.probs[i] * sub.unresolved;
          break;
        }
      }
    }
    std::unique_lock lock(mutex);
    memo.try_emplace(key, acc);
    return acc;
  }
};

MeasureEvaluator::MeasureEvaluator(IfsParams params) : state_(std::make_unique<State>(std::move(params))) {}
MeasureEvaluator::~MeasureEvaluator() = default;
MeasureEvaluator::MeasureEvaluator(MeasureEvaluator&&) noexcept = default;
MeasureEvaluator& MeasureEvaluator::operator=(MeasureEvaluator&&) noexcept = default;

const IfsParams& MeasureEvaluator::params() const { return state_->params; }

std::size_t MeasureEvaluator::memo_size() const {
  std::shared_lock lock(state_->mutex);
  return state_->memo.size();
}

MeasureBounds MeasureEvaluator::bounds(const IntervalQ& interval, unsigned depth) const {
  if (compare(interval.hi, interval.lo) < 0) {
    throw Error(Errc::invalid_argument, "interval endpoints are reversed", "interval");
  }
  FieldElement lo = interval.lo;
  FieldElement hi = interval.hi;
  switch (state_->clip(lo, hi)) {
    case State::Position::contains:
      return {Rational(1), Rational(1), Rational(0)};
    case State::Position::misses:
    case State::Position::degenerate:
      return {Rational(0), Rational(0), Rational(0)};
    case State::Position::partial:
      break;
  }
  const Normalized r = state_->eval_partial(lo, hi, depth);
  MeasureBounds out{r.lo, r.lo + r.unresolved, r.unresolved};
  out.truncated_at_root = depth == 0;
  return out;
}

MeasureBounds measure_bounds(const IfsParams& params, const IntervalQ& interval, unsigned depth) {
  return MeasureEvaluator(params).bounds(interval, depth);
}

std::vector<MeasureBounds> cylinder_measures(const MeasureEvaluator& evaluator, const LevelSet& levelset,
                                             unsigned depth, unsigned threads) {
  const FieldElement length = levelset.length();
  std::vector<MeasureBounds> out(levelset.size());
  detail::parallel_chunks(levelset.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t j = begin; j < end; ++j) {
      const auto& left = levelset.cylinders[j].left;
      out[j] = evaluator.bounds(IntervalQ{left, left + length}, depth);
    }
  });
  return out;
}

std::vector<MeasureBounds> cylinder_measures(const LevelSet& levelset, unsigned depth, unsigned threads) {
  return cylinder_measures(MeasureEvaluator(levelset.params), levelset, depth, threads);
}

DiscrepancyReport discrepancy_report(const LevelSet& levelset, const std::vector<MeasureBounds>& measures) {
  if (measures.size() != levelset.size()) {
    throw Error(Errc::invalid_argument, "measures are not aligned with the level set", "measures");
  }
  DiscrepancyReport report;
  for (std::size_t j = 0; j < measures.size(); ++j) {
    const auto& w = levelset.cylinders[j].weight;
    const auto& mu = measures[j];
    report.rows.push_back(DiscrepancyRow{j, w, mu.lo, mu.hi, mu.lo - w});
    report.weight_total += w;
    report.mu_lo_total += mu.lo;
    report.mu_hi_total += mu.hi;
  }
  return report;
}

void write_measures_csv(std::ostream& out, const LevelSet& levelset, const std::vector<MeasureBounds>& measures) {
  csv::write_row(out, {"j", "endpoint_float", "weight", "mu_lo", "mu_hi", "unresolved_mass"});
  const double tol = 1e-15 * std::max(1.0, static_cast<double>(levelset.params.span()));
  for (std::size_t j = 0; j < measures.size(); ++j) {
    const auto& c = levelset.cylinders[j];
    csv::write_row(out, {std::to_string(j), csv::format_float(to_float(c.left, tol)), csv::format_fraction(c.weight),
                         csv::format_fraction(measures[j].lo), csv::format_fraction(measures[j].hi),
                         csv::format_fraction(measures[j].unresolved_mass)});
  }
}

void write_discrepancy_csv(std::ostream& out, const DiscrepancyReport& report) {
  csv::write_row(out, {"j", "weight", "mu_lo", "mu_hi", "discrepancy", "discrepancy_float"});
  for (const auto& r : report.rows) {
    csv::write_row(out, {std::to_string(r.j), csv::format_fraction(r.weight), csv::format_fraction(r.mu_lo),
                         csv::format_fraction(r.mu_hi), csv::format_fraction(r.discrepancy),
                         csv::format_float(r.discrepancy.get_d())});
  }
}

}  // namespace ifszeta
