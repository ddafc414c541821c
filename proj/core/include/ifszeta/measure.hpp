#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ifszeta/ifs.hpp"

namespace ifszeta {

// Closed interval with exact endpoints, lo <= hi.
struct IntervalQ {
  FieldElement lo;
  FieldElement hi;
};

/// Two-sided enclosure lo <= mu(J) <= hi. hi - lo never exceeds the branch
/// mass left unresolved at the depth cutoff.
struct MeasureBounds {
  Rational lo;
  Rational hi;
  Rational unresolved_mass;
  // Depth was zero and J neither contained nor missed the support.
  bool truncated_at_root = false;
};

inline unsigned default_measure_depth(unsigned n) { return n + 20; }

/// Evaluates bounds on mu(J) through mu(J) = sum_i p_i mu(g_i(J)), with
/// g_i the inverse of f_i. A branch resolves to its full weight once its
/// preimage covers [0, a_m], to zero once it misses [0, a_m] or degenerates
/// to a point, and to [0, weight] when the depth runs out.
///
/// Subresults are memoized on the clipped interval and remaining depth, so
/// results do not depend on evaluation order. The memo is grow-only and
/// may be shared between threads.
class MeasureEvaluator {
 public:
  explicit MeasureEvaluator(IfsParams params);
  ~MeasureEvaluator();
  MeasureEvaluator(MeasureEvaluator&&) noexcept;
  MeasureEvaluator& operator=(MeasureEvaluator&&) noexcept;

  MeasureBounds bounds(const IntervalQ& interval, unsigned depth) const;
  std::size_t memo_size() const;
  const IfsParams& params() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

MeasureBounds measure_bounds(const IfsParams& params, const IntervalQ& interval, unsigned depth);

// Bounds for mu of every cylinder of the level set, sharing one memo.
std::vector<MeasureBounds> cylinder_measures(const LevelSet& levelset, unsigned depth, unsigned threads = 1);
std::vector<MeasureBounds> cylinder_measures(const MeasureEvaluator& evaluator, const LevelSet& levelset,
                                             unsigned depth, unsigned threads = 1);

struct DiscrepancyRow {
  std::size_t j = 0;
  Rational weight;
  Rational mu_lo;
  Rational mu_hi;
  Rational discrepancy;  // mu_lo - weight
};

struct DiscrepancyReport {
  std::vector<DiscrepancyRow> rows;
  Rational weight_total;
  Rational mu_lo_total;
  Rational mu_hi_total;
};

DiscrepancyReport discrepancy_report(const LevelSet& levelset, const std::vector<MeasureBounds>& measures);

// Columns: j, endpoint_float, weight, mu_lo, mu_hi, unresolved_mass.
void write_measures_csv(std::ostream& out, const LevelSet& levelset, const std::vector<MeasureBounds>& measures);
void write_discrepancy_csv(std::ostream& out, const DiscrepancyReport& report);

}  // namespace ifszeta
