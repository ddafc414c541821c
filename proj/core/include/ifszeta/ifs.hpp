#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "ifszeta/algebraic.hpp"

namespace ifszeta {

/// Linear scheme f_i(x) = rho*x + (1 - rho)*a_i with weights p_i.
///
/// Digits start at 0 and increase strictly; weights are rationals in (0, 1)
/// summing to exactly 1. The support of the stationary measure lies in
/// [0, a_m].
struct IfsParams {
  AlgebraicContext ctx;
  std::vector<std::uint64_t> digits;
  std::vector<Rational> probs;

  // Validates and returns the parameter set; throws Error(InvalidParams)
  // naming the offending field.
  static IfsParams make(AlgebraicContext ctx, std::vector<std::uint64_t> digits, std::vector<Rational> probs);

  std::size_t size() const { return digits.size(); }
  std::uint64_t span() const { return digits.back(); }

  // (1 - rho) * a_i as a field element.
  FieldElement translation(std::size_t i) const;
  // rho^n * a_m, the common length of every level-n cylinder.
  FieldElement cylinder_length(unsigned n) const;
  double rho_float() const;
};

struct Cylinder {
  FieldElement left;
  Rational weight;
  std::uint64_t multiplicity = 0;
};

/// Distinct level-n cylinders [left, left + rho^n a_m], ascending by left.
struct LevelSet {
  IfsParams params;
  unsigned n = 0;
  std::vector<Cylinder> cylinders;
  Integer word_count;  // m^n

  std::size_t size() const { return cylinders.size(); }
  FieldElement length() const { return params.cylinder_length(n); }
};

struct EnumerationOptions {
  std::size_t budget = 10'000'000;
  unsigned threads = 1;
  // When false, weights are left at zero and only endpoints/multiplicities
  // are tracked.
  bool track_weights = true;
};

// Left endpoint (1 - rho) * sum_k a_{w_k} rho^(k-1) of the cylinder
// f_{w_1} o ... o f_{w_n}([0, a_m]). Indices are zero-based.
FieldElement cylinder_endpoint(const IfsParams& params, std::span<const std::size_t> word);

/// Builds level sets one level at a time: level n+1 is obtained from the
/// distinct endpoints of level n by applying each f_i, merging coincident
/// images exactly. Output is independent of the thread count.
class LevelEnumerator {
 public:
  explicit LevelEnumerator(IfsParams params, EnumerationOptions options = {});

  const LevelSet& current() const { return level_; }
  // Advances to the next level; throws BudgetExceeded and leaves the
  // current level untouched when the budget would be exceeded.
  const LevelSet& advance();

 private:
  IfsParams params_;
  EnumerationOptions options_;
  LevelSet level_;
};

LevelSet enumerate_level(const IfsParams& params, unsigned n, const EnumerationOptions& options = {});
std::size_t count_distinct(const IfsParams& params, unsigned n, EnumerationOptions options = {});

struct GrowthRow {
  unsigned n = 0;
  std::size_t distinct = 0;
  double rho_inv_pow = 0;  // rho^-n
  double ratio = 0;        // #D_n * rho^n
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  bool truncated = false;
};

GrowthReport growth_report(const IfsParams& params, unsigned n_max, EnumerationOptions options = {});

std::pair<Rational, Rational> min_max_weights(const LevelSet& levelset);

// Columns: n, endpoint_float, weight_num, weight_den, multiplicity.
void write_levelset_csv(std::ostream& out, const LevelSet& levelset);
void write_growth_csv(std::ostream& out, const GrowthReport& report);

}  // namespace ifszeta
