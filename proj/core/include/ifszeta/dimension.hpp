#pragma once

#include <iosfwd>
#include <vector>

#include "ifszeta/ifs.hpp"

namespace ifszeta {

struct EntropyPoint {
  unsigned n = 0;
  double entropy = 0;    // H_n in nats
  double dimension = 0;  // H_n / (n ln(1/rho))
};

struct DimensionEstimate {
  double D = 0;
  unsigned n_used = 0;
  bool is_capped = false;
  // Enumeration hit the budget before n_max.
  bool truncated = false;
  std::vector<EntropyPoint> sequence;
};

// Natural log of a positive rational, accurate for magnitudes far outside
// the double range.
double log_rational(const Rational& q);

// Entropy -sum w ln w of the deduplicated weight distribution.
EntropyPoint garsia_entropy(const LevelSet& levelset);
EntropyPoint garsia_entropy(const IfsParams& params, unsigned n, const EnumerationOptions& options = {});

/// D = min(1, min_{2 <= n <= n_max} H_n / (n ln(1/rho))).
///
/// By subadditivity of H_n each ratio is an upper bound on the entropy
/// dimension, so the minimum over computed levels is the best available
/// estimate. The sequence always starts at n = 1.
DimensionEstimate dimension_estimate(const IfsParams& params, unsigned n_max, const EnumerationOptions& options = {});

// rho^(D n) = exp(-D n ln(1/rho)).
double filter_center(const IfsParams& params, double D, unsigned n);

// Columns: n, H_n, D_n, capped_flag.
void write_entropy_csv(std::ostream& out, const DimensionEstimate& estimate);

}  // namespace ifszeta
