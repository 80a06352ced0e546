/// @file oracle.hpp
/// @brief Ground-truth engines: exhaustive enumeration at desk scale and the
/// GAP metric against a reference bound.

#pragma once

#include <vector>

#include "vpsdp/types.hpp"

namespace vpsdp {

/// Thrown when an enumeration request exceeds the size cap.
class EnumerationLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by gap_pct when the reference bound is zero.
class UndefinedGapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BruteForceResult {
  std::vector<int> x;  ///< Exact minimizer (canonical minimize sense).
  double value = 0.0;
};

/// Exact minimum of f over {0,1}^n by Gray-code enumeration with incremental
/// O(n) objective updates. Ties go to the lexicographically smallest
/// bit-vector, x_1 most significant.
/// @throws EnumerationLimitError when n exceeds `limit` (default 26).
BruteForceResult brute_force(const QuadraticInstance& inst, int limit = 26);

/// Signed percentage deviation from a reference bound:
/// 100 * (obj - lb) / |lb|. Positive means worse than the bound under
/// minimization; callers orient maximize-sense data before calling.
/// @throws UndefinedGapError when lb == 0.
double gap_pct(double obj, double lb);

}  // namespace vpsdp
