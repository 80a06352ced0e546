/// @file driver.hpp
/// @brief Outer loop of the exact-penalty solver: initialization, penalty
/// escalation, subproblem dispatch and final reporting.
///
/// The flow per solve is: pick a diagonal shift that centers the relaxed
/// problem, reformulate (objective-preserving on binaries), perturb integral
/// data, compute a strictly interior start from the first-order system, then
/// alternate penalty updates with subsolves until the iterate is binary.

#pragma once

#include <cstdint>
#include <vector>

#include "vpsdp/subsolve.hpp"
#include "vpsdp/types.hpp"

namespace vpsdp {

enum class SolveStatus { Converged, MaxOuterReached };

/// One record per outer iteration; infeasible_count is the number of
/// coordinates still away from both bounds by more than outer_tol.
struct IterateTrace {
  int s;
  int inner_iters;
  double residual;
  int infeasible_count;
  double alpha;
  double h_value;
  double f_rounded;  ///< Objective of the rounded iterate, native sense.
};

struct SolveReport {
  std::vector<int> x_binary;
  double objective = 0.0;  ///< On the original instance, native sense.
  int outer_iters = 0;
  long total_inner_iters = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::MaxOuterReached;
  std::optional<double> gap_pct;  ///< Filled by callers that know a bound.
  std::vector<IterateTrace> trace;
};

/// Snapshot after one outer iteration, for callers that audit the run.
struct OuterRecord {
  int s;
  double alpha;
  Vector p;  ///< Penalty vector used by this iteration's subsolve.
  SubsolveResult result;
};

struct SolveHooks {
  std::function<void(const OuterRecord&)> outer;
  InnerSink inner;
};

/// Shift that keeps the initial linear-system solution strictly interior:
/// shift_i = sum_j 2|Q_ij| + |b_i| + 1.
Vector choose_shift(const QuadraticInstance& inst);

/// Working instance with Q + Diag(shift) and b - shift. Equals the original
/// objective at every binary point.
QuadraticInstance reformulate(const QuadraticInstance& inst,
                              const Vector& shift);

/// Q_ij += mu_ij with mu_ij ~ Normal(0, sigma), mu_ij = mu_ji, drawn once.
/// Deterministic for a fixed seed; sigma = 0 returns the instance unchanged.
QuadraticInstance perturb(const QuadraticInstance& inst, double sigma,
                          std::uint64_t seed);

/// Solves 2 Q_w x = -b_w, the unconstrained first-order system of the
/// reformulated instance. The matrix is SPD by diagonal dominance when the
/// shift came from choose_shift.
/// @throws NumericError if the solve yields non-finite values.
BoxPoint initial_point(const QuadraticInstance& working);

/// Penalty step size: eta * |lambda_min(D^-1/2 Qbar_II D^-1/2)| with
/// D = Diag(z_I), z = x .* (1 - x), I the coordinates farther than
/// kIndexSetTol from both bounds. Floored at alpha_floor * (1 + max|Qbar_ii|).
/// Returns 0 when I is empty (the iterate is binary).
/// @throws NumericError on eigensolver failure.
double penalty_step(const QuadraticInstance& working, const PenaltyState& ps,
                    const BoxPoint& x, double eta, double alpha_floor);

/// p <- p + alpha * z with z = x .* (1 - x); bumps the update counter.
void penalty_update(PenaltyState& ps, const BoxPoint& x, double alpha);

/// Round to the nearest binary vector; a coordinate at exactly 0.5 goes to 0.
std::vector<int> round_binary(const BoxPoint& x);

SolveReport solve(const QuadraticInstance& inst, const SolverConfig& config);
SolveReport solve(const QuadraticInstance& inst, const SolverConfig& config,
                  const SolveHooks& hooks);

namespace detail {
/// Smallest eigenvalue via power iteration on the Gershgorin-shifted matrix;
/// penalty_step switches to this path above the dense-decomposition limit.
double smallest_eigenvalue_power(const Matrix& m);
}  // namespace detail

}  // namespace vpsdp
