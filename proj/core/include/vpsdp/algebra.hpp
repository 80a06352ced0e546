/// @file algebra.hpp
/// @brief Objective and penalty-function algebra shared by both subproblem
/// engines.
///
/// With p >= 0 and Qbar = Q - Diag(p), bbar = b + p, the penalized objective
/// over the box [0,1]^n is
///
///   h(x, p) = x^T Qbar x + bbar^T x = f(x) + sum_i p_i (x_i - x_i^2),
///
/// which agrees with f(x) = x^T Q x + b^T x exactly at binary points.

#pragma once

#include "vpsdp/types.hpp"

namespace vpsdp {

/// f(x) = x^T Q x + b^T x (canonical minimize sense).
/// @throws std::invalid_argument on dimension mismatch.
double eval_objective(const QuadraticInstance& inst, const Vector& x);

/// h(x, p). Computed as f(x) plus the penalty sum so the penalty contributes
/// an exact zero at binary points.
double eval_penalized(const QuadraticInstance& inst, const PenaltyState& ps,
                      const Vector& x);

/// grad h(x, p) = 2 (Q - Diag(p)) x + (b + p).
Vector grad_penalized(const QuadraticInstance& inst, const PenaltyState& ps,
                      const Vector& x);

/// Diagonal of the proximal matrix: entry j is max(sum_i |Q_ji| - p_j, eps).
/// All entries are > 0, and Diag(result) - Q + Diag(p) is diagonally dominant,
/// hence positive semidefinite.
Vector proximal_diagonal(const QuadraticInstance& inst, const PenaltyState& ps,
                         double eps);

/// Entrywise clamp onto [0,1]; idempotent.
BoxPoint project_box(const Vector& x);

/// Infinity-norm distance from x to the nearest binary vector:
/// max_i min(x_i, 1 - x_i).
double binary_distance(const BoxPoint& x);

/// Count of coordinates farther than tol from both bounds.
int infeasible_count(const BoxPoint& x, double tol);

}  // namespace vpsdp
