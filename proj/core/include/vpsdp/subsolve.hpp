/// @file subsolve.hpp
/// @brief Engines for the fixed-penalty box subproblem
/// min h(x, p) over [0,1]^n, sharing one KKT-based stopping criterion.

#pragma once

#include <functional>
#include <vector>

#include "vpsdp/algebra.hpp"
#include "vpsdp/types.hpp"

namespace vpsdp {

/// Threshold for classifying coordinates as active at a bound. Iterates never
/// sit exactly on 0 or 1, so the index sets I/K/J use this tolerance.
inline constexpr double kIndexSetTol = 1e-6;

/// History carried between projected BB iterations.
struct BBState {
  Vector prev_x;
  Vector prev_g;
  int k = 0;           ///< Steps taken so far; parity selects BB1/BB2.
  double alpha = 0.0;  ///< Last accepted step length (the fallback).
  double alpha_min = 1e-10;
  double alpha_max = 1e10;
  bool last_safeguarded = false;
};

/// KKT residual of the box subproblem split by index set.
///
/// Coordinates are classified by distance to the bounds (J: x_i <= tau,
/// K: x_i >= 1 - tau, I: strictly between) and the gradient of h is evaluated
/// at the snapped point (x_K -> 1, x_J -> 0). Stationarity requires the
/// I-block to vanish, the J-block (dual u) to be nonnegative and the K-block
/// (negated dual v) to be nonpositive.
struct KktBreakdown {
  std::vector<Index> set_i, set_k, set_j;
  Vector cret1;  ///< Gradient block on I; must be ~0.
  Vector cret2;  ///< Gradient block on J; negative part violates.
  Vector cret3;  ///< Gradient block on K; positive part violates.
  double cret = 0.0;
  double rho = 1.0;  ///< max{1, max|2 Qbar_ij|, max|bbar_i|}.
  double residual = 0.0;  ///< cret / rho.
};

/// One record per inner iteration, streamed to an optional sink. k = 0 is the
/// state at loop entry, before any step.
struct InnerRecord {
  int k;
  double residual;
  double h;
  double step_size;  ///< BB step length, or |d|_inf for the proximal engine.
  bool safeguarded;
  Vector x;
};
using InnerSink = std::function<void(const InnerRecord&)>;

struct SubsolveResult {
  BoxPoint x;
  int inner_iters = 0;
  double final_residual = 0.0;
  bool hit_cap = false;  ///< inner_iters == max_inner with residual above tol.
  double h_value = 0.0;
};

/// One proximal step: x <- P(x - grad h(x) / (2 h_p)) with h_p from
/// proximal_diagonal. A fixed point is a KKT point of the subproblem.
BoxPoint ppa_step(const QuadraticInstance& inst, const PenaltyState& ps,
                  const Vector& hp, const BoxPoint& x);

/// Alternating Barzilai-Borwein step length from s = x - prev_x and
/// y = g - prev_g: BB1 = s's/s'y on odd k, BB2 = s'y/y'y on even k, clamped to
/// [alpha_min, alpha_max]. Falls back to the previous accepted step when
/// s'y <= 0 or the active denominator is below 1e-16 (|s|^2 + |y|^2); the
/// fallback is flagged in state.last_safeguarded.
///
/// Requires k >= 1 (a previous iterate exists).
double bb_step_length(BBState& state, const Vector& x, const Vector& g);

/// One projected BB step: x <- P(x - alpha_k g). The first step (k = 0) uses
/// alpha = 1 / max(1, |g|_inf). Advances the BBState history.
BoxPoint pabb_step(const QuadraticInstance& inst, const PenaltyState& ps,
                   BBState& state, const BoxPoint& x);

/// Classify x and evaluate the scaled KKT residual. tau in (0, 0.5).
KktBreakdown kkt_breakdown(const QuadraticInstance& inst,
                           const PenaltyState& ps, const BoxPoint& x,
                           double tau = kIndexSetTol);

/// Iterate the configured engine from x0 until the KKT residual drops to
/// config.inner_tol or max_inner steps are taken. Never throws on
/// non-convergence; hit_cap reports it.
SubsolveResult subsolve(const QuadraticInstance& inst, const PenaltyState& ps,
                        const BoxPoint& x0, const SolverConfig& config,
                        const InnerSink& sink = {});

}  // namespace vpsdp
