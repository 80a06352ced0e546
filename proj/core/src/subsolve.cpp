#include "vpsdp/subsolve.hpp"

#include <cassert>
#include <cmath>

namespace vpsdp {

namespace {

BoxPoint ppa_step_with_grad(const Vector& hp, const BoxPoint& x,
                            const Vector& g) {
  return project_box(x.vec() - g.cwiseQuotient(2.0 * hp));
}

BoxPoint pabb_step_with_grad(BBState& state, const BoxPoint& x,
                             const Vector& g) {
  double alpha;
  if (state.k == 0) {
    alpha = std::clamp(1.0 / std::max(1.0, g.cwiseAbs().maxCoeff()),
                       state.alpha_min, state.alpha_max);
    state.last_safeguarded = false;
  } else {
    alpha = bb_step_length(state, x.vec(), g);
  }
  BoxPoint next = project_box(x.vec() - alpha * g);
  state.prev_x = x.vec();
  state.prev_g = g;
  state.alpha = alpha;
  ++state.k;
  return next;
}

// g_at_x, when given, is the gradient at x and is reused whenever snapping
// onto the bounds changes nothing.
KktBreakdown kkt_breakdown_impl(const QuadraticInstance& inst,
                                const PenaltyState& ps, const BoxPoint& x,
                                double tau, const Vector* g_at_x) {
  if (!(tau > 0.0 && tau < 0.5))
    throw std::invalid_argument("index-set tolerance must lie in (0, 0.5)");
  assert(ps.consistent_with(inst));

  const Vector& v = x.vec();
  const Index n = v.size();
  KktBreakdown out;

  Vector snapped(n);
  bool snapped_anything = false;
  for (Index i = 0; i < n; ++i) {
    if (v[i] <= tau) {
      out.set_j.push_back(i);
      snapped[i] = 0.0;
      snapped_anything |= v[i] != 0.0;
    } else if (v[i] >= 1.0 - tau) {
      out.set_k.push_back(i);
      snapped[i] = 1.0;
      snapped_anything |= v[i] != 1.0;
    } else {
      out.set_i.push_back(i);
      snapped[i] = v[i];
    }
  }

  const Vector g = (g_at_x && !snapped_anything)
                       ? *g_at_x
                       : Vector(2.0 * ps.qbar_times(inst, snapped) + ps.bbar());

  out.cret1.resize(static_cast<Index>(out.set_i.size()));
  out.cret2.resize(static_cast<Index>(out.set_j.size()));
  out.cret3.resize(static_cast<Index>(out.set_k.size()));
  for (size_t t = 0; t < out.set_i.size(); ++t)
    out.cret1[static_cast<Index>(t)] = g[out.set_i[t]];
  for (size_t t = 0; t < out.set_j.size(); ++t)
    out.cret2[static_cast<Index>(t)] = g[out.set_j[t]];
  for (size_t t = 0; t < out.set_k.size(); ++t)
    out.cret3[static_cast<Index>(t)] = g[out.set_k[t]];

  // Empty-set maxima contribute 0.
  double c1 = out.cret1.size() ? out.cret1.cwiseAbs().maxCoeff() : 0.0;
  double c2 = out.cret2.size() ? out.cret2.cwiseMin(0.0).cwiseAbs().maxCoeff() : 0.0;
  double c3 = out.cret3.size() ? out.cret3.cwiseMax(0.0).maxCoeff() : 0.0;
  out.cret = std::max({c1, c2, c3});

  out.rho = std::max({1.0, ps.max_abs_2qbar(inst),
                      ps.bbar().cwiseAbs().maxCoeff()});
  out.residual = out.cret / out.rho;
  return out;
}

#ifndef NDEBUG
// Descent of the proximal step, checked per iteration in debug builds:
// h(x+) <= h(x) - d'(Hp - Q + Diag(p))d, up to roundoff slack.
void check_ppa_descent(const QuadraticInstance& inst, const PenaltyState& ps,
                       const Vector& hp, const BoxPoint& before,
                       const BoxPoint& after) {
  const Vector d = after.vec() - before.vec();
  const double quad = hp.cwiseProduct(d).dot(d) - d.dot(inst.q_times(d)) +
                      ps.p().cwiseProduct(d).dot(d);
  const double h0 = eval_penalized(inst, ps, before.vec());
  const double h1 = eval_penalized(inst, ps, after.vec());
  assert(h1 <= h0 - quad + 1e-8 * (1.0 + std::abs(h0)));
}
#endif

}  // namespace

BoxPoint ppa_step(const QuadraticInstance& inst, const PenaltyState& ps,
                  const Vector& hp, const BoxPoint& x) {
  return ppa_step_with_grad(hp, x, grad_penalized(inst, ps, x.vec()));
}

double bb_step_length(BBState& state, const Vector& x, const Vector& g) {
  assert(state.k >= 1);
  const Vector s = x - state.prev_x;
  const Vector y = g - state.prev_g;
  const double sty = s.dot(y);
  const double ss = s.squaredNorm();
  const double yy = y.squaredNorm();
  const double floor = 1e-16 * (ss + yy);

  const bool odd = (state.k % 2) == 1;
  const double denom = odd ? sty : yy;

  double alpha;
  if (sty <= 0.0 || denom < floor) {
    alpha = state.alpha;
    state.last_safeguarded = true;
  } else {
    alpha = odd ? ss / sty : sty / yy;
    state.last_safeguarded = false;
  }
  return std::clamp(alpha, state.alpha_min, state.alpha_max);
}

BoxPoint pabb_step(const QuadraticInstance& inst, const PenaltyState& ps,
                   BBState& state, const BoxPoint& x) {
  return pabb_step_with_grad(state, x, grad_penalized(inst, ps, x.vec()));
}

KktBreakdown kkt_breakdown(const QuadraticInstance& inst,
                           const PenaltyState& ps, const BoxPoint& x,
                           double tau) {
  return kkt_breakdown_impl(inst, ps, x, tau, nullptr);
}

SubsolveResult subsolve(const QuadraticInstance& inst, const PenaltyState& ps,
                        const BoxPoint& x0, const SolverConfig& config,
                        const InnerSink& sink) {
  BoxPoint x = x0;
  const bool use_ppa = config.engine == Engine::Ppa;
  Vector hp;
  if (use_ppa) hp = proximal_diagonal(inst, ps, config.epsilon);

  BBState bb;
  bb.alpha_min = config.bb_alpha_min;
  bb.alpha_max = config.bb_alpha_max;

  int k = 0;
  double step_size = 0.0;
  bool safeguarded = false;
  double residual = 0.0;

  while (true) {
    const Vector g = grad_penalized(inst, ps, x.vec());
    residual = kkt_breakdown_impl(inst, ps, x, kIndexSetTol, &g).residual;
    if (sink)
      sink(InnerRecord{k, residual, eval_penalized(inst, ps, x.vec()),
                       step_size, safeguarded, x.vec()});
    if (residual <= config.inner_tol || k == config.max_inner) break;

    BoxPoint next = use_ppa ? ppa_step_with_grad(hp, x, g)
                            : pabb_step_with_grad(bb, x, g);
#ifndef NDEBUG
    if (use_ppa) check_ppa_descent(inst, ps, hp, x, next);
#endif
    step_size = use_ppa ? (next.vec() - x.vec()).cwiseAbs().maxCoeff()
                        : bb.alpha;
    safeguarded = bb.last_safeguarded;
    x = std::move(next);
    ++k;
  }

  SubsolveResult res{std::move(x), k, residual,
                     k == config.max_inner && residual > config.inner_tol,
                     0.0};
  res.h_value = eval_penalized(inst, ps, res.x.vec());
  return res;
}

}  // namespace vpsdp
