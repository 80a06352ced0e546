#include "vpsdp/algebra.hpp"

#include <cassert>

namespace vpsdp {

double eval_objective(const QuadraticInstance& inst, const Vector& x) {
  return x.dot(inst.q_times(x)) + inst.b().dot(x);
}

double eval_penalized(const QuadraticInstance& inst, const PenaltyState& ps,
                      const Vector& x) {
  assert(ps.consistent_with(inst));
  const double f = eval_objective(inst, x);
  double penalty = 0.0;
  const Vector& p = ps.p();
  for (Index i = 0; i < x.size(); ++i)
    penalty += p[i] * (x[i] - x[i] * x[i]);
  return f + penalty;
}

Vector grad_penalized(const QuadraticInstance& inst, const PenaltyState& ps,
                      const Vector& x) {
  return 2.0 * ps.qbar_times(inst, x) + ps.bbar();
}

Vector proximal_diagonal(const QuadraticInstance& inst, const PenaltyState& ps,
                         double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  return (inst.row_abs_sums() - ps.p()).cwiseMax(eps);
}

BoxPoint project_box(const Vector& x) { return BoxPoint(x); }

double binary_distance(const BoxPoint& x) {
  const Vector& v = x.vec();
  double d = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    d = std::max(d, std::min(v[i], 1.0 - v[i]));
  return d;
}

int infeasible_count(const BoxPoint& x, double tol) {
  const Vector& v = x.vec();
  int count = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (std::min(v[i], 1.0 - v[i]) > tol) ++count;
  return count;
}

}  // namespace vpsdp
