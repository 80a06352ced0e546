#include "vpsdp/driver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cassert>
#include <chrono>
#include <cmath>
#include <random>

namespace vpsdp {

namespace {

// Above this order the smallest eigenvalue comes from power iteration on the
// shifted matrix instead of a full decomposition.
constexpr Index kDenseEigLimit = 2000;

double smallest_eigenvalue_dense(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("symmetric eigensolver failed (order " +
                       std::to_string(m.rows()) + ")");
  return es.eigenvalues()(0);
}

}  // namespace

double detail::smallest_eigenvalue_power(const Matrix& m) {
  const Index n = m.rows();
  // Gershgorin bound on lambda_max, so mu*I - M is PSD with
  // lambda_max(mu*I - M) = mu - lambda_min(M).
  double mu = m(0, 0);
  for (Index i = 0; i < n; ++i) {
    double row = m(i, i);
    for (Index j = 0; j < n; ++j)
      if (j != i) row += std::abs(m(i, j));
    mu = std::max(mu, row);
  }

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = unif(rng);
  v.normalize();

  double lambda = 0.0;
  for (int iter = 0; iter < 50000; ++iter) {
    Vector w = mu * v - m * v;
    const double norm = w.norm();
    if (norm == 0.0) return mu;  // v is in the kernel: M == mu*I on span(v)
    w /= norm;
    const double next = w.dot(mu * w - m * w);
    const bool settled = std::abs(next - lambda) <= 1e-14 * (1.0 + std::abs(next));
    v = std::move(w);
    lambda = next;
    if (settled && iter > 2) break;
  }
  if (!std::isfinite(lambda))
    throw NumericError("power iteration diverged (order " + std::to_string(n) +
                       ")");
  return mu - lambda;
}

namespace {

double smallest_eigenvalue(const Matrix& m) {
  return m.rows() <= kDenseEigLimit ? smallest_eigenvalue_dense(m)
                                    : detail::smallest_eigenvalue_power(m);
}

}  // namespace

Vector choose_shift(const QuadraticInstance& inst) {
  return 2.0 * inst.row_abs_sums() + inst.b().cwiseAbs() +
         Vector::Ones(inst.n());
}

QuadraticInstance reformulate(const QuadraticInstance& inst,
                              const Vector& shift) {
  if (shift.size() != inst.n())
    throw std::invalid_argument("shift has wrong length");
  Matrix q = inst.q();
  q.diagonal() += shift;
  return QuadraticInstance::from_canonical(std::move(q), inst.b() - shift,
                                           inst.native_sense(), inst.name());
}

QuadraticInstance perturb(const QuadraticInstance& inst, double sigma,
                          std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (sigma == 0.0) return inst;
  const Index n = inst.n();
  Matrix q = inst.q();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double mu = noise(rng);
      q(i, j) += mu;
      if (j != i) q(j, i) += mu;
    }
  }
  return QuadraticInstance::from_canonical(std::move(q), inst.b(),
                                           inst.native_sense(), inst.name());
}

BoxPoint initial_point(const QuadraticInstance& working) {
  const Matrix system = 2.0 * working.q();
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success)
    throw NumericError("initial linear system is not positive definite");
  const Vector x = llt.solve(-working.b());
  if (!x.allFinite())
    throw NumericError("initial linear solve produced non-finite values");
  return BoxPoint(x);
}

double penalty_step(const QuadraticInstance& working, const PenaltyState& ps,
                    const BoxPoint& x, double eta, double alpha_floor) {
  assert(ps.consistent_with(working));
  const Vector& v = x.vec();
  std::vector<Index> interior;
  for (Index i = 0; i < v.size(); ++i)
    if (std::min(v[i], 1.0 - v[i]) > kIndexSetTol) interior.push_back(i);
  if (interior.empty()) return 0.0;

  const Index m = static_cast<Index>(interior.size());
  Vector scale(m);  // z_i^(-1/2) on the interior set
  for (Index t = 0; t < m; ++t) {
    const Index i = interior[static_cast<size_t>(t)];
    scale[t] = 1.0 / std::sqrt(v[i] * (1.0 - v[i]));
  }

  Matrix scaled(m, m);
  for (Index r = 0; r < m; ++r) {
    const Index i = interior[static_cast<size_t>(r)];
    for (Index c = 0; c < m; ++c) {
      const Index j = interior[static_cast<size_t>(c)];
      double entry = working.q()(i, j);
      if (i == j) entry = ps.qbar_diag()[i];
      scaled(r, c) = scale[r] * entry * scale[c];
    }
  }

  const double lambda_min = smallest_eigenvalue(scaled);
  const double floor = alpha_floor * (1.0 + ps.qbar_diag().cwiseAbs().maxCoeff());
  return std::max(eta * std::abs(lambda_min), floor);
}

void penalty_update(PenaltyState& ps, const BoxPoint& x, double alpha) {
  const Vector& v = x.vec();
  Vector z(v.size());
  for (Index i = 0; i < v.size(); ++i) z[i] = v[i] * (1.0 - v[i]);
  ps.add_scaled(z, alpha);
}

std::vector<int> round_binary(const BoxPoint& x) {
  const Vector& v = x.vec();
  std::vector<int> bits(static_cast<size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i)
    bits[static_cast<size_t>(i)] = v[i] > 0.5 ? 1 : 0;
  return bits;
}

SolveReport solve(const QuadraticInstance& inst, const SolverConfig& config) {
  return solve(inst, config, SolveHooks{});
}

SolveReport solve(const QuadraticInstance& inst, const SolverConfig& config,
                  const SolveHooks& hooks) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const Vector shift = choose_shift(inst);
  QuadraticInstance working = reformulate(inst, shift);
  const double sigma =
      config.sigma ? *config.sigma : 1e-4 * inst.max_abs_q();
  if (inst.integral() && sigma > 0.0)
    working = perturb(working, sigma, config.seed);

  BoxPoint x = initial_point(working);
  PenaltyState ps(working);

  SolveReport report;
  report.status = SolveStatus::MaxOuterReached;
  report.outer_iters = config.max_outer;

  const auto rounded_vec = [](const BoxPoint& pt) {
    Vector r(pt.size());
    for (Index i = 0; i < pt.size(); ++i) r[i] = pt.vec()[i] > 0.5 ? 1.0 : 0.0;
    return r;
  };

  for (int s = 1; s <= config.max_outer; ++s) {
    if (binary_distance(x) <= config.outer_tol) {
      report.status = SolveStatus::Converged;
      report.outer_iters = s - 1;
      break;
    }
    const double alpha =
        penalty_step(working, ps, x, config.eta, config.alpha_floor);
    if (alpha == 0.0) {
      // Interior set is empty: x is binary to within the index-set tolerance.
      report.status = SolveStatus::Converged;
      report.outer_iters = s - 1;
      break;
    }
    penalty_update(ps, x, alpha);
    SubsolveResult sub = subsolve(working, ps, x, config, hooks.inner);
    x = sub.x;
    report.total_inner_iters += sub.inner_iters;
    report.trace.push_back(IterateTrace{
        s, sub.inner_iters, sub.final_residual,
        infeasible_count(x, config.outer_tol), alpha, sub.h_value,
        inst.to_native(eval_objective(inst, rounded_vec(x)))});
    if (hooks.outer) hooks.outer(OuterRecord{s, alpha, ps.p(), std::move(sub)});
  }

  report.x_binary = round_binary(x);
  report.objective = inst.to_native(eval_objective(inst, rounded_vec(x)));

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace vpsdp
