#include "vpsdp/types.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

namespace vpsdp {

namespace {

bool is_exact_integer(double v) {
  return std::isfinite(v) && v == std::nearbyint(v) &&
         std::abs(v) < 9.007199254740992e15;  // 2^53
}

constexpr double kSparseDensityThreshold = 0.25;

}  // namespace

QuadraticInstance::QuadraticInstance(Matrix q, Vector b, Sense sense,
                                     std::string name)
    : q_(std::move(q)), b_(std::move(b)), native_sense_(sense),
      name_(std::move(name)) {
  const Index n = q_.rows();
  if (n < 1) throw std::invalid_argument("instance dimension must be >= 1");
  if (q_.cols() != n)
    throw std::invalid_argument("Q must be square, got " +
                                std::to_string(q_.rows()) + "x" +
                                std::to_string(q_.cols()));
  if (b_.size() != n)
    throw std::invalid_argument("b has length " + std::to_string(b_.size()) +
                                ", expected " + std::to_string(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (q_(i, j) != q_(j, i))
        throw std::invalid_argument("Q is not symmetric at (" +
                                    std::to_string(i) + "," +
                                    std::to_string(j) + ")");

  if (sense == Sense::Maximize) {
    q_ = -q_;
    b_ = -b_;
  }

  integral_ = true;
  for (Index i = 0; i < n && integral_; ++i)
    integral_ = is_exact_integer(b_[i]);
  for (Index j = 0; j < n * n && integral_; ++j)
    integral_ = is_exact_integer(q_.data()[j]);

  Index nnz = 0;
  row_abs_sums_ = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double v = q_(i, j);
      if (v != 0.0) ++nnz;
      row_abs_sums_[i] += std::abs(v);
      max_abs_q_ = std::max(max_abs_q_, std::abs(v));
      if (i != j) max_abs_offdiag_ = std::max(max_abs_offdiag_, std::abs(v));
    }
  }
  density_ = static_cast<double>(nnz) / (static_cast<double>(n) * n);
  use_sparse_ = density_ < kSparseDensityThreshold;
  if (use_sparse_) q_sparse_ = q_.sparseView();
}

QuadraticInstance QuadraticInstance::from_canonical(Matrix q, Vector b,
                                                    Sense native_sense,
                                                    std::string name) {
  QuadraticInstance inst(std::move(q), std::move(b), Sense::Minimize,
                         std::move(name));
  inst.native_sense_ = native_sense;
  return inst;
}

Vector QuadraticInstance::q_times(const Vector& x) const {
  if (x.size() != n())
    throw std::invalid_argument("vector has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n()));
  if (use_sparse_) return q_sparse_ * x;
  return q_ * x;
}

PenaltyState::PenaltyState(const QuadraticInstance& inst)
    : base_b_(inst.b()),
      base_qdiag_(inst.q().diagonal()),
      p_(Vector::Zero(inst.n())),
      bbar_(inst.b()),
      qbar_diag_(inst.q().diagonal()) {}

void PenaltyState::add_scaled(const Vector& z, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("penalty step must be >= 0");
  if (z.size() != p_.size())
    throw std::invalid_argument("penalty increment has wrong length");
  if ((z.array() < 0.0).any())
    throw std::invalid_argument("penalty increment must be >= 0 entrywise");
  p_ += alpha * z;
  // One-shot forms, so the caches depend on p alone and not on the update
  // history.
  bbar_ = base_b_ + p_;
  qbar_diag_ = base_qdiag_ - p_;
  ++update_count_;
}

Vector PenaltyState::qbar_times(const QuadraticInstance& inst,
                                const Vector& x) const {
  assert(consistent_with(inst));
  return inst.q_times(x) - p_.cwiseProduct(x);
}

double PenaltyState::max_abs_2qbar(const QuadraticInstance& inst) const {
  assert(consistent_with(inst));
  const double diag = qbar_diag_.cwiseAbs().maxCoeff();
  return 2.0 * std::max(inst.max_abs_offdiag(), diag);
}

bool PenaltyState::consistent_with(const QuadraticInstance& inst) const {
  if (p_.size() != inst.n()) return false;
  return bbar_ == inst.b() + p_ &&
         qbar_diag_ == Vector(inst.q().diagonal() - p_);
}

void SolverConfig::validate() const {
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be > 0");
  if (!(outer_tol > 0.0)) throw std::invalid_argument("outer_tol must be > 0");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("eta must lie in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (sigma && !(*sigma >= 0.0))
    throw std::invalid_argument("sigma must be >= 0");
  if (!(alpha_floor > 0.0))
    throw std::invalid_argument("alpha_floor must be > 0");
  if (!(bb_alpha_min > 0.0) || !(bb_alpha_max >= bb_alpha_min))
    throw std::invalid_argument("BB step clamps must satisfy 0 < min <= max");
}

namespace detail {

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace detail

}  // namespace vpsdp
