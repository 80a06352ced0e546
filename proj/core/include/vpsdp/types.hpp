/// @file types.hpp
/// @brief Domain types shared by the solver: problem instances, penalty
/// state, box-feasible points and solver configuration.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace vpsdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Optimization sense of the data as it arrived. Internally everything is
/// minimized; the native sense is kept so reports can convert back.
enum class Sense { Minimize, Maximize };

/// Subproblem engine selection.
enum class Engine { Ppa, Pabb };

/// Thrown by the text parsers; carries the 1-based line where parsing failed
/// (0 when no single line is to blame).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Thrown when a numeric kernel (eigensolver, linear solve) produces
/// non-finite output or fails to converge.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An unconstrained binary quadratic program min x^T Q x + b^T x over
/// {0,1}^n, stored in canonical minimize sense.
///
/// Maximize-sense data is negated at construction, so downstream code only
/// ever minimizes; `native_sense()` records the original orientation for
/// reporting. Q is required to be exactly symmetric. When the off-diagonal
/// density falls below 25% a sparse copy backs the matrix-vector product.
class QuadraticInstance {
 public:
  /// @throws std::invalid_argument on dimension mismatch or asymmetric Q.
  QuadraticInstance(Matrix q, Vector b, Sense sense = Sense::Minimize,
                    std::string name = "");

  /// Builds from data that is already in minimize form, keeping
  /// `native_sense` as a reporting label only (no negation happens).
  static QuadraticInstance from_canonical(Matrix q, Vector b,
                                          Sense native_sense,
                                          std::string name = "");

  Index n() const { return q_.rows(); }
  const Matrix& q() const { return q_; }
  const Vector& b() const { return b_; }
  Sense native_sense() const { return native_sense_; }
  const std::string& name() const { return name_; }

  /// True when every entry of Q and b is an exact integer.
  bool integral() const { return integral_; }

  /// Fraction of nonzero entries in Q.
  double density() const { return density_; }
  bool uses_sparse() const { return use_sparse_; }

  /// Q * x through the dense or sparse path, whichever is active.
  Vector q_times(const Vector& x) const;

  /// Row sums of |Q|, cached (row j: sum_i |Q_ji|).
  const Vector& row_abs_sums() const { return row_abs_sums_; }

  double max_abs_q() const { return max_abs_q_; }
  double max_abs_offdiag() const { return max_abs_offdiag_; }

  /// Objective value in the native sense for a canonical-minimize value.
  double to_native(double canonical_value) const {
    return native_sense_ == Sense::Maximize ? -canonical_value : canonical_value;
  }

 private:
  Matrix q_;
  Vector b_;
  Sense native_sense_;
  std::string name_;
  bool integral_ = false;
  double density_ = 1.0;
  bool use_sparse_ = false;
  Eigen::SparseMatrix<double> q_sparse_;
  Vector row_abs_sums_;
  double max_abs_q_ = 0.0;
  double max_abs_offdiag_ = 0.0;
};

/// A point of the box [0,1]^n. Every construction path clamps, so a BoxPoint
/// is feasible by type.
class BoxPoint {
 public:
  explicit BoxPoint(Vector x) : x_(std::move(x)) {
    x_ = x_.cwiseMax(0.0).cwiseMin(1.0);
  }
  const Vector& vec() const { return x_; }
  Index size() const { return x_.size(); }

 private:
  Vector x_;
};

/// Per-coordinate penalty weights p >= 0 together with the cached derived
/// data of the penalized subproblem: bbar = b + p and the diagonal of
/// Qbar = Q - Diag(p). Off-diagonal Qbar entries coincide with Q, so products
/// are formed as Q*x - p.*x without materializing Qbar.
class PenaltyState {
 public:
  explicit PenaltyState(const QuadraticInstance& inst);

  const Vector& p() const { return p_; }
  int update_count() const { return update_count_; }
  const Vector& bbar() const { return bbar_; }
  const Vector& qbar_diag() const { return qbar_diag_; }

  /// p += alpha * z, caches refreshed, update counter bumped.
  /// @throws std::invalid_argument if alpha < 0 or z has negative entries.
  void add_scaled(const Vector& z, double alpha);

  /// (Q - Diag(p)) * x.
  Vector qbar_times(const QuadraticInstance& inst, const Vector& x) const;

  /// max_ij |2 (Q - Diag(p))_ij|, the matrix part of the KKT scaling rho.
  double max_abs_2qbar(const QuadraticInstance& inst) const;

  /// Cache consistency against (Q, b, p); checked by asserts in debug builds.
  bool consistent_with(const QuadraticInstance& inst) const;

 private:
  Vector base_b_;
  Vector base_qdiag_;
  Vector p_;
  Vector bbar_;
  Vector qbar_diag_;
  int update_count_ = 0;
};

/// Tolerances, caps and parameters for one solve.
struct SolverConfig {
  Engine engine = Engine::Pabb;

  double inner_tol = 1e-5;  ///< KKT residual target of each subsolve.
  double outer_tol = 1e-5;  ///< Binary-distance target of the outer loop.
  int max_inner = 10000;
  int max_outer = 1000;

  double eta = 0.5;      ///< Scaling of the penalty step, in (0,1).
  double epsilon = 1e-6; ///< Floor of the proximal diagonal, > 0.

  /// Symmetric normal perturbation scale for integral instances. Unset means
  /// automatic: 1e-4 * max|Q_ij|. Zero disables perturbation.
  std::optional<double> sigma = {};

  double alpha_floor = 1e-3; ///< Relative floor of the penalty step size.
  std::uint64_t seed = 0;

  double bb_alpha_min = 1e-10;
  double bb_alpha_max = 1e10;

  /// @throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

namespace detail {
/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
}  // namespace detail

}  // namespace vpsdp
