#include "vpsdp/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

#include "vpsdp/algebra.hpp"

namespace vpsdp {

namespace {

// Settles a candidate through the library's canonical evaluation, so the
// reported optimum is bit-identical to eval_objective at the minimizer.
double settle(const QuadraticInstance& inst, std::uint64_t gray, Index n) {
  Vector x(n);
  for (Index i = 0; i < n; ++i)
    x[i] = static_cast<double>((gray >> (n - 1 - i)) & 1u);
  return eval_objective(inst, x);
}

}  // namespace

BruteForceResult brute_force(const QuadraticInstance& inst, int limit) {
  const Index n = inst.n();
  if (n > limit || n > 62)
    throw EnumerationLimitError(
        "enumeration refused: n = " + std::to_string(n) + " exceeds the cap of " +
        std::to_string(std::min<Index>(limit, 62)));

  // Bit j of the Gray counter holds x_{n-j} so the counter itself orders
  // bit-vectors lexicographically with x_1 most significant.
  const std::uint64_t total = std::uint64_t{1} << n;
  Vector qx = Vector::Zero(n);
  double f = 0.0;

  double best = 0.0;  // f at the all-zeros point
  std::uint64_t best_gray = 0;

  // For integral data the incremental arithmetic is exact; the margin only
  // matters for real-valued instances, where candidates are settled by a
  // from-scratch evaluation.
  const double margin =
      inst.integral() ? 0.0
                      : 1e-9 * (1.0 + inst.max_abs_q() * n +
                                inst.b().cwiseAbs().maxCoeff());

  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const Index idx = n - 1 - bit;
    const double sign = (gray >> bit) & 1u ? -1.0 : 1.0;
    gray ^= std::uint64_t{1} << bit;

    f += 2.0 * sign * qx[idx] + inst.q()(idx, idx) + sign * inst.b()[idx];
    qx += sign * inst.q().col(idx);

    if (f <= best + margin) {
      const double exact = margin == 0.0 ? f : settle(inst, gray, n);
      if (exact < best || (exact == best && gray < best_gray)) {
        best = exact;
        best_gray = gray;
      }
    }
  }

  BruteForceResult res;
  res.value = best;
  res.x.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    res.x[static_cast<size_t>(i)] =
        static_cast<int>((best_gray >> (n - 1 - i)) & 1u);
  return res;
}

double gap_pct(double obj, double lb) {
  if (lb == 0.0) throw UndefinedGapError("gap undefined for a zero bound");
  return 100.0 * (obj - lb) / std::abs(lb);
}

}  // namespace vpsdp
