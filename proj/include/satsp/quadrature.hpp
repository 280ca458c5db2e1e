#ifndef SATSP_QUADRATURE_HPP_
#define SATSP_QUADRATURE_HPP_

#include <cmath>
#include <stdexcept>

namespace satsp {

/// Raised when a numerical routine cannot reach its requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename F, typename Scalar>
Scalar simpson_step(const F& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb, Scalar whole,
                    Scalar tol, int depth, long& budget) {
  const Scalar m = (a + b) / 2;
  const Scalar lm = (a + m) / 2;
  const Scalar rm = (m + b) / 2;
  const Scalar flm = f(lm);
  const Scalar frm = f(rm);
  budget -= 2;
  const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
  const Scalar diff = left + right - whole;
  if (std::abs(diff) <= 15 * tol) return left + right + diff / 15;
  if (depth <= 0 || budget <= 0) throw NumericalError("adaptive Simpson did not converge");
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, budget) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, budget);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
/// Throws NumericalError when the depth or evaluation cap is exhausted.
template <typename F, typename Scalar>
Scalar adaptive_simpson(const F& f, Scalar a, Scalar b, Scalar tol, int max_depth = 40,
                        long max_evaluations = 10'000'000) {
  if (a == b) return Scalar(0);
  const Scalar fa = f(a);
  const Scalar fb = f(b);
  const Scalar fm = f((a + b) / 2);
  const Scalar whole = (b - a) / 6 * (fa + 4 * fm + fb);
  long budget = max_evaluations;
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, budget);
}

}  // namespace satsp

#endif  // SATSP_QUADRATURE_HPP_
