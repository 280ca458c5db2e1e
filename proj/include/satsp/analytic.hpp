#ifndef SATSP_ANALYTIC_HPP_
#define SATSP_ANALYTIC_HPP_

// Closed-form quantities of the random-instance model: the expected partition
// function, the equilibrium cost and variance bounds it implies, the logarithmic
// schedule versions of those bounds, the 2-opt mixing-time bound, the
// Irwin-Hall law of a uniformly random tour's length, and the exponentially
// tilted ("annealed") version of that law.
//
// The scalar formulas are templates so that the same expression can be
// evaluated in double and in long double.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <span>
#include <vector>

namespace satsp {

/// ln((n-1)!/2), the log of the number of canonical tours.
template <typename Scalar = double>
Scalar log_state_count(int n) {
  if (n < 3) throw std::invalid_argument("state count needs n >= 3");
  return std::lgamma(Scalar(n)) - std::log(Scalar(2));
}

/// E[e^{-beta w}] for w ~ U[0,1]: (1 - e^{-beta}) / beta, and 1 at beta = 0.
template <typename Scalar>
Scalar per_edge_partition_factor(Scalar beta) {
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (beta == 0) return Scalar(1);
  return -std::expm1(-beta) / beta;
}

/// ln E[Z(beta | W)] = ln((n-1)!/2) + n ln((1 - e^{-beta}) / beta).
template <typename Scalar>
Scalar log_expected_partition_function(int n, Scalar beta) {
  return log_state_count<Scalar>(n) + n * std::log(per_edge_partition_factor(beta));
}

/// E[Z(beta | W)] = (n-1)!/2 * ((1 - e^{-beta}) / beta)^n. Only for n <= 20;
/// larger n must use log_expected_partition_function.
template <typename Scalar>
Scalar expected_partition_function(int n, Scalar beta) {
  if (n > 20) throw std::domain_error("n > 20: use log_expected_partition_function");
  return std::exp(log_expected_partition_function(n, beta));
}

/// n (1/beta - 1/(e^beta - 1)): the lower bound on E(J) under the quenched law,
/// which is also exactly the mean of the annealed law.
template <typename Scalar>
Scalar cost_lower_bound(int n, Scalar beta) {
  if (!(beta > 0)) throw std::domain_error("beta must be positive");
  return n * (1 / beta - 1 / std::expm1(beta));
}

template <typename Scalar>
struct VarianceBound {
  Scalar tight;  // n (1/beta^2 - 1/(e^beta - 1) - 1/(e^beta - 1)^2)
  Scalar loose;  // n / beta^2
};

template <typename Scalar>
VarianceBound<Scalar> variance_upper_bound(int n, Scalar beta) {
  if (!(beta > 0)) throw std::domain_error("beta must be positive");
  const Scalar em1 = std::expm1(beta);
  const Scalar inv_b2 = 1 / (beta * beta);
  return {n * (inv_b2 - 1 / em1 - 1 / (em1 * em1)), n * inv_b2};
}

template <typename Scalar = double>
struct BoundReport {
  int n = 0;
  Scalar beta = 0;
  Scalar expected_cost_lower = 0;
  Scalar variance_upper_loose = 0;
  Scalar variance_upper_tight = 0;
  Scalar log_expected_partition = 0;
};

/// All equilibrium bounds at a fixed inverse temperature.
template <typename Scalar>
BoundReport<Scalar> bounds_at_beta(int n, Scalar beta) {
  const auto variance = variance_upper_bound(n, beta);
  return {n, beta, cost_lower_bound(n, beta), variance.loose, variance.tight,
          log_expected_partition_function(n, beta)};
}

/// Bounds for the logarithmic schedule at iteration t, temperature a / ln(t + 2):
///   cost  >= n (a / ln(t+2) - 1 / ((t+2)^{1/a} - 1)),  variance <= a^2 n / ln^2(t+2).
/// t is real-valued so that the schedule can be evaluated at any inverse temperature.
template <typename Scalar>
BoundReport<Scalar> schedule_bounds(int n, Scalar a, Scalar t) {
  if (!(a > 0)) throw std::domain_error("schedule constant a must be positive");
  if (!(t >= 1)) throw std::domain_error("iteration index t must be >= 1");
  const Scalar log_t = std::log(t + 2);
  const Scalar beta = log_t / a;
  BoundReport<Scalar> report = bounds_at_beta(n, beta);
  report.expected_cost_lower = n * (a / log_t - 1 / std::expm1(log_t / a));
  report.variance_upper_loose = a * a * n / (log_t * log_t);
  return report;
}

/// 128 d^2 D^4 t^2 ln(|S| t / eps), with |S| passed as ln|S|.
template <typename Scalar>
Scalar mixing_time_bound_log(int degree, int diameter, Scalar t, Scalar log_states, Scalar eps) {
  if (degree < 1 || diameter < 1 || !(t >= 1)) throw std::domain_error("d, D, t must be >= 1");
  if (!(eps > 0 && eps < 1)) throw std::domain_error("epsilon must lie in (0, 1)");
  const Scalar d = degree;
  const Scalar dd = diameter;
  return 128 * d * d * dd * dd * dd * dd * t * t * (log_states + std::log(t) - std::log(eps));
}

template <typename Scalar>
Scalar mixing_time_bound(int degree, int diameter, Scalar t, Scalar states, Scalar eps) {
  return mixing_time_bound_log(degree, diameter, t, std::log(states), eps);
}

/// Mixing-time bound for the 2-opt chain: d = n(n-3)/2, D = n - 1, |S| = (n-1)!/2.
template <typename Scalar>
Scalar two_opt_mixing_time_bound(int n, Scalar t, Scalar eps) {
  if (n < 4) throw std::domain_error("2-opt chain needs n >= 4");
  return mixing_time_bound_log(n * (n - 3) / 2, n - 1, t, log_state_count<Scalar>(n), eps);
}

/// Largest n accepted by the alternating-sum Irwin-Hall formulas.
inline constexpr int kIrwinHallMaxN = 15;

namespace detail {

template <typename Scalar>
Scalar binomial(int n, int k) {
  Scalar c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline void check_irwin_hall_n(int n) {
  if (n < 1) throw std::domain_error("Irwin-Hall needs n >= 1");
  if (n > kIrwinHallMaxN)
    throw std::domain_error("Irwin-Hall closed form limited to n <= 15; use the sampling path");
}

}  // namespace detail

/// Density of the sum of n independent U[0,1] variables.
template <typename Scalar>
Scalar irwin_hall_pdf(int n, Scalar x) {
  detail::check_irwin_hall_n(n);
  if (x < 0 || x > n) return Scalar(0);
  if (n == 1) return Scalar(1);
  if (x > Scalar(n) / 2) x = n - x;  // symmetric density
  Scalar sum = 0;
  Scalar sign = 1;
  for (int k = 0; k <= n && k <= x; ++k) {
    sum += sign * detail::binomial<Scalar>(n, k) * std::pow(x - k, n - 1);
    sign = -sign;
  }
  return sum / std::tgamma(Scalar(n));
}

/// CDF of the sum of n independent U[0,1] variables. For x > n/2 evaluates
/// 1 - F(n - x), which keeps the alternating sum short.
template <typename Scalar>
Scalar irwin_hall_cdf(int n, Scalar x) {
  detail::check_irwin_hall_n(n);
  if (x <= 0) return Scalar(0);
  if (x >= n) return Scalar(1);
  const bool upper = x > Scalar(n) / 2;
  const Scalar y = upper ? n - x : x;
  Scalar sum = 0;
  Scalar sign = 1;
  for (int k = 0; k <= n && k <= y; ++k) {
    sum += sign * detail::binomial<Scalar>(n, k) * std::pow(y - k, n);
    sign = -sign;
  }
  const Scalar lower_cdf = sum / std::tgamma(Scalar(n + 1));
  return upper ? 1 - lower_cdf : lower_cdf;
}

/// Quadrature tolerance used by annealed_cdf.
inline constexpr double kAnnealedCdfTolerance = 1e-10;

/// CDF of the annealed tour-length law, density e^{-beta j} rho(j) normalized by
/// ((1 - e^{-beta}) / beta)^n. The partial integral of e^{-beta j} rho(j) is taken
/// by adaptive Simpson on each unit interval (rho is smooth between integers),
/// over [0, j] when j <= n/2 and over [j, n] for the complement otherwise.
/// `tolerance` bounds the absolute error of the returned CDF value.
/// Throws NumericalError if quadrature fails. n <= 15.
double annealed_cdf(int n, double beta, double j, double tolerance = kAnnealedCdfTolerance);

/// annealed_cdf at many points at once: one cumulative pass over the sorted
/// points, each gap integrated to a tolerance proportional to its length, so
/// every returned value is within `tolerance` of the exact CDF. Output order
/// follows `points`.
std::vector<double> annealed_cdf_many(int n, double beta, std::span<const double> points,
                                      double tolerance = kAnnealedCdfTolerance);

/// Density of the annealed law.
double annealed_pdf(int n, double beta, double j);

/// Inverse CDF of the tilted edge density beta e^{-beta w} / (1 - e^{-beta}) on [0,1].
double tilted_edge_quantile(double beta, double u);

/// Exact samples of the annealed law: each is a sum of n independent
/// tilted_edge_quantile(beta, u) draws. Valid for any n >= 1.
std::vector<double> annealed_exact_sample(int n, double beta, std::int64_t count, std::uint64_t seed);

}  // namespace satsp

#endif  // SATSP_ANALYTIC_HPP_
