#include "satsp/analytic.hpp"

#include <algorithm>
#include <numeric>

#include "satsp/quadrature.hpp"
#include "satsp/rng.hpp"

namespace satsp {

namespace {

// Integral of e^{-beta s} rho(s) over [lo, hi], split at the integer knots of rho.
double tilted_mass(int n, double beta, double lo, double hi, double tolerance) {
  const auto integrand = [n, beta](double s) {
    return std::exp(-beta * s) * static_cast<double>(irwin_hall_pdf<long double>(n, s));
  };
  double total = 0.0;
  const int first = static_cast<int>(std::floor(lo));
  for (int k = std::max(first, 0); k < n && k < hi; ++k) {
    const double a = std::max(lo, static_cast<double>(k));
    const double b = std::min(hi, static_cast<double>(k + 1));
    if (b > a) total += adaptive_simpson(integrand, a, b, tolerance / n);
  }
  return total;
}

}  // namespace

double annealed_cdf(int n, double beta, double j, double tolerance) {
  detail::check_irwin_hall_n(n);
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (j <= 0) return 0.0;
  if (j >= n) return 1.0;
  if (beta == 0) return static_cast<double>(irwin_hall_cdf<long double>(n, j));
  const double norm = std::pow(per_edge_partition_factor(beta), n);
  // tolerance applies to the CDF, so the numerator is integrated to tolerance * norm
  if (j <= 0.5 * n) return tilted_mass(n, beta, 0.0, j, tolerance * norm) / norm;
  return 1.0 - tilted_mass(n, beta, j, static_cast<double>(n), tolerance * norm) / norm;
}

std::vector<double> annealed_cdf_many(int n, double beta, std::span<const double> points, double tolerance) {
  detail::check_irwin_hall_n(n);
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  for (double j : points)
    if (std::isnan(j)) throw std::invalid_argument("annealed CDF point is NaN");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  const double norm = std::pow(per_edge_partition_factor(beta), n);
  const auto integrand = [n, beta](double s) {
    return std::exp(-beta * s) * static_cast<double>(irwin_hall_pdf<long double>(n, s));
  };
  // Tolerance per unit length of the numerator.
  const double density_tol = tolerance * norm / n;
  std::vector<double> result(points.size());
  double mass = 0.0;
  double at = 0.0;
  for (std::size_t index : order) {
    const double j = points[index];
    const double target = std::clamp(j, 0.0, static_cast<double>(n));
    while (at < target) {
      const double next = std::min(target, std::floor(at) + 1.0);  // stop at integer knots
      mass += adaptive_simpson(integrand, at, next, density_tol * (next - at));
      at = next;
    }
    if (j <= 0) {
      result[index] = 0.0;
    } else if (j >= n) {
      result[index] = 1.0;
    } else {
      result[index] = std::min(1.0, mass / norm);
    }
  }
  return result;
}

double annealed_pdf(int n, double beta, double j) {
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  const double norm = std::pow(per_edge_partition_factor(beta), n);
  return std::exp(-beta * j) * static_cast<double>(irwin_hall_pdf<long double>(n, j)) / norm;
}

double tilted_edge_quantile(double beta, double u) {
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (beta == 0) return u;
  if (beta < 1) return -std::log1p(u * std::expm1(-beta)) / beta;
  // 1 - u (1 - e^{-beta}) as a sum of nonnegative terms; stays positive at u = 1.
  return -std::log((1 - u) + u * std::exp(-beta)) / beta;
}

std::vector<double> annealed_exact_sample(int n, double beta, std::int64_t count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  Rng rng(seed);
  std::vector<double> samples(static_cast<std::size_t>(count));
  for (auto& sample : samples) {
    double sum = 0.0;
    for (int e = 0; e < n; ++e) sum += tilted_edge_quantile(beta, rng.uniform01());
    sample = sum;
  }
  return samples;
}

}  // namespace satsp
