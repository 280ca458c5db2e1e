#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "satsp/analytic.hpp"
#include "satsp/quadrature.hpp"
#include "satsp/stats.hpp"

using namespace satsp;

// Reference values below were evaluated independently at 40 significant digits.

TEST_CASE("expected partition function") {
  CHECK(expected_partition_function(3, 1.0) == doctest::Approx(0.2525804578276471679).epsilon(1e-14));
  CHECK(expected_partition_function(6, 2.0) == doctest::Approx(0.3917939291534301387).epsilon(1e-14));
  CHECK(expected_partition_function(6, 0.5) == doctest::Approx(14.249400963453135424).epsilon(1e-14));
  for (int n = 3; n <= 12; ++n) {
    const double states = std::exp(log_state_count(n));
    CHECK(expected_partition_function(n, 0.0) == doctest::Approx(states).epsilon(1e-13));
    CHECK(expected_partition_function(n, 1e-12) == doctest::Approx(states).epsilon(1e-10));
  }
  CHECK(std::isfinite(log_expected_partition_function(500, 10.0)));
  CHECK_THROWS(expected_partition_function(21, 1.0));
  CHECK_THROWS(per_edge_partition_factor(-0.1));
}

TEST_CASE("cost lower bound") {
  CHECK(cost_lower_bound(6, 2.0) == doctest::Approx(2.0608941435020060891).epsilon(1e-14));
  CHECK(cost_lower_bound(100, 10.0) == doctest::Approx(9.9954598008990317783).epsilon(1e-14));
  CHECK(cost_lower_bound(8, 1e-6) == doctest::Approx(4.0).epsilon(1e-6));
  // Series n (1/2 - beta/12 + ...) near zero.
  CHECK(cost_lower_bound(8, 1e-3) == doctest::Approx(8 * (0.5 - 1e-3 / 12)).epsilon(1e-9));
  double previous = cost_lower_bound(10, 0.01);
  for (double beta = 0.02; beta < 50; beta += 0.01) {
    const double value = cost_lower_bound(10, beta);
    CHECK(value < previous);
    CHECK(value > 0);
    CHECK(value < 5);
    previous = value;
  }
  CHECK_THROWS(cost_lower_bound(6, 0.0));
  CHECK_THROWS(cost_lower_bound(6, -1.0));
}

TEST_CASE("variance upper bound") {
  const auto v = variance_upper_bound(6, 2.0);
  CHECK(v.tight == doctest::Approx(0.41390750855053430039).epsilon(1e-13));
  CHECK(v.loose == 1.5);
  CHECK(variance_upper_bound(6, 1e-3).tight == doctest::Approx(0.5).epsilon(1e-6));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> beta_dist(0.01, 40.0);
  std::uniform_int_distribution<int> n_dist(3, 1000);
  for (int i = 0; i < 1000; ++i) {
    const auto b = variance_upper_bound(n_dist(rng), beta_dist(rng));
    CHECK(b.tight <= b.loose);
    CHECK(b.tight > 0);
  }
  CHECK_THROWS(variance_upper_bound(6, 0.0));
}

TEST_CASE("derivatives of ln E(Z) reproduce the cost and variance bounds") {
  for (int n : {4, 6, 10, 100}) {
    for (double beta : {0.3, 1.0, 2.0, 10.0}) {
      const double h = 1e-4;
      const double first = (log_expected_partition_function(n, beta + h) -
                            log_expected_partition_function(n, beta - h)) / (2 * h);
      CHECK(std::abs(-first - cost_lower_bound(n, beta)) <= 1e-6 * std::max(1.0, n / 10.0));
      // Long double second difference to keep rounding below the tolerance.
      const long double hl = 1e-4L;
      const long double bl = beta;
      const long double second =
          (log_expected_partition_function<long double>(n, bl + hl) - 2 * log_expected_partition_function<long double>(n, bl) +
           log_expected_partition_function<long double>(n, bl - hl)) / (hl * hl);
      CHECK(std::abs(static_cast<double>(second) - variance_upper_bound(n, beta).tight) <= 1e-5 * std::max(1.0, n / 10.0));
    }
  }
}

TEST_CASE("schedule bounds") {
  const double t = std::exp(10.0) - 2;
  const auto r = schedule_bounds<double>(10, 10.0, t);
  CHECK(r.beta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.expected_cost_lower == doctest::Approx(4.1802329313067357561).epsilon(1e-12));
  for (double tt : {1.0, 7.0, 1e3, 1e9}) {
    for (double a : {1.0, 5.0, 10.0}) {
      const auto s = schedule_bounds<double>(10, a, tt);
      const double beta = std::log(tt + 2) / a;
      CHECK(std::abs(s.expected_cost_lower - cost_lower_bound(10, beta)) <= 1e-12);
      CHECK(std::abs(s.variance_upper_loose - variance_upper_bound(10, beta).loose) <= 1e-12 * s.variance_upper_loose);
      CHECK(s.variance_upper_tight == doctest::Approx(variance_upper_bound(10, beta).tight).epsilon(1e-12));
    }
  }
  double previous = schedule_bounds<double>(10, 10.0, 1.0).expected_cost_lower;
  for (double tt = 10; tt < 1e12; tt *= 10) {
    const double value = schedule_bounds<double>(10, 10.0, tt).expected_cost_lower;
    CHECK(value < previous);
    previous = value;
  }
  CHECK(schedule_bounds<double>(10, 1.0, 1e300).expected_cost_lower < 0.02);
  CHECK_THROWS(schedule_bounds<double>(10, 10.0, 0.5));
  CHECK_THROWS(schedule_bounds<double>(10, 0.0, 5.0));
}

TEST_CASE("mixing time bound") {
  CHECK(mixing_time_bound<double>(5, 4, 2.0, 12.0, 0.05) == doctest::Approx(20230262.305265865894).epsilon(1e-13));
  CHECK(mixing_time_bound<double>(5, 4, 1.0, 1.0, 1 - 1e-15) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(mixing_time_bound<double>(5, 4, 1.0, 1.0, 1 - 1e-9) < 1e-3);
  CHECK(two_opt_mixing_time_bound<double>(5, 2.0, 0.05) ==
        doctest::Approx(mixing_time_bound<double>(5, 4, 2.0, 12.0, 0.05)).epsilon(1e-14));
  CHECK(std::isfinite(two_opt_mixing_time_bound<double>(500, 10.0, 0.01)));
  CHECK_THROWS(mixing_time_bound<double>(0, 4, 2.0, 12.0, 0.05));
  CHECK_THROWS(mixing_time_bound<double>(5, 4, 2.0, 12.0, 1.0));
  CHECK_THROWS(mixing_time_bound<double>(5, 4, 0.5, 12.0, 0.5));
}

TEST_CASE("Irwin-Hall density and distribution") {
  CHECK(irwin_hall_cdf(3, 1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(irwin_hall_pdf(3, 0.0) == 0.0);
  CHECK(irwin_hall_cdf(3, 3.0) == 1.0);
  CHECK(irwin_hall_cdf(3, 0.0) == 0.0);
  CHECK(irwin_hall_pdf(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(irwin_hall_pdf(3, 0.7) == doctest::Approx(0.245).epsilon(1e-14));
  CHECK(irwin_hall_cdf(5, 1.3) == doctest::Approx(0.030839833333333333333).epsilon(1e-13));
  CHECK(irwin_hall_cdf(10, 3.7) == doctest::Approx(0.078272676365787147266).epsilon(1e-12));
  CHECK(irwin_hall_pdf(12, 4.4) == doctest::Approx(0.11372600279131120731).epsilon(1e-11));
  CHECK(irwin_hall_pdf(4, -0.1) == 0.0);
  CHECK(irwin_hall_pdf(4, 4.1) == 0.0);
  for (int n = 1; n <= 15; ++n) {
    double previous = 0;
    for (int g = 0; g <= 300; ++g) {
      const double x = n * g / 300.0;
      const double c = irwin_hall_cdf(n, x);
      CHECK(c >= previous - 1e-13);
      CHECK(c == doctest::Approx(1 - irwin_hall_cdf(n, n - x)).epsilon(1e-12));
      previous = c;
    }
    const double mass = adaptive_simpson([n](double x) { return irwin_hall_pdf(n, x); }, 0.0, double(n), 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS(irwin_hall_cdf(16, 3.0));
  CHECK_THROWS(irwin_hall_pdf(0, 3.0));
}

TEST_CASE("annealed CDF") {
  CHECK(annealed_cdf(3, 2.0, 0.9) == doctest::Approx(0.41669701064073107042).epsilon(1e-10));
  CHECK(annealed_cdf(10, 2.0, 3.1) == doctest::Approx(0.35703285732298538628).epsilon(1e-10));
  CHECK(annealed_cdf(6, 0.5, 2.5) == doctest::Approx(0.36770817651784318616).epsilon(1e-10));
  CHECK(annealed_cdf(12, 10.0, 1.4) == doctest::Approx(0.74036282726791834759).epsilon(1e-10));
  for (int n : {2, 5, 9}) {
    for (int g = 0; g <= 40; ++g) {
      const double j = n * g / 40.0;
      CHECK(annealed_cdf(n, 0.0, j) == doctest::Approx(irwin_hall_cdf(n, j)).epsilon(1e-14));
    }
  }
  CHECK(annealed_cdf(4, 1.0, -1.0) == 0.0);
  CHECK(annealed_cdf(4, 1.0, 5.0) == 1.0);
  CHECK_THROWS(annealed_cdf(16, 1.0, 3.0));
  CHECK_THROWS(annealed_cdf(4, -1.0, 3.0));
}

TEST_CASE("batched annealed CDF agrees with pointwise evaluation") {
  std::vector<double> points{2.7, -1.0, 0.3, 9.5, 1.0, 4.0, 3.99, 12.0, 0.3};
  for (double beta : {0.0, 0.5, 2.0, 10.0}) {
    const auto many = annealed_cdf_many(10, beta, points);
    for (std::size_t i = 0; i < points.size(); ++i)
      CHECK(std::abs(many[i] - annealed_cdf(10, beta, points[i])) <= 2e-10);
  }
  CHECK(annealed_cdf_many(4, 1.0, std::vector<double>{}).empty());
}

TEST_CASE("annealed CDF monotonicity in j and beta") {
  for (int n : {3, 6, 10}) {
    double previous_j = 0;
    for (int g = 0; g <= 60; ++g) {
      const double j = n * g / 60.0;
      const double c = annealed_cdf(n, 2.0, j);
      CHECK(c >= previous_j - 1e-10);
      previous_j = c;
      double previous_beta = annealed_cdf(n, 0.0, j);
      for (double beta : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double cb = annealed_cdf(n, beta, j);
        CHECK(cb >= previous_beta - 1e-10);
        previous_beta = cb;
      }
    }
  }
}

TEST_CASE("quadrature normalization matches the closed form") {
  for (int n = 1; n <= 12; ++n) {
    for (double beta : {0.1, 1.0, 10.0}) {
      const double integral = adaptive_simpson(
          [n, beta](double s) { return std::exp(-beta * s) * irwin_hall_pdf<long double>(n, s); }, 0.0L,
          static_cast<long double>(n), 1e-13L);
      CHECK(std::abs(integral - std::pow(per_edge_partition_factor(beta), n)) <= 1e-9);
    }
  }
}

TEST_CASE("annealed density integrates to its CDF") {
  const double mass = adaptive_simpson([](double j) { return annealed_pdf(7, 3.0, j); }, 0.0, 2.2, 1e-12);
  CHECK(mass == doctest::Approx(annealed_cdf(7, 3.0, 2.2)).epsilon(1e-9));
}

TEST_CASE("tilted edge quantile") {
  for (double beta : {0.0, 0.5, 2.0, 10.0, 60.0}) {
    CHECK(tilted_edge_quantile(beta, 0.0) == 0.0);
    CHECK(tilted_edge_quantile(beta, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // Inverse of the tilted CDF (1 - e^{-beta w}) / (1 - e^{-beta}).
    for (double u : {0.1, 0.5, 0.9}) {
      const double w = tilted_edge_quantile(beta, u);
      const double cdf = beta == 0 ? w : std::expm1(-beta * w) / std::expm1(-beta);
      CHECK(cdf == doctest::Approx(u).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact annealed sampler") {
  const auto big = annealed_exact_sample(100, 10.0, 100'000, 1);
  const auto m = mean_estimate(big);
  CHECK(std::abs(m.mean - cost_lower_bound(100, 10.0)) <= 3 * m.std_error);

  const auto flat = annealed_exact_sample(12, 0.0, 100'000, 2);
  const auto mf = mean_estimate(flat);
  CHECK(std::abs(mf.mean - 6.0) <= 3 * mf.std_error);

  for (int n : {6, 20}) {
    const auto s = annealed_exact_sample(n, 1.5, 100'000, 3);
    const auto ms = mean_estimate(s);
    CHECK(std::abs(ms.mean - cost_lower_bound(n, 1.5)) <= 3 * ms.std_error);
  }

  const auto ten = ecdf(annealed_exact_sample(10, 2.0, 100'000, 4));
  const auto reference = annealed_cdf_many(10, 2.0, ten.sorted_samples());
  const auto& xs = ten.sorted_samples();
  const double sup = ks_distance_to(ten, [&](double j) {
    return reference[static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), j) - xs.begin())];
  });
  CHECK(sup <= dkw_epsilon(100'000, 0.01));
  CHECK(annealed_exact_sample(5, 1.0, 10, 9) == annealed_exact_sample(5, 1.0, 10, 9));
  CHECK_THROWS(annealed_exact_sample(5, 1.0, 0, 9));
}
