#include "satsp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "satsp/analytic.hpp"
#include "satsp/chain.hpp"
#include "satsp/neighborhood.hpp"
#include "satsp/parallel.hpp"
#include "satsp/quadrature.hpp"
#include "satsp/rng.hpp"
#include "satsp/stats.hpp"

namespace satsp::oracle {

namespace {

void require_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw std::invalid_argument(std::string(what) + " needs " + std::to_string(lo) + " <= n <= " +
                                std::to_string(hi) + ", got n = " + std::to_string(n));
}

Eigen::VectorXd lengths_from_table(const Eigen::MatrixXi& table, const Eigen::VectorXd& weights) {
  Eigen::VectorXd lengths = Eigen::VectorXd::Zero(table.rows());
  for (Eigen::Index s = 0; s < table.rows(); ++s)
    for (Eigen::Index e = 0; e < table.cols(); ++e) lengths[s] += weights[table(s, e)];
  return lengths;
}

// Unnormalized Gibbs weights exp(-beta (J - J_min)), with ln of their sum.
Eigen::VectorXd shifted_weights(const Eigen::VectorXd& lengths, double beta, double& log_shift) {
  const double j_min = lengths.minCoeff();
  log_shift = -beta * j_min;
  return (-beta * (lengths.array() - j_min)).exp().matrix();
}

}  // namespace

std::vector<Tour> enumerate_tours(int n) {
  require_range(n, 3, kMaxEnumerationN, "tour enumeration");
  return enumerate_canonical_tours(n);
}

Eigen::MatrixXi tour_edge_table(int n) {
  const auto tours = enumerate_tours(n);
  Eigen::MatrixXi table(static_cast<Eigen::Index>(tours.size()), n);
  for (std::size_t s = 0; s < tours.size(); ++s)
    for (int p = 0; p < n; ++p)
      table(static_cast<Eigen::Index>(s), p) =
          static_cast<int>(edge_index(n, tours[s][p], tours[s][(p + 1) % n]));
  return table;
}

Eigen::VectorXd tour_lengths(const Instance& inst) {
  return lengths_from_table(tour_edge_table(inst.n()), inst.weights());
}

double log_partition(const Eigen::VectorXd& lengths, double beta) {
  double log_shift = 0.0;
  const Eigen::VectorXd w = shifted_weights(lengths, beta, log_shift);
  return log_shift + std::log(w.sum());
}

double exact_partition(const Instance& inst, double beta) {
  const Eigen::VectorXd lengths = tour_lengths(inst);
  if (beta == 0) return static_cast<double>(lengths.size());
  return (-beta * lengths.array()).exp().sum();
}

double log_exact_partition(const Instance& inst, double beta) { return log_partition(tour_lengths(inst), beta); }

GibbsStats gibbs_stats(const Eigen::VectorXd& lengths, double beta) {
  double log_shift = 0.0;
  const Eigen::VectorXd w = shifted_weights(lengths, beta, log_shift);
  GibbsStats stats;
  stats.probabilities = w / w.sum();
  stats.mean = stats.probabilities.dot(lengths);
  const Eigen::ArrayXd centered = lengths.array() - stats.mean;
  stats.variance = (stats.probabilities.array() * centered * centered).sum();
  return stats;
}

GibbsStats exact_gibbs_stats(const Instance& inst, double beta) { return gibbs_stats(tour_lengths(inst), beta); }

PartitionEstimate mc_expected_partition(int n, double beta, std::int64_t draws, std::uint64_t seed, int threads) {
  require_range(n, 3, kMaxChainN, "Monte Carlo partition function");
  if (draws < 1000) throw std::invalid_argument("Monte Carlo partition function needs draws >= 1000");
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  const Eigen::MatrixXi table = tour_edge_table(n);
  std::vector<double> z(static_cast<std::size_t>(draws));
  std::vector<double> log_z(static_cast<std::size_t>(draws));
  parallel_for(draws, threads, [&](std::int64_t i) {
    const Instance inst = generate(n, WeightModel::uniform(), derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Eigen::VectorXd lengths = lengths_from_table(table, inst.weights());
    const auto slot = static_cast<std::size_t>(i);
    z[slot] = beta == 0 ? static_cast<double>(lengths.size()) : (-beta * lengths.array()).exp().sum();
    log_z[slot] = std::log(z[slot]);
  });
  const auto z_est = mean_estimate(z);
  return {z_est.mean, z_est.std_error, mean_estimate(log_z).mean, draws};
}

CompoundStats quenched_compound_stats(int n, double beta, std::int64_t draws, std::uint64_t seed, int threads) {
  require_range(n, 3, kMaxChainN, "quenched compound statistics");
  if (draws < 2) throw std::invalid_argument("quenched compound statistics needs draws >= 2");
  const Eigen::MatrixXi table = tour_edge_table(n);
  std::vector<double> means(static_cast<std::size_t>(draws));
  std::vector<double> variances(static_cast<std::size_t>(draws));
  parallel_for(draws, threads, [&](std::int64_t i) {
    const Instance inst = generate(n, WeightModel::uniform(), derive_seed(seed, static_cast<std::uint64_t>(i)));
    const auto stats = gibbs_stats(lengths_from_table(table, inst.weights()), beta);
    means[static_cast<std::size_t>(i)] = stats.mean;
    variances[static_cast<std::size_t>(i)] = stats.variance;
  });
  const auto m = mean_estimate(means);
  const auto v = mean_estimate(variances);
  return {m.mean, m.std_error, v.mean, v.std_error, draws};
}

ExactChain build_exact_chain(const Instance& inst, double beta, bool lazy) {
  const int n = inst.n();
  require_range(n, 4, kMaxChainN, "exact chain");
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  const StateGraph graph = state_graph(n);
  const int size = graph.size();
  const double degree = two_opt_degree(n);

  ExactChain chain;
  chain.n = n;
  chain.beta = beta;
  chain.lazy = lazy;
  chain.lengths = tour_lengths(inst);
  chain.transition = Eigen::MatrixXd::Zero(size, size);
  for (int x = 0; x < size; ++x) {
    double off_diagonal = 0.0;
    for (int y : graph.neighbors_of(x)) {
      const double delta = chain.lengths[y] - chain.lengths[x];
      const double p = std::min(1.0, std::exp(-beta * delta)) / degree;
      chain.transition(x, y) = p;
      off_diagonal += p;
    }
    chain.transition(x, x) = std::max(0.0, 1.0 - off_diagonal);
  }
  if (lazy)
    chain.transition = 0.5 * (Eigen::MatrixXd::Identity(size, size) + chain.transition);
  chain.stationary = gibbs_stats(chain.lengths, beta).probabilities;
  chain.stationarity_residual =
      (chain.stationary.transpose() * chain.transition - chain.stationary.transpose()).cwiseAbs().sum();
  return chain;
}

double detailed_balance_residual(const ExactChain& chain) {
  const Eigen::MatrixXd flow = chain.stationary.asDiagonal() * chain.transition;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double row_sum_residual(const ExactChain& chain) {
  return (chain.transition.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

Eigen::VectorXd symmetrized_spectrum(const ExactChain& chain) {
  const Eigen::VectorXd root = chain.stationary.cwiseSqrt();
  const Eigen::MatrixXd q = root.asDiagonal() * chain.transition * root.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd symmetric = 0.5 * (q + q.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return solver.eigenvalues().reverse();
}

double bottleneck_ratio(const ExactChain& chain) {
  const auto size = static_cast<int>(chain.stationary.size());
  if (size > kMaxBottleneckStates)
    throw std::invalid_argument("bottleneck enumeration limited to 24 states");
  const Eigen::MatrixXd flow = chain.stationary.asDiagonal() * chain.transition;
  const Eigen::VectorXd& pi = chain.stationary;
  constexpr double kHalfSlack = 1e-12;

  // Gray code: step g toggles bit countr_zero(g).
  std::uint32_t members = 0;
  double measure = 0.0;
  double boundary = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_set = 0;
  const std::uint64_t subsets = std::uint64_t{1} << size;
  for (std::uint64_t g = 1; g < subsets; ++g) {
    const int v = std::countr_zero(g);
    const std::uint32_t bit = std::uint32_t{1} << v;
    double inside = 0.0;
    double outside = 0.0;
    for (int y = 0; y < size; ++y) {
      if (y == v) continue;
      if (members & (std::uint32_t{1} << y)) {
        inside += flow(v, y);
      } else {
        outside += flow(v, y);
      }
    }
    if (members & bit) {
      boundary += inside - outside;
      measure -= pi[v];
    } else {
      boundary += outside - inside;
      measure += pi[v];
    }
    members ^= bit;
    if (members != 0 && measure <= 0.5 + kHalfSlack) {
      const double ratio = boundary / measure;
      if (ratio < best) {
        best = ratio;
        best_set = members;
      }
    }
  }
  double exact_boundary = 0.0;
  double exact_measure = 0.0;
  for (int x = 0; x < size; ++x) {
    if (!(best_set & (std::uint32_t{1} << x))) continue;
    exact_measure += pi[x];
    for (int y = 0; y < size; ++y)
      if (!(best_set & (std::uint32_t{1} << y))) exact_boundary += flow(x, y);
  }
  return exact_boundary / exact_measure;
}

SpectralReport spectral_report(const ExactChain& chain) {
  SpectralReport report;
  report.eigenvalues = symmetrized_spectrum(chain);
  const Eigen::Index count = report.eigenvalues.size();
  if (count < 2) throw std::invalid_argument("spectral report needs at least two states");
  report.lambda1 = report.eigenvalues[1];
  report.lambda_star = std::max(std::abs(report.eigenvalues[1]), std::abs(report.eigenvalues[count - 1]));
  report.gamma = 1.0 - report.lambda1;
  report.gamma_star = 1.0 - report.lambda_star;
  report.relaxation_time = 1.0 / report.gamma_star;
  if (count <= kMaxBottleneckStates) report.bottleneck = bottleneck_ratio(chain);
  return report;
}

double worst_case_tv(const Eigen::MatrixXd& power, const Eigen::VectorXd& stationary) {
  return 0.5 * (power.rowwise() - stationary.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
}

std::uint64_t exact_mixing_time(const ExactChain& chain, double eps) {
  if (eps >= 1.0) return 0;
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  const auto size = chain.transition.rows();
  if (worst_case_tv(Eigen::MatrixXd::Identity(size, size), chain.stationary) <= eps) return 0;
  constexpr std::uint64_t kCap = 1'000'000'000;
  // powers[k] = P^(2^k)
  std::vector<Eigen::MatrixXd> powers{chain.transition};
  while (worst_case_tv(powers.back(), chain.stationary) > eps) {
    if ((std::uint64_t{1} << powers.size()) > 2 * kCap)
      throw NumericalError("mixing time exceeds 1e9 steps");
    powers.push_back(powers.back() * powers.back());
  }
  const auto top = powers.size() - 1;
  if (top == 0) return 1;
  // d(2^(top-1)) > eps >= d(2^top): lift r while keeping d(r) > eps.
  Eigen::MatrixXd current = powers[top - 1];
  std::uint64_t r = std::uint64_t{1} << (top - 1);
  for (std::size_t j = top - 1; j-- > 0;) {
    Eigen::MatrixXd candidate = current * powers[j];
    if (worst_case_tv(candidate, chain.stationary) > eps) {
      current = std::move(candidate);
      r += std::uint64_t{1} << j;
    }
  }
  if (r + 1 > kCap) throw NumericalError("mixing time exceeds 1e9 steps");
  return r + 1;
}

double relaxation_mixing_bound(const ExactChain& chain, double relaxation_time, double eps) {
  return relaxation_time * std::log(1.0 / (eps * chain.stationary.minCoeff()));
}

double weighted_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& weight) {
  return std::sqrt((u.array().square() / weight.array()).sum());
}

std::vector<double> expected_length_drift(const ExactChain& chain, const Eigen::VectorXd& target,
                                          const Eigen::VectorXd& start, int r_max) {
  if (r_max < 0) throw std::invalid_argument("r_max must be >= 0");
  const double target_mean = target.dot(chain.lengths);
  std::vector<double> drift;
  Eigen::RowVectorXd nu = start.transpose();
  for (int r = 0; r <= r_max; ++r) {
    if (r > 0) nu = nu * chain.transition;
    drift.push_back(std::abs(nu.dot(chain.lengths) - target_mean));
  }
  return drift;
}

DriftReport nonequilibrium_drift_report(const Instance& inst, double a, std::uint64_t t, int r_max, bool lazy) {
  const int n = inst.n();
  require_range(n, 4, 6, "nonequilibrium drift");
  if (a < n) throw std::invalid_argument("nonequilibrium drift requires a >= n");
  const double beta_t = std::log(static_cast<double>(t) + 2.0) / a;
  const double beta_next = std::log(static_cast<double>(t) + 3.0) / a;
  const ExactChain chain = build_exact_chain(inst, beta_t, lazy);
  const Eigen::VectorXd& pi_t = chain.stationary;
  const Eigen::VectorXd pi_next = gibbs_stats(chain.lengths, beta_next).probabilities;
  const auto size = static_cast<double>(pi_t.size());

  Eigen::Index worst = 0;
  chain.lengths.maxCoeff(&worst);
  const double delta = 1.0 / (size * (1.0 - pi_t[worst]));
  if (delta > 1.0) throw NumericalError("cannot reach TV distance 1/|S| by mixing toward a point mass");
  Eigen::VectorXd start = (1.0 - delta) * pi_t;
  start[worst] += delta;

  DriftReport report;
  report.mixing_weight = delta;
  report.start_tv = 0.5 * (start - pi_t).cwiseAbs().sum();
  report.schedule_term = weighted_norm(pi_next - pi_t, pi_next);
  report.start_term = weighted_norm(start - pi_t, pi_next);
  report.bound = n * (report.schedule_term + report.start_term);
  report.drift = expected_length_drift(chain, pi_next, start, r_max);
  return report;
}

double nonequilibrium_drift(const Instance& inst, double a, std::uint64_t t, int r, bool lazy) {
  return nonequilibrium_drift_report(inst, a, t, r, lazy).drift.back();
}

std::vector<InvariantCheck> verify_invariants(int n, double beta, std::uint64_t seed, VerifyOptions options) {
  require_range(n, 4, kMaxChainN, "oracle verification");
  if (!(beta > 0)) throw std::invalid_argument("oracle verification needs beta > 0");
  std::vector<InvariantCheck> checks;
  const auto at_most = [&](std::string name, double value, double reference) {
    checks.push_back({std::move(name), value, reference, "<=", value <= reference});
  };

  const Instance inst = generate(n, WeightModel::uniform(), seed);
  const ExactChain chain = build_exact_chain(inst, beta, false);
  const ExactChain lazy = build_exact_chain(inst, beta, true);

  at_most("row_stochastic_residual", row_sum_residual(chain), 1e-12);
  at_most("stationary_sum_residual", std::abs(chain.stationary.sum() - 1.0), 1e-12);
  checks.push_back({"stationary_min_positive", chain.stationary.minCoeff(), 0.0, ">", chain.stationary.minCoeff() > 0});
  at_most("detailed_balance_residual", detailed_balance_residual(chain), 1e-12);
  at_most("stationarity_residual_l1", chain.stationarity_residual, 1e-12);

  // Spectrum of P from the general solver against the symmetrized route.
  const Eigen::VectorXd symmetric = symmetrized_spectrum(chain);
  Eigen::VectorXd general = Eigen::EigenSolver<Eigen::MatrixXd>(chain.transition, false).eigenvalues().real();
  std::sort(general.data(), general.data() + general.size(), std::greater<>());
  at_most("eigenvalue_similarity", (general - symmetric).cwiseAbs().maxCoeff(), 1e-9);

  const Eigen::VectorXd lazy_spectrum = symmetrized_spectrum(lazy);
  at_most("lazy_eigenvalue_map", (lazy_spectrum - 0.5 * (symmetric.array() + 1.0).matrix()).cwiseAbs().maxCoeff(),
          1e-9);
  checks.push_back({"lazy_spectrum_min", lazy_spectrum.minCoeff(), -1e-12, ">=", lazy_spectrum.minCoeff() >= -1e-12});

  // Cumulants of J from finite differences of ln Z.
  const Eigen::VectorXd& lengths = chain.lengths;
  const auto gibbs = gibbs_stats(lengths, beta);
  constexpr double h1 = 1e-4;
  constexpr double h2 = 1e-3;
  const double fd_mean = -(log_partition(lengths, beta + h1) - log_partition(lengths, beta - h1)) / (2 * h1);
  const double fd_variance = (log_partition(lengths, beta + h2) - 2 * log_partition(lengths, beta) +
                              log_partition(lengths, beta - h2)) / (h2 * h2);
  at_most("cumulant_mean_abs_error", std::abs(fd_mean - gibbs.mean), 1e-6);
  at_most("cumulant_variance_abs_error", std::abs(fd_variance - gibbs.variance), 1e-5);

  // Bottleneck sandwich and the diameter bound on the simple random walk.
  const SpectralReport spectral = spectral_report(chain);
  if (spectral.bottleneck) {
    const double phi = *spectral.bottleneck;
    at_most("cheeger_lower_phi2_over_2_minus_gamma", phi * phi / 2 - spectral.gamma, 0.0);
    at_most("cheeger_upper_gamma_minus_2phi", spectral.gamma - 2 * phi, 0.0);
  }
  const StateGraph graph = state_graph(n);
  const ExactChain walk = build_exact_chain(inst, 0.0, false);
  const double walk_gamma = spectral_report(walk).gamma;
  const double degree = two_opt_degree(n);
  const double diameter = graph.diameter();
  at_most("diameter_bound_inverse_gap", 1.0 / walk_gamma, 2 * degree * diameter * diameter);

  // Mixing time against the relaxation-time and schedule-form bounds at a = n, t = e^{n beta}.
  const double eps = 1.0 / graph.size();
  const SpectralReport lazy_report = spectral_report(lazy);
  const auto tau = static_cast<double>(exact_mixing_time(lazy, eps));
  const double relaxation_bound = relaxation_mixing_bound(lazy, lazy_report.relaxation_time, eps);
  at_most("mixing_time_vs_relaxation_bound", tau, relaxation_bound);
  const double t = std::exp(n * beta);
  at_most("relaxation_bound_vs_schedule_bound", relaxation_bound,
          mixing_time_bound<double>(two_opt_degree(n), static_cast<int>(diameter), t, graph.size(), eps));

  // Expected partition function and Jensen ordering on one Monte Carlo batch.
  const auto mc = mc_expected_partition(n, beta, options.mc_draws, derive_seed(seed, 1), options.threads);
  const double closed = expected_partition_function(n, beta);
  at_most("mc_partition_z_score", std::abs(mc.estimate - closed) / mc.std_error, 3.0);
  at_most("jensen_mean_log_z_minus_log_mean_z", mc.mean_log_partition - std::log(mc.estimate), 0.0);

  // n = 3: the annealed CDF dominates the Irwin-Hall CDF pointwise.
  double worst_gap = 0.0;
  for (int g = 0; g <= 1000; ++g) {
    const double j = 3.0 * g / 1000.0;
    worst_gap = std::max(worst_gap, irwin_hall_cdf(3, j) - annealed_cdf(3, beta, j));
  }
  at_most("n3_irwin_hall_minus_annealed_cdf", worst_gap, 1e-12);
  return checks;
}

}  // namespace satsp::oracle
