#ifndef SATSP_ORACLE_HPP_
#define SATSP_ORACLE_HPP_

// Brute-force ground truth for small n: every canonical tour is enumerated, so
// Gibbs distributions, transition matrices, spectra, bottleneck ratios and
// mixing times are computed exactly (up to floating point).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "satsp/instance.hpp"

namespace satsp::oracle {

inline constexpr int kMaxEnumerationN = 8;
inline constexpr int kMaxChainN = 7;      // |S| = 360
inline constexpr int kMaxBottleneckStates = 24;

/// All (n-1)!/2 canonical tours, 3 <= n <= 8, in a fixed order.
std::vector<Tour> enumerate_tours(int n);

/// Edge indices of every enumerated tour: row s holds the n edges of state s.
Eigen::MatrixXi tour_edge_table(int n);

/// J(x | w) for every state, in enumerate_tours order.
Eigen::VectorXd tour_lengths(const Instance& inst);

/// ln Z(beta | w) by a max-shifted log-sum-exp over the given lengths.
double log_partition(const Eigen::VectorXd& lengths, double beta);

/// Z(beta | w) = sum over tours of exp(-beta J). Exactly |S| at beta = 0.
double exact_partition(const Instance& inst, double beta);
double log_exact_partition(const Instance& inst, double beta);

/// Exact Gibbs law pi_beta(x | w) and the mean and variance of J under it.
struct GibbsStats {
  double mean = 0;
  double variance = 0;
  Eigen::VectorXd probabilities;  // indexed like enumerate_tours
};
GibbsStats gibbs_stats(const Eigen::VectorXd& lengths, double beta);
GibbsStats exact_gibbs_stats(const Instance& inst, double beta);

/// Monte Carlo E[Z(beta | W)] over ContinuousUniform instances with seeds
/// derive_seed(seed, i). Also reports the batch mean of ln Z for Jensen checks.
struct PartitionEstimate {
  double estimate = 0;
  double std_error = 0;
  double mean_log_partition = 0;
  std::int64_t draws = 0;
};
PartitionEstimate mc_expected_partition(int n, double beta, std::int64_t draws, std::uint64_t seed,
                                        int threads = 1);

/// Compound quenched moments: the average over random instances of the exact
/// Gibbs mean of J and of the exact Gibbs variance sigma^2(W).
struct CompoundStats {
  double mean = 0;
  double mean_std_error = 0;
  double mean_variance = 0;
  double mean_variance_std_error = 0;
  std::int64_t draws = 0;
};
CompoundStats quenched_compound_stats(int n, double beta, std::int64_t draws, std::uint64_t seed,
                                      int threads = 1);

/// Dense Metropolis transition matrix at fixed beta over all canonical tours:
/// P(x, y) = (1/d) min{1, exp(-beta (J(y) - J(x)))} for y in N(x), the rest of
/// the row on the diagonal; lazy replaces P by (I + P) / 2.
struct ExactChain {
  int n = 0;
  double beta = 0;
  bool lazy = false;
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;  // explicit Gibbs law
  Eigen::VectorXd lengths;
  double stationarity_residual = 0;  // ||pi P - pi||_1
};
ExactChain build_exact_chain(const Instance& inst, double beta, bool lazy);

/// max |pi(x) P(x, y) - pi(y) P(y, x)|.
double detailed_balance_residual(const ExactChain& chain);
/// max |row sum - 1|.
double row_sum_residual(const ExactChain& chain);

/// Spectrum of pi^{1/2} P pi^{-1/2} (symmetric under detailed balance), descending.
Eigen::VectorXd symmetrized_spectrum(const ExactChain& chain);

/// min over nonempty S with pi(S) <= 1/2 of sum_{x in S, y not in S} pi(x) P(x, y) / pi(S),
/// by Gray-code enumeration of all subsets. States <= 24. pi(S) <= 1/2 is tested
/// with a 1e-12 allowance for rounding in the incremental sums; the minimizing
/// set's ratio is recomputed directly.
double bottleneck_ratio(const ExactChain& chain);

struct SpectralReport {
  Eigen::VectorXd eigenvalues;  // descending, eigenvalues(0) == 1
  double lambda1 = 0;           // second largest eigenvalue
  double lambda_star = 0;       // largest modulus among the non-unit eigenvalues
  double gamma = 0;             // 1 - lambda1
  double gamma_star = 0;        // 1 - lambda_star
  double relaxation_time = 0;   // 1 / gamma_star
  std::optional<double> bottleneck;  // only when states <= 24
};
SpectralReport spectral_report(const ExactChain& chain);

/// max over point-mass starts of ||e_x P^r - pi||_TV, given the matrix P^r.
double worst_case_tv(const Eigen::MatrixXd& power, const Eigen::VectorXd& stationary);

/// Smallest r with worst_case_tv(P^r) <= eps, by repeated squaring and binary
/// lifting. eps >= 1 gives 0. Throws NumericalError beyond 1e9 steps.
std::uint64_t exact_mixing_time(const ExactChain& chain, double eps);

/// tau_rel ln(1 / (eps pi_min)).
double relaxation_mixing_bound(const ExactChain& chain, double relaxation_time, double eps);

/// Weighted norm sqrt(sum u(x)^2 / weight(x)).
double weighted_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& weight);

/// |E_{nu_r} J - E_target J| for nu_r = nu_0 P^r, r = 0..r_max.
std::vector<double> expected_length_drift(const ExactChain& chain, const Eigen::VectorXd& target,
                                          const Eigen::VectorXd& start, int r_max);

/// Drift of E(J) one schedule step ahead. P_t is the chain at temperature
/// a / ln(t + 2); pi_{t+1} is the Gibbs law at a / ln(t + 3). The start law is
/// nu_0 = (1 - delta) pi_t + delta e_x with x the longest tour and delta chosen
/// so that ||nu_0 - pi_t||_TV = 1/|S|.
struct DriftReport {
  std::vector<double> drift;     // r = 0..r_max
  double schedule_term = 0;      // ||pi_{t+1} - pi_t||_{t+1}
  double start_term = 0;         // ||nu_0 - pi_t||_{t+1}
  double bound = 0;              // n (schedule_term + start_term)
  double start_tv = 0;           // ||nu_0 - pi_t||_TV
  double mixing_weight = 0;      // delta
};
DriftReport nonequilibrium_drift_report(const Instance& inst, double a, std::uint64_t t, int r_max,
                                        bool lazy = true);

/// The drift at step r alone.
double nonequilibrium_drift(const Instance& inst, double a, std::uint64_t t, int r, bool lazy = true);

/// One named check of the oracle self-verification suite.
struct InvariantCheck {
  std::string name;
  double value = 0;
  double reference = 0;
  std::string relation;  // how value is compared with reference
  bool passed = false;
};

struct VerifyOptions {
  std::int64_t mc_draws = 20'000;
  int threads = 1;
};

/// Runs every oracle invariant on a random instance of size n (4..7) at beta.
std::vector<InvariantCheck> verify_invariants(int n, double beta, std::uint64_t seed, VerifyOptions options = {});

}  // namespace satsp::oracle

#endif  // SATSP_ORACLE_HPP_
