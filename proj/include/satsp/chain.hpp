#ifndef SATSP_CHAIN_HPP_
#define SATSP_CHAIN_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "satsp/instance.hpp"
#include "satsp/neighborhood.hpp"

namespace satsp {

/// Nonincreasing temperature map over iteration indices t = 0, 1, 2, ...
///
///   Logarithmic(a):    T(t) = a / ln(t + 2)
///   Constant(T):       T(t) = T
///   EpochWise(a, L):   epochs k = 1, 2, ... of lengths L[k-1]; T = a / ln(k + 2)
///                      inside epoch k, and the last epoch's value after the plan ends.
///
/// The logarithmic form a / ln t is shifted by two so that t = 0 and t = 1 give a
/// finite positive temperature.
class CoolingSchedule {
 public:
  struct Logarithmic {
    double a;
  };
  struct Constant {
    double temperature;
  };
  struct EpochWise {
    double a;
    std::vector<std::uint64_t> epoch_lengths;
  };

  static CoolingSchedule logarithmic(double a);
  static CoolingSchedule constant(double temperature);
  static CoolingSchedule epoch_wise(double a, std::vector<std::uint64_t> epoch_lengths);

  double temperature(std::uint64_t t) const;

  /// 1-based epoch containing iteration t (for Logarithmic and Constant this is t + 1).
  std::uint64_t epoch_of(std::uint64_t t) const;

  const std::variant<Logarithmic, Constant, EpochWise>& variant() const { return variant_; }

  /// JSON object naming the variant and its parameters.
  std::string to_json() const;

 private:
  explicit CoolingSchedule(std::variant<Logarithmic, Constant, EpochWise> v);
  std::variant<Logarithmic, Constant, EpochWise> variant_;
  std::vector<std::uint64_t> epoch_ends_;  // prefix sums for EpochWise
};

/// Recorded time series of a chain run.
struct ChainTrace {
  std::vector<std::uint64_t> steps;  // 1-based step number after which J was recorded
  std::vector<double> lengths;
  std::vector<char> accepted;  // whether that step's proposal was accepted
  Tour final_tour;
  double final_length = 0;
  std::uint64_t iterations = 0;
  std::uint64_t accepted_total = 0;
  std::uint64_t seed = 0;

  /// CSV "step,J,accepted".
  void write_csv(std::ostream& out) const;
};

struct ChainOptions {
  std::uint64_t record_every = 1;
  /// Hold with probability 1/2 before each proposal (transition matrix (I + P) / 2).
  bool lazy = false;
};

/// Simulated annealing: t iterations from x0. Each iteration proposes a uniform
/// 2-opt neighbor y, accepts if J(y) - J(x) < 0, and otherwise accepts with
/// probability exp(-(J(y) - J(x)) / T(i)). Requires n >= 4, t >= 1.
ChainTrace simulated_annealing(const Instance& inst, const CoolingSchedule& schedule, std::uint64_t t,
                               const Tour& x0, std::uint64_t seed, ChainOptions options = {});

/// Fixed inverse temperature Metropolis chain (beta = 0 accepts every proposal).
ChainTrace metropolis(const Instance& inst, double beta, std::uint64_t steps, const Tour& x0,
                      std::uint64_t seed, ChainOptions options = {});

/// 50 n^3 steps.
std::uint64_t default_burn_in(int n);

/// One draw of the quenched law given the instance: Metropolis at beta for
/// burn_in steps from a uniformly random canonical tour, returning the final J.
/// For n = 3 there is a single tour and its length is returned.
double quenched_sample(const Instance& inst, double beta, std::uint64_t burn_in, std::uint64_t seed);

/// Quenched samples over fresh instances: sample i uses instance seed `seed + i`
/// and chain seed derive_seed(seed + i, 0). Output order is independent of `threads`.
std::vector<double> quenched_samples(int n, const WeightModel& model, double beta, std::uint64_t burn_in,
                                     std::int64_t count, std::uint64_t seed, int threads = 1);

/// Extended-state chain over (tour, grid weights) for the annealed law. Per step:
/// pick an edge uniformly and a direction +-1/N (a move off the grid holds the
/// chain), pick a uniform 2-opt move, and accept the pair jointly with probability
/// min{1, exp(-beta (J(y | w') - J(x | w)))}. Weights are kept as integer grid
/// levels. After burn_in steps, J is emitted every `thinning` steps until `count`
/// samples exist. Requires n >= 4, N >= 1.
std::vector<double> annealed_mh_sample(int n, int grid, double beta, std::uint64_t burn_in,
                                       std::uint64_t thinning, std::int64_t count, std::uint64_t seed);

/// EpochWise schedule with epoch k (1-based) of length ceil(c n^9 k^2 ln n).
struct EpochPlan {
  CoolingSchedule schedule;
  std::vector<std::uint64_t> epoch_lengths;
  long double total_iterations = 0;
};

/// Requires a >= n and c > 0; throws std::overflow_error if an epoch length
/// does not fit a 64-bit counter.
EpochPlan epoch_schedule_from_theorem(int n, double a, int epochs, double c);

}  // namespace satsp

#endif  // SATSP_CHAIN_HPP_
