#ifndef SATSP_EXPERIMENT_HPP_
#define SATSP_EXPERIMENT_HPP_

#include <cstdint>
#include <vector>

#include "satsp/stats.hpp"

namespace satsp {

/// Quenched versus annealed tour-length comparison on the DiscreteGrid model.
/// Quenched: sample i draws a fresh grid instance (seed + i) and runs Metropolis
/// for quenched_burn_in steps. Annealed: one extended chain, burn-in, then a
/// sample every `thinning` steps.
struct Figure1Config {
  int n = 100;
  int grid = 50;
  double beta = 10.0;
  std::int64_t samples = 10'000;
  std::uint64_t thinning = 10'000;
  std::uint64_t quenched_burn_in = 1'000'000;
  std::uint64_t annealed_burn_in = 400'000'000;
  double delta = 0.01;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct Figure1Result {
  std::vector<double> quenched;
  std::vector<double> annealed;
  DominanceReport dominance;
};

Figure1Result run_figure1(const Figure1Config& config);

}  // namespace satsp

#endif  // SATSP_EXPERIMENT_HPP_
