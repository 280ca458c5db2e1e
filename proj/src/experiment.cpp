#include "satsp/experiment.hpp"

#include "satsp/chain.hpp"
#include "satsp/rng.hpp"

namespace satsp {

Figure1Result run_figure1(const Figure1Config& config) {
  Figure1Result result;
  result.quenched = quenched_samples(config.n, WeightModel::discrete_grid(config.grid), config.beta,
                                     config.quenched_burn_in, config.samples, config.seed, config.threads);
  result.annealed = annealed_mh_sample(config.n, config.grid, config.beta, config.annealed_burn_in, config.thinning,
                                       config.samples, derive_seed(config.seed, 1));
  result.dominance = dominance_test(ecdf(result.quenched), ecdf(result.annealed), config.delta);
  return result;
}

}  // namespace satsp
