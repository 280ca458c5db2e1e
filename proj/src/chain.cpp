#include "satsp/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "satsp/io.hpp"
#include "satsp/parallel.hpp"
#include "satsp/rng.hpp"

namespace satsp {

// ---------------------------------------------------------------------------
// CoolingSchedule

CoolingSchedule::CoolingSchedule(std::variant<Logarithmic, Constant, EpochWise> v) : variant_(std::move(v)) {
  if (const auto* epochs = std::get_if<EpochWise>(&variant_)) {
    std::uint64_t end = 0;
    for (auto length : epochs->epoch_lengths) {
      end += length;
      epoch_ends_.push_back(end);
    }
  }
}

CoolingSchedule CoolingSchedule::logarithmic(double a) {
  if (!(a > 0)) throw std::invalid_argument("logarithmic schedule needs a > 0");
  return CoolingSchedule(Logarithmic{a});
}

CoolingSchedule CoolingSchedule::constant(double temperature) {
  if (!(temperature > 0)) throw std::invalid_argument("constant schedule needs T > 0");
  return CoolingSchedule(Constant{temperature});
}

CoolingSchedule CoolingSchedule::epoch_wise(double a, std::vector<std::uint64_t> epoch_lengths) {
  if (!(a > 0)) throw std::invalid_argument("epoch schedule needs a > 0");
  if (epoch_lengths.empty()) throw std::invalid_argument("epoch schedule needs at least one epoch");
  for (auto length : epoch_lengths)
    if (length == 0) throw std::invalid_argument("epoch lengths must be positive");
  return CoolingSchedule(EpochWise{a, std::move(epoch_lengths)});
}

std::uint64_t CoolingSchedule::epoch_of(std::uint64_t t) const {
  if (epoch_ends_.empty()) return t + 1;
  const auto it = std::upper_bound(epoch_ends_.begin(), epoch_ends_.end(), t);
  const auto index = static_cast<std::uint64_t>(it - epoch_ends_.begin());
  return std::min<std::uint64_t>(index, epoch_ends_.size() - 1) + 1;
}

double CoolingSchedule::temperature(std::uint64_t t) const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Logarithmic>) {
          return s.a / std::log(static_cast<double>(t) + 2.0);
        } else if constexpr (std::is_same_v<S, Constant>) {
          return s.temperature;
        } else {
          return s.a / std::log(static_cast<double>(epoch_of(t)) + 2.0);
        }
      },
      variant_);
}

std::string CoolingSchedule::to_json() const {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Logarithmic>) {
          j["kind"] = "logarithmic";
          j["a"] = s.a;
        } else if constexpr (std::is_same_v<S, Constant>) {
          j["kind"] = "constant";
          j["T"] = s.temperature;
        } else {
          j["kind"] = "epochwise";
          j["a"] = s.a;
          j["epoch_lengths"] = s.epoch_lengths;
        }
      },
      variant_);
  return j.dump();
}

void ChainTrace::write_csv(std::ostream& out) const {
  out << "step,J,accepted\n";
  for (std::size_t r = 0; r < lengths.size(); ++r)
    out << steps[r] << ',' << format_real(lengths[r]) << ',' << (accepted[r] ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Chain kernels

namespace {

// Working tour for the hot loop: a cyclic node order plus node positions.
// A 2-opt move reverses whichever of the two arcs is shorter; both give the same
// cycle. The order is not kept canonical; tour() canonicalizes on demand.
class CycleState {
 public:
  explicit CycleState(const Tour& tour) : n_(tour.size()), order_(tour.order()), pos_(order_.size()) {
    for (int p = 0; p < n_; ++p) pos_[static_cast<std::size_t>(order_[static_cast<std::size_t>(p)])] = p;
  }

  int at(int position) const { return order_[static_cast<std::size_t>(position)]; }

  bool adjacent(int u, int v) const {
    const int gap = std::abs(pos_[static_cast<std::size_t>(u)] - pos_[static_cast<std::size_t>(v)]);
    return gap == 1 || gap == n_ - 1;
  }

  // Reconnects (a,b),(c,d) as (a,c),(b,d) for a = order[i], b = order[i+1],
  // c = order[k], d = order[k+1 mod n].
  void apply(TwoOptMove move) {
    const int inner = move.k - move.i;  // length of order[i+1..k]
    if (2 * inner <= n_) {
      reverse_arc(move.i + 1, inner);
    } else {
      reverse_arc((move.k + 1) % n_, n_ - inner);
    }
  }

  Tour tour() const { return Tour::from_cycle(order_); }

 private:
  void reverse_arc(int start, int length) {
    int lo = start;
    int hi = (start + length - 1) % n_;
    for (int s = 0; s < length / 2; ++s) {
      std::swap(order_[static_cast<std::size_t>(lo)], order_[static_cast<std::size_t>(hi)]);
      pos_[static_cast<std::size_t>(order_[static_cast<std::size_t>(lo)])] = lo;
      pos_[static_cast<std::size_t>(order_[static_cast<std::size_t>(hi)])] = hi;
      lo = lo + 1 == n_ ? 0 : lo + 1;
      hi = hi == 0 ? n_ - 1 : hi - 1;
    }
  }

  int n_;
  std::vector<int> order_;
  std::vector<int> pos_;
};

Eigen::MatrixXd dense_weights(const Instance& inst) {
  const int n = inst.n();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = inst.weight(i, j);
  return w;
}

double cycle_length(const Eigen::MatrixXd& w, const CycleState& state, int n) {
  double total = 0.0;
  for (int p = 0; p < n; ++p) total += w(state.at(p), state.at((p + 1) % n));
  return total;
}

// Runs `steps` Metropolis steps; beta_at(i) gives the inverse temperature at
// step i, and record(i, J, accepted) is called after every step.
template <typename BetaAt, typename Record>
CycleState run_tour_chain(const Instance& inst, const Tour& x0, std::uint64_t steps, Rng& rng, bool lazy,
                          BetaAt&& beta_at, Record&& record, std::uint64_t& accepted_total) {
  const int n = inst.n();
  if (n < 4) throw std::invalid_argument("2-opt chain needs n >= 4");
  if (x0.size() != n) throw std::invalid_argument("start tour size does not match instance");
  const Eigen::MatrixXd w = dense_weights(inst);
  const TwoOptMoves moves(n);
  CycleState state(x0);
  double length = cycle_length(w, state, n);
  for (std::uint64_t i = 0; i < steps; ++i) {
    bool accept = false;
    if (!lazy || !rng.coin()) {
      const TwoOptMove move = moves.uniform(rng);
      const int a = state.at(move.i);
      const int b = state.at(move.i + 1);
      const int c = state.at(move.k);
      const int d = state.at((move.k + 1) % n);
      const double delta = w(a, c) + w(b, d) - w(a, b) - w(c, d);
      // delta == 0 gives p = exp(0) = 1, so it joins the unconditional branch.
      accept = delta <= 0.0 || rng.uniform01() < std::exp(-beta_at(i) * delta);
      if (accept) {
        state.apply(move);
        length += delta;
        ++accepted_total;
      }
    }
    record(i, length, accept, state, w);
  }
  return state;
}

ChainTrace run_traced(const Instance& inst, const Tour& x0, std::uint64_t steps, std::uint64_t seed,
                      ChainOptions options, const auto& beta_at) {
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  ChainTrace trace;
  trace.seed = seed;
  trace.iterations = steps;
  Rng rng(seed);
  const int n = inst.n();
  const auto record = [&](std::uint64_t i, double& length, bool accepted, const CycleState& state,
                          const Eigen::MatrixXd& w) {
    if ((i + 1) % options.record_every != 0) return;
    length = cycle_length(w, state, n);  // drop accumulated rounding from incremental updates
    trace.steps.push_back(i + 1);
    trace.lengths.push_back(length);
    trace.accepted.push_back(accepted ? 1 : 0);
  };
  const CycleState final_state =
      run_tour_chain(inst, x0, steps, rng, options.lazy, beta_at, record, trace.accepted_total);
  trace.final_tour = final_state.tour();
  trace.final_length = tour_length(inst, trace.final_tour);
  return trace;
}

}  // namespace

ChainTrace simulated_annealing(const Instance& inst, const CoolingSchedule& schedule, std::uint64_t t,
                               const Tour& x0, std::uint64_t seed, ChainOptions options) {
  if (t < 1) throw std::invalid_argument("simulated annealing needs t >= 1");
  return run_traced(inst, x0, t, seed, options, [&](std::uint64_t i) { return 1.0 / schedule.temperature(i); });
}

ChainTrace metropolis(const Instance& inst, double beta, std::uint64_t steps, const Tour& x0, std::uint64_t seed,
                      ChainOptions options) {
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  return run_traced(inst, x0, steps, seed, options, [beta](std::uint64_t) { return beta; });
}

std::uint64_t default_burn_in(int n) {
  const auto nn = static_cast<std::uint64_t>(n);
  return 50 * nn * nn * nn;
}

double quenched_sample(const Instance& inst, double beta, std::uint64_t burn_in, std::uint64_t seed) {
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  if (burn_in < 1) throw std::invalid_argument("burn_in must be >= 1");
  const int n = inst.n();
  if (n == 3) return tour_length(inst, Tour::identity(3));
  Rng rng(seed);
  const Tour start = random_tour(n, rng);
  std::uint64_t accepted = 0;
  const auto no_record = [](std::uint64_t, double&, bool, const CycleState&, const Eigen::MatrixXd&) {};
  const CycleState state =
      run_tour_chain(inst, start, burn_in, rng, false, [beta](std::uint64_t) { return beta; }, no_record, accepted);
  return tour_length(inst, state.tour());
}

std::vector<double> quenched_samples(int n, const WeightModel& model, double beta, std::uint64_t burn_in,
                                     std::int64_t count, std::uint64_t seed, int threads) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<double> samples(static_cast<std::size_t>(count));
  parallel_for(count, threads, [&](std::int64_t i) {
    const std::uint64_t instance_seed = seed + static_cast<std::uint64_t>(i);
    const Instance inst = generate(n, model, instance_seed);
    samples[static_cast<std::size_t>(i)] = quenched_sample(inst, beta, burn_in, derive_seed(instance_seed, 0));
  });
  return samples;
}

std::vector<double> annealed_mh_sample(int n, int grid, double beta, std::uint64_t burn_in, std::uint64_t thinning,
                                       std::int64_t count, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("annealed chain needs n >= 4");
  if (grid < 1) throw std::invalid_argument("grid size N must be >= 1");
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  if (thinning < 1) throw std::invalid_argument("thinning B must be >= 1");
  if (count < 1) throw std::invalid_argument("count must be >= 1");

  const auto m = static_cast<std::size_t>(edge_count(n));
  const auto nn = static_cast<std::size_t>(n);
  std::vector<int> edge_of(nn * nn, -1);
  std::vector<std::pair<int, int>> ends(m);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto e = static_cast<int>(edge_index(n, i, j));
      edge_of[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)] = e;
      edge_of[static_cast<std::size_t>(j) * nn + static_cast<std::size_t>(i)] = e;
      ends[static_cast<std::size_t>(e)] = {i, j};
    }
  const auto edge = [&](int u, int v) {
    return edge_of[static_cast<std::size_t>(u) * nn + static_cast<std::size_t>(v)];
  };

  Rng rng(seed);
  std::vector<int> level(m);
  for (auto& l : level) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid) + 1));
  CycleState state(random_tour(n, rng));
  const TwoOptMoves moves(n);

  // J in grid units: sum of integer levels along the tour.
  long long units = 0;
  for (int p = 0; p < n; ++p)
    units += level[static_cast<std::size_t>(edge(state.at(p), state.at((p + 1) % n)))];

  const double unit = 1.0 / grid;
  const auto step = [&] {
    const auto e = static_cast<int>(rng.below(m));
    const int direction = rng.coin() ? 1 : -1;
    const int proposed_level = level[static_cast<std::size_t>(e)] + direction;
    if (proposed_level < 0 || proposed_level > grid) return;
    const TwoOptMove move = moves.uniform(rng);
    const int a = state.at(move.i);
    const int b = state.at(move.i + 1);
    const int c = state.at(move.k);
    const int d = state.at((move.k + 1) % n);
    const int ac = edge(a, c);
    const int bd = edge(b, d);
    const int ab = edge(a, b);
    const int cd = edge(c, d);
    long long delta = static_cast<long long>(level[static_cast<std::size_t>(ac)]) +
                      level[static_cast<std::size_t>(bd)] - level[static_cast<std::size_t>(ab)] -
                      level[static_cast<std::size_t>(cd)];
    const auto [u, v] = ends[static_cast<std::size_t>(e)];
    const bool in_new_tour = e == ac || e == bd || (e != ab && e != cd && state.adjacent(u, v));
    if (in_new_tour) delta += direction;
    if (delta <= 0 || rng.uniform01() < std::exp(-beta * static_cast<double>(delta) * unit)) {
      level[static_cast<std::size_t>(e)] = proposed_level;
      state.apply(move);
      units += delta;
    }
  };

  for (std::uint64_t s = 0; s < burn_in; ++s) step();
  std::vector<double> samples(static_cast<std::size_t>(count));
  for (auto& sample : samples) {
    for (std::uint64_t s = 0; s < thinning; ++s) step();
    sample = static_cast<double>(units) / grid;
  }
  return samples;
}

EpochPlan epoch_schedule_from_theorem(int n, double a, int epochs, double c) {
  if (n < 4) throw std::invalid_argument("epoch schedule needs n >= 4");
  if (a < n)
    throw std::invalid_argument("epoch schedule requires a >= n (hypothesis of the nonequilibrium bound)");
  if (!(c > 0)) throw std::invalid_argument("epoch length multiplier c must be positive");
  if (epochs < 1) throw std::invalid_argument("need at least one epoch");
  std::vector<std::uint64_t> lengths;
  long double total = 0;
  const long double base = c * std::pow(static_cast<long double>(n), 9) * std::log(static_cast<long double>(n));
  for (int k = 1; k <= epochs; ++k) {
    const long double length = std::ceil(base * k * k);
    if (length > static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
      throw std::overflow_error("epoch length exceeds a 64-bit iteration counter; reduce c");
    lengths.push_back(static_cast<std::uint64_t>(length));
    total += length;
  }
  return {CoolingSchedule::epoch_wise(a, lengths), lengths, total};
}

}  // namespace satsp
