#ifndef SATSP_INSTANCE_HPP_
#define SATSP_INSTANCE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace satsp {

/// Edge-weight law: i.i.d. U[0,1], or i.i.d. uniform on the grid {0, 1/N, ..., 1}.
struct WeightModel {
  enum class Kind { ContinuousUniform, DiscreteGrid };

  Kind kind = Kind::ContinuousUniform;
  int grid = 0;  // N, only meaningful for DiscreteGrid

  static WeightModel uniform() { return {}; }
  static WeightModel discrete_grid(int n_grid) { return {Kind::DiscreteGrid, n_grid}; }

  bool is_grid() const { return kind == Kind::DiscreteGrid; }
  bool operator==(const WeightModel&) const = default;
};

/// Number of edges of the complete graph on n nodes.
constexpr std::int64_t edge_count(int n) { return static_cast<std::int64_t>(n) * (n - 1) / 2; }

/// Lexicographic index of edge {i, j}; order of i and j is irrelevant.
constexpr std::int64_t edge_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(i) * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of edge_index: the endpoints (i, j), i < j, of edge `index`.
std::pair<int, int> edge_endpoints(int n, std::int64_t index);

/// Hamiltonian cycle in canonical form: order[0] == 0 and order[1] < order[n-1].
/// Each undirected cycle has exactly one canonical representation.
class Tour {
 public:
  Tour() = default;

  /// Canonicalizes any cyclic node sequence; throws if it is not a permutation.
  static Tour from_cycle(std::vector<int> cycle);

  /// The tour 0, 1, ..., n-1.
  static Tour identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[static_cast<std::size_t>(position)]; }
  const std::vector<int>& order() const { return order_; }

  auto operator<=>(const Tour&) const = default;

 private:
  explicit Tour(std::vector<int> canonical) : order_(std::move(canonical)) {}
  std::vector<int> order_;
};

/// Rotates and reflects a cyclic permutation in place into canonical form.
void canonicalize(std::vector<int>& cycle);

/// Random TSP instance on the complete graph. Immutable after construction.
class Instance {
 public:
  /// Validates size, range, and grid membership of the weights.
  Instance(int n, Eigen::VectorXd weights, WeightModel model, std::uint64_t seed);

  int n() const { return n_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const WeightModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  double weight(int i, int j) const { return weights_[edge_index(n_, i, j)]; }

 private:
  int n_;
  Eigen::VectorXd weights_;
  WeightModel model_;
  std::uint64_t seed_;
};

/// Draws an instance with independent edge weights. Deterministic in (n, model, seed).
/// Uniform weights are Rng::uniform01(); grid weights are i/N with i = Rng::below(N+1).
Instance generate(int n, const WeightModel& model, std::uint64_t seed);

/// Sum of the n edge weights along the cycle.
double tour_length(const Instance& inst, const Tour& tour);

/// 2-opt move on cut positions 0 <= i < k < n: reverse order[i+1..k].
struct TwoOptMove {
  int i = 0;
  int k = 0;
  bool operator==(const TwoOptMove&) const = default;
};

/// J(apply(tour, move)) - J(tour) from the four affected edges.
double tour_length_delta(const Instance& inst, const Tour& tour, TwoOptMove move);

/// JSON text {"n", "model": {"kind", "N"?}, "seed", "weights"} in lexicographic edge order.
std::string to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

}  // namespace satsp

#endif  // SATSP_INSTANCE_HPP_
