#include "satsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "satsp/neighborhood.hpp"
#include "satsp/rng.hpp"

namespace satsp {

std::pair<int, int> edge_endpoints(int n, std::int64_t index) {
  if (index < 0 || index >= edge_count(n)) throw std::out_of_range("edge index out of range");
  int i = 0;
  std::int64_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + static_cast<int>(index)};
}

void canonicalize(std::vector<int>& cycle) {
  const auto zero = std::find(cycle.begin(), cycle.end(), 0);
  std::rotate(cycle.begin(), zero, cycle.end());
  if (cycle.size() > 2 && cycle[1] > cycle.back()) std::reverse(cycle.begin() + 1, cycle.end());
}

Tour Tour::from_cycle(std::vector<int> cycle) {
  const int n = static_cast<int>(cycle.size());
  if (n < 3) throw std::invalid_argument("a tour needs at least 3 nodes");
  std::vector<char> seen(cycle.size(), 0);
  for (int v : cycle) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("tour is not a permutation of 0..n-1");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  canonicalize(cycle);
  return Tour(std::move(cycle));
}

Tour Tour::identity(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  return from_cycle(std::move(order));
}

Instance::Instance(int n, Eigen::VectorXd weights, WeightModel model, std::uint64_t seed)
    : n_(n), weights_(std::move(weights)), model_(model), seed_(seed) {
  if (n < 3) throw std::invalid_argument("instance needs n >= 3");
  if (weights_.size() != edge_count(n))
    throw std::invalid_argument("weight vector must have n(n-1)/2 entries");
  if (model_.is_grid() && model_.grid < 1) throw std::invalid_argument("grid size N must be >= 1");
  for (Eigen::Index e = 0; e < weights_.size(); ++e) {
    const double w = weights_[e];
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("edge weight outside [0,1]");
    if (model_.is_grid()) {
      const double scaled = w * model_.grid;
      const double level = std::round(scaled);
      if (level / model_.grid != w) throw std::invalid_argument("edge weight is not a multiple of 1/N");
    }
  }
}

Instance generate(int n, const WeightModel& model, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("instance needs n >= 3");
  if (model.is_grid() && model.grid < 1) throw std::invalid_argument("grid size N must be >= 1");
  Rng rng(seed);
  Eigen::VectorXd weights(edge_count(n));
  for (Eigen::Index e = 0; e < weights.size(); ++e) {
    if (model.is_grid()) {
      const auto level = rng.below(static_cast<std::uint64_t>(model.grid) + 1);
      weights[e] = static_cast<double>(level) / model.grid;
    } else {
      weights[e] = rng.uniform01();
    }
  }
  return Instance(n, std::move(weights), model, seed);
}

double tour_length(const Instance& inst, const Tour& tour) {
  const int n = tour.size();
  if (n != inst.n()) throw std::invalid_argument("tour size does not match instance");
  double total = 0.0;
  for (int p = 0; p < n; ++p) total += inst.weight(tour[p], tour[(p + 1) % n]);
  return total;
}

double tour_length_delta(const Instance& inst, const Tour& tour, TwoOptMove move) {
  const int n = tour.size();
  if (n != inst.n()) throw std::invalid_argument("tour size does not match instance");
  if (!is_valid_move(n, move)) throw std::invalid_argument("invalid 2-opt move");
  const int a = tour[move.i];
  const int b = tour[move.i + 1];
  const int c = tour[move.k];
  const int d = tour[(move.k + 1) % n];
  return inst.weight(a, c) + inst.weight(b, d) - inst.weight(a, b) - inst.weight(c, d);
}

std::string to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n();
  nlohmann::ordered_json model;
  if (inst.model().is_grid()) {
    model["kind"] = "grid";
    model["N"] = inst.model().grid;
  } else {
    model["kind"] = "uniform";
  }
  j["model"] = model;
  j["seed"] = inst.seed();
  const auto& w = inst.weights();
  j["weights"] = std::vector<double>(w.data(), w.data() + w.size());
  return j.dump();
}

Instance instance_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int n = j.at("n").get<int>();
  const auto& model_json = j.at("model");
  const auto kind = model_json.at("kind").get<std::string>();
  WeightModel model;
  if (kind == "grid") {
    model = WeightModel::discrete_grid(model_json.at("N").get<int>());
  } else if (kind != "uniform") {
    throw std::invalid_argument("unknown weight model kind: " + kind);
  }
  const auto values = j.at("weights").get<std::vector<double>>();
  Eigen::VectorXd weights = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return Instance(n, std::move(weights), model, j.at("seed").get<std::uint64_t>());
}

}  // namespace satsp
