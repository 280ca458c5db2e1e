#include "satsp/neighborhood.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace satsp {

bool is_valid_move(int n, TwoOptMove move) {
  return move.i >= 0 && move.i + 2 <= move.k && move.k <= n - 1 && !(move.i == 0 && move.k == n - 1);
}

TwoOptMoves::TwoOptMoves(int n) : n_(n) {
  if (n < 3) throw std::invalid_argument("2-opt needs n >= 3");
  moves_.reserve(static_cast<std::size_t>(two_opt_degree(n)));
  for (int i = 0; i + 2 <= n - 1; ++i)
    for (int k = i + 2; k <= n - 1; ++k)
      if (!(i == 0 && k == n - 1)) moves_.push_back({i, k});
}

Tour apply(const Tour& tour, TwoOptMove move) {
  if (!is_valid_move(tour.size(), move)) throw std::invalid_argument("invalid 2-opt move");
  std::vector<int> order = tour.order();
  std::reverse(order.begin() + move.i + 1, order.begin() + move.k + 1);
  return Tour::from_cycle(std::move(order));
}

std::vector<Tour> neighbors(const Tour& tour) {
  const int n = tour.size();
  std::vector<Tour> result;
  if (n < 4) return result;
  const TwoOptMoves moves(n);
  result.reserve(static_cast<std::size_t>(moves.size()));
  for (const auto& move : moves.moves()) result.push_back(apply(tour, move));
  return result;
}

Tour uniform_neighbor(const Tour& tour, Rng& rng) {
  const int n = tour.size();
  if (n < 4) throw std::invalid_argument("no 2-opt neighbor exists for n = 3");
  return apply(tour, TwoOptMoves(n).uniform(rng));
}

std::vector<Tour> enumerate_canonical_tours(int n) {
  if (n < 3) throw std::invalid_argument("tours need n >= 3");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tour> tours;
  do {
    if (order[1] < order.back()) tours.push_back(Tour::from_cycle(order));
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return tours;
}

Tour random_tour(int n, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int p = n - 1; p >= 2; --p) {
    const auto q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
    std::swap(order[static_cast<std::size_t>(p)], order[static_cast<std::size_t>(q)]);
  }
  return Tour::from_cycle(std::move(order));
}

int StateGraph::index_of(const Tour& tour) const {
  const auto it = index_.find(tour);
  if (it == index_.end()) throw std::out_of_range("tour is not a state of this graph");
  return it->second;
}

std::vector<int> StateGraph::distances_from(int source) const {
  std::vector<int> dist(states_.size(), -1);
  std::deque<int> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : neighbors_of(u)) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

int StateGraph::eccentricity(int source) const {
  const auto dist = distances_from(source);
  if (std::find(dist.begin(), dist.end(), -1) != dist.end()) return -1;
  return *std::max_element(dist.begin(), dist.end());
}

int StateGraph::diameter() const {
  int best = 0;
  for (int s = 0; s < size(); ++s) {
    const int e = eccentricity(s);
    if (e < 0) return -1;
    best = std::max(best, e);
  }
  return best;
}

bool StateGraph::is_connected() const {
  const auto dist = distances_from(0);
  return std::find(dist.begin(), dist.end(), -1) == dist.end();
}

bool StateGraph::is_symmetric() const {
  for (int u = 0; u < size(); ++u)
    for (int v : neighbors_of(u)) {
      const auto& back = neighbors_of(v);
      if (std::find(back.begin(), back.end(), u) == back.end()) return false;
    }
  return true;
}

void StateGraph::write_edge_list(std::ostream& out) const {
  out << "state_index_a,state_index_b\n";
  for (int u = 0; u < size(); ++u)
    for (int v : neighbors_of(u))
      if (u < v) out << u << ',' << v << '\n';
}

StateGraph state_graph(int n, int max_nodes) {
  if (n < 4) throw std::invalid_argument("state graph needs n >= 4");
  if (n > max_nodes)
    throw std::invalid_argument("state graph for n = " + std::to_string(n) + " exceeds the node limit " +
                                std::to_string(max_nodes));
  StateGraph graph;
  graph.n_ = n;
  graph.states_ = enumerate_canonical_tours(n);
  for (int s = 0; s < graph.size(); ++s) graph.index_.emplace(graph.states_[static_cast<std::size_t>(s)], s);
  graph.adjacency_.resize(graph.states_.size());
  for (int s = 0; s < graph.size(); ++s)
    for (const auto& y : neighbors(graph.states_[static_cast<std::size_t>(s)]))
      graph.adjacency_[static_cast<std::size_t>(s)].push_back(graph.index_of(y));
  return graph;
}

}  // namespace satsp
