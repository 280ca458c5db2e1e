#ifndef SATSP_NEIGHBORHOOD_HPP_
#define SATSP_NEIGHBORHOOD_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "satsp/instance.hpp"
#include "satsp/rng.hpp"

namespace satsp {

/// Degree of the 2-opt state graph, n(n-3)/2 (0 for n = 3).
constexpr int two_opt_degree(int n) { return n * (n - 3) / 2; }

/// A move (i, k) is valid iff i + 2 <= k <= n - 1 and (i, k) != (0, n - 1): the two
/// removed edges (order[i], order[i+1]) and (order[k], order[k+1 mod n]) are disjoint.
bool is_valid_move(int n, TwoOptMove move);

/// All valid moves for n nodes, ordered by i ascending, then k ascending.
/// Index r in [0, n(n-3)/2) maps to moves()[r]; used for single-draw uniform proposals.
class TwoOptMoves {
 public:
  explicit TwoOptMoves(int n);

  int n() const { return n_; }
  int size() const { return static_cast<int>(moves_.size()); }
  TwoOptMove operator[](int index) const { return moves_[static_cast<std::size_t>(index)]; }
  const std::vector<TwoOptMove>& moves() const { return moves_; }

  TwoOptMove uniform(Rng& rng) const {
    return moves_[static_cast<std::size_t>(rng.below(moves_.size()))];
  }

 private:
  int n_;
  std::vector<TwoOptMove> moves_;
};

/// Reverses order[i+1..k] and re-canonicalizes.
Tour apply(const Tour& tour, TwoOptMove move);

/// The n(n-3)/2 distinct 2-opt neighbors of `tour`, in move order. Empty for n = 3.
std::vector<Tour> neighbors(const Tour& tour);

/// One neighbor drawn uniformly with a single Rng::below draw. Throws for n = 3.
Tour uniform_neighbor(const Tour& tour, Rng& rng);

/// All (n-1)!/2 canonical tours in lexicographic order of their node sequences.
std::vector<Tour> enumerate_canonical_tours(int n);

/// Uniformly random canonical tour (Fisher-Yates on nodes 1..n-1, then canonicalize).
Tour random_tour(int n, Rng& rng);

/// Undirected 2-opt state graph H over every canonical tour.
class StateGraph {
 public:
  static constexpr int kDefaultMaxNodes = 8;

  int n() const { return n_; }
  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<Tour>& states() const { return states_; }
  const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
  const std::vector<int>& neighbors_of(int state) const { return adjacency_[static_cast<std::size_t>(state)]; }

  /// Index of a canonical tour; throws if absent.
  int index_of(const Tour& tour) const;

  /// BFS distances from `source` (-1 for unreachable).
  std::vector<int> distances_from(int source) const;
  int eccentricity(int source) const;
  int diameter() const;
  bool is_connected() const;
  bool is_symmetric() const;

  /// CSV edge list "state_index_a,state_index_b", one line per undirected edge (a < b).
  void write_edge_list(std::ostream& out) const;

 private:
  friend StateGraph state_graph(int n, int max_nodes);
  int n_ = 0;
  std::vector<Tour> states_;
  std::vector<std::vector<int>> adjacency_;
  std::map<Tour, int> index_;
};

/// Builds H for 4 <= n <= max_nodes ((n-1)!/2 states).
StateGraph state_graph(int n, int max_nodes = StateGraph::kDefaultMaxNodes);

}  // namespace satsp

#endif  // SATSP_NEIGHBORHOOD_HPP_
