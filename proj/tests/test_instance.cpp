#include <doctest.h>

#include <cmath>
#include <set>

#include "satsp/instance.hpp"
#include "satsp/neighborhood.hpp"
#include "satsp/rng.hpp"
#include "satsp/stats.hpp"

using namespace satsp;

TEST_CASE("edge indexing is a bijection onto 0..m-1") {
  for (int n = 3; n <= 30; ++n) {
    std::set<std::int64_t> seen;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto e = edge_index(n, i, j);
        CHECK(e == edge_index(n, j, i));
        CHECK(e >= 0);
        CHECK(e < edge_count(n));
        seen.insert(e);
        CHECK(edge_endpoints(n, e) == std::pair{i, j});
      }
    CHECK(static_cast<std::int64_t>(seen.size()) == edge_count(n));
  }
  CHECK_THROWS(edge_endpoints(5, 10));
}

TEST_CASE("generated instances have the right size and support") {
  const auto small = generate(3, WeightModel::uniform(), 11);
  CHECK(small.weights().size() == 3);
  CHECK(small.weights().minCoeff() >= 0.0);
  CHECK(small.weights().maxCoeff() <= 1.0);

  const auto grid = generate(100, WeightModel::discrete_grid(50), 11);
  REQUIRE(grid.weights().size() == 4950);
  for (Eigen::Index e = 0; e < grid.weights().size(); ++e) {
    const double scaled = grid.weights()[e] * 50;
    CHECK(std::round(scaled) / 50 == grid.weights()[e]);
  }

  const auto binary = generate(4, WeightModel::discrete_grid(1), 3);
  CHECK(binary.weights().size() == 6);
  for (Eigen::Index e = 0; e < 6; ++e) CHECK((binary.weights()[e] == 0.0 || binary.weights()[e] == 1.0));
}

TEST_CASE("generation is deterministic in the seed") {
  CHECK(generate(12, WeightModel::uniform(), 5).weights() == generate(12, WeightModel::uniform(), 5).weights());
  CHECK(generate(12, WeightModel::uniform(), 5).weights() != generate(12, WeightModel::uniform(), 6).weights());
}

TEST_CASE("grid weights average to one half") {
  // 200 instances of n = 33 give 105600 weights.
  std::vector<double> all;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto inst = generate(33, WeightModel::discrete_grid(7), s);
    all.insert(all.end(), inst.weights().data(), inst.weights().data() + inst.weights().size());
  }
  REQUIRE(all.size() >= 100'000);
  const auto m = mean_estimate(all);
  CHECK(std::abs(m.mean - 0.5) <= 3 * m.std_error);
}

TEST_CASE("instance construction validates weights") {
  CHECK_THROWS_AS(Instance(4, Eigen::VectorXd::Zero(5), WeightModel::uniform(), 0), std::invalid_argument);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(6, 0.5);
  w[2] = 1.5;
  CHECK_THROWS_AS(Instance(4, w, WeightModel::uniform(), 0), std::invalid_argument);
  w[2] = 0.3;
  CHECK_THROWS_AS(Instance(4, w, WeightModel::discrete_grid(2), 0), std::invalid_argument);
  w[2] = 0.0;
  CHECK_NOTHROW(Instance(4, w, WeightModel::discrete_grid(2), 0));
  CHECK_THROWS(generate(2, WeightModel::uniform(), 0));
}

TEST_CASE("tours are canonical and validated") {
  const auto t = Tour::from_cycle({3, 1, 0, 2});
  CHECK(t.order() == std::vector<int>{0, 1, 3, 2});
  CHECK(Tour::from_cycle({2, 0, 1, 3}).order() == std::vector<int>{0, 1, 3, 2});
  CHECK_THROWS(Tour::from_cycle({0, 1, 1, 2}));
  CHECK_THROWS(Tour::from_cycle({0, 1, 4, 2}));
  CHECK_THROWS(Tour::from_cycle({0, 1}));
}

TEST_CASE("tour length on hand-checked and extreme instances") {
  CHECK(tour_length(Instance(5, Eigen::VectorXd::Zero(10), WeightModel::uniform(), 0), Tour::identity(5)) == 0.0);
  CHECK(tour_length(Instance(5, Eigen::VectorXd::Ones(10), WeightModel::uniform(), 0), Tour::identity(5)) == 5.0);

  const auto inst = generate(4, WeightModel::uniform(), 9);
  const double expected = inst.weight(0, 1) + inst.weight(1, 2) + inst.weight(2, 3) + inst.weight(0, 3);
  CHECK(tour_length(inst, Tour::identity(4)) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("tour length does not depend on how the cycle is written") {
  const auto inst = generate(9, WeightModel::uniform(), 4);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> cycle = random_tour(9, rng).order();
    const double base = tour_length(inst, Tour::from_cycle(cycle));
    std::rotate(cycle.begin(), cycle.begin() + trial % 9, cycle.end());
    std::reverse(cycle.begin(), cycle.end());
    CHECK(tour_length(inst, Tour::from_cycle(cycle)) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("incremental delta matches full recomputation") {
  for (int n : {4, 5, 6, 9}) {
    const auto inst = generate(n, WeightModel::uniform(), static_cast<std::uint64_t>(n));
    Rng rng(static_cast<std::uint64_t>(n) + 100);
    for (int trial = 0; trial < 20; ++trial) {
      const Tour x = random_tour(n, rng);
      const TwoOptMoves moves(n);
      for (const auto& move : moves.moves()) {
        const double full = tour_length(inst, apply(x, move)) - tour_length(inst, x);
        CHECK(std::abs(tour_length_delta(inst, x, move) - full) <= 1e-12);
      }
    }
  }
  const Instance flat(6, Eigen::VectorXd::Constant(15, 0.25), WeightModel::uniform(), 0);
  const TwoOptMoves six(6);
  for (const auto& move : six.moves()) CHECK(tour_length_delta(flat, Tour::identity(6), move) == 0.0);
  CHECK_THROWS(tour_length_delta(flat, Tour::identity(6), {0, 1}));
  CHECK_THROWS(tour_length_delta(flat, Tour::identity(6), {0, 5}));
}

TEST_CASE("instance JSON round trip is exact") {
  for (const auto& model : {WeightModel::uniform(), WeightModel::discrete_grid(50)}) {
    const auto inst = generate(7, model, 42);
    const auto back = instance_from_json(to_json(inst));
    CHECK(back.n() == 7);
    CHECK(back.model() == model);
    CHECK(back.seed() == 42);
    CHECK(back.weights() == inst.weights());
  }
  CHECK_THROWS(instance_from_json(R"({"n":3,"model":{"kind":"beta"},"seed":1,"weights":[0,0,0]})"));
}
