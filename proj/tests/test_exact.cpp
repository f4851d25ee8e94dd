#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mdvrp/certify.hpp"
#include "mdvrp/exact.hpp"
#include "mdvrp/rng.hpp"

using namespace mdvrp;

namespace {

// Brute-force oracle: cheapest cycle depot -> permutation of S -> depot.
double permutation_tour_oracle(const Instance& inst, std::vector<int> group) {
  std::sort(group.begin(), group.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) {
      double c = inst.c(r, group.front());
      for (std::size_t i = 0; i + 1 < group.size(); ++i)
        c += inst.c(group[i], group[i + 1]);
      c += inst.c(group.back(), r);
      best = std::min(best, c);
    }
  } while (std::next_permutation(group.begin(), group.end()));
  return best;
}

// Exhaustive optimum: enumerate every partition of the clients into groups
// of size <= k, costing each group by the permutation oracle.
double partition_enumeration_oracle(const Instance& inst) {
  const int n = inst.n_clients;
  std::vector<int> assignment(n, -1);
  double best = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, int v, int n_groups) -> void {
    if (v == n) {
      double total = 0;
      for (int g = 0; g < n_groups; ++g) {
        std::vector<int> group;
        for (int u = 0; u < n; ++u)
          if (assignment[u] == g) group.push_back(u);
        if (static_cast<int>(group.size()) > inst.k) return;
        total += permutation_tour_oracle(inst, group);
      }
      best = std::min(best, total);
      return;
    }
    for (int g = 0; g <= n_groups; ++g) {
      assignment[v] = g;
      self(self, v + 1, std::max(n_groups, g + 1));
    }
    assignment[v] = -1;
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("group tour basics") {
  SUBCASE("singleton doubles the nearest depot edge") {
    const Instance inst = generate_random(4, 4, 2, 3, GenMode::EuclideanUniform);
    const Tour t = optimal_tour_for_group(inst, {2});
    CHECK(tour_cost(inst, t) == doctest::Approx(2 * inst.depot_distance(2)));
    CHECK(t.depot == inst.nearest_depot(2));
  }
  SUBCASE("collinear pair served in line order") {
    Instance inst;
    inst.n_clients = 2;
    inst.n_depots = 1;
    inst.k = 3;
    inst.names = {"a", "b", "r"};
    Eigen::MatrixXd d(3, 3);
    // r - a - b with unit gaps
    d << 0, 1, 1,
         1, 0, 2,
         1, 2, 0;
    inst.cost = d;
    const Tour t = optimal_tour_for_group(inst, {0, 1});
    CHECK(tour_cost(inst, t) == doctest::Approx(4.0));
  }
}

TEST_CASE("group tour matches the permutation oracle") {
  const Instance inst = generate_random(12, 9, 2, 6, GenMode::EuclideanUniform);
  const std::vector<int> group = {0, 2, 4, 6, 8};
  const Tour t = optimal_tour_for_group(inst, group);
  CHECK(tour_cost(inst, t) == doctest::Approx(permutation_tour_oracle(inst, group)));
}

TEST_CASE("brute force on a single client") {
  const Instance inst = generate_random(5, 1, 2, 3, GenMode::EuclideanUniform);
  const Solution sol = brute_force_opt(inst);
  REQUIRE(sol.tours.size() == 1);
  CHECK(solution_cost(inst, sol) == doctest::Approx(2 * inst.depot_distance(0)));
}

TEST_CASE("with ample capacity the optimum is one tour") {
  const Instance inst = generate_random(6, 6, 1, 8, GenMode::EuclideanUniform);
  const Solution sol = brute_force_opt(inst);
  std::vector<int> all(inst.n_clients);
  std::iota(all.begin(), all.end(), 0);
  const Tour best_single = optimal_tour_for_group(inst, all);
  CHECK(solution_cost(inst, sol) == doctest::Approx(tour_cost(inst, best_single)));
}

TEST_CASE("brute force matches full partition enumeration") {
  const Instance inst = generate_random(13, 7, 2, 3, GenMode::EuclideanUniform);
  const Solution sol = brute_force_opt(inst);
  CHECK(solution_cost(inst, sol) ==
        doctest::Approx(partition_enumeration_oracle(inst)));
}

TEST_CASE("brute force dominates the radial bound and stays feasible") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const Instance inst = generate_random(seed, 7, 2, 3, GenMode::EuclideanUniform);
    const Solution sol = brute_force_opt(inst);
    CHECK(check_feasible(inst, sol).ok());
    CHECK(solution_cost(inst, sol) >= radial_lb(inst) - 1e-9);
  }
}

TEST_CASE("brute force is invariant under relabeling and scales linearly") {
  const Instance inst = generate_random(31, 6, 2, 3, GenMode::EuclideanUniform);
  const double base = solution_cost(inst, brute_force_opt(inst));

  // Relabel: swap clients 0 and 3, depots 0 and 1.
  Instance relabeled = inst;
  std::vector<int> perm(inst.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[3]);
  std::swap(perm[6], perm[7]);
  for (int i = 0; i < inst.num_nodes(); ++i)
    for (int j = 0; j < inst.num_nodes(); ++j)
      relabeled.cost(i, j) = inst.cost(perm[i], perm[j]);
  relabeled.coords.reset();
  CHECK(solution_cost(relabeled, brute_force_opt(relabeled)) ==
        doctest::Approx(base));

  Instance scaled = inst;
  scaled.cost *= 3.5;
  scaled.coords.reset();
  CHECK(solution_cost(scaled, brute_force_opt(scaled)) ==
        doctest::Approx(3.5 * base));
}

TEST_CASE("oversized instances are rejected") {
  const Instance inst = generate_random(1, 11, 1, 3, GenMode::EuclideanUniform);
  CHECK_THROWS_AS(brute_force_opt(inst), std::invalid_argument);
  std::vector<int> big(13);
  std::iota(big.begin(), big.end(), 0);
  CHECK_THROWS_AS(optimal_tour_for_group(inst, big), std::invalid_argument);
}
