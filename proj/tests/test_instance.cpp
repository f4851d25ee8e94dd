#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdvrp/instance.hpp"
#include "mdvrp/rng.hpp"

using namespace mdvrp;

namespace {

// Independent all-pairs shortest path used as the closure oracle.
Eigen::MatrixXd floyd_oracle(Eigen::MatrixXd d) {
  const int n = static_cast<int>(d.rows());
  for (int via = 0; via < n; ++via)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d(i, via) + d(via, j) < d(i, j)) d(i, j) = d(i, via) + d(via, j);
  return d;
}

Instance tiny_instance(int n_clients, int n_depots, int k,
                       const Eigen::MatrixXd& cost) {
  Instance inst;
  inst.n_clients = n_clients;
  inst.n_depots = n_depots;
  inst.k = k;
  for (int v = 0; v < n_clients; ++v) inst.names.push_back("c" + std::to_string(v));
  for (int r = 0; r < n_depots; ++r) inst.names.push_back("d" + std::to_string(r));
  inst.cost = cost;
  return inst;
}

}  // namespace

TEST_CASE("metric closure shortens the long edge") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5,
       1, 0, 1,
       5, 1, 0;
  const Eigen::MatrixXd closed = metric_closure(d);
  CHECK(closed(0, 2) == doctest::Approx(2.0));
  CHECK(closed(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("metric closure is a fixed point on Euclidean costs") {
  const Instance inst = generate_random(7, 6, 2, 3, GenMode::EuclideanUniform);
  const Eigen::MatrixXd closed = metric_closure(inst.cost);
  CHECK((closed - inst.cost).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("metric closure equals the all-pairs oracle") {
  Rng rng(99);
  const int n = 6;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = i == j ? 0.0 : 0.1 + rng.uniform01();
      d(i, j) = v;
      d(j, i) = v;
    }
  const Eigen::MatrixXd mine = metric_closure(d);
  const Eigen::MatrixXd oracle = floyd_oracle(d);
  CHECK((mine - oracle).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("metric closure rejects negative costs") {
  Eigen::MatrixXd d(2, 2);
  d << 0, -1, -1, 0;
  CHECK_THROWS_AS(metric_closure(d), std::invalid_argument);
}

TEST_CASE("radial lower bound formula") {
  SUBCASE("single client at distance five, k three") {
    Eigen::MatrixXd d(2, 2);
    d << 0, 5, 5, 0;
    const Instance inst = tiny_instance(1, 1, 3, d);
    CHECK(radial_lb(inst) == doctest::Approx(10.0 / 3));
  }
  SUBCASE("two clients at distances three and four, k four") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 5, 3,
         5, 0, 4,
         3, 4, 0;
    const Instance inst = tiny_instance(2, 1, 4, d);
    CHECK(radial_lb(inst) == doctest::Approx(3.5));
  }
}

TEST_CASE("radial contributions add over disjoint subsets") {
  const Instance inst = generate_random(3, 8, 2, 4, GenMode::EuclideanUniform);
  const std::vector<int> a = {0, 2, 5};
  const std::vector<int> b = {1, 3, 7};
  std::vector<int> both = a;
  both.insert(both.end(), b.begin(), b.end());
  CHECK(inst.ell_sum(a) + inst.ell_sum(b) == doctest::Approx(inst.ell_sum(both)));
  for (int v = 0; v < inst.n_clients; ++v) CHECK(inst.ell(v) > 0);
}

TEST_CASE("parse computes Euclidean costs") {
  const std::string text =
      "mdvrp 1\n"
      "k 3\n"
      "mode coords\n"
      "depots 1\n"
      "base 0 0\n"
      "clients 1\n"
      "alpha 3 4\n";
  const Instance inst = parse_instance(text);
  CHECK(inst.n_clients == 1);
  CHECK(inst.n_depots == 1);
  CHECK(inst.k == 3);
  CHECK(inst.c(0, 1) == doctest::Approx(5.0));  // 3-4-5 triangle
  CHECK(inst.names[0] == "alpha");
  CHECK(inst.names[1] == "base");
}

TEST_CASE("parse matrix mode applies the closure") {
  const std::string text =
      "mdvrp 1\n"
      "k 3\n"
      "mode matrix\n"
      "depots 1\n"
      "d0\n"
      "clients 2\n"
      "c0\n"
      "c1\n"
      "matrix\n"
      "0 1 5\n"
      "1 0 1\n"
      "5 1 0\n";
  const Instance inst = parse_instance(text);
  // File order is depot, c0, c1; internally clients come first.  The 5 on
  // the depot-c1 pair closes to 2 through c0.
  CHECK(inst.c(1, 2) == doctest::Approx(2.0));
  CHECK(inst.c(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("write then parse is the identity") {
  const Instance inst = generate_random(11, 7, 3, 4, GenMode::EuclideanClustered);
  const Instance back = parse_instance(write_instance(inst));
  REQUIRE(back.n_clients == inst.n_clients);
  REQUIRE(back.n_depots == inst.n_depots);
  CHECK(back.k == inst.k);
  CHECK(back.names == inst.names);
  CHECK((back.cost - inst.cost).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // Matrix mode round-trips too.
  Instance matrix_inst = inst;
  matrix_inst.coords.reset();
  const Instance back2 = parse_instance(write_instance(matrix_inst));
  CHECK((back2.cost - inst.cost).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("parse errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse_instance("mdvrp 2\n"),
                       doctest::Contains("line 1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_instance("mdvrp 1\nk 0\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  const std::string dup =
      "mdvrp 1\nk 2\nmode coords\ndepots 1\na 0 0\nclients 1\na 1 1\n";
  CHECK_THROWS_WITH_AS(parse_instance(dup), doctest::Contains("duplicate"),
                       std::invalid_argument);
  const std::string asym =
      "mdvrp 1\nk 2\nmode matrix\ndepots 1\nd\nclients 1\nc\nmatrix\n0 1\n2 0\n";
  CHECK_THROWS_WITH_AS(parse_instance(asym), doctest::Contains("asymmetry"),
                       std::invalid_argument);
}

TEST_CASE("generator is deterministic and metric") {
  const Instance a = generate_random(1, 5, 2, 3, GenMode::EuclideanUniform);
  const Instance b = generate_random(1, 5, 2, 3, GenMode::EuclideanUniform);
  CHECK(write_instance(a) == write_instance(b));
  CHECK_NOTHROW(a.validate());

  const Instance c = generate_random(2, 5, 2, 3, GenMode::EuclideanUniform);
  CHECK(write_instance(a) != write_instance(c));
}

TEST_CASE("clustered mode concentrates clients") {
  const Instance inst = generate_random(5, 16, 2, 3, GenMode::EuclideanClustered);
  CHECK_NOTHROW(inst.validate());
  // Nearest-neighbour distance among clients should be far below the mean
  // pairwise distance when points clump.
  double nn_sum = 0, all_sum = 0;
  int all_count = 0;
  for (int i = 0; i < inst.n_clients; ++i) {
    double nn = 1e9;
    for (int j = 0; j < inst.n_clients; ++j) {
      if (i == j) continue;
      nn = std::min(nn, inst.c(i, j));
      all_sum += inst.c(i, j);
      ++all_count;
    }
    nn_sum += nn;
  }
  CHECK(nn_sum / inst.n_clients < 0.5 * all_sum / all_count);
}

TEST_CASE("solution cost sums closed walks") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 2,
       1, 0, 2,
       2, 2, 0;
  const Instance inst = tiny_instance(2, 1, 3, d);
  SUBCASE("single visit doubles the edge") {
    Solution s;
    s.tours.push_back({2, {0}});
    CHECK(solution_cost(inst, s) == doctest::Approx(4.0));
  }
  SUBCASE("tours add up") {
    Solution s;
    s.tours.push_back({2, {0}});
    s.tours.push_back({2, {1}});
    CHECK(solution_cost(inst, s) == doctest::Approx(8.0));
  }
  SUBCASE("cost follows the stated visit order") {
    Solution s;
    s.tours.push_back({2, {0, 1}});
    CHECK(solution_cost(inst, s) == doctest::Approx(2 + 1 + 2));
  }
  SUBCASE("unknown nodes are rejected") {
    Solution s;
    s.tours.push_back({2, {7}});
    CHECK_THROWS_AS(solution_cost(inst, s), std::invalid_argument);
  }
}

TEST_CASE("solution text round trip") {
  const Instance inst = generate_random(3, 6, 2, 3, GenMode::EuclideanUniform);
  Solution s;
  s.tours.push_back({inst.depot_begin(), {0, 2}});
  s.tours.push_back({inst.depot_begin() + 1, {1, 3, 4, 5}});
  const Solution back = parse_solution(inst, write_solution(inst, s));
  REQUIRE(back.tours.size() == 2);
  CHECK(back.tours[0].depot == s.tours[0].depot);
  CHECK(back.tours[0].clients == s.tours[0].clients);
  CHECK(back.tours[1].clients == s.tours[1].clients);
}

TEST_CASE("preprocessing strips zero-distance clients") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 0,
       1, 0, 1,
       0, 1, 0;
  Instance inst = tiny_instance(2, 1, 3, d);  // client 0 sits on the depot
  const Preprocessed pre = preprocess(inst);
  CHECK(pre.inst.n_clients == 1);
  REQUIRE(pre.free_clients.size() == 1);
  CHECK(pre.free_clients[0] == 0);
  Solution sub;
  sub.tours.push_back({1, {0}});  // the remaining client, reindexed
  const Solution lifted = lift_solution(inst, pre, sub);
  REQUIRE(lifted.tours.size() == 2);
  CHECK(lifted.tours[0].clients == std::vector<int>{1});
  CHECK(lifted.tours[1].clients == std::vector<int>{0});
  CHECK(tour_cost(inst, lifted.tours[1]) == doctest::Approx(0.0));
}
