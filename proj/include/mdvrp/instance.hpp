// Instance model: metric instances over clients and depots, tours, solutions,
// the radial lower bound, text formats and a seeded generator.
#ifndef MDVRP_INSTANCE_HPP
#define MDVRP_INSTANCE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdvrp {

// Node indexing convention: clients are 0..n_clients-1, depots follow as
// n_clients..n_clients+n_depots-1.  Names are kept for I/O only.
struct Instance {
  int n_clients = 0;
  int n_depots = 0;
  int k = 1;
  std::vector<std::string> names;          // size n_clients + n_depots
  Eigen::MatrixXd cost;                    // symmetric, zero diagonal, metric
  std::optional<Eigen::MatrixX2d> coords;  // present for coordinate instances

  int num_nodes() const { return n_clients + n_depots; }
  bool is_depot(int u) const { return u >= n_clients; }
  int depot_begin() const { return n_clients; }
  int depot_end() const { return n_clients + n_depots; }

  double c(int u, int v) const { return cost(u, v); }

  // Distance from a client to the depot set and the realizing depot
  // (smallest depot index on ties).
  double depot_distance(int v) const;
  int nearest_depot(int v) const;

  // Radial contribution ell_v = (2/k) * c(v, R).
  double ell(int v) const { return 2.0 / k * depot_distance(v); }
  double ell_sum(const std::vector<int>& clients) const;

  double diameter() const { return cost.maxCoeff(); }

  void validate() const;  // throws std::invalid_argument on a broken invariant
};

struct Tour {
  int depot = -1;
  std::vector<int> clients;  // nonempty, distinct, size <= k
};

struct Solution {
  std::vector<Tour> tours;
};

double tour_cost(const Instance& inst, const Tour& t);
double solution_cost(const Instance& inst, const Solution& s);

// lb = (2/k) * sum_v c(v, R)
double radial_lb(const Instance& inst);

// All-pairs shortest-path closure of a symmetric nonnegative cost matrix.
// Throws on negative entries, asymmetry or nonzero diagonal.
Eigen::MatrixXd metric_closure(const Eigen::MatrixXd& raw);

// Text formats.  See README for the grammar.  Parse errors carry the
// offending line number in the message.
Instance parse_instance(const std::string& text);
std::string write_instance(const Instance& inst);
std::string write_solution(const Instance& inst, const Solution& s);
Solution parse_solution(const Instance& inst, const std::string& text);

enum class GenMode { EuclideanUniform, EuclideanClustered };

// Deterministic for a fixed seed; points in [0,1]^2.
Instance generate_random(std::uint64_t seed, int n_clients, int n_depots,
                         int k, GenMode mode);

// Preprocessing used by every solver: clients at distance zero from the
// depot set are served by free singleton tours and removed from the
// instance handed to the algorithms.
struct Preprocessed {
  Instance inst;                  // all remaining clients have c(v,R) > 0
  std::vector<int> kept_clients;  // original client index per new index
  std::vector<int> free_clients;  // original indices of stripped clients
};

Preprocessed preprocess(const Instance& inst);

// Maps a solution on the preprocessed instance back to the original one and
// re-adds the free singleton tours.
Solution lift_solution(const Instance& original, const Preprocessed& pre,
                       const Solution& sub);

}  // namespace mdvrp

#endif
