// Feasibility checking and the per-run cost-accounting certificates, plus
// exact-arithmetic verification of the algorithm constants.
#ifndef MDVRP_CERTIFY_HPP
#define MDVRP_CERTIFY_HPP

#include <string>
#include <vector>

#include "mdvrp/constants.hpp"
#include "mdvrp/instance.hpp"

namespace mdvrp {

struct FeasibilityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Every client covered at least once, every tour depot-rooted with 1..k
// distinct clients.
FeasibilityReport check_feasible(const Instance& inst, const Solution& sol);

// Quantities recorded along one full run of the rounding pipeline.
struct RunTrace {
  std::uint64_t seed = 0;
  double gamma = kGamma;
  double beta = kPruneBeta;
  double opt_lp = 0;
  double delta = 0;
  double lb = 0;
  double c_paths = 0;           // c(P) after deduplication
  double c_forest_init = 0;     // c(F)
  double c_forest_resid = 0;    // c(F')
  double ell_path_clients = 0;  // radial mass of path-covered clients
  double ell_unc_init = 0;      // radial mass of initially uncovered clients
  double ell_unc_resid = 0;     // still uncovered after pruning
  double prune_tours_cost = 0;
  double partition_tours_cost = 0;
  double total_cost = 0;
  int n_paths = 0;
  int n_uncovered_init = 0;

  std::string to_text() const;  // key<TAB>value lines
};

struct CertificateReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// The three accounting inequalities: pruning tours against removed forest
// edges, partition tours against paths and residual forest, and the total
// against 2 c(P) + 2.5 c(F) + lb + (1/beta - 1) ell(U).
CertificateReport check_certificates(const Instance& inst, const RunTrace& trace);

struct GuaranteeNumbers {
  double ratio_at_zero = 0;   // approximation factor at delta = 0
  double delta_slope = 0;     // derivative of the factor in delta
  double gamma_optimal = 0;   // ln(B/A) for the delta = 0 coefficients
};

// Evaluates 2 gamma (1+delta) + (2.5 + (1-delta)(1/beta - 1)) e^-gamma
// + (1-delta) symbolically in delta.  Throws when the exact constant
// relations fail.
GuaranteeNumbers guarantee_arithmetic(double gamma = kGamma,
                                      double beta = kPruneBeta,
                                      double delta_const = kResidualDelta);

// Exact decimal-rational verification of the relations between beta and
// delta; all comparisons are carried out in 128-bit integers.
bool verify_constant_inequalities();

}  // namespace mdvrp

#endif
