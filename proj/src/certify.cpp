#include "mdvrp/certify.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdvrp {

FeasibilityReport check_feasible(const Instance& inst, const Solution& sol) {
  FeasibilityReport report;
  std::vector<int> covered(inst.n_clients, 0);
  for (std::size_t ti = 0; ti < sol.tours.size(); ++ti) {
    const Tour& t = sol.tours[ti];
    const std::string tag = "tour " + std::to_string(ti);
    if (t.depot < inst.depot_begin() || t.depot >= inst.depot_end()) {
      report.violations.push_back(tag + ": root is not a depot");
      continue;
    }
    if (t.clients.empty()) report.violations.push_back(tag + ": visits no client");
    if (static_cast<int>(t.clients.size()) > inst.k)
      report.violations.push_back(tag + ": visits " + std::to_string(t.clients.size()) +
                                  " clients with capacity " + std::to_string(inst.k));
    std::set<int> seen;
    for (int v : t.clients) {
      if (v < 0 || v >= inst.n_clients) {
        report.violations.push_back(tag + ": unknown client id " + std::to_string(v));
        continue;
      }
      if (!seen.insert(v).second)
        report.violations.push_back(tag + ": repeats client " + inst.names[v]);
      covered[v]++;
    }
  }
  for (int v = 0; v < inst.n_clients; ++v)
    if (!covered[v])
      report.violations.push_back("client " + inst.names[v] + " lies on no tour");
  return report;
}

std::string RunTrace::to_text() const {
  std::ostringstream out;
  auto put = [&](const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", value);
    out << key << "\t" << buf << "\n";
  };
  out << "seed\t" << seed << "\n";
  put("gamma", gamma);
  put("beta", beta);
  put("opt_lp", opt_lp);
  put("delta", delta);
  put("lb", lb);
  put("c_paths", c_paths);
  put("c_forest_init", c_forest_init);
  put("c_forest_resid", c_forest_resid);
  put("ell_path_clients", ell_path_clients);
  put("ell_uncovered_init", ell_unc_init);
  put("ell_uncovered_resid", ell_unc_resid);
  put("prune_tours_cost", prune_tours_cost);
  put("partition_tours_cost", partition_tours_cost);
  put("total_cost", total_cost);
  out << "n_paths\t" << n_paths << "\n";
  out << "n_uncovered_init\t" << n_uncovered_init << "\n";
  return out.str();
}

CertificateReport check_certificates(const Instance& inst, const RunTrace& t) {
  CertificateReport report;
  const double tol = 1e-6 * std::max(1.0, inst.diameter() * inst.n_clients);
  const double inv_beta = 1.0 / t.beta;

  const double prune_budget =
      2.5 * (t.c_forest_init - t.c_forest_resid) +
      inv_beta * (t.ell_unc_init - t.ell_unc_resid);
  if (t.prune_tours_cost > prune_budget + tol)
    report.violations.push_back("pruning tours exceed 2.5 (c(F)-c(F')) + (1/b)(ell removed)");

  const double partition_budget = 2 * t.c_paths + 2.5 * t.c_forest_resid +
                                  t.ell_path_clients + inv_beta * t.ell_unc_resid;
  if (t.partition_tours_cost > partition_budget + tol)
    report.violations.push_back("partition tours exceed 2 c(P) + 2.5 c(F') + ell terms");

  const double total_budget = 2 * t.c_paths + 2.5 * t.c_forest_init + t.lb +
                              (inv_beta - 1.0) * t.ell_unc_init;
  if (t.total_cost > total_budget + tol)
    report.violations.push_back("total exceeds 2 c(P) + 2.5 c(F) + lb + (1/b - 1) ell(U)");
  return report;
}

namespace {

// Rational with exact 128-bit integer arithmetic; every operation reduces by
// the gcd so the decimal constants below stay far from overflow.
struct Dec {
  __int128 num;
  __int128 den;  // positive
};

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  while (b) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Dec reduce(Dec d) {
  const __int128 g = gcd128(d.num, d.den);
  if (g > 1) {
    d.num /= g;
    d.den /= g;
  }
  return d;
}

Dec parse_decimal(const char* text) {
  __int128 num = 0, den = 1;
  bool frac = false;
  for (const char* p = text; *p; ++p) {
    if (*p == '.') {
      frac = true;
      continue;
    }
    num = num * 10 + (*p - '0');
    if (frac) den *= 10;
  }
  return reduce({num, den});
}

bool leq(Dec a, Dec b) { return a.num * b.den <= b.num * a.den; }
bool lt(Dec a, Dec b) { return a.num * b.den < b.num * a.den; }
Dec mul(Dec a, Dec b) { return reduce({a.num * b.num, a.den * b.den}); }
Dec sub(Dec a, Dec b) {
  const __int128 g = gcd128(a.den, b.den);
  const __int128 bs = b.den / g;
  return reduce({a.num * bs - b.num * (a.den / g), a.den * bs});
}
Dec add(Dec a, Dec b) {
  const __int128 g = gcd128(a.den, b.den);
  const __int128 bs = b.den / g;
  return reduce({a.num * bs + b.num * (a.den / g), a.den * bs});
}
Dec from_int(long long v) { return {v, 1}; }

}  // namespace

bool verify_constant_inequalities() {
  const Dec beta = parse_decimal("0.5902302342");
  const Dec delta = parse_decimal("1.6353454381");
  const Dec half = parse_decimal("0.5");
  const Dec three_halves = parse_decimal("1.5");

  // 2 - 0.5/delta <= 1/beta  <=>  beta (4 delta - 1) <= 2 delta.
  {
    const Dec lhs = mul(beta, sub(mul(from_int(4), delta), from_int(1)));
    const Dec rhs = mul(from_int(2), delta);
    if (!leq(lhs, rhs)) return false;
  }
  // 1.5 + (beta - 0.5)/delta <= 1/beta
  // <=> 1.5 beta delta + beta (beta - 0.5) <= delta.
  {
    const Dec lhs = add(mul(three_halves, mul(beta, delta)), mul(beta, sub(beta, half)));
    if (!leq(lhs, delta)) return false;
  }
  // 1/(1 - beta) < 3  <=>  1 < 3 (1 - beta).
  {
    const Dec rhs = mul(from_int(3), sub(from_int(1), beta));
    if (!lt(from_int(1), rhs)) return false;
  }
  // 0 <= (delta - 1.5 (1 - beta)) / (3 - 2 beta) <= 1, denominator positive.
  {
    const Dec numr = sub(delta, mul(three_halves, sub(from_int(1), beta)));
    const Dec denr = sub(from_int(3), mul(from_int(2), beta));
    if (lt(numr, from_int(0))) return false;
    if (!leq(numr, denr)) return false;
  }
  // 0 <= (2 + 3 beta / delta) / (2 + 1/(1 - beta)) <= 1
  // <=> 3 beta (1 - beta) <= delta  (the numerator is clearly positive).
  {
    const Dec lhs = mul(from_int(3), mul(beta, sub(from_int(1), beta)));
    if (!leq(lhs, delta)) return false;
  }
  return true;
}

GuaranteeNumbers guarantee_arithmetic(double gamma, double beta, double delta_const) {
  (void)delta_const;
  if (!verify_constant_inequalities())
    throw std::logic_error("constant inequalities failed exact verification");
  GuaranteeNumbers g;
  const double inv_beta = 1.0 / beta;
  // factor(delta) = 2 gamma (1+delta) + (2.5 + (1-delta)(1/beta - 1)) e^-gamma
  //                 + (1 - delta)
  g.ratio_at_zero = 2 * gamma + (2.5 + (inv_beta - 1)) * std::exp(-gamma) + 1;
  g.delta_slope = 2 * gamma - (inv_beta - 1) * std::exp(-gamma) - 1;
  g.gamma_optimal = std::log((1.5 + inv_beta) / 2.0);
  return g;
}

}  // namespace mdvrp
