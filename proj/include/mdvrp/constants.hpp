// Algorithm constants.  kPruneBeta controls when a group of subtrees is
// spliced off into a tour, kResidualDelta relates a residual tree's cost to
// its clients' radial contribution, kGamma scales the branching sampling.
// The exact-arithmetic relations between them are verified by
// verify_constant_inequalities().
#ifndef MDVRP_CONSTANTS_HPP
#define MDVRP_CONSTANTS_HPP

namespace mdvrp {

inline constexpr double kPruneBeta = 0.5902302342;
inline constexpr double kResidualDelta = 1.6353454381;
inline constexpr double kGamma = 0.46821;

}  // namespace mdvrp

#endif
