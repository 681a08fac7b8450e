#pragma once

#include <vector>

#include "opindyn/model.hpp"

namespace opindyn {

/// Absorption probabilities and their increments, indexed by start state.
struct ExitProfile {
  std::vector<double> exit_prob;   ///< P_n(hit max_state before 0), n = 0..N
  std::vector<double> increments;  ///< D(n) = exit_prob[n+1] - exit_prob[n], n = 0..N-1

  double at(int state) const { return exit_prob[static_cast<std::size_t>(state)]; }
  /// First index of the largest increment.
  int mode() const;
};

struct AbsorptionTimes {
  std::vector<double> mean_time;  ///< expected time to absorption from each state

  double at(int state) const { return mean_time[static_cast<std::size_t>(state)]; }
};

/// P_x(T_a < T_b) for a walk stepping left/right with odds r = P(left)/P(right).
/// x == a gives 1 and x == b gives 0; anything outside [a, b] is rejected.
double gambler_ruin(int x, int a, int b, double r);

/// Probability that the voter chain started at floor(alpha N) absorbs at N.
double voter_exit_probability(const VoterParams& p);

/// Exit profile of the majority chain from the product formula with g_K.
///
/// Partial products prod_{j<=t} r / g_K(j/N) are accumulated as log sums and
/// normalised by their maximum before exponentiation. Throws NumericalError
/// if any log partial product is not finite.
ExitProfile majority_exit_profile(const MajorityParams& p);

/// Exit profile of any chain with both ends absorbing, from the ratios
/// down(n)/up(n) of its own rates.
ExitProfile exit_profile(const BirthDeathChain& chain);

/// Expected absorption time from every state, by direct elimination on the
/// tridiagonal first-step system
///   (up + down) u(n) - up u(n+1) - down u(n-1) = 1,  u(0) = u(N) = 0.
AbsorptionTimes mean_absorption_time(const BirthDeathChain& chain);

/// Analytic bracket on the biased voter's mean consensus time from floor(alpha N):
///   lower = log(N min(alpha, 1-alpha)) / (q0 + q1)
///   upper = 2 / (q0 + q1) * (1 + r) / (1 - r) * (log(N - 1) + 1),  r = q1 / q0.
struct TimeBracket {
  double lower = 0.0;
  double upper = 0.0;
};
TimeBracket voter_time_bracket(const VoterParams& p);

}  // namespace opindyn
