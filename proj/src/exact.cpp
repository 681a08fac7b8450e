#include "opindyn/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "opindyn/error.hpp"
#include "opindyn/gk.hpp"

namespace opindyn {
namespace {

// Builds the profile from log(down(j)/up(j)), j = 1..N-1.
ExitProfile profile_from_log_ratios(int n, const std::function<double(int)>& log_ratio) {
  std::vector<double> log_partial(static_cast<std::size_t>(n), 0.0);
  for (int t = 1; t < n; ++t) {
    const double lr = log_ratio(t);
    log_partial[static_cast<std::size_t>(t)] = log_partial[static_cast<std::size_t>(t) - 1] + lr;
    if (!std::isfinite(log_partial[static_cast<std::size_t>(t)])) {
      throw NumericalError("exit profile: partial product at j = " + std::to_string(t) +
                           " is not representable even in log space");
    }
  }
  const double peak = *std::max_element(log_partial.begin(), log_partial.end());

  ExitProfile profile;
  profile.increments.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int t = 0; t < n; ++t) {
    const double w = std::exp(log_partial[static_cast<std::size_t>(t)] - peak);
    profile.increments[static_cast<std::size_t>(t)] = w;
    total += w;
  }
  profile.exit_prob.assign(static_cast<std::size_t>(n) + 1, 0.0);
  double running = 0.0;
  for (int t = 0; t < n; ++t) {
    running += profile.increments[static_cast<std::size_t>(t)];
    profile.exit_prob[static_cast<std::size_t>(t) + 1] = running / total;
    profile.increments[static_cast<std::size_t>(t)] /= total;
  }
  profile.exit_prob.back() = 1.0;
  return profile;
}

}  // namespace

int ExitProfile::mode() const {
  return static_cast<int>(std::max_element(increments.begin(), increments.end()) - increments.begin());
}

double gambler_ruin(int x, int a, int b, double r) {
  if (a >= b) throw ValidationError("gambler_ruin: need a < b");
  if (x < a || x > b) throw ValidationError("gambler_ruin: x must lie in [a, b]");
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("gambler_ruin: r must be positive");
  if (x == a) return 1.0;
  if (x == b) return 0.0;
  if (r == 1.0) return static_cast<double>(b - x) / static_cast<double>(b - a);
  if (r < 1.0) {
    // (r^x - r^b) / (r^a - r^b), divided through by r^a.
    const double num = std::pow(r, x - a) - std::pow(r, b - a);
    const double den = 1.0 - std::pow(r, b - a);
    return num / den;
  }
  // r > 1: divide through by r^b to stay bounded.
  const double s = 1.0 / r;
  const double num = std::pow(s, b - x) - 1.0;
  const double den = std::pow(s, b - a) - 1.0;
  return num / den;
}

double voter_exit_probability(const VoterParams& p) {
  validate(p);
  const int start = floor_fraction(p.alpha, p.n_agents);
  const int n = p.n_agents;
  const double r = p.q1 / p.q0;
  if (r == 1.0) return static_cast<double>(start) / n;
  if (r < 1.0) return (1.0 - std::pow(r, start)) / (1.0 - std::pow(r, n));
  // r > 1: (1 - r^x) / (1 - r^N) = (s^(N-x) - s^N) / (1 - s^N) with s = 1/r.
  const double s = 1.0 / r;
  return (std::pow(s, n - start) - std::pow(s, n)) / (1.0 - std::pow(s, n));
}

ExitProfile majority_exit_profile(const MajorityParams& p) {
  validate(p);
  const int n = p.n_agents;
  const double log_r = std::log(p.q1 / p.q0);
  return profile_from_log_ratios(n, [&](int j) {
    return log_r - std::log(g_k(static_cast<double>(j) / n, p.k));
  });
}

ExitProfile exit_profile(const BirthDeathChain& chain) {
  if (!chain.absorbing_low() || !chain.absorbing_high()) {
    throw ValidationError("exit_profile: both boundary states must be absorbing");
  }
  const int n = chain.max_state();
  for (int j = 1; j < n; ++j) {
    if (chain.up(j) <= 0.0 || chain.down(j) <= 0.0) {
      throw ValidationError("exit_profile: interior rates must be positive");
    }
  }
  return profile_from_log_ratios(n, [&](int j) { return std::log(chain.down(j)) - std::log(chain.up(j)); });
}

AbsorptionTimes mean_absorption_time(const BirthDeathChain& chain) {
  if (!chain.absorbing_low() || !chain.absorbing_high()) {
    throw ValidationError("mean_absorption_time: both boundary states must be absorbing");
  }
  const int n = chain.max_state();
  AbsorptionTimes result;
  result.mean_time.assign(static_cast<std::size_t>(n) + 1, 0.0);
  if (n < 2) return result;
  for (int j = 1; j < n; ++j) {
    if (chain.total(j) <= 0.0) {
      throw ValidationError("mean_absorption_time: interior state " + std::to_string(j) + " is absorbing");
    }
  }

  // Thomas algorithm on unknowns u(1..N-1):
  //   -down(n) u(n-1) + (up(n) + down(n)) u(n) - up(n) u(n+1) = 1.
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  std::vector<double> c_prime(m, 0.0);
  std::vector<double> d_prime(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const int s = static_cast<int>(i) + 1;
    const double lower = (i == 0) ? 0.0 : -chain.down(s);
    const double diag = chain.total(s);
    const double upper = (i + 1 == m) ? 0.0 : -chain.up(s);
    const double denom = diag - lower * (i == 0 ? 0.0 : c_prime[i - 1]);
    c_prime[i] = upper / denom;
    d_prime[i] = (1.0 - lower * (i == 0 ? 0.0 : d_prime[i - 1])) / denom;
  }
  result.mean_time[m] = d_prime[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    result.mean_time[i + 1] = d_prime[i] - c_prime[i] * result.mean_time[i + 2];
  }
  return result;
}

TimeBracket voter_time_bracket(const VoterParams& p) {
  validate(p);
  if (!(p.q0 > p.q1)) throw ValidationError("voter_time_bracket: requires q0 > q1");
  const double alpha = std::min(p.alpha, 1.0 - p.alpha);
  const double rate = p.q0 + p.q1;
  const double r = p.q1 / p.q0;
  TimeBracket bracket;
  bracket.lower = std::log(p.n_agents * alpha) / rate;
  bracket.upper = 2.0 / rate * (1.0 + r) / (1.0 - r) * (std::log(p.n_agents - 1.0) + 1.0);
  return bracket;
}

}  // namespace opindyn
