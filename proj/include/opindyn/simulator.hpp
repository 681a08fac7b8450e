#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "opindyn/meanfield.hpp"
#include "opindyn/model.hpp"
#include "opindyn/rng.hpp"

namespace opindyn {

enum class Terminal { absorbed_low, absorbed_high, horizon_reached };
std::string_view to_string(Terminal t);

inline constexpr double kNoHorizon = std::numeric_limits<double>::infinity();

struct RunOutcome {
  int final_state = 0;
  double end_time = 0.0;  ///< absorption time, or the horizon
  Terminal terminal = Terminal::horizon_reached;
  std::size_t jumps = 0;
};

/// Exact jump-chain simulation of a birth-death chain: exponential holding
/// with the total rate, then an up move with probability up / (up + down).
/// on_jump(time, new_state) is called after every jump. Stops on absorption or
/// when the next jump would fall beyond `horizon`.
template <class OnJump>
RunOutcome run_chain(const BirthDeathChain& chain, int start, double horizon, Xoshiro256& rng,
                     OnJump&& on_jump) {
  int state = start;
  double t = 0.0;
  std::size_t jumps = 0;
  for (;;) {
    const double up = chain.up(state);
    const double total = up + chain.down(state);
    if (total == 0.0) {
      const Terminal term = state == 0 ? Terminal::absorbed_low
                            : state == chain.max_state() ? Terminal::absorbed_high
                                                         : Terminal::horizon_reached;
      return {state, term == Terminal::horizon_reached ? horizon : t, term, jumps};
    }
    const double next = t + rng.exponential(total);
    if (next > horizon) return {state, horizon, Terminal::horizon_reached, jumps};
    t = next;
    state += (rng.uniform() * total < up) ? 1 : -1;
    ++jumps;
    on_jump(t, state);
  }
}

/// One sample path. jump_times[i] is the time of the i-th jump and states[i]
/// the state entered by it.
struct TrajectoryRecord {
  int start_state = 0;
  std::vector<double> jump_times;
  std::vector<int> states;
  Terminal terminal = Terminal::horizon_reached;
  double end_time = 0.0;

  /// State occupied at the given time (right-continuous path).
  int state_at(double time) const;
  bool operator==(const TrajectoryRecord&) const = default;
};

/// Simulates from `start` until absorption or `horizon`. Deterministic in `seed`.
/// Rejects states outside the chain, and an infinite horizon on a chain that
/// cannot absorb from `start`.
TrajectoryRecord simulate(const BirthDeathChain& chain, int start, double horizon, std::uint64_t seed);

struct MonteCarloSummary {
  std::size_t n_runs = 0;
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n_runs)
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;  ///< seeds[i] replays run i through simulate()

  bool operator==(const MonteCarloSummary&) const = default;
};

/// Fraction of runs absorbed at the all-ones state (voter or majority model).
/// threads = 0 uses default_parallelism(); the result does not depend on it.
MonteCarloSummary estimate_exit_probability(const ModelParams& params, std::size_t n_runs,
                                            std::uint64_t seed, int threads = 0);

/// Mean time to absorption at either consensus state (voter or majority model).
MonteCarloSummary estimate_consensus_time(const ModelParams& params, std::size_t n_runs,
                                          std::uint64_t seed, int threads = 0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

struct ScalingPoint {
  int n_agents = 0;
  double mean_time = 0.0;
  double std_error = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  LinearFit log_fit;     ///< mean time against log N
  LinearFit linear_fit;  ///< mean time against N
  std::vector<std::string> warnings;
};

/// Estimates the consensus time for every N in n_values (other parameters from
/// `params`) and fits it against log N and against N. Needs at least five
/// distinct N. Adds a warning for every cell whose standard error exceeds 5% of its mean.
ScalingFit fit_log_scaling(const ModelParams& params, std::span<const int> n_values, std::size_t n_runs,
                           std::uint64_t seed, int threads = 0);

/// Grid spacing used when comparing sample paths with the mean field.
inline constexpr double kComparisonGrid = 0.01;
/// RK4 step used for the reference mean-field trajectory.
inline constexpr double kComparisonStep = 0.001;

/// sup over the grid t = 0, 0.01, ..., horizon of |x^(N)(t) - x(t)| for one
/// sample path at N = n_big (>= 10^4) against RK4 from the same initial fraction.
double compare_meanfield(const ModelParams& params, int n_big, double horizon, std::uint64_t seed);

struct DwellInterval {
  int basin = 0;
  double start = 0.0;
  double duration = 0.0;
  bool censored = false;  ///< still open at the horizon
};

struct DwellReport {
  EquilibriumReport equilibria;
  std::vector<double> basin_centres;  ///< stable roots, ascending
  double separatrix = 0.0;            ///< unstable root; NaN with a single basin
  double basin_radius = 0.0;
  double horizon = 0.0;
  std::vector<double> occupation;  ///< fraction of [0, horizon] spent in each basin
  std::vector<DwellInterval> intervals;
  int switches = 0;  ///< entries into a basin other than the previous one
  std::string note;
};

/// Segments one stubborn-model path into basin dwell intervals. A basin is
/// entered when |x - centre| < basin_radius and left only when x crosses the
/// separatrix.
DwellReport dwell_analysis(const StubbornParams& params, double horizon, std::uint64_t seed,
                           double basin_radius = 0.05);

struct StationaryHistogram {
  int max_state = 0;
  std::vector<double> mass;  ///< time-weighted occupation of each state m = 0..M

  double fraction(int state) const { return static_cast<double>(state) / max_state; }
  double total() const;
  /// Mass of states whose fraction lies within half_width of centre.
  double mass_near(double centre, double half_width) const;
};

/// Time-weighted occupation measure of the stubborn chain over [burn_in, horizon].
StationaryHistogram stationary_histogram(const StubbornParams& params, double horizon, double burn_in,
                                         std::uint64_t seed);

/// Default horizon for non-absorbing runs: 1000 N time units.
double default_horizon(const StubbornParams& params);

}  // namespace opindyn
