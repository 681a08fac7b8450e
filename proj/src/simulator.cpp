#include "opindyn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "opindyn/error.hpp"
#include "opindyn/parallel.hpp"

namespace opindyn {
namespace {

void require_absorbing_model(const ModelParams& params, const char* who) {
  if (kind_of(params) == ModelKind::stubborn) {
    throw ValidationError(std::string(who) + ": the stubborn model never reaches consensus");
  }
}

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

// Two-pass mean and standard error, accumulated in index order.
Moments moments(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  Moments m;
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std_error = std::sqrt(ss / (n - 1.0) / n);
  return m;
}

template <class PerRun>
MonteCarloSummary monte_carlo(std::size_t n_runs, std::uint64_t seed, int threads, PerRun&& per_run) {
  if (n_runs == 0) throw ValidationError("Monte Carlo estimate needs at least one run");
  MonteCarloSummary summary;
  summary.n_runs = n_runs;
  summary.master_seed = seed;
  summary.seeds.resize(n_runs);
  std::vector<double> values(n_runs);
  parallel_for(
      n_runs,
      [&](std::size_t i) {
        summary.seeds[i] = stream_seed(seed, i);
        Xoshiro256 rng(summary.seeds[i]);
        values[i] = per_run(rng);
      },
      threads);
  const Moments m = moments(values);
  summary.estimate = m.mean;
  summary.std_error = m.std_error;
  return summary;
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t cell) {
  return stream_seed(master ^ 0x6a09e667f3bcc909ULL, cell);
}

ModelParams with_population(ModelParams params, int n) {
  std::visit([n](auto& p) { p.n_agents = n; }, params);
  return params;
}

}  // namespace

std::string_view to_string(Terminal t) {
  switch (t) {
    case Terminal::absorbed_low: return "absorbed-low";
    case Terminal::absorbed_high: return "absorbed-high";
    case Terminal::horizon_reached: return "horizon-reached";
  }
  return "unknown";
}

int TrajectoryRecord::state_at(double time) const {
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), time);
  if (it == jump_times.begin()) return start_state;
  return states[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

TrajectoryRecord simulate(const BirthDeathChain& chain, int start, double horizon, std::uint64_t seed) {
  if (start < 0 || start > chain.max_state()) {
    throw ValidationError("simulate: start state " + std::to_string(start) + " is outside 0.." +
                          std::to_string(chain.max_state()));
  }
  if (!(horizon > 0.0)) throw ValidationError("simulate: horizon must be > 0");
  if (std::isinf(horizon) && !chain.absorbing_low() && !chain.absorbing_high()) {
    throw ValidationError("simulate: chain has no absorbing state; give a finite horizon");
  }
  TrajectoryRecord record;
  record.start_state = start;
  Xoshiro256 rng(seed);
  const RunOutcome out = run_chain(chain, start, horizon, rng, [&](double t, int s) {
    record.jump_times.push_back(t);
    record.states.push_back(s);
  });
  record.terminal = out.terminal;
  record.end_time = out.end_time;
  return record;
}

MonteCarloSummary estimate_exit_probability(const ModelParams& params, std::size_t n_runs, std::uint64_t seed,
                                            int threads) {
  require_absorbing_model(params, "estimate_exit_probability");
  const BirthDeathChain chain = build_chain(params);
  const int start = initial_state(params);
  return monte_carlo(n_runs, seed, threads, [&](Xoshiro256& rng) {
    const RunOutcome out = run_chain(chain, start, kNoHorizon, rng, [](double, int) {});
    return out.terminal == Terminal::absorbed_high ? 1.0 : 0.0;
  });
}

MonteCarloSummary estimate_consensus_time(const ModelParams& params, std::size_t n_runs, std::uint64_t seed,
                                          int threads) {
  require_absorbing_model(params, "estimate_consensus_time");
  const BirthDeathChain chain = build_chain(params);
  const int start = initial_state(params);
  return monte_carlo(n_runs, seed, threads, [&](Xoshiro256& rng) {
    return run_chain(chain, start, kNoHorizon, rng, [](double, int) {}).end_time;
  });
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("least_squares: need at least two (x, y) pairs");
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("least_squares: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

ScalingFit fit_log_scaling(const ModelParams& params, std::span<const int> n_values, std::size_t n_runs,
                           std::uint64_t seed, int threads) {
  require_absorbing_model(params, "fit_log_scaling");
  const std::set<int> distinct(n_values.begin(), n_values.end());
  if (distinct.size() < 5) throw ValidationError("fit_log_scaling: need at least five distinct values of N");

  ScalingFit fit;
  std::vector<double> log_n, n_real, means;
  for (std::size_t c = 0; c < n_values.size(); ++c) {
    const int n = n_values[c];
    const MonteCarloSummary s = estimate_consensus_time(with_population(params, n), n_runs, cell_seed(seed, c), threads);
    fit.points.push_back({n, s.estimate, s.std_error});
    log_n.push_back(std::log(static_cast<double>(n)));
    n_real.push_back(static_cast<double>(n));
    means.push_back(s.estimate);
    if (s.std_error > 0.05 * s.estimate) {
      std::ostringstream msg;
      msg << "N=" << n << ": standard error " << s.std_error << " exceeds 5% of mean " << s.estimate;
      fit.warnings.push_back(msg.str());
    }
  }
  fit.log_fit = least_squares(log_n, means);
  fit.linear_fit = least_squares(n_real, means);
  return fit;
}

double compare_meanfield(const ModelParams& params, int n_big, double horizon, std::uint64_t seed) {
  if (n_big < 10000) throw ValidationError("compare_meanfield: n_big must be >= 10^4");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("compare_meanfield: horizon must be finite and > 0");
  const ModelParams big = with_population(params, n_big);
  const BirthDeathChain chain = build_chain(big);
  const int start = initial_state(big);
  const MeanFieldSolution reference = integrate(meanfield_model(big), chain.fraction(start), horizon, kComparisonStep);

  const auto grid_points = static_cast<std::size_t>(std::floor(horizon / kComparisonGrid + 1e-9));
  double sup = std::abs(chain.fraction(start) - reference.x.front());
  std::size_t next_grid = 1;
  int current = start;
  const auto settle_until = [&](double time) {
    // Grid points strictly before `time` still see the current state.
    while (next_grid <= grid_points && static_cast<double>(next_grid) * kComparisonGrid < time) {
      const double tg = static_cast<double>(next_grid) * kComparisonGrid;
      sup = std::max(sup, std::abs(chain.fraction(current) - reference.at(tg)));
      ++next_grid;
    }
  };
  Xoshiro256 rng(seed);
  run_chain(chain, start, horizon, rng, [&](double t, int s) {
    settle_until(t);
    current = s;
  });
  settle_until(kNoHorizon);
  return sup;
}

DwellReport dwell_analysis(const StubbornParams& params, double horizon, std::uint64_t seed, double basin_radius) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("dwell_analysis: horizon must be finite and > 0");
  if (!(basin_radius > 0.0)) throw ValidationError("dwell_analysis: basin_radius must be > 0");
  const BirthDeathChain chain = build_stubborn_chain(params);

  DwellReport report;
  report.equilibria = stubborn_equilibria(params.gamma0, params.gamma1);
  report.basin_centres = report.equilibria.stable_points();
  report.separatrix = report.basin_centres.size() >= 2 ? report.equilibria.separatrix()
                                                       : std::numeric_limits<double>::quiet_NaN();
  report.basin_radius = basin_radius;
  report.horizon = horizon;
  report.occupation.assign(report.basin_centres.size(), 0.0);
  const bool two_basins = report.basin_centres.size() >= 2 && std::isfinite(report.separatrix);

  int current = -1;  // basin id, or -1 while in transit
  int last_visited = -1;
  double entered_at = 0.0;
  const auto close_interval = [&](double t, bool censored) {
    report.intervals.push_back({current, entered_at, t - entered_at, censored});
    report.occupation[static_cast<std::size_t>(current)] += t - entered_at;
    current = -1;
  };
  const auto observe = [&](double t, int state) {
    const double x = chain.fraction(state);
    if (current >= 0 && two_basins) {
      const bool left = current == 0 ? x > report.separatrix : x < report.separatrix;
      if (left) close_interval(t, false);
    }
    if (current < 0) {
      for (std::size_t b = 0; b < report.basin_centres.size(); ++b) {
        if (std::abs(x - report.basin_centres[b]) < basin_radius) {
          current = static_cast<int>(b);
          entered_at = t;
          if (last_visited >= 0 && last_visited != current) ++report.switches;
          last_visited = current;
          break;
        }
      }
    }
  };

  const int start = initial_state(params);
  observe(0.0, start);
  Xoshiro256 rng(seed);
  run_chain(chain, start, horizon, rng, observe);
  if (current >= 0 && horizon > entered_at) close_interval(horizon, true);
  else if (current >= 0) current = -1;

  for (double& occ : report.occupation) occ /= horizon;
  if (report.switches == 0) report.note = "no switching observed";
  return report;
}

double StationaryHistogram::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double StationaryHistogram::mass_near(double centre, double half_width) const {
  double sum = 0.0;
  for (int m = 0; m <= max_state; ++m) {
    if (std::abs(fraction(m) - centre) <= half_width) sum += mass[static_cast<std::size_t>(m)];
  }
  return sum;
}

StationaryHistogram stationary_histogram(const StubbornParams& params, double horizon, double burn_in,
                                         std::uint64_t seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("stationary_histogram: horizon must be finite and > 0");
  if (!(burn_in >= 0.0 && burn_in < horizon)) throw ValidationError("stationary_histogram: need 0 <= burn_in < horizon");
  const BirthDeathChain chain = build_stubborn_chain(params);
  StationaryHistogram hist;
  hist.max_state = chain.max_state();
  hist.mass.assign(chain.n_states(), 0.0);

  int current = initial_state(params);
  double since = 0.0;
  const auto hold = [&](double until) {
    const double from = std::max(since, burn_in);
    if (until > from) hist.mass[static_cast<std::size_t>(current)] += until - from;
  };
  Xoshiro256 rng(seed);
  run_chain(chain, current, horizon, rng, [&](double t, int s) {
    hold(t);
    current = s;
    since = t;
  });
  hold(horizon);
  const double window = horizon - burn_in;
  for (double& m : hist.mass) m /= window;
  return hist;
}

double default_horizon(const StubbornParams& params) { return 1000.0 * params.n_agents; }

}  // namespace opindyn
