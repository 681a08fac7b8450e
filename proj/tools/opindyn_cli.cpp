// Command-line front end. Exit codes: 0 success, 2 invalid input, 1 runtime failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "opindyn/error.hpp"
#include "opindyn/exact.hpp"
#include "opindyn/experiment.hpp"
#include "opindyn/gk.hpp"
#include "opindyn/meanfield.hpp"
#include "opindyn/simulator.hpp"

using namespace opindyn;
using nlohmann::ordered_json;

namespace {

struct Flags {
  std::string model = "voter";
  int n = 100;
  double q0 = 1.0;
  double q1 = 1.0;
  int k = 1;
  double gamma0 = 0.2;
  double gamma1 = 0.2;
  double alpha = 0.5;
  std::size_t runs = 1000;
  std::uint64_t seed = 1;
  double horizon = 0.0;  // 0 = command default
  double dt = 0.01;
  double r = 0.0;
  int threads = 0;
  std::string out;
  std::string config;
  std::string preset;
};

ModelParams params_from(const Flags& f) {
  switch (parse_model_kind(f.model)) {
    case ModelKind::voter: return VoterParams{f.n, f.q0, f.q1, f.alpha};
    case ModelKind::majority: return MajorityParams{f.n, f.q0, f.q1, f.k, f.alpha};
    case ModelKind::stubborn: return StubbornParams{f.n, f.gamma0, f.gamma1, f.alpha, 1};
  }
  throw ValidationError("unknown model");
}

ordered_json params_json(const ModelParams& p) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, VoterParams>) {
          return {{"model", "voter"}, {"n", v.n_agents}, {"q0", v.q0}, {"q1", v.q1}, {"alpha", v.alpha}};
        } else if constexpr (std::is_same_v<T, MajorityParams>) {
          return {{"model", "majority"}, {"n", v.n_agents}, {"q0", v.q0}, {"q1", v.q1}, {"k", v.k}, {"alpha", v.alpha}};
        } else {
          return {{"model", "stubborn"}, {"n", v.n_agents}, {"gamma0", v.gamma0}, {"gamma1", v.gamma1}, {"x0", v.x0}};
        }
      },
      p);
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(f.out);
  if (!os) throw std::runtime_error("cannot open " + f.out + " for writing");
  os << text;
}

std::string cell(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(std::string_view command, const ordered_json& config, std::uint64_t seed) {
  return "#" + make_provenance(command, config, seed).dump() + "\n";
}

void cmd_simulate(const Flags& f) {
  const ModelParams p = params_from(f);
  validate(p);
  const auto chain = build_chain(p);
  double horizon = f.horizon;
  if (horizon <= 0.0) {
    horizon = kind_of(p) == ModelKind::stubborn ? default_horizon(std::get<StubbornParams>(p)) : kNoHorizon;
  }
  const int start = initial_state(p);
  const auto path = simulate(chain, start, horizon, f.seed);
  ordered_json cfg = params_json(p);
  cfg["horizon"] = std::isinf(horizon) ? ordered_json(nullptr) : ordered_json(horizon);
  cfg["terminal"] = std::string(to_string(path.terminal));
  cfg["end_time"] = path.end_time;
  std::ostringstream os;
  os << csv_header("simulate", cfg, f.seed) << "time,state,fraction\n";
  os << cell(0.0) << ',' << start << ',' << cell(chain.fraction(start)) << '\n';
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    os << cell(path.jump_times[i]) << ',' << path.states[i] << ',' << cell(chain.fraction(path.states[i])) << '\n';
  }
  emit(f, os.str());
}

void cmd_monte_carlo(const Flags& f, bool exit_prob) {
  const ModelParams p = params_from(f);
  validate(p);
  const auto mc = exit_prob ? estimate_exit_probability(p, f.runs, f.seed, f.threads)
                            : estimate_consensus_time(p, f.runs, f.seed, f.threads);
  const auto chain = build_chain(p);
  const int start = initial_state(p);
  const double exact = exit_prob ? exit_profile(chain).at(start) : mean_absorption_time(chain).at(start);
  ordered_json cfg = params_json(p);
  cfg["runs"] = f.runs;
  std::ostringstream os;
  os << csv_header(exit_prob ? "exit-prob" : "consensus-time", cfg, f.seed) << "n,alpha,estimate,stderr,exact\n";
  os << f.n << ',' << cell(f.alpha) << ',' << cell(mc.estimate) << ',' << cell(mc.std_error) << ',' << cell(exact)
     << '\n';
  emit(f, os.str());
}

void cmd_threshold(const Flags& f) {
  const auto res = threshold_beta(f.r, f.k);
  ordered_json j = {{"r", f.r}, {"k", f.k}, {"beta", res.beta}, {"residual", res.residual},
                    {"iterations", res.iterations}};
  emit(f, j.dump(2) + "\n");
}

void cmd_meanfield(const Flags& f) {
  const ModelParams p = params_from(f);
  validate(p);
  const double t_end = f.horizon > 0.0 ? f.horizon : 50.0;
  const auto model = meanfield_model(p);
  const auto sol = integrate(model, f.alpha, t_end, f.dt);
  ordered_json cfg = params_json(p);
  cfg["t_end"] = t_end;
  cfg["dt"] = f.dt;
  std::ostringstream os;
  os << csv_header("meanfield", cfg, 0) << "t,x\n";
  for (std::size_t i = 0; i < sol.t.size(); ++i) os << cell(sol.t[i]) << ',' << cell(sol.x[i]) << '\n';
  emit(f, os.str());
}

ordered_json equilibria_json(const EquilibriumReport& rep) {
  ordered_json roots = ordered_json::array();
  for (const auto& e : rep.roots) roots.push_back({{"x", e.x}, {"stability", std::string(to_string(e.stability))}});
  const auto num = [](double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); };
  return {{"gamma0", rep.gamma0},
          {"gamma1", rep.gamma1},
          {"roots", roots},
          {"discriminant", rep.discriminant},
          {"z1", num(rep.z1)},
          {"z2", num(rep.z2)},
          {"conditions",
           {{"discriminant_positive", rep.cond_discriminant},
            {"critical_points_inside", rep.cond_critical_inside},
            {"opposite_signs", rep.cond_opposite_signs}}},
          {"regime", std::string(to_string(rep.regime))},
          {"bistable", rep.bistable()}};
}

void cmd_equilibria(const Flags& f) { emit(f, equilibria_json(stubborn_equilibria(f.gamma0, f.gamma1)).dump(2) + "\n"); }

void cmd_dwell(const Flags& f) {
  const StubbornParams p{f.n, f.gamma0, f.gamma1, f.alpha, 1};
  validate(p);
  const double horizon = f.horizon > 0.0 ? f.horizon : default_horizon(p);
  const auto rep = dwell_analysis(p, horizon, f.seed);
  ordered_json cfg = params_json(p);
  cfg["horizon"] = horizon;
  cfg["basin_radius"] = rep.basin_radius;
  cfg["basin_centres"] = rep.basin_centres;
  cfg["occupation"] = rep.occupation;
  cfg["switches"] = rep.switches;
  if (!rep.note.empty()) cfg["note"] = rep.note;
  std::ostringstream os;
  os << csv_header("dwell", cfg, f.seed) << "basin,centre,start,duration,censored\n";
  for (const auto& iv : rep.intervals) {
    os << iv.basin << ',' << cell(rep.basin_centres[static_cast<std::size_t>(iv.basin)]) << ',' << cell(iv.start)
       << ',' << cell(iv.duration) << ',' << (iv.censored ? 1 : 0) << '\n';
  }
  emit(f, os.str());
}

void cmd_run(const Flags& f, const CLI::App& sub) {
  if (f.config.empty() == f.preset.empty()) throw ValidationError("run: give exactly one of --config or --preset");
  ExperimentConfig c;
  if (!f.preset.empty()) {
    c = preset(f.preset);
  } else {
    std::ifstream is(f.config);
    if (!is) throw ValidationError("run: cannot read config " + f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("run: config is not valid JSON: ") + e.what());
    }
    c = ExperimentConfig::from_json(j);
  }
  // Flags given on the command line win over the file.
  const auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--model")) c.model = parse_model_kind(f.model);
  if (given("--n")) c.n = f.n;
  if (given("--q0")) c.q0 = f.q0;
  if (given("--q1")) c.q1 = f.q1;
  if (given("--k")) c.k = f.k;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--gamma0")) c.gamma0 = f.gamma0;
  if (given("--gamma1")) c.gamma1 = f.gamma1;
  if (given("--runs")) c.runs = f.runs;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.out = f.out;
  const auto table = run_experiment(c, f.threads);
  Flags target = f;
  target.out = c.out;
  emit(target, table.to_csv());
}

void report_error(const char* kind, const std::string& message) {
  std::cerr << ordered_json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opindyn: biased opinion dynamics (voter, majority, stubborn agents)"};
  app.set_version_flag("--version", std::string(OPINDYN_VERSION));
  app.require_subcommand(1);
  Flags f;

  const auto model_flags = [&](CLI::App* s) {
    s->add_option("--model", f.model, "voter, majority or stubborn")->capture_default_str();
    s->add_option("--n", f.n, "number of agents")->capture_default_str();
    s->add_option("--q0", f.q0, "update probability of opinion-0 agents")->capture_default_str();
    s->add_option("--q1", f.q1, "update probability of opinion-1 agents")->capture_default_str();
    s->add_option("--k", f.k, "majority sample half-size K")->capture_default_str();
    s->add_option("--gamma0", f.gamma0, "stubborn fraction holding 0")->capture_default_str();
    s->add_option("--gamma1", f.gamma1, "stubborn fraction holding 1")->capture_default_str();
    s->add_option("--alpha", f.alpha, "initial fraction holding 1")->capture_default_str();
    s->add_option("--out", f.out, "write output here instead of stdout");
  };
  const auto mc_flags = [&](CLI::App* s) {
    s->add_option("--runs", f.runs, "Monte Carlo runs")->capture_default_str();
    s->add_option("--seed", f.seed, "master seed")->capture_default_str();
    s->add_option("--threads", f.threads, "worker threads (default: $OPINDYN_THREADS or all cores)");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "one sample path as CSV");
  model_flags(simulate_cmd);
  simulate_cmd->add_option("--seed", f.seed, "seed")->capture_default_str();
  simulate_cmd->add_option("--horizon", f.horizon, "time limit (default: none, or 1000 N for stubborn)");

  auto* exit_cmd = app.add_subcommand("exit-prob", "exit probability: Monte Carlo and exact");
  model_flags(exit_cmd);
  mc_flags(exit_cmd);
  auto* time_cmd = app.add_subcommand("consensus-time", "mean consensus time: Monte Carlo and exact");
  model_flags(time_cmd);
  mc_flags(time_cmd);

  auto* threshold_cmd = app.add_subcommand("threshold", "majority threshold beta = g_K^{-1}(r) as JSON");
  threshold_cmd->add_option("--r", f.r, "bias ratio q1 / q0 in (0, 1]")->required();
  threshold_cmd->add_option("--k", f.k, "sample half-size K")->capture_default_str();
  threshold_cmd->add_option("--out", f.out, "write output here instead of stdout");

  auto* meanfield_cmd = app.add_subcommand("meanfield", "RK4 mean-field trajectory as CSV");
  model_flags(meanfield_cmd);
  meanfield_cmd->add_option("--horizon", f.horizon, "end time (default 50)");
  meanfield_cmd->add_option("--dt", f.dt, "step, at most 0.01")->capture_default_str();

  auto* eq_cmd = app.add_subcommand("equilibria", "stubborn-agent mean-field equilibria as JSON");
  eq_cmd->add_option("--gamma0", f.gamma0, "stubborn fraction holding 0")->capture_default_str();
  eq_cmd->add_option("--gamma1", f.gamma1, "stubborn fraction holding 1")->capture_default_str();
  eq_cmd->add_option("--out", f.out, "write output here instead of stdout");

  auto* dwell_cmd = app.add_subcommand("dwell", "basin dwell intervals of one stubborn-model path");
  model_flags(dwell_cmd);
  dwell_cmd->add_option("--seed", f.seed, "seed")->capture_default_str();
  dwell_cmd->add_option("--horizon", f.horizon, "time limit (default 1000 N)");

  auto* run_cmd = app.add_subcommand("run", "config-driven sweep; flags override the config");
  model_flags(run_cmd);
  mc_flags(run_cmd);
  run_cmd->add_option("--config", f.config, "JSON experiment config");
  run_cmd->add_option("--preset", f.preset, "named preset: figure-1, figure-2a, ...");
  app.add_subcommand("presets", "list preset names and descriptions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") cmd_simulate(f);
    else if (name == "exit-prob") cmd_monte_carlo(f, true);
    else if (name == "consensus-time") cmd_monte_carlo(f, false);
    else if (name == "threshold") cmd_threshold(f);
    else if (name == "meanfield") cmd_meanfield(f);
    else if (name == "equilibria") cmd_equilibria(f);
    else if (name == "dwell") cmd_dwell(f);
    else if (name == "run") cmd_run(f, *sub);
    else if (name == "presets") {
      for (const auto& p : preset_names()) std::cout << p << "\t" << preset(p).description << "\n";
    }
  } catch (const ValidationError& e) {
    report_error("validation", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return 1;
  }
  return 0;
}
