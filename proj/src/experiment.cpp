#include "opindyn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "opindyn/error.hpp"
#include "opindyn/exact.hpp"
#include "opindyn/meanfield.hpp"
#include "opindyn/simulator.hpp"

#ifndef OPINDYN_VERSION
#define OPINDYN_VERSION "0.0.0"
#endif

namespace opindyn {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int as_integer(double v, const char* what) {
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError(std::string("sweep value for ") + what + " must be an integer");
  }
  return static_cast<int>(v);
}

std::uint64_t sweep_cell_seed(std::uint64_t master, std::size_t cell) {
  return stream_seed(master ^ 0xbb67ae8584caa73bULL, cell);
}

struct PresetEntry {
  const char* name;
  const char* description;
  const char* config;
};

// Parameter values follow the captions and text accompanying each figure.
constexpr PresetEntry kPresets[] = {
    {"figure-1", "Biased voter: exit probability E_N(alpha) against N; q0=1, q1=0.5, alpha=0.2",
     R"({"model":"voter","measure":"exit_probability","params":{"q0":1,"q1":0.5,"alpha":0.2},
         "sweep":{"axis":"n","values":[10,20,30,40,50,60,70,80,90,100]},"runs":10000})"},
    {"figure-2a", "Biased voter: mean consensus time t_N(alpha) against N; q0=1, q1=0.5, alpha=0.4",
     R"({"model":"voter","measure":"consensus_time","params":{"q0":1,"q1":0.5,"alpha":0.4},
         "sweep":{"axis":"n","values":[50,100,200,400,800,1600]},"runs":2000})"},
    {"figure-2b", "Biased voter: mean consensus time against alpha; N=100, q0=1, q1=0.5",
     R"({"model":"voter","measure":"consensus_time","params":{"n":100,"q0":1,"q1":0.5},
         "sweep":{"axis":"alpha","values":[0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9]},"runs":2000})"},
    {"figure-3", "Biased majority (K=1): exit probability against N; q0=1, q1=0.6, alpha=0.5",
     R"({"model":"majority","measure":"exit_probability","params":{"q0":1,"q1":0.6,"k":1,"alpha":0.5},
         "sweep":{"axis":"n","values":[10,20,40,60,80,100,150,200]},"runs":10000})"},
    {"figure-4", "Biased majority (K=1): exit probability against alpha; N=100, q0=1, q1=0.6; threshold 0.375",
     R"({"model":"majority","measure":"exit_probability","params":{"n":100,"q0":1,"q1":0.6,"k":1},
         "sweep":{"axis":"alpha","values":[0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95]},
         "runs":10000})"},
    {"figure-5a", "Biased majority (K=1): mean consensus time against N; q0=1, q1=0.6, alpha=0.5",
     R"({"model":"majority","measure":"consensus_time","params":{"q0":1,"q1":0.6,"k":1,"alpha":0.5},
         "sweep":{"axis":"n","values":[50,100,200,400,800,1600]},"runs":2000})"},
    {"figure-5b", "Biased majority: mean consensus time against K; N=50, q0=1, q1=0.6, alpha=0.5",
     R"({"model":"majority","measure":"consensus_time","params":{"n":50,"q0":1,"q1":0.6,"alpha":0.5},
         "sweep":{"axis":"k","values":[1,2,3,4,5,6]},"runs":10000})"},
    {"figure-6", "Majority with stubborn agents: mean-field equilibria against gamma1; gamma0=0.1",
     R"({"model":"stubborn","measure":"equilibrium","params":{"n":1000,"gamma0":0.1},
         "sweep":{"axis":"gamma1","values":[0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85]},
         "runs":1})"},
};

}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::exit_probability: return "exit_probability";
    case Measure::consensus_time: return "consensus_time";
    case Measure::equilibrium: return "equilibrium";
  }
  return "unknown";
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::n: return "n";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::k: return "k";
    case SweepAxis::gamma0: return "gamma0";
    case SweepAxis::gamma1: return "gamma1";
  }
  return "unknown";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : {Measure::exit_probability, Measure::consensus_time, Measure::equilibrium}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown measure '" + std::string(name) + "'");
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::n, SweepAxis::alpha, SweepAxis::k, SweepAxis::gamma0, SweepAxis::gamma1}) {
    if (to_string(a) == name) return a;
  }
  throw ValidationError("unknown sweep axis '" + std::string(name) + "'");
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  if (!preset.empty()) j["preset"] = preset;
  if (!description.empty()) j["description"] = description;
  j["model"] = std::string(to_string(model));
  j["measure"] = std::string(to_string(measure));
  j["params"] = {{"n", n},   {"q0", q0},         {"q1", q1},         {"alpha", alpha},
                 {"k", k},   {"gamma0", gamma0}, {"gamma1", gamma1}, {"x0", x0}};
  j["sweep"] = {{"axis", std::string(to_string(axis))}, {"values", values}};
  j["runs"] = runs;
  j["seed"] = seed;
  if (!out.empty()) j["out"] = out;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    read_if(j, "preset", c.preset);
    read_if(j, "description", c.description);
    if (!j.contains("model")) throw ValidationError("config: missing 'model'");
    c.model = parse_model_kind(j.at("model").get<std::string>());
    if (!j.contains("measure")) throw ValidationError("config: missing 'measure'");
    c.measure = parse_measure(j.at("measure").get<std::string>());
    if (j.contains("params")) {
      const json& p = j.at("params");
      read_if(p, "n", c.n);
      read_if(p, "q0", c.q0);
      read_if(p, "q1", c.q1);
      read_if(p, "alpha", c.alpha);
      read_if(p, "k", c.k);
      read_if(p, "gamma0", c.gamma0);
      read_if(p, "gamma1", c.gamma1);
      read_if(p, "x0", c.x0);
    }
    if (!j.contains("sweep")) throw ValidationError("config: missing 'sweep'");
    const json& s = j.at("sweep");
    c.axis = parse_axis(s.at("axis").get<std::string>());
    c.values = s.at("values").get<std::vector<double>>();
    if (j.contains("runs")) {
      const auto runs = j.at("runs").get<long long>();
      if (runs < 1) throw ValidationError("config: runs must be >= 1");
      c.runs = static_cast<std::size_t>(runs);
    }
    read_if(j, "seed", c.seed);
    read_if(j, "out", c.out);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

ModelParams ExperimentConfig::params_at(double v) const {
  int cell_n = n, cell_k = k;
  double cell_alpha = alpha, cell_g0 = gamma0, cell_g1 = gamma1;
  switch (axis) {
    case SweepAxis::n: cell_n = as_integer(v, "n"); break;
    case SweepAxis::alpha: cell_alpha = v; break;
    case SweepAxis::k: cell_k = as_integer(v, "k"); break;
    case SweepAxis::gamma0: cell_g0 = v; break;
    case SweepAxis::gamma1: cell_g1 = v; break;
  }
  switch (model) {
    case ModelKind::voter: return VoterParams{cell_n, q0, q1, cell_alpha};
    case ModelKind::majority: return MajorityParams{cell_n, q0, q1, cell_k, cell_alpha};
    case ModelKind::stubborn: return StubbornParams{cell_n, cell_g0, cell_g1, x0, 1};
  }
  throw ValidationError("unknown model");
}

void ExperimentConfig::validate() const {
  if (values.empty()) throw ValidationError("config: sweep values are empty");
  if (runs < 1) throw ValidationError("config: runs must be >= 1");
  const bool stubborn = model == ModelKind::stubborn;
  if (stubborn != (measure == Measure::equilibrium)) {
    throw ValidationError("config: measure '" + std::string(to_string(measure)) + "' does not apply to model '" +
                          std::string(to_string(model)) + "'");
  }
  const bool axis_ok = [&] {
    switch (axis) {
      case SweepAxis::n: return !stubborn;
      case SweepAxis::alpha: return !stubborn;
      case SweepAxis::k: return model == ModelKind::majority;
      case SweepAxis::gamma0:
      case SweepAxis::gamma1: return stubborn;
    }
    return false;
  }();
  if (!axis_ok) {
    throw ValidationError("config: axis '" + std::string(to_string(axis)) + "' cannot be swept for model '" +
                          std::string(to_string(model)) + "'");
  }
  for (double v : values) {
    const ModelParams p = params_at(v);
    opindyn::validate(p);
    if (stubborn) {
      const auto& s = std::get<StubbornParams>(p);
      if (!(s.gamma0 > 0.0 && s.gamma1 > 0.0)) {
        throw ValidationError("config: equilibrium measure needs gamma0 > 0 and gamma1 > 0");
      }
    }
  }
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = config.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

ExperimentConfig preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) {
      ExperimentConfig c = ExperimentConfig::from_json(json::parse(p.config));
      c.preset = p.name;
      c.description = p.description;
      return c;
    }
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  os << '#' << provenance.dump() << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_cell(row[c]);
    os << '\n';
  }
  return os.str();
}

ordered_json make_provenance(std::string_view command, const ordered_json& config, std::uint64_t seed) {
  ordered_json p;
  p["tool"] = "opindyn";
  p["version"] = OPINDYN_VERSION;
  p["command"] = std::string(command);
  p["seed"] = seed;
  p["config"] = config;
  return p;
}

ExperimentConfig config_from_csv(std::string_view csv) {
  if (csv.empty() || csv.front() != '#') throw ValidationError("CSV has no provenance header");
  const auto eol = csv.find('\n');
  const json header = json::parse(csv.substr(1, eol == std::string_view::npos ? csv.size() - 1 : eol - 1));
  return ExperimentConfig::from_json(header.at("config"));
}

ResultTable run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  ResultTable table;
  table.provenance = make_provenance("run", config.to_json(), config.seed);
  table.provenance["config_hash"] = config_hash(config);
  if (!config.description.empty()) table.provenance["source"] = config.description;
  const std::string axis(to_string(config.axis));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (config.measure == Measure::equilibrium) {
    table.columns = {axis, "roots", "equilibrium_low", "equilibrium_high", "bistable"};
    for (double v : config.values) {
      const auto p = std::get<StubbornParams>(config.params_at(v));
      const EquilibriumReport rep = stubborn_equilibria(p.gamma0, p.gamma1);
      const auto stable = rep.stable_points();
      table.rows.push_back({v, static_cast<double>(rep.roots.size()), stable.empty() ? nan : stable.front(),
                            stable.empty() ? nan : stable.back(), rep.bistable() ? 1.0 : 0.0});
    }
    return table;
  }

  table.columns = {axis, "estimate", "stderr", "exact"};
  for (std::size_t cell = 0; cell < config.values.size(); ++cell) {
    const double v = config.values[cell];
    const ModelParams p = config.params_at(v);
    const std::uint64_t seed = sweep_cell_seed(config.seed, cell);
    const int start = initial_state(p);
    MonteCarloSummary mc;
    double exact = nan;
    if (config.measure == Measure::exit_probability) {
      mc = estimate_exit_probability(p, config.runs, seed, threads);
      if (const auto* vp = std::get_if<VoterParams>(&p)) exact = voter_exit_probability(*vp);
      else exact = majority_exit_profile(std::get<MajorityParams>(p)).at(start);
    } else {
      mc = estimate_consensus_time(p, config.runs, seed, threads);
      exact = mean_absorption_time(build_chain(p)).at(start);
    }
    table.rows.push_back({v, mc.estimate, mc.std_error, exact});
  }
  return table;
}

}  // namespace opindyn
