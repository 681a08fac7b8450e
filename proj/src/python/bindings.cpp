#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opindyn/error.hpp"
#include "opindyn/exact.hpp"
#include "opindyn/experiment.hpp"
#include "opindyn/gk.hpp"
#include "opindyn/meanfield.hpp"
#include "opindyn/simulator.hpp"

namespace py = pybind11;
using namespace opindyn;

namespace {

ModelParams make_params(const std::string& model, int n, double q0, double q1, int k, double alpha, double gamma0,
                        double gamma1) {
  switch (parse_model_kind(model)) {
    case ModelKind::voter: return VoterParams{n, q0, q1, alpha};
    case ModelKind::majority: return MajorityParams{n, q0, q1, k, alpha};
    case ModelKind::stubborn: return StubbornParams{n, gamma0, gamma1, alpha, 1};
  }
  throw ValidationError("unknown model");
}

py::dict summary_dict(const MonteCarloSummary& s) {
  py::dict d;
  d["n_runs"] = s.n_runs;
  d["estimate"] = s.estimate;
  d["std_error"] = s.std_error;
  d["master_seed"] = s.master_seed;
  d["seeds"] = s.seeds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Biased opinion dynamics: exact analysis, mean field and simulation";
  m.attr("__version__") = OPINDYN_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("g_k", &g_k, py::arg("x"), py::arg("k"));
  m.def("h_k", &h_k, py::arg("x"), py::arg("k"));
  m.def(
      "threshold_beta", [](double r, int k) { return threshold_beta(r, k).beta; }, py::arg("r"), py::arg("k"));

  m.def(
      "exit_probabilities",
      [](const std::string& model, int n, double q0, double q1, int k) {
        return exit_profile(build_chain(make_params(model, n, q0, q1, k, 0.5, 0.0, 0.0))).exit_prob;
      },
      py::arg("model"), py::arg("n"), py::arg("q0") = 1.0, py::arg("q1") = 1.0, py::arg("k") = 1,
      "Absorption probability at all-ones from every start state 0..n.");
  m.def(
      "mean_absorption_times",
      [](const std::string& model, int n, double q0, double q1, int k) {
        return mean_absorption_time(build_chain(make_params(model, n, q0, q1, k, 0.5, 0.0, 0.0))).mean_time;
      },
      py::arg("model"), py::arg("n"), py::arg("q0") = 1.0, py::arg("q1") = 1.0, py::arg("k") = 1);

  m.def(
      "integrate",
      [](const std::string& model, double x0, double t_end, double dt, double q0, double q1, int k, double gamma0,
         double gamma1) {
        MeanFieldModel field;
        switch (parse_model_kind(model)) {
          case ModelKind::voter: field = VoterField{q0, q1}; break;
          case ModelKind::majority: field = MajorityField{q0, q1, k}; break;
          case ModelKind::stubborn: field = StubbornField{gamma0, gamma1}; break;
        }
        const auto sol = integrate(field, x0, t_end, dt);
        return py::make_tuple(sol.t, sol.x);
      },
      py::arg("model"), py::arg("x0"), py::arg("t_end"), py::arg("dt") = 0.01, py::arg("q0") = 1.0,
      py::arg("q1") = 1.0, py::arg("k") = 1, py::arg("gamma0") = 0.0, py::arg("gamma1") = 0.0);

  m.def(
      "stubborn_equilibria",
      [](double gamma0, double gamma1) {
        const auto rep = stubborn_equilibria(gamma0, gamma1);
        py::list roots;
        for (const auto& e : rep.roots) roots.append(py::make_tuple(e.x, std::string(to_string(e.stability))));
        py::dict d;
        d["roots"] = roots;
        d["discriminant"] = rep.discriminant;
        d["regime"] = std::string(to_string(rep.regime));
        d["bistable"] = rep.bistable();
        return d;
      },
      py::arg("gamma0"), py::arg("gamma1"));

  m.def(
      "estimate_exit_probability",
      [](const std::string& model, int n, double q0, double q1, int k, double alpha, std::size_t runs,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        const auto s = estimate_exit_probability(make_params(model, n, q0, q1, k, alpha, 0.0, 0.0), runs, seed, threads);
        py::gil_scoped_acquire acquire;
        return summary_dict(s);
      },
      py::arg("model"), py::arg("n"), py::arg("q0") = 1.0, py::arg("q1") = 1.0, py::arg("k") = 1,
      py::arg("alpha") = 0.5, py::arg("runs") = 1000, py::arg("seed") = 1, py::arg("threads") = 0);
  m.def(
      "estimate_consensus_time",
      [](const std::string& model, int n, double q0, double q1, int k, double alpha, std::size_t runs,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        const auto s = estimate_consensus_time(make_params(model, n, q0, q1, k, alpha, 0.0, 0.0), runs, seed, threads);
        py::gil_scoped_acquire acquire;
        return summary_dict(s);
      },
      py::arg("model"), py::arg("n"), py::arg("q0") = 1.0, py::arg("q1") = 1.0, py::arg("k") = 1,
      py::arg("alpha") = 0.5, py::arg("runs") = 1000, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "simulate",
      [](const std::string& model, int n, double q0, double q1, int k, double alpha, double gamma0, double gamma1,
         double horizon, std::uint64_t seed) {
        const ModelParams p = make_params(model, n, q0, q1, k, alpha, gamma0, gamma1);
        validate(p);
        const auto path = simulate(build_chain(p), initial_state(p), horizon, seed);
        py::dict d;
        d["start"] = path.start_state;
        d["times"] = path.jump_times;
        d["states"] = path.states;
        d["terminal"] = std::string(to_string(path.terminal));
        d["end_time"] = path.end_time;
        return d;
      },
      py::arg("model"), py::arg("n"), py::arg("q0") = 1.0, py::arg("q1") = 1.0, py::arg("k") = 1,
      py::arg("alpha") = 0.5, py::arg("gamma0") = 0.0, py::arg("gamma1") = 0.0, py::arg("horizon") = kNoHorizon,
      py::arg("seed") = 1);

  m.def("preset_names", &preset_names);
  m.def(
      "run_config",
      [](const std::string& config_json, int threads) {
        const auto c = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        return run_experiment(c, threads).to_csv();
      },
      py::arg("config_json"), py::arg("threads") = 0, "Run a JSON experiment config; returns the CSV text.");
  m.def(
      "preset_config", [](const std::string& name) { return preset(name).to_json().dump(); }, py::arg("name"));
}
