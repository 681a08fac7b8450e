#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "opindyn/model.hpp"

namespace opindyn {

/// x' = (q0 - q1) x (1 - x)
double voter_meanfield_rhs(double x, double q0, double q1);

/// x' = q0 x (1 - x) h_K(x) (g_K(x) - r), r = q1 / q0.
///
/// Evaluated through the equivalent rate form
///   q0 (1 - x) P(Bin(2K, x) >= K+1) - q1 x P(Bin(2K, 1-x) >= K+1),
/// which is a polynomial and stays finite at and slightly beyond the ends of [0, 1].
double majority_meanfield_rhs(double x, double q0, double q1, int k);

/// f(x) = (1 - x)[(1 - g0 - g1) x + g1]^2 - x[(1 - g0 - g1)(1 - x) + g0]^2
double stubborn_meanfield_rhs(double x, double gamma0, double gamma1);

/// Time for x' = (q0 - q1) x (1 - x) to travel from alpha to eps:
///   (logit(eps) - logit(alpha)) / (q0 - q1). Negative when eps lies behind alpha.
double voter_hit_time(double alpha, double eps, double q0, double q1);

struct VoterField {
  double q0 = 1.0;
  double q1 = 1.0;
};
struct MajorityField {
  double q0 = 1.0;
  double q1 = 1.0;
  int k = 1;
};
struct StubbornField {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
};
using MeanFieldModel = std::variant<VoterField, MajorityField, StubbornField>;

/// Mean-field model matching a finite-N parameter set (exact real gammas for stubborn).
MeanFieldModel meanfield_model(const ModelParams& p);
double evaluate_rhs(const MeanFieldModel& model, double x);
std::string_view model_name(const MeanFieldModel& model);

struct MeanFieldSolution {
  MeanFieldModel model;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  double max_excursion = 0.0;  ///< largest distance outside [0, 1] before clamping

  /// Linear interpolation on the grid; clamps t to [t.front(), t.back()].
  double at(double time) const;
};

/// Maximum distance a step may leave [0, 1] before integration is rejected.
inline constexpr double kClampTolerance = 1e-9;

/// Fixed-step classical RK4 from x0 over [0, t_end] with step dt <= 0.01.
/// The last step is shortened to land on t_end. Throws NumericalError if a step
/// leaves [0, 1] by more than kClampTolerance.
MeanFieldSolution integrate(const MeanFieldModel& model, double x0, double t_end, double dt);

enum class Stability { stable, unstable, semistable };
std::string_view to_string(Stability s);

enum class Regime { monostable, bistable, degenerate_bistable };
std::string_view to_string(Regime r);

struct Equilibrium {
  double x = 0.0;
  Stability stability = Stability::stable;
};

/// Equilibria of the stubborn-agent mean field together with the quantities of
/// the bistability test: D, the critical points z1 >= z2 of f, and
///   cond_discriminant: D > 0
///   cond_critical_inside: 0 < z1, z2 < 1
///   cond_opposite_signs: f(z1) f(z2) <= 0.
struct EquilibriumReport {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  std::vector<Equilibrium> roots;  ///< distinct real roots in [0, 1], ascending
  double discriminant = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  bool cond_discriminant = false;
  bool cond_critical_inside = false;
  bool cond_opposite_signs = false;
  Regime regime = Regime::monostable;

  bool bistable() const { return regime != Regime::monostable; }
  std::vector<double> stable_points() const;
  /// The middle root separating the two basins; only meaningful when bistable.
  double separatrix() const;
};

/// Coefficients {c3, c2, c1, c0} of f as a cubic in x.
std::vector<double> stubborn_cubic_coefficients(double gamma0, double gamma1);

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0), ascending, each polished
/// by one Newton step. Repeated roots appear once.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

EquilibriumReport stubborn_equilibria(double gamma0, double gamma1);

}  // namespace opindyn
