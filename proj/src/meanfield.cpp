#include "opindyn/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "opindyn/binomial.hpp"
#include "opindyn/error.hpp"

namespace opindyn {

double voter_meanfield_rhs(double x, double q0, double q1) { return (q0 - q1) * x * (1.0 - x); }

double majority_meanfield_rhs(double x, double q0, double q1, int k) {
  if (x == 0.0 || x == 1.0) return 0.0;
  // The tail polynomials are evaluated directly (no clamping of p) so RK stages
  // that overshoot an end by a rounding error still see a smooth field.
  const int n = 2 * k;
  const long double lx = x;
  long double tail_one = 0.0L;
  long double tail_zero = 0.0L;
  for (int i = n; i >= k + 1; --i) {
    const long double c = static_cast<long double>(binomial_coefficient(n, i));
    tail_one += c * std::pow(lx, i) * std::pow(1.0L - lx, n - i);
    tail_zero += c * std::pow(1.0L - lx, i) * std::pow(lx, n - i);
  }
  return static_cast<double>(q0 * (1.0L - lx) * tail_one - q1 * lx * tail_zero);
}

double stubborn_meanfield_rhs(double x, double gamma0, double gamma1) {
  const double free = 1.0 - gamma0 - gamma1;
  const double draw_one = free * x + gamma1;
  const double draw_zero = free * (1.0 - x) + gamma0;
  return (1.0 - x) * draw_one * draw_one - x * draw_zero * draw_zero;
}

double voter_hit_time(double alpha, double eps, double q0, double q1) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("voter_hit_time: alpha must be in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("voter_hit_time: eps must be in (0, 1)");
  if (!(q0 > q1)) throw ValidationError("voter_hit_time: requires q0 > q1");
  return (std::log(eps / (1.0 - eps)) - std::log(alpha / (1.0 - alpha))) / (q0 - q1);
}

MeanFieldModel meanfield_model(const ModelParams& p) {
  validate(p);
  if (const auto* v = std::get_if<VoterParams>(&p)) return VoterField{v->q0, v->q1};
  if (const auto* m = std::get_if<MajorityParams>(&p)) return MajorityField{m->q0, m->q1, m->k};
  const auto& s = std::get<StubbornParams>(p);
  return StubbornField{s.gamma0, s.gamma1};
}

double evaluate_rhs(const MeanFieldModel& model, double x) {
  if (const auto* v = std::get_if<VoterField>(&model)) return voter_meanfield_rhs(x, v->q0, v->q1);
  if (const auto* m = std::get_if<MajorityField>(&model)) return majority_meanfield_rhs(x, m->q0, m->q1, m->k);
  const auto& s = std::get<StubbornField>(model);
  return stubborn_meanfield_rhs(x, s.gamma0, s.gamma1);
}

std::string_view model_name(const MeanFieldModel& model) {
  static constexpr std::string_view names[] = {"voter", "majority", "stubborn"};
  return names[model.index()];
}

double MeanFieldSolution::at(double time) const {
  if (time <= t.front()) return x.front();
  if (time >= t.back()) return x.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const auto hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (time - t[lo]) / (t[hi] - t[lo]);
  return x[lo] + w * (x[hi] - x[lo]);
}

MeanFieldSolution integrate(const MeanFieldModel& model, double x0, double t_end, double dt) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw ValidationError("integrate: x0 must be in [0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("integrate: t_end must be finite and >= 0");
  if (!(dt > 0.0 && dt <= 0.01)) throw ValidationError("integrate: dt must be in (0, 0.01]");
  if (const auto* m = std::get_if<MajorityField>(&model); m && (m->k < 1 || m->k > 31)) {
    throw ValidationError("integrate: k must be in [1, 31]");
  }

  MeanFieldSolution sol{model, dt, {}, {}, 0.0};
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  sol.t.reserve(steps + 1);
  sol.x.reserve(steps + 1);
  sol.t.push_back(0.0);
  sol.x.push_back(x0);

  const auto f = [&model](double x) { return evaluate_rhs(model, x); };
  double x = x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t_prev = sol.t.back();
    const double t_next = (i == steps) ? t_end : static_cast<double>(i) * dt;
    const double h = t_next - t_prev;
    const double k1 = f(x);
    const double k2 = f(x + 0.5 * h * k1);
    const double k3 = f(x + 0.5 * h * k2);
    const double k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double excursion = std::max(-x, x - 1.0);
    if (excursion > 0.0) {
      sol.max_excursion = std::max(sol.max_excursion, excursion);
      if (excursion > kClampTolerance) {
        throw NumericalError("integrate: step at t = " + std::to_string(t_next) +
                             " left [0, 1] by " + std::to_string(excursion) + "; reduce dt");
      }
      x = std::clamp(x, 0.0, 1.0);
    }
    sol.t.push_back(t_next);
    sol.x.push_back(x);
  }
  return sol;
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::semistable: return "semistable";
  }
  return "unknown";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::monostable: return "monostable";
    case Regime::bistable: return "bistable";
    case Regime::degenerate_bistable: return "degenerate-bistable";
  }
  return "unknown";
}

std::vector<double> EquilibriumReport::stable_points() const {
  std::vector<double> out;
  for (const auto& e : roots) {
    if (e.stability == Stability::stable) out.push_back(e.x);
  }
  return out;
}

double EquilibriumReport::separatrix() const {
  for (const auto& e : roots) {
    if (e.stability == Stability::unstable) return e.x;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> stubborn_cubic_coefficients(double gamma0, double gamma1) {
  // With a = 1 - g0 - g1 and b = a + g0 = 1 - g1:
  //   f(x) = (1 - x)(a x + g1)^2 - x (b - a x)^2
  const double a = 1.0 - gamma0 - gamma1;
  const double b = 1.0 - gamma1;
  return {-2.0 * a * a, a * a - 2.0 * a * gamma1 + 2.0 * a * b,
          2.0 * a * gamma1 - gamma1 * gamma1 - b * b, gamma1 * gamma1};
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) throw ValidationError("real_cubic_roots: leading coefficient is zero");
  const double a = c2 / c3;
  const double b = c1 / c3;
  const double c = c0 / c3;
  // x = t - a/3 turns the monic cubic into t^3 + p t + q.
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  const double scale = 4.0 * std::abs(p * p * p) + 27.0 * q * q;

  std::vector<double> roots;
  if (scale == 0.0) {
    roots.push_back(-shift);  // triple root
  } else if (std::abs(disc) <= 1e-13 * scale) {
    if (std::abs(p) <= 1e-15) {
      roots.push_back(-shift);
    } else {
      roots.push_back(3.0 * q / p - shift);
      roots.push_back(-1.5 * q / p - shift);
    }
  } else if (disc > 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  } else {
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) - shift);
  }

  const auto poly = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
  const auto slope = [&](double x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };
  for (double& r : roots) {
    const double d = slope(r);
    if (d != 0.0) {
      const double polished = r - poly(r) / d;
      if (std::abs(poly(polished)) <= std::abs(poly(r))) r = polished;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double l, double r) { return std::abs(l - r) <= 1e-9; }),
              roots.end());
  return roots;
}

EquilibriumReport stubborn_equilibria(double gamma0, double gamma1) {
  if (!(gamma0 > 0.0 && gamma1 > 0.0)) throw ValidationError("stubborn_equilibria: gammas must be > 0");
  if (!(gamma0 + gamma1 < 1.0)) throw ValidationError("stubborn_equilibria: gamma0 + gamma1 must be < 1");

  EquilibriumReport report;
  report.gamma0 = gamma0;
  report.gamma1 = gamma1;
  const auto f = [&](double x) { return stubborn_meanfield_rhs(x, gamma0, gamma1); };

  const auto c = stubborn_cubic_coefficients(gamma0, gamma1);
  constexpr double kOffset = 1e-6;
  for (double r : real_cubic_roots(c[0], c[1], c[2], c[3])) {
    if (r < -1e-12 || r > 1.0 + 1e-12) continue;
    const double left = f(r - kOffset);
    const double right = f(r + kOffset);
    Stability s = Stability::semistable;
    if (left > 0.0 && right < 0.0) s = Stability::stable;
    else if (left < 0.0 && right > 0.0) s = Stability::unstable;
    report.roots.push_back({std::clamp(r, 0.0, 1.0), s});
  }

  const double free = 1.0 - gamma0 - gamma1;
  report.discriminant = (gamma0 - gamma1) * (gamma0 - gamma1) + 3.0 * (1.0 - 2.0 * gamma0 - 2.0 * gamma1);
  report.cond_discriminant = report.discriminant > 0.0;
  if (report.discriminant >= 0.0) {
    const double centre = 3.0 - gamma0 - 5.0 * gamma1;
    const double root_d = std::sqrt(report.discriminant);
    report.z1 = (centre + root_d) / (6.0 * free);
    report.z2 = (centre - root_d) / (6.0 * free);
  } else {
    report.z1 = report.z2 = std::numeric_limits<double>::quiet_NaN();
  }
  report.cond_critical_inside = report.cond_discriminant && report.z1 > 0.0 && report.z1 < 1.0 &&
                                report.z2 > 0.0 && report.z2 < 1.0;
  const double product = f(report.z1) * f(report.z2);  // NaN when D < 0
  report.cond_opposite_signs = product <= 0.0;

  if (report.cond_discriminant && report.cond_critical_inside && report.cond_opposite_signs) {
    report.regime = product >= -1e-14 ? Regime::degenerate_bistable : Regime::bistable;
  }
  return report;
}

}  // namespace opindyn
