#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "opindyn/error.hpp"
#include "opindyn/gk.hpp"
#include "opindyn/meanfield.hpp"

using namespace opindyn;
using doctest::Approx;

TEST_CASE("voter mean-field rhs") {
  CHECK(voter_meanfield_rhs(0.0, 1.0, 0.5) == 0.0);
  CHECK(voter_meanfield_rhs(1.0, 1.0, 0.5) == 0.0);
  CHECK(voter_meanfield_rhs(0.5, 1.0, 0.5) == Approx(0.125));
  CHECK(voter_meanfield_rhs(0.3, 0.7, 0.7) == 0.0);
}

TEST_CASE("voter hitting time") {
  CHECK(voter_hit_time(0.4, 0.4, 1.0, 0.5) == 0.0);
  CHECK(voter_hit_time(0.4, 1.0 - 1.0 / 100, 1.0, 0.5) == Approx(2.0 * (std::log(99.0) - std::log(2.0 / 3.0))).epsilon(1e-14));
  CHECK(voter_hit_time(0.4, 0.99, 1.0, 0.5) == Approx(10.0012).epsilon(1e-5));
  CHECK(voter_hit_time(0.2, 0.8, 1.0, 0.5) == Approx(4.0 * std::log(4.0)).epsilon(1e-14));
  CHECK(voter_hit_time(0.8, 0.2, 1.0, 0.5) == Approx(-4.0 * std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(voter_hit_time(0.0, 0.5, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(voter_hit_time(0.5, 1.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(voter_hit_time(0.5, 0.6, 0.5, 1.0), ValidationError);
}

TEST_CASE("voter hitting time matches the integrated trajectory") {
  const double t = voter_hit_time(0.3, 0.9, 1.0, 0.5);
  const auto sol = integrate(VoterField{1.0, 0.5}, 0.3, t, 0.001);
  CHECK(sol.x.back() == Approx(0.9).epsilon(1e-10));
}

TEST_CASE("majority rhs: K = 1 reduction and the g_K / h_K form") {
  CHECK(majority_meanfield_rhs(0.5, 1.0, 0.6, 1) == Approx(0.05).epsilon(1e-14));
  CHECK(majority_meanfield_rhs(0.0, 1.0, 0.6, 3) == 0.0);
  CHECK(majority_meanfield_rhs(1.0, 1.0, 0.6, 3) == 0.0);
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    CHECK(majority_meanfield_rhs(x, 1.0, 0.6, 1) == Approx(x * (1 - x) * (1.6 * x - 0.6)).epsilon(1e-12));
    for (int k : {1, 2, 3, 6}) {
      const double via_g = 1.0 * x * (1 - x) * h_k(x, k) * (g_k(x, k) - 0.6);
      CHECK(majority_meanfield_rhs(x, 1.0, 0.6, k) == Approx(via_g).epsilon(1e-11).scale(1e-14));
    }
  }
}

TEST_CASE("majority rhs vanishes at beta and has the sign of x - beta") {
  for (int k = 1; k <= 6; ++k) {
    for (double q1 : {0.3, 0.6, 0.9}) {
      const double beta = threshold_beta(q1, k).beta;
      CHECK(std::abs(majority_meanfield_rhs(beta, 1.0, q1, k)) <= 1e-10);
      for (int i = 1; i < 1000; ++i) {
        const double x = i / 1000.0;
        if (std::abs(x - beta) < 1e-9) continue;
        const double v = majority_meanfield_rhs(x, 1.0, q1, k);
        CHECK((v > 0.0) == (x > beta));
      }
    }
  }
}

TEST_CASE("stubborn rhs") {
  CHECK(stubborn_meanfield_rhs(0.0, 0.1, 0.3) == Approx(0.09));
  CHECK(stubborn_meanfield_rhs(1.0, 0.1, 0.3) == Approx(-0.01));
  CHECK(stubborn_meanfield_rhs(0.5, 0.2, 0.2) == Approx(0.0).scale(1.0).epsilon(1e-16));
  CHECK(std::abs(stubborn_meanfield_rhs(0.127322, 0.2, 0.2)) <= 1e-5);
  CHECK(std::abs(stubborn_meanfield_rhs(0.872678, 0.2, 0.2)) <= 1e-5);
}

TEST_CASE("stubborn cubic coefficients reproduce f") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> g(0.0, 0.49);
  for (int trial = 0; trial < 100; ++trial) {
    const double g0 = g(gen), g1 = g(gen);
    const auto c = stubborn_cubic_coefficients(g0, g1);
    CHECK(c[0] == Approx(-2.0 * (1 - g0 - g1) * (1 - g0 - g1)));
    for (double x : {0.0, 0.17, 0.5, 0.93, 1.0}) {
      CHECK(std::abs(((c[0] * x + c[1]) * x + c[2]) * x + c[3] - stubborn_meanfield_rhs(x, g0, g1)) <= 1e-14);
    }
  }
}

TEST_CASE("cubic roots from known factorisations") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r = {u(gen), u(gen), u(gen)};
    std::sort(r.begin(), r.end());
    if (r[1] - r[0] < 1e-3 || r[2] - r[1] < 1e-3) continue;
    const double lead = 0.5 + std::abs(u(gen));
    const double c2 = -lead * (r[0] + r[1] + r[2]);
    const double c1 = lead * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]);
    const double c0 = -lead * r[0] * r[1] * r[2];
    const auto roots = real_cubic_roots(lead, c2, c1, c0);
    REQUIRE(roots.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(roots[i] == Approx(r[i]).epsilon(1e-9).scale(1.0));
  }
  // (x - 1)(x^2 + 1): one real root
  const auto one = real_cubic_roots(1.0, -1.0, 1.0, -1.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Approx(1.0));
  // (x - 2)^2 (x + 1): double root reported once
  const auto dbl = real_cubic_roots(1.0, -3.0, 0.0, 4.0);
  REQUIRE(dbl.size() == 2);
  CHECK(dbl[0] == Approx(-1.0));
  CHECK(dbl[1] == Approx(2.0).epsilon(1e-7));
  const auto triple = real_cubic_roots(1.0, -3.0, 3.0, -1.0);
  REQUIRE(triple.size() == 1);
  CHECK(triple[0] == Approx(1.0));
}

TEST_CASE("stubborn equilibria: symmetric bistable case") {
  const auto rep = stubborn_equilibria(0.2, 0.2);
  REQUIRE(rep.roots.size() == 3);
  CHECK(rep.roots[0].x == Approx(0.127322).epsilon(1e-5).scale(1.0));
  CHECK(rep.roots[1].x == Approx(0.5).epsilon(1e-12).scale(1.0));
  CHECK(rep.roots[2].x == Approx(0.872678).epsilon(1e-5).scale(1.0));
  CHECK(rep.roots[0].stability == Stability::stable);
  CHECK(rep.roots[1].stability == Stability::unstable);
  CHECK(rep.roots[2].stability == Stability::stable);
  CHECK(rep.discriminant == Approx(0.6));
  CHECK(rep.z1 == Approx((1.8 + std::sqrt(0.6)) / 3.6));
  CHECK(rep.z2 == Approx((1.8 - std::sqrt(0.6)) / 3.6));
  CHECK(rep.cond_discriminant);
  CHECK(rep.cond_critical_inside);
  CHECK(rep.cond_opposite_signs);
  CHECK(rep.regime == Regime::bistable);
  CHECK(rep.separatrix() == Approx(0.5));
  for (const auto& e : rep.roots) CHECK(std::abs(stubborn_meanfield_rhs(e.x, 0.2, 0.2)) <= 1e-10);
}

TEST_CASE("z1, z2 are the critical points of f") {
  for (auto [g0, g1] : {std::pair{0.2, 0.2}, std::pair{0.1, 0.15}, std::pair{0.05, 0.3}}) {
    const auto rep = stubborn_equilibria(g0, g1);
    const auto c = stubborn_cubic_coefficients(g0, g1);
    for (double z : {rep.z1, rep.z2}) CHECK((3 * c[0] * z + 2 * c[1]) * z + c[2] == Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stubborn equilibria: monostable case") {
  const auto rep = stubborn_equilibria(0.4, 0.4);
  CHECK(rep.discriminant == Approx(-1.8));
  CHECK_FALSE(rep.cond_discriminant);
  CHECK(rep.regime == Regime::monostable);
  REQUIRE(rep.roots.size() == 1);
  CHECK(rep.roots[0].x == Approx(0.5));
  CHECK(rep.roots[0].stability == Stability::stable);
  CHECK(std::isnan(rep.separatrix()));
}

TEST_CASE("stubborn equilibria validation") {
  CHECK_THROWS_AS(stubborn_equilibria(0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(stubborn_equilibria(0.0, 0.3), ValidationError);
}

TEST_CASE("stubborn equilibria agree with a fine sign scan") {
  for (auto [g0, g1] : {std::pair{0.2, 0.2}, std::pair{0.4, 0.4}, std::pair{0.05, 0.3}, std::pair{0.1, 0.12},
                        std::pair{0.01, 0.02}, std::pair{0.15, 0.05}}) {
    const auto rep = stubborn_equilibria(g0, g1);
    const auto scan = oracle::sign_scan([&](double x) { return stubborn_meanfield_rhs(x, g0, g1); }, 1000000);
    CHECK(static_cast<int>(rep.roots.size()) == scan.roots);
    CHECK(static_cast<int>(rep.stable_points().size()) == scan.stable);
    CHECK(rep.bistable() == (scan.stable >= 2));
    CHECK(rep.roots.size() >= 1);
    bool interior = false;
    for (const auto& e : rep.roots) {
      CHECK(std::abs(stubborn_meanfield_rhs(e.x, g0, g1)) <= 1e-10);
      interior = interior || (e.x > 0.0 && e.x < 1.0);
    }
    CHECK(interior);
  }
}

TEST_CASE("integrate: logistic solution to 1e-8") {
  const auto sol = integrate(VoterField{1.0, 0.5}, 0.3, 20.0, 0.001);
  REQUIRE(sol.t.size() == 20001);
  CHECK(sol.t.back() == 20.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    worst = std::max(worst, std::abs(sol.x[i] - oracle::logistic(0.3, 0.5, sol.t[i])));
  }
  CHECK(worst <= 1e-8);
  for (std::size_t i = 1; i < sol.x.size(); ++i) CHECK(sol.x[i] >= sol.x[i - 1]);
}

TEST_CASE("integrate: long-run limits") {
  CHECK(integrate(VoterField{1.0, 0.5}, 0.05, 80.0, 0.01).x.back() == Approx(1.0).epsilon(1e-6));
  CHECK(integrate(MajorityField{1.0, 0.6, 1}, 0.3, 200.0, 0.01).x.back() == Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(integrate(MajorityField{1.0, 0.6, 1}, 0.45, 200.0, 0.01).x.back() == Approx(1.0).epsilon(1e-6));
  CHECK(integrate(StubbornField{0.2, 0.2}, 0.9, 200.0, 0.01).x.back() == Approx(0.872678).epsilon(1e-5));
  CHECK(integrate(StubbornField{0.2, 0.2}, 0.3, 200.0, 0.01).x.back() == Approx(0.127322).epsilon(1e-5));
}

TEST_CASE("integrate: last step lands on t_end") {
  const auto sol = integrate(VoterField{1.0, 0.5}, 0.3, 0.105, 0.01);
  CHECK(sol.t.size() == 12);
  CHECK(sol.t.back() == 0.105);
  CHECK(sol.x.back() == Approx(oracle::logistic(0.3, 0.5, 0.105)).epsilon(1e-12));
  CHECK(sol.at(0.05) == Approx(oracle::logistic(0.3, 0.5, 0.05)).epsilon(1e-9));
}

TEST_CASE("integrate: trajectory derivative matches the field") {
  for (const MeanFieldModel& model : {MeanFieldModel{VoterField{1.0, 0.5}}, MeanFieldModel{MajorityField{1.0, 0.6, 2}},
                                      MeanFieldModel{StubbornField{0.1, 0.25}}}) {
    const double dt = 0.005;
    const auto sol = integrate(model, 0.55, 10.0, dt);
    for (std::size_t i = 1; i + 1 < sol.x.size(); i += 37) {
      const double fd = (sol.x[i + 1] - sol.x[i - 1]) / (2 * dt);
      CHECK(std::abs(fd - evaluate_rhs(model, sol.x[i])) <= 10 * dt * dt);
    }
  }
}

TEST_CASE("integrate: argument checks") {
  CHECK_THROWS_AS(integrate(VoterField{1.0, 0.5}, 0.3, 1.0, 0.02), ValidationError);
  CHECK_THROWS_AS(integrate(VoterField{1.0, 0.5}, 1.3, 1.0, 0.01), ValidationError);
  CHECK_THROWS_AS(integrate(VoterField{1.0, 0.5}, 0.3, -1.0, 0.01), ValidationError);
  const auto at_edge = integrate(MajorityField{1.0, 0.6, 4}, 1.0, 5.0, 0.01);
  CHECK(at_edge.x.back() == 1.0);
  CHECK(at_edge.max_excursion == 0.0);
}

TEST_CASE("mean-field model from finite-N parameters") {
  CHECK(model_name(meanfield_model(VoterParams{10, 1.0, 0.5, 0.2})) == "voter");
  const auto m = meanfield_model(StubbornParams{100, 0.2, 0.25, 0.5, 1});
  CHECK(std::get<StubbornField>(m).gamma1 == 0.25);
}
