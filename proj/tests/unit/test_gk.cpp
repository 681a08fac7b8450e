#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "opindyn/binomial.hpp"
#include "opindyn/error.hpp"
#include "opindyn/gk.hpp"
#include "opindyn/model.hpp"

using namespace opindyn;
using doctest::Approx;

namespace {

// A(t) = N'(t) D(t) - N(t) D'(t) by explicit polynomial multiplication.
std::vector<ExactInt> a_polynomial(int k) {
  const int n = 2 * k;
  std::vector<ExactInt> num(n + 1, 0), den(n + 1, 0), dnum(n + 1, 0), dden(n + 1, 0);
  for (int i = k + 1; i <= n; ++i) num[i] = binomial_coefficient(n, i);
  for (int i = 1; i <= k; ++i) den[i] = binomial_coefficient(n, i - 1);
  for (int i = 1; i <= n; ++i) {
    dnum[i - 1] = num[i] * i;
    dden[i - 1] = den[i] * i;
  }
  std::vector<ExactInt> a(2 * n + 1, 0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) a[i + j] += dnum[i] * den[j] - num[i] * dden[j];
  }
  return a;
}

}  // namespace

TEST_CASE("g_1 is the plain odds ratio") {
  for (double x : {0.01, 0.1, 0.375, 0.5, 0.77, 0.99}) CHECK(g_k(x, 1) == Approx(x / (1.0 - x)).epsilon(1e-15));
  CHECK(g_k(0.375, 1) == Approx(0.6).epsilon(1e-15));
}

TEST_CASE("g_K(1/2) = 1 for every K") {
  for (int k = 1; k <= 31; ++k) CHECK(g_k(0.5, k) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("g_K: rational form agrees with the binomial tail ratio") {
  // K = 2, x = 0.4: phi(2/3) = (4 t^2 + t^3) / (1 + 4 t) = 56/99.
  CHECK(g_k(0.4, 2) == Approx(56.0 / 99.0).epsilon(1e-15));
  CHECK(g_k_from_tails(0.4, 2) == Approx(56.0 / 99.0).epsilon(1e-14));
  for (int k = 1; k <= 16; ++k) {
    for (int i = 1; i < 100; ++i) {
      const double x = i / 100.0;
      CHECK(g_k(x, k) == Approx(g_k_from_tails(x, k)).epsilon(1e-11));
    }
  }
}

TEST_CASE("g_K rejects the closed endpoints") {
  CHECK_THROWS_AS(g_k(0.0, 2), ValidationError);
  CHECK_THROWS_AS(g_k(1.0, 2), ValidationError);
  CHECK_THROWS_AS(g_k(0.5, 0), ValidationError);
  CHECK_THROWS_AS(h_k(1.0, 1), ValidationError);
}

TEST_CASE("g_K derivative matches central differences") {
  for (int k : {1, 2, 3, 5, 8}) {
    for (double x : {0.05, 0.2, 0.41, 0.5, 0.63, 0.9}) {
      const double h = 1e-6;
      const double fd = (g_k(x + h, k) - g_k(x - h, k)) / (2 * h);
      CHECK(g_k_derivative(x, k) == Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("h_K values") {
  CHECK(h_k(0.25, 1) == Approx(0.75));
  CHECK(h_k(1.0 - 1e-12, 1) == Approx(0.0).epsilon(1e-10));
  CHECK(h_k(0.5, 3) == Approx(0.6875).epsilon(1e-15));
  for (int k = 1; k <= 10; ++k) {
    for (int i = 1; i < 50; ++i) CHECK(h_k(i / 50.0, k) > 0.0);
  }
}

TEST_CASE("h_K equals the zero-tail divided by 1 - x") {
  for (int k = 1; k <= 8; ++k) {
    for (double x : {0.1, 0.3, 0.5, 0.8}) {
      const double tail = static_cast<double>(binomial_upper_tail(2 * k, 1.0L - x, k + 1));
      CHECK(h_k(x, k) == Approx(tail / (1.0 - x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("threshold: closed forms") {
  const auto r06 = threshold_beta(0.6, 1);
  CHECK(r06.beta == Approx(0.375).epsilon(1e-15));
  CHECK(r06.residual <= 1e-12);
  for (int k = 1; k <= 8; ++k) {
    const auto t = threshold_beta(1.0, k);
    CHECK(t.beta == 0.5);
    CHECK(t.residual <= 1e-12);
  }
  for (double r : {0.1, 0.25, 0.9}) CHECK(threshold_beta(r, 1).beta == Approx(r / (1 + r)).epsilon(1e-15));
}

TEST_CASE("threshold: K = 2 root of t^3 + 4t^2 - 2.4t - 0.6") {
  // Root t* = 0.6950428749400056 (30-digit solve), beta = t* / (1 + t*).
  const auto t = threshold_beta(0.6, 2);
  CHECK(t.beta == Approx(0.41004442142185103).epsilon(1e-12));
  CHECK(t.residual <= 1e-12);
  CHECK(std::abs(g_k_from_tails(t.beta, 2) - 0.6) <= 1e-12);
}

TEST_CASE("threshold: residual bound across K and r") {
  for (int k = 1; k <= 16; ++k) {
    for (double r : {0.05, 0.2, 0.5, 0.6, 0.75, 0.99, 1.0}) {
      const auto t = threshold_beta(r, k);
      CHECK(t.beta > 0.0);
      CHECK(t.beta <= 0.5);
      CHECK(t.residual <= 1e-12);
    }
  }
}

TEST_CASE("threshold rejects r outside (0, 1]") {
  CHECK_THROWS_AS(threshold_beta(1.5, 1), ValidationError);
  CHECK_THROWS_AS(threshold_beta(0.0, 2), ValidationError);
  CHECK_THROWS_AS(threshold_beta(0.5, 0), ValidationError);
}

TEST_CASE("g_K monotone and reciprocal on a fine grid") {
  for (int k = 1; k <= 16; ++k) {
    double prev = 0.0;
    for (int i = 1; i < 10000; ++i) {
      const double x = i / 10000.0;
      const double g = g_k(x, k);
      CHECK_MESSAGE(g > prev, "k=" << k << " x=" << x);
      prev = g;
      // Pair each grid point with its exact complement: 1 - y is exact for y >= 1/2.
      const double y = 1.0 - x;
      const double xc = 1.0 - y;
      CHECK_MESSAGE(std::abs(g_k(xc, k) * g_k(y, k) - 1.0) <= 1e-12, "k=" << k << " x=" << x);
    }
  }
}

TEST_CASE("M_j: closed-form sum matches explicit polynomial product and is positive") {
  for (int k = 1; k <= 16; ++k) {
    const auto closed = phi_derivative_coefficients(k);
    const auto direct = a_polynomial(k);
    REQUIRE(closed.size() == static_cast<std::size_t>(2 * k - 1));
    for (int j = 0; j < static_cast<int>(direct.size()); ++j) {
      if (j >= k + 1 && j <= 3 * k - 1) {
        CHECK(direct[j] == closed[j - k - 1]);
        CHECK(closed[j - k - 1] > 0);
      } else {
        CHECK(direct[j] == 0);
      }
    }
  }
  CHECK_THROWS_AS(phi_derivative_coefficients(17), ValidationError);
}

TEST_CASE("embedded jump probability two ways") {
  for (int k = 1; k <= 4; ++k) {
    const MajorityParams p{60, 1.0, 0.6, k, 0.5};
    const auto chain = build_majority_chain(p);
    const double r = p.q1 / p.q0;
    for (int n = 1; n < 60; ++n) {
      const double from_rates = chain.up(n) / chain.total(n);
      const double g = g_k(n / 60.0, k);
      CHECK(std::abs(from_rates - g / (g + r)) <= 1e-12);
    }
  }
}
