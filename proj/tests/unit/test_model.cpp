#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "opindyn/binomial.hpp"
#include "opindyn/error.hpp"
#include "opindyn/model.hpp"

using namespace opindyn;
using doctest::Approx;

TEST_CASE("binomial coefficients are exact") {
  CHECK(binomial_coefficient(4, 2) == 6);
  CHECK(binomial_coefficient(32, 16) == 601080390ULL);
  CHECK(binomial_coefficient(62, 31) == 465428353255261088ULL);
  CHECK(binomial_coefficient(10, 11) == 0);
  CHECK(binomial_coefficient(10, -1) == 0);
  for (int n = 1; n <= 40; ++n) {
    for (int k = 1; k < n; ++k) {
      CHECK(binomial_coefficient(n, k) == binomial_coefficient(n - 1, k - 1) + binomial_coefficient(n - 1, k));
    }
  }
}

TEST_CASE("binomial tail matches enumeration over all outcomes") {
  // Frozen from the enumeration oracle: P[Bin(4,0.7)>=3] = 0.6517, P[Bin(4,0.3)>=3] = 0.0837.
  CHECK(static_cast<double>(binomial_upper_tail(4, 0.7L, 3)) == Approx(0.6517).epsilon(1e-12));
  CHECK(static_cast<double>(binomial_upper_tail(4, 0.3L, 3)) == Approx(0.0837).epsilon(1e-12));
  CHECK(oracle::enumerated_tail(4, 0.7, 3) == Approx(0.6517).epsilon(1e-12));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 15);
    const int k = static_cast<int>(gen() % (n + 2));
    const double p = unit(gen);
    CHECK(static_cast<double>(binomial_upper_tail(n, p, k)) ==
          Approx(oracle::enumerated_tail(n, p, k)).epsilon(1e-12));
  }
  CHECK(binomial_upper_tail(6, 0.0L, 1) == 0.0L);
  CHECK(binomial_upper_tail(6, 1.0L, 6) == 1.0L);
  CHECK(binomial_upper_tail(6, 0.3L, 0) == 1.0L);
}

TEST_CASE("voter chain rates") {
  const auto chain = build_voter_chain({10, 1.0, 0.5, 0.2});
  CHECK(chain.max_state() == 10);
  CHECK(chain.up(5) == Approx(2.5));
  CHECK(chain.down(5) == Approx(1.25));
  CHECK(chain.up(0) == 0.0);
  CHECK(chain.down(0) == 0.0);
  CHECK(chain.up(10) == 0.0);
  CHECK(chain.down(10) == 0.0);
  CHECK(chain.absorbing_low());
  CHECK(chain.absorbing_high());

  const auto big = build_voter_chain({100, 1.0, 0.5, 0.4});
  CHECK(big.up(40) == Approx(24.0));
  CHECK(big.down(40) == Approx(12.0));
  for (int k = 1; k < 100; ++k) CHECK(big.up(k) / big.down(k) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("voter chain rejects invalid parameters") {
  CHECK_THROWS_AS(build_voter_chain({1, 1.0, 0.5, 0.2}), ValidationError);
  CHECK_THROWS_AS(build_voter_chain({10, 0.0, 0.5, 0.2}), ValidationError);
  CHECK_THROWS_AS(build_voter_chain({10, 1.0, 1.5, 0.2}), ValidationError);
  CHECK_THROWS_AS(build_voter_chain({10, 1.0, 0.5, 1.2}), ValidationError);
}

TEST_CASE("majority chain rates") {
  const auto chain = build_majority_chain({4, 1.0, 0.6, 1, 0.5});
  CHECK(chain.up(2) == Approx(0.5));
  CHECK(chain.down(2) == Approx(0.3));
  CHECK(chain.up(0) == 0.0);
  CHECK(chain.down(0) == 0.0);
  CHECK(chain.up(4) == 0.0);
  CHECK(chain.down(4) == 0.0);

  const auto k2 = build_majority_chain({10, 1.0, 0.6, 2, 0.5});
  CHECK(k2.up(7) == Approx(3 * 1.0 * oracle::enumerated_tail(4, 0.7, 3)).epsilon(1e-12));
  CHECK(k2.down(7) == Approx(7 * 0.6 * oracle::enumerated_tail(4, 0.3, 3)).epsilon(1e-12));
  CHECK(k2.up(7) == Approx(3 * 0.6517).epsilon(1e-12));
  CHECK(k2.down(7) == Approx(7 * 0.6 * 0.0837).epsilon(1e-12));

  CHECK_THROWS_AS(build_majority_chain({10, 1.0, 0.6, 0, 0.5}), ValidationError);
}

TEST_CASE("majority chain is symmetric at the midpoint when q0 = q1") {
  for (int k = 1; k <= 6; ++k) {
    for (int n : {10, 50, 100}) {
      const auto chain = build_majority_chain({n, 0.7, 0.7, k, 0.5});
      CHECK(chain.up(n / 2) == Approx(chain.down(n / 2)).epsilon(1e-14));
    }
  }
}

TEST_CASE("stubborn chain rates") {
  const StubbornParams p{10, 0.2, 0.2, 0.0, 1};
  CHECK(p.stubborn_zero() == 2);
  CHECK(p.stubborn_one() == 2);
  CHECK(p.free_agents() == 6);
  const auto chain = build_stubborn_chain(p);
  CHECK(chain.max_state() == 6);
  CHECK(chain.up(0) == Approx(0.24));
  CHECK(chain.down(0) == 0.0);
  CHECK(chain.up(3) == Approx(0.75));
  CHECK(chain.down(3) == Approx(0.75));  // 3 * ((6 - 3 + 2) / 10)^2

  const auto big = build_stubborn_chain({100, 0.2, 0.2, 0.5, 1});
  CHECK_FALSE(big.absorbing_low());
  CHECK_FALSE(big.absorbing_high());
  for (int m = 0; m <= big.max_state(); ++m) CHECK(big.total(m) > 0.0);
}

TEST_CASE("stubborn chain mirror symmetry") {
  for (int n : {10, 50, 101, 400}) {
    for (double g : {0.05, 0.1, 0.2, 0.3}) {
      if (floor_fraction(g, n) == 0) continue;
      const auto chain = build_stubborn_chain({n, g, g, 0.5, 1});
      const int m = chain.max_state();
      for (int s = 0; s <= m; ++s) CHECK(chain.up(s) == Approx(chain.down(m - s)).epsilon(1e-14));
    }
  }
}

TEST_CASE("stubborn chain validation") {
  CHECK_THROWS_AS(build_stubborn_chain({10, 0.5, 0.5, 0.5, 1}), ValidationError);
  CHECK_THROWS_AS(build_stubborn_chain({10, 0.05, 0.2, 0.5, 1}), ValidationError);  // floor(0.5) = 0
  CHECK_THROWS_AS(build_stubborn_chain({10, 0.2, 0.2, 0.5, 2}), ValidationError);
  CHECK_NOTHROW(build_stubborn_chain({10, 0.0, 0.2, 0.5, 1}));
}

TEST_CASE("rates are non-negative and vanish only at absorbing states") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> q(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 60);
    const int k = 1 + static_cast<int>(gen() % 5);
    for (const auto& chain : {build_voter_chain({n, q(gen), q(gen), 0.5}),
                              build_majority_chain({n, q(gen), q(gen), k, 0.5})}) {
      for (int s = 0; s <= n; ++s) {
        CHECK(chain.up(s) >= 0.0);
        CHECK(chain.down(s) >= 0.0);
        const bool boundary = s == 0 || s == n;
        CHECK((chain.total(s) == 0.0) == boundary);
      }
    }
  }
}

TEST_CASE("initial state uses floor with rounding guard") {
  CHECK(initial_state(VoterParams{100, 1.0, 0.5, 0.29}) == 29);
  CHECK(initial_state(VoterParams{10, 1.0, 0.5, 0.2}) == 2);
  CHECK(initial_state(MajorityParams{7, 1.0, 0.5, 1, 0.5}) == 3);
  CHECK(initial_state(StubbornParams{10, 0.2, 0.2, 0.5, 1}) == 3);
  CHECK(initial_state(VoterParams{10, 1.0, 0.5, 1.0}) == 10);
}

TEST_CASE("model kind names") {
  CHECK(parse_model_kind("majority") == ModelKind::majority);
  CHECK(to_string(ModelKind::stubborn) == "stubborn");
  CHECK_THROWS_AS(parse_model_kind("ising"), ValidationError);
}
