#pragma once

#include <vector>

namespace opindyn {

__extension__ typedef __int128 ExactInt;

/// Odds ratio of the two majority tails,
///   g_K(x) = [P(Bin(2K, x) >= K+1) / x] / [P(Bin(2K, 1-x) >= K+1) / (1-x)].
///
/// Evaluated as phi(x / (1 - x)) where phi is the ratio of two integer
/// polynomials, which keeps it accurate near both ends of (0, 1).
/// Throws ValidationError unless 0 < x < 1 and 1 <= k <= 31.
double g_k(double x, int k);

/// The same quantity computed directly from the two binomial tails.
double g_k_from_tails(double x, int k);

/// d g_K / dx, from the analytic derivative of phi(psi(x)).
double g_k_derivative(double x, int k);

/// h_K(x) = sum_{i=K+1}^{2K} C(2K, i) (1-x)^(i-1) x^(2K-i).
double h_k(double x, int k);

struct ThresholdResult {
  double beta = 0.0;
  double residual = 0.0;  ///< |g_K(beta) - r|
  int iterations = 0;     ///< bisection plus Newton steps
};

/// beta = g_K^{-1}(r) for r in (0, 1]. Bisection to a 1e-9 bracket, then at
/// most five Newton steps. K = 1 is answered in closed form, r / (1 + r).
ThresholdResult threshold_beta(double r, int k);

/// Coefficients M_j, j = K+1 .. 3K-1, of the numerator A(t) of phi'(t),
/// from the closed-form sum. Exact integer arithmetic; K <= 16.
std::vector<ExactInt> phi_derivative_coefficients(int k);

}  // namespace opindyn
