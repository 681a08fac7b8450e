#include "opindyn/gk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opindyn/binomial.hpp"
#include "opindyn/error.hpp"

namespace opindyn {
namespace {

void check_argument(double x, int k, const char* who) {
  if (!(x > 0.0 && x < 1.0)) {
    throw ValidationError(std::string(who) + ": x must lie strictly inside (0, 1)");
  }
  if (k < 1 || k > 31) throw ValidationError(std::string(who) + ": k must be in [1, 31]");
}

// phi(t) = N(t) / D(t) with
//   N(t) = sum_{i=K+1}^{2K} C(2K, i) t^i,  D(t) = sum_{i=1}^{K} C(2K, i-1) t^i.
// Both share a factor t; we divide it out and evaluate
//   N(t)/t = sum_{i=K+1}^{2K} C(2K, i) t^(i-1),  D(t)/t = sum_{i=1}^{K} C(2K, i-1) t^(i-1).
struct PhiParts {
  long double num = 0.0L;
  long double den = 0.0L;
  long double dnum = 0.0L;  // d/dt of num
  long double dden = 0.0L;
};

PhiParts phi_parts(long double t, int k) {
  PhiParts parts;
  const int n = 2 * k;
  // Horner, highest power first.
  for (int i = n; i >= k + 1; --i) {
    parts.dnum = parts.dnum * t + parts.num;
    parts.num = parts.num * t + static_cast<long double>(binomial_coefficient(n, i));
  }
  // The numerator polynomial starts at t^K, so multiply by t^K afterwards.
  const long double tk = std::pow(t, k);
  const long double tk_prime = k * std::pow(t, k - 1);
  parts.dnum = parts.dnum * tk + parts.num * tk_prime;
  parts.num *= tk;
  for (int i = k; i >= 1; --i) {
    parts.dden = parts.dden * t + parts.den;
    parts.den = parts.den * t + static_cast<long double>(binomial_coefficient(n, i - 1));
  }
  return parts;
}

// For large t evaluate phi through 1/phi(1/t) to keep both polynomials bounded:
// g_K(x) g_K(1-x) = 1 and psi(1-x) = 1/psi(x).
long double phi(long double t, int k) {
  if (t > 1.0L) {
    const PhiParts p = phi_parts(1.0L / t, k);
    return p.den / p.num;
  }
  const PhiParts p = phi_parts(t, k);
  return p.num / p.den;
}

long double phi_prime(long double t, int k) {
  if (t > 1.0L) {
    // phi(t) = 1/phi(s), s = 1/t  =>  phi'(t) = phi'(s) / (phi(s)^2 t^2).
    const long double s = 1.0L / t;
    const PhiParts p = phi_parts(s, k);
    const long double value = p.num / p.den;
    const long double deriv = (p.dnum * p.den - p.num * p.dden) / (p.den * p.den);
    return deriv / (value * value * t * t);
  }
  const PhiParts p = phi_parts(t, k);
  return (p.dnum * p.den - p.num * p.dden) / (p.den * p.den);
}

}  // namespace

double g_k(double x, int k) {
  check_argument(x, k, "g_k");
  if (x > 0.5) {
    // psi(x) = x / (1 - x) loses accuracy only through 1 - x, which is exact here.
    const long double t = static_cast<long double>(1.0 - x) / static_cast<long double>(x);
    return static_cast<double>(1.0L / phi(t, k));
  }
  const long double t = static_cast<long double>(x) / static_cast<long double>(1.0 - x);
  return static_cast<double>(phi(t, k));
}

double g_k_from_tails(double x, int k) {
  check_argument(x, k, "g_k_from_tails");
  const long double lx = x;
  const long double one_tail = binomial_upper_tail(2 * k, lx, k + 1) / lx;
  const long double zero_tail = binomial_upper_tail(2 * k, 1.0L - lx, k + 1) / (1.0L - lx);
  return static_cast<double>(one_tail / zero_tail);
}

double g_k_derivative(double x, int k) {
  check_argument(x, k, "g_k_derivative");
  const long double lx = x;
  const long double one_minus = 1.0L - lx;
  const long double t = lx / one_minus;
  // psi'(x) = 1 / (1 - x)^2
  return static_cast<double>(phi_prime(t, k) / (one_minus * one_minus));
}

double h_k(double x, int k) {
  check_argument(x, k, "h_k");
  const int n = 2 * k;
  long double sum = 0.0L;
  const long double lx = x;
  for (int i = n; i >= k + 1; --i) {
    sum += static_cast<long double>(binomial_coefficient(n, i)) * std::pow(1.0L - lx, i - 1) *
           std::pow(lx, n - i);
  }
  return static_cast<double>(sum);
}

ThresholdResult threshold_beta(double r, int k) {
  if (!(r > 0.0 && r <= 1.0)) throw ValidationError("threshold_beta: r must be in (0, 1]");
  if (k < 1 || k > 31) throw ValidationError("threshold_beta: k must be in [1, 31]");

  ThresholdResult result;
  if (r == 1.0) {
    result.beta = 0.5;
  } else if (k == 1) {
    result.beta = r / (1.0 + r);
  } else {
    double lo = 1e-12;
    double hi = 0.5;  // g_K(1/2) = 1 >= r
    if (!(g_k(lo, k) < r && g_k(hi, k) >= r)) {
      throw NumericalError("threshold_beta: bracket does not straddle r");
    }
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if (g_k(mid, k) < r) lo = mid;
      else hi = mid;
      ++result.iterations;
    }
    double beta = 0.5 * (lo + hi);
    for (int step = 0; step < 5; ++step) {
      const double delta = (g_k(beta, k) - r) / g_k_derivative(beta, k);
      const double next = std::clamp(beta - delta, lo, hi);
      ++result.iterations;
      if (next == beta) break;
      beta = next;
    }
    result.beta = beta;
  }
  result.residual = std::abs(g_k(result.beta, k) - r);
  return result;
}

std::vector<ExactInt> phi_derivative_coefficients(int k) {
  if (k < 1 || k > kMaxExactHalfSample) {
    throw ValidationError("phi_derivative_coefficients: k must be in [1, 16]");
  }
  const int n = 2 * k;
  std::vector<ExactInt> coeffs;
  for (int j = k + 1; j <= 3 * k - 1; ++j) {
    ExactInt m = 0;
    // Pairs (numerator power a = j + 1 - i, denominator power i) with
    // K+1 <= a <= 2K and 1 <= i <= K.
    for (int i = std::max(1, j + 1 - n); i <= std::min(k, j - k); ++i) {
      m += static_cast<ExactInt>(binomial_coefficient(n, i - 1)) *
           static_cast<ExactInt>(binomial_coefficient(n, j - i + 1)) * (j + 1 - 2 * i);
    }
    coeffs.push_back(m);
  }
  return coeffs;
}

}  // namespace opindyn
