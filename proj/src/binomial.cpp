#include "opindyn/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace opindyn {

std::uint64_t binomial_coefficient(int n, int k) {
  if (n < 0 || n > 62) {
    throw std::out_of_range("binomial_coefficient: n must be in [0, 62]");
  }
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  // c * (n - i) is divisible by (i + 1) at every step, and stays below 2^64 for n <= 62.
  for (int i = 0; i < k; ++i) {
    c = c / static_cast<std::uint64_t>(i + 1) * static_cast<std::uint64_t>(n - i) +
        c % static_cast<std::uint64_t>(i + 1) * static_cast<std::uint64_t>(n - i) /
            static_cast<std::uint64_t>(i + 1);
  }
  return c;
}

long double binomial_upper_tail(int n, long double p, int k) {
  if (n < 0) throw std::invalid_argument("binomial_upper_tail: n must be >= 0");
  if (k <= 0) return 1.0L;
  if (k > n) return 0.0L;
  if (p <= 0.0L) return 0.0L;
  if (p >= 1.0L) return 1.0L;
  const long double q = 1.0L - p;
  long double sum = 0.0L;
  for (int i = n; i >= k; --i) {
    sum += static_cast<long double>(binomial_coefficient(n, i)) * std::pow(p, i) *
           std::pow(q, n - i);
  }
  return sum;
}

}  // namespace opindyn
