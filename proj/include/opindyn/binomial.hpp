#pragma once

#include <cstdint>

namespace opindyn {

/// Largest K for which exact 64-bit binomial coefficients C(2K, i) are guaranteed.
inline constexpr int kMaxExactHalfSample = 16;

/// Exact C(n, k) for n <= 62. Returns 0 when k is outside [0, n].
std::uint64_t binomial_coefficient(int n, int k);

/// P[Bin(n, p) >= k], summed term by term in extended precision.
///
/// The pmf terms are accumulated from the largest index downward so the
/// small tail terms are added first. Exact at p = 0 and p = 1.
long double binomial_upper_tail(int n, long double p, int k);

}  // namespace opindyn
