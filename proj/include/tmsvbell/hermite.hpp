#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace tmsvbell {

namespace detail {
inline constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^(-1/4)
}

/// Evaluate the normalized harmonic-oscillator eigenfunctions
/// psi_0(q) .. psi_{nmax-1}(q) by the upward recurrence
///   psi_n = q sqrt(2/n) psi_{n-1} - sqrt((n-1)/n) psi_{n-2}.
///
/// The recurrence is run on a power-of-two-scaled mantissa with an explicit
/// exponent. Starting from psi_0 ~ exp(-q^2/2) the plain recurrence
/// underflows to zero for q beyond ~38 and can never recover, even though
/// psi_n(q) is O(1) again once q is inside the classical region of level n;
/// carrying the exponent separately keeps the recurrence exact (scaling by
/// 2^k is lossless) and only the final ldexp may underflow, at which point
/// the true value is below the smallest subnormal anyway.
inline void hermite_psi_all(int nmax, double q, double* out) {
  if (nmax <= 0) return;
  const double log2e = std::log2(std::numbers::e);
  const double e2 = -0.5 * q * q * log2e;  // log2 of the Gaussian factor
  int sc = static_cast<int>(std::floor(e2));
  double p = detail::kPiQuarterInv * std::exp2(e2 - sc);  // scaled psi_0
  double pm1 = 0.0;
  out[0] = (sc > -1074) ? std::ldexp(p, sc) : 0.0;
  for (int n = 1; n < nmax; ++n) {
    const double pn =
        q * std::sqrt(2.0 / n) * p - std::sqrt((n - 1.0) / n) * pm1;
    pm1 = p;
    p = pn;
    if (std::abs(p) > 0x1.0p512) {
      p = std::ldexp(p, -512);
      pm1 = std::ldexp(pm1, -512);
      sc += 512;
    }
    out[n] = (sc > -1074) ? std::ldexp(p, sc) : 0.0;
  }
}

/// Single normalized oscillator eigenfunction psi_n(q).
inline double hermite_psi(int n, double q) {
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  hermite_psi_all(n + 1, q, buf.data());
  return buf[static_cast<std::size_t>(n)];
}

}  // namespace tmsvbell
