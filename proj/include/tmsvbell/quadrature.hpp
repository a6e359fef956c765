#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "tmsvbell/errors.hpp"

namespace tmsvbell {

/// Gauss-Legendre nodes and weights on [a, b]. Roots of P_n by Newton
/// iteration on the standard interval, then affine map.
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;

  GaussLegendre(int n, double a, double b) : x(n), w(n) {
    if (n < 1) throw InvalidTolerance("gauss-legendre: need at least one node");
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-15) break;
      }
      x[i] = xm - xl * z;
      x[n - 1 - i] = xm + xl * z;
      w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

/// Half-line quadrature plan for oscillator-eigenfunction products: the
/// interval must reach past the classical turning point of the highest level
/// and the node count must resolve its oscillations.
struct QuadratureSpec {
  double q_max;
  int nodes;

  /// Default plan for integrands built from levels 0..max_level-1.
  /// q_max = sqrt(2(2 max_level + 1)) + 6 clears the turning point; three
  /// nodes per level keeps the Gram certificate near machine precision.
  static QuadratureSpec for_levels(int max_level) {
    const double q = std::sqrt(2.0 * (2.0 * max_level + 1.0)) + 6.0;
    const int n = std::max(128, 3 * max_level);
    return {q, n};
  }
};

}  // namespace tmsvbell
