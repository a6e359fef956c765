#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmsvbell/errors.hpp"

namespace tmsvbell {

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr double kDefaultZetaCap = 3.0;
/// Two-mode oracle limit. The exponential is applied to the N^2-dimensional
/// vector through the sparse generator, so this is a cost guard, not a
/// memory one.
inline constexpr int kOracleMaxDim = 192;

/// Dimensionless squeezing parameter. Restricted to zeta >= 0 at the API
/// boundary; the closed forms used here are only established for that range.
class SqueezeParam {
 public:
  explicit SqueezeParam(double zeta) : zeta_(zeta) {
    if (!std::isfinite(zeta) || zeta < 0.0)
      throw std::domain_error("squeeze parameter must be finite and >= 0, got " +
                              std::to_string(zeta));
  }
  double value() const noexcept { return zeta_; }

 private:
  double zeta_;
};

/// Fock-space truncation: dim levels 0..dim-1 per mode, dim even so the
/// even/odd half-spaces have equal size.
struct FockTruncation {
  int dim;
  double tail_tol;
};

/// Discarded Schmidt weight of the TMSV state above level N:
///   sum_{n>=N} lambda_n^2 = tanh(zeta)^(2N).
inline double schmidt_tail(double zeta, int levels) {
  const double t = std::tanh(zeta);
  if (t <= 0.0) return 0.0;
  return std::exp(2.0 * levels * std::log(t));
}

/// Smallest even N with discarded weight below tail_tol, from the geometric
/// tail in closed form.
inline FockTruncation truncation_for(SqueezeParam zeta,
                                     double tail_tol = kDefaultTailTol,
                                     double zeta_cap = kDefaultZetaCap) {
  if (!(tail_tol > 0.0))
    throw InvalidTolerance("tail tolerance must be > 0");
  if (zeta.value() > zeta_cap)
    throw CapExceeded("zeta=" + std::to_string(zeta.value()) +
                      " exceeds cap " + std::to_string(zeta_cap) +
                      "; the truncation would be impractically large");
  const double t = std::tanh(zeta.value());
  int n = 2;
  if (t > 0.0) {
    n = static_cast<int>(std::ceil(std::log(tail_tol) / (2.0 * std::log(t))));
    if (n < 2) n = 2;
    if (n % 2) ++n;
    while (n > 2 && schmidt_tail(zeta.value(), n - 2) < tail_tol) n -= 2;
    while (schmidt_tail(zeta.value(), n) >= tail_tol) n += 2;
  }
  return {n, tail_tol};
}

/// TMSV state in Schmidt form: lambda_n = tanh(zeta)^n / cosh(zeta).
/// Not renormalized after truncation; the deficit stays observable.
struct TmsvState {
  Eigen::VectorXd lambda;
  double zeta;

  int dim() const { return static_cast<int>(lambda.size()); }

  /// 1 - sum lambda_n^2, compensated so the truncation tail is not drowned
  /// by summation rounding at large dimensions.
  double norm_deficit() const {
    double s = 0.0, c = 0.0;
    for (int n = 0; n < dim(); ++n) {
      const double y = lambda[n] * lambda[n] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return 1.0 - s;
  }
};

inline TmsvState tmsv_state(SqueezeParam zeta, const FockTruncation& trunc) {
  const double t = std::tanh(zeta.value());
  Eigen::VectorXd lam(trunc.dim);
  lam[0] = 1.0 / std::cosh(zeta.value());
  for (int n = 1; n < trunc.dim; ++n) lam[n] = lam[n - 1] * t;
  return {lam, zeta.value()};
}

/// Diagonal reduced density weights over half-indices:
///   rho_n = tanh(zeta)^(2n) / cosh(zeta)^2,  n = 0..dim/2-1.
/// Off-diagonal elements vanish identically and are never stored. full_dim
/// is kept so the full-space trace formulas remain available.
struct ReducedDensity {
  Eigen::VectorXd rho;
  double zeta;
  int full_dim;

  int half_dim() const { return static_cast<int>(rho.size()); }

  /// Full-space trace sum_{n<full_dim} rho_n (= 1 - tail).
  double trace() const {
    const double t2 = std::tanh(zeta) * std::tanh(zeta);
    double s = 0.0, r = 1.0 / (std::cosh(zeta) * std::cosh(zeta));
    for (int n = 0; n < full_dim; ++n, r *= t2) s += r;
    return s;
  }

  /// Full-space purity Tr rho^2; equals 1/cosh(2 zeta) up to the tail.
  double purity() const {
    const double t4 = std::pow(std::tanh(zeta), 4);
    const double c2 = std::cosh(zeta) * std::cosh(zeta);
    double s = 0.0, r = 1.0 / (c2 * c2);
    for (int n = 0; n < full_dim; ++n, r *= t4) s += r;
    return s;
  }
};

inline ReducedDensity reduced_density(const TmsvState& state) {
  const int half = state.dim() / 2;
  const double t = std::tanh(state.zeta);
  Eigen::VectorXd rho(half);
  const double c = std::cosh(state.zeta);
  rho[0] = 1.0 / (c * c);
  for (int n = 1; n < half; ++n) rho[n] = rho[n - 1] * t * t;

  // Consistency with the Schmidt coefficients:
  //   sinh(2 zeta)/2 * rho_n * rho_m = lambda_{2n} * lambda_{2m+1}.
  const double half_sinh = 0.5 * std::sinh(2.0 * state.zeta);
  for (int n : {0, half / 2, half - 1}) {
    for (int m : {0, half / 2, half - 1}) {
      const double lhs = half_sinh * rho[n] * rho[m];
      const double rhs = state.lambda[2 * n] * state.lambda[2 * m + 1];
      if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs)))
        throw Error("reduced density inconsistent with Schmidt coefficients");
    }
  }
  return {rho, state.zeta, state.dim()};
}

/// Two-mode amplitude array amp(n, m) = <n m | psi>.
struct TwoModeVector {
  Eigen::MatrixXcd amp;
};

namespace detail {

/// y = zeta (a^dag b^dag - a b) x on the truncated |n,m> grid.
inline void two_mode_generator_apply(double zeta, int dim,
                                     const Eigen::VectorXd& x,
                                     Eigen::VectorXd& y) {
  y.setZero();
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      const double v = x[n * dim + m];
      if (v == 0.0) continue;
      if (n + 1 < dim && m + 1 < dim)
        y[(n + 1) * dim + (m + 1)] +=
            zeta * std::sqrt((n + 1.0) * (m + 1.0)) * v;
      if (n > 0 && m > 0)
        y[(n - 1) * dim + (m - 1)] -= zeta * std::sqrt(double(n) * m) * v;
    }
  }
}

}  // namespace detail

/// Verification oracle for the Schmidt form: exp(zeta (a^dag b^dag - a b))
/// applied to |00> by scaling-and-squaring with a Taylor inner step, then
/// normalized. Quarantined off the hot path; cost grows with dim^2 * zeta.
inline TwoModeVector squeeze_oracle(SqueezeParam zeta,
                                    const FockTruncation& trunc,
                                    int max_dim = kOracleMaxDim) {
  const int n = trunc.dim;
  if (n > max_dim)
    throw DimensionTooLarge("oracle dimension " + std::to_string(n) +
                            " exceeds limit " + std::to_string(max_dim));
  const double norm_bound = 2.0 * zeta.value() * n;
  int squarings = 0;
  while (norm_bound / std::exp2(squarings) > 2.0) ++squarings;
  const double step = 1.0 / std::exp2(squarings);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n * n);
  v[0] = 1.0;
  Eigen::VectorXd term = v, next(n * n);
  for (int s = 0; s < (1 << squarings); ++s) {
    term = v;
    for (int k = 1; k <= 60; ++k) {
      detail::two_mode_generator_apply(zeta.value() * step, n, term, next);
      term = next / double(k);
      v += term;
      if (term.norm() < 1e-18 * v.norm()) break;
    }
  }
  v /= v.norm();

  Eigen::MatrixXcd amp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) amp(i, j) = v[i * n + j];
  return {amp};
}

/// |<oracle | schmidt>| with both vectors normalized.
inline double schmidt_overlap(const TwoModeVector& oracle,
                              const TmsvState& state) {
  if (oracle.amp.rows() != state.dim())
    throw DimensionMismatch("oracle/state dimension mismatch");
  const Eigen::VectorXd lam = state.lambda / state.lambda.norm();
  std::complex<double> ov = 0.0;
  for (int k = 0; k < state.dim(); ++k)
    ov += std::conj(oracle.amp(k, k)) * lam[k];
  return std::abs(ov);
}

/// Entanglement entropy of the Schmidt spectrum, -sum p ln p with
/// p_n = lambda_n^2 (renormalized over the truncation).
inline double schmidt_entropy(const TmsvState& state) {
  const double total = state.lambda.squaredNorm();
  double s = 0.0;
  for (int k = 0; k < state.dim(); ++k) {
    const double p = state.lambda[k] * state.lambda[k] / total;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace tmsvbell
