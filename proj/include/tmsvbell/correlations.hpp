#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include <Eigen/Dense>

#include "tmsvbell/errors.hpp"
#include "tmsvbell/fock.hpp"
#include "tmsvbell/pseudospin.hpp"
#include "tmsvbell/quadrature.hpp"

namespace tmsvbell {

inline constexpr double kCondition15Tol = 1e-9;

/// K(i, j) = <zeta| Pi_i^(1) x Pi_j^(2) |zeta> over components x, y, z.
struct CorrelationTensor {
  Eigen::Matrix3d k;
};

/// Generic route: contraction over the Schmidt form,
///   <A x B> = sum_{k,l} lambda_k lambda_l A_{kl} B_{kl},
/// never materializing the N^2-dimensional joint vector.
inline CorrelationTensor correlation_tensor(const TmsvState& state,
                                            const OperatorSet& set1,
                                            const OperatorSet& set2) {
  const int n = state.dim();
  if (set1.dim() != n || set2.dim() != n)
    throw DimensionMismatch("correlation_tensor: operator/state dimensions");
  const Eigen::MatrixXcd* a[3] = {&set1.px, &set1.py, &set1.pz};
  const Eigen::MatrixXcd* b[3] = {&set2.px, &set2.py, &set2.pz};
  Eigen::Matrix3cd acc = Eigen::Matrix3cd::Zero();
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      const double w = state.lambda[k] * state.lambda[l];
      if (w == 0.0) continue;
      const Complex a0 = (*a[0])(k, l), a1 = (*a[1])(k, l), a2 = (*a[2])(k, l);
      const Complex b0 = (*b[0])(k, l), b1 = (*b[1])(k, l), b2 = (*b[2])(k, l);
      acc(0, 0) += w * a0 * b0;
      acc(0, 1) += w * a0 * b1;
      acc(0, 2) += w * a0 * b2;
      acc(1, 0) += w * a1 * b0;
      acc(1, 1) += w * a1 * b1;
      acc(1, 2) += w * a1 * b2;
      acc(2, 0) += w * a2 * b0;
      acc(2, 1) += w * a2 * b1;
      acc(2, 2) += w * a2 * b2;
    }
  }
  CorrelationTensor out;
  out.k = acc.real();
  return out;
}

enum class FRoute { direct, trace, integral, closed_form };

inline const char* to_string(FRoute r) {
  switch (r) {
    case FRoute::direct: return "direct";
    case FRoute::trace: return "trace";
    case FRoute::integral: return "integral";
    case FRoute::closed_form: return "closed-form";
  }
  return "?";
}

/// F with its two parity-block constituents. plus_plus = <Pi_+ x Pi_+>,
/// minus_minus = <Pi_- x Pi_->; on the Schmidt form they are complex
/// conjugates, so f = 2 Re plus_plus. Condition (15) (equality and
/// positivity of the pair) gates the 2 sqrt(1+F^2) orientational shortcut.
struct FResult {
  double f = 0.0;
  Complex plus_plus{0.0, 0.0};
  Complex minus_minus{0.0, 0.0};
  bool condition15_ok = false;
  FRoute route = FRoute::direct;
};

namespace detail {

inline FResult f_from_plus_plus(Complex p, FRoute route) {
  FResult r;
  r.plus_plus = p;
  r.minus_minus = std::conj(p);
  r.f = 2.0 * p.real();
  r.condition15_ok =
      std::abs(p.imag()) <= kCondition15Tol && p.real() >= -kCondition15Tol;
  r.route = route;
  return r;
}

}  // namespace detail

/// <Pi_+^(1) x Pi_+^(2)> = sum_{n,m} lambda_{2n} lambda_{2m+1} u1(n,m) u2(n,m).
/// (The second channel's matrix enters with the transposed index convention,
/// which in this storage layout is the same (n, m) entry.)
inline FResult f_direct(const TmsvState& state, const PseudospinConfig& cfg1,
                        const PseudospinConfig& cfg2) {
  const int hd = state.dim() / 2;
  if (cfg1.half_dim() != hd || cfg2.half_dim() != hd)
    throw DimensionMismatch("f_direct: config/state dimensions");
  Complex p(0.0, 0.0);
  for (int m = 0; m < hd; ++m) {
    const double lo = state.lambda[2 * m + 1];
    if (lo == 0.0) continue;
    for (int n = 0; n < hd; ++n)
      p += state.lambda[2 * n] * lo * cfg1.u(n, m) * cfg2.u(n, m);
  }
  return detail::f_from_plus_plus(p, FRoute::direct);
}

/// Trace route over the reduced density:
///   F = sinh(2 zeta)/2 [Tr(rho U1 rho U2) + Tr(rho U1^dag rho U2^dag)].
/// Algebraically identical to f_direct; the two must agree to 1e-12.
inline FResult f_trace(const ReducedDensity& rho, const PseudospinConfig& cfg1,
                       const PseudospinConfig& cfg2) {
  const int hd = rho.half_dim();
  if (cfg1.half_dim() != hd || cfg2.half_dim() != hd)
    throw DimensionMismatch("f_trace: config/density dimensions");
  Complex tr(0.0, 0.0);
  for (int m = 0; m < hd; ++m)
    for (int n = 0; n < hd; ++n)
      tr += rho.rho[n] * rho.rho[m] * cfg1.u(n, m) * cfg2.u(n, m);
  const Complex p = 0.5 * std::sinh(2.0 * rho.zeta) * tr;
  return detail::f_from_plus_plus(p, FRoute::trace);
}

/// F and the transverse component G assembled directly from the parity
/// blocks; equivalent to the generic contraction (the z row and column
/// vanish by the parity selection rule):
///   K = [[F, G, 0], [G, -F, 0], [0, 0, <Pi_z Pi_z>]],
/// with F = 2 Re<Pi_+ Pi_+>, G = 2 Im<Pi_+ Pi_+>.
inline CorrelationTensor correlation_tensor(const TmsvState& state,
                                            const PseudospinConfig& cfg1,
                                            const PseudospinConfig& cfg2) {
  const FResult fr = f_direct(state, cfg1, cfg2);
  double kzz = 0.0;
  for (int k = 0; k < state.dim(); ++k)
    kzz += state.lambda[k] * state.lambda[k];
  CorrelationTensor out;
  out.k << fr.plus_plus.real() * 2.0, fr.plus_plus.imag() * 2.0, 0.0,
      fr.plus_plus.imag() * 2.0, -fr.plus_plus.real() * 2.0, 0.0, 0.0, 0.0,
      kzz;
  return out;
}

/// Quadrature plan for the position-space double integral of Eq-type
/// g_+^2 - g_-^2 kernels: the integrand is a diagonal ridge of transverse
/// width 1/sqrt(c(1+tau)) extending to ~1/sqrt(c(1-tau)).
inline QuadratureSpec position_integral_spec(SqueezeParam zeta) {
  const double c = std::cosh(2.0 * zeta.value());
  const double tau = std::tanh(2.0 * zeta.value());
  const double narrow = 1.0 / std::sqrt(c * (1.0 + tau));
  const double wide = 1.0 / std::sqrt(std::max(c * (1.0 - tau), 1e-12));
  const double q = std::min(6.0 + 4.0 * wide, 60.0);
  const int n = std::max(128, static_cast<int>(std::ceil(3.0 * q / narrow)));
  return {q, n};
}

/// Position-space oracle: F = 2 int_0^inf int_0^inf (g_+^2 - g_-^2) dq dq'
/// with g_+- the two-mode Gaussian wavefunctions. Self-certifies against
/// the arctan closed form (known exactly) and throws QuadratureInsufficient
/// beyond tol.
inline double f_position_integral(SqueezeParam zeta, const QuadratureSpec& quad,
                                  double tol = 1e-8) {
  const double c = std::cosh(2.0 * zeta.value());
  // 1 - tanh(x) = 2 / (e^{2x} + 1), cancellation-free.
  const double one_minus_tau = 2.0 / (std::exp(4.0 * zeta.value()) + 1.0);
  const double tau = 1.0 - one_minus_tau;
  const GaussLegendre rule(quad.nodes, 0.0, quad.q_max);

  double sum = 0.0;
  for (int i = 0; i < quad.nodes; ++i) {
    const double q = rule.x[i];
    double row = 0.0;
    for (int j = 0; j < quad.nodes; ++j) {
      const double p = rule.x[j];
      const double d = q - p;
      const double ep = -c * (d * d + 2.0 * q * p * one_minus_tau);
      const double em = -c * (q * q + p * p + 2.0 * q * p * tau);
      row += rule.w[j] * (std::exp(ep) - std::exp(em));
    }
    sum += rule.w[i] * row;
  }
  const double f = 2.0 * sum / std::numbers::pi;
  const double closed =
      (2.0 / std::numbers::pi) * std::atan(std::sinh(2.0 * zeta.value()));
  if (std::abs(f - closed) > tol)
    throw QuadratureInsufficient(
        "position integral deviates from the closed form by " +
        std::to_string(std::abs(f - closed)) + " (tol " + std::to_string(tol) +
        ")");
  return f;
}

inline double f_position_integral(SqueezeParam zeta) {
  return f_position_integral(zeta, position_integral_spec(zeta));
}

enum class ClosedForm { position, number, alt_phase };

/// The three closed forms:
///   position:  (2/pi) arctan(sinh 2 zeta)
///   number:    tanh 2 zeta
///   alt-phase: sinh 2 zeta (1 - tanh^2 zeta)^2 / (1 + tanh^4 zeta)
inline double f_closed(SqueezeParam zeta, ClosedForm which) {
  const double z = zeta.value();
  switch (which) {
    case ClosedForm::position:
      return (2.0 / std::numbers::pi) * std::atan(std::sinh(2.0 * z));
    case ClosedForm::number:
      return std::tanh(2.0 * z);
    case ClosedForm::alt_phase: {
      const double t2 = std::tanh(z) * std::tanh(z);
      return std::sinh(2.0 * z) * (1.0 - t2) * (1.0 - t2) / (1.0 + t2 * t2);
    }
  }
  throw UnknownTag("unknown closed form");
}

inline ClosedForm parse_closed_form(std::string_view tag) {
  if (tag == "position") return ClosedForm::position;
  if (tag == "number") return ClosedForm::number;
  if (tag == "alt-phase") return ClosedForm::alt_phase;
  throw UnknownTag("unknown closed-form tag '" + std::string(tag) + "'");
}

inline double f_closed(SqueezeParam zeta, std::string_view tag) {
  return f_closed(zeta, parse_closed_form(tag));
}

}  // namespace tmsvbell
