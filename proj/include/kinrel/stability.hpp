#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "kinrel/models.hpp"
#include "kinrel/smallmat.hpp"
#include "kinrel/spatial.hpp"
#include "kinrel/timeint.hpp"

namespace kinrel {

/// Time/space discretization pair for the transport-term Fourier analysis.
struct SchemeDescriptor {
  enum class Time { ExplicitEuler, L2Lobatto, DeC };
  Time time = Time::DeC;
  int order = 4;       // 2 or 4 for L2Lobatto/DeC
  int iterations = 4;  // DeC only
  SpaceOp space = SpaceOp::Dx4;

  static SchemeDescriptor euler(SpaceOp s) { return {Time::ExplicitEuler, 1, 1, s}; }
  static SchemeDescriptor l2_lobatto(int order, SpaceOp s) {
    return {Time::L2Lobatto, order, 0, s};
  }
  static SchemeDescriptor dec(int order, int m, SpaceOp s) { return {Time::DeC, order, m, s}; }
};

/// Symbol g(theta) of the discrete derivative for a positive advection speed;
/// the Fourier transform of delta_x y is g yhat / dx with theta = k dx.
inline std::complex<double> fourier_symbol(SpaceOp space, double theta) {
  using namespace std::complex_literals;
  switch (space) {
    case SpaceOp::Dx1:
      return 1.0 - std::exp(-1i * theta);
    case SpaceOp::Dx2:
      return std::exp(1i * theta) / 3.0 + 0.5 - std::exp(-1i * theta) +
             std::exp(-2.0i * theta) / 6.0;
    case SpaceOp::Dx4:
      return 1i * (4.0 / 3.0 * std::sin(theta) - std::sin(2.0 * theta) / 6.0);
  }
  throw UnsupportedError("fourier_symbol: unknown operator");
}

/// sum_{m=0}^M z^m A^m for the order-q Lobatto IIIC coefficient matrix,
/// evaluated by Horner recursion. The DeC per-step multiplier is the last-row
/// sum of this matrix.
inline SquareMat<std::complex<double>, 4> amplification_matrix_dec(int order, int iterations,
                                                                   std::complex<double> z) {
  using C = std::complex<double>;
  const ButcherTableau tab = lobatto_iiic(order);
  SquareMat<C, 4> A(tab.s);
  for (int i = 0; i < tab.s; ++i)
    for (int j = 0; j < tab.s; ++j) A(i, j) = tab.A(i, j);
  SquareMat<C, 4> P = SquareMat<C, 4>::identity(tab.s);
  for (int m = 0; m < iterations; ++m) {
    SquareMat<C, 4> AP = A * P;
    AP *= z;
    P = SquareMat<C, 4>::identity(tab.s);
    P += AP;
  }
  return P;
}

/// Per-step amplification factor G(z), z = -lambda g(theta).
inline std::complex<double> amplification(const SchemeDescriptor& sd, std::complex<double> z) {
  using C = std::complex<double>;
  switch (sd.time) {
    case SchemeDescriptor::Time::ExplicitEuler:
      return 1.0 + z;
    case SchemeDescriptor::Time::L2Lobatto: {
      if (sd.order == 2) {
        const C den = z * z - 2.0 * z + 2.0;
        if (std::abs(den) == 0.0) throw DomainError("amplification: pole of the rational form");
        return 2.0 / den;
      }
      if (sd.order == 4) {
        const C den = ((z - 6.0) * z + 18.0) * z - 24.0;
        if (std::abs(den) == 0.0) throw DomainError("amplification: pole of the rational form");
        return (-6.0 * z - 24.0) / den;
      }
      throw UnsupportedError("amplification: L2 Lobatto order must be 2 or 4");
    }
    case SchemeDescriptor::Time::DeC: {
      const auto P = amplification_matrix_dec(sd.order, sd.iterations, z);
      C g = 0.0;
      for (int j = 0; j < P.dim(); ++j) g += P(P.dim() - 1, j);
      return g;
    }
  }
  throw UnsupportedError("amplification: unknown scheme");
}

namespace detail {

/// |G| threshold: marginally stable schemes sit exactly on |G| = 1 over whole
/// theta ranges, and the flattest unstable lobes of the DeC schemes rise from
/// 1 at O(1e-10); this margin reproduces the two-decimal critical values.
inline constexpr double kStabilityTol = 1e-10;

inline double max_amplification(const SchemeDescriptor& sd, double lambda, int samples = 4096) {
  const double two_pi = 2.0 * std::numbers::pi;
  double max_abs = 0.0;
  double arg_max = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = two_pi * i / samples;
    const double v = std::abs(amplification(sd, -lambda * fourier_symbol(sd.space, theta)));
    if (v > max_abs) {
      max_abs = v;
      arg_max = theta;
    }
  }
  // Local refinement around the arg-max to catch narrow instability lobes.
  double half = two_pi / samples;
  double center = arg_max;
  for (int level = 0; level < 3; ++level) {
    double best = center;
    for (int i = -32; i <= 32; ++i) {
      const double theta = center + half * i / 32.0;
      const double v = std::abs(amplification(sd, -lambda * fourier_symbol(sd.space, theta)));
      if (v > max_abs) {
        max_abs = v;
        best = theta;
      }
    }
    center = best;
    half /= 32.0;
  }
  return max_abs;
}

}  // namespace detail

/// Largest CFL number lambda for which max_theta |G| stays within the
/// stability margin, located by bisection on [0, 4] to width 1e-3; returns 0
/// for schemes unstable at every positive lambda and 4 for A-stable ones.
inline double critical_cfl(const SchemeDescriptor& sd) {
  auto stable = [&](double lambda) {
    return detail::max_amplification(sd, lambda) <= 1.0 + detail::kStabilityTol;
  };
  double lo = 0.0, hi = 4.0;
  if (stable(hi)) return hi;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace kinrel
