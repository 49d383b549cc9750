#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "kinrel/models.hpp"
#include "kinrel/smallmat.hpp"

namespace kinrel {

// ---------------------------------------------------------------------------
// Scalar reference solutions
// ---------------------------------------------------------------------------

/// Spreading Gaussian bump on a constant background.
inline double gaussian_diffusion_exact(double x, double t, double alpha, double delta,
                                       double amplitude = 0.01, double offset = 1.0,
                                       double center = 0.5) {
  const double s2 = delta * delta + 4.0 * alpha * t;
  return offset + amplitude * std::sqrt(delta * delta / s2) *
                      std::exp(-(x - center) * (x - center) / s2);
}

/// Gaussian bump advected at speed c on a periodic domain of length L.
inline double advection_diffusion_exact(double x, double t, double c, double alpha, double delta,
                                        double length = 1.0, double amplitude = 0.01,
                                        double offset = 1.0, double center = 0.5) {
  double xs = std::fmod(x - c * t, length);
  if (xs < 0.0) xs += length;
  return gaussian_diffusion_exact(xs, t, alpha, delta, amplitude, offset, center);
}

/// Steady viscous Burgers "shock" centered at x = 1/2.
inline double burgers_tanh_exact(double x, double alpha, double delta) {
  if (!(delta > 0.0)) throw DomainError("burgers_tanh_exact: delta must be > 0");
  return -(2.0 * alpha / delta) * std::tanh((x - 0.5) / delta);
}

// ---------------------------------------------------------------------------
// Exponentially scaled modified Bessel functions e^{-|x|} I_n(x)
// ---------------------------------------------------------------------------

/// All of e^{-|x|} I_n(x) for n = 0..n_max in one backward (Miller) recurrence
/// pass, normalized with e^{y} = I_0(y) + 2 sum I_n(y) at y = |x|.
inline std::vector<double> scaled_bessel_i_array(int n_max, double x) {
  if (n_max < 0) throw DomainError("scaled_bessel_i_array: n must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double y = std::abs(x);
  if (y == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const int start = n_max + 40 + static_cast<int>(y);
  std::vector<double> t(static_cast<std::size_t>(start) + 2, 0.0);
  t[static_cast<std::size_t>(start) + 1] = 0.0;
  t[static_cast<std::size_t>(start)] = 1e-30;
  for (int m = start; m >= 1; --m) {
    t[static_cast<std::size_t>(m) - 1] =
        t[static_cast<std::size_t>(m) + 1] + (2.0 * m / y) * t[static_cast<std::size_t>(m)];
    if (std::abs(t[static_cast<std::size_t>(m) - 1]) > 1e280) {
      for (auto& v : t) v *= 1e-280;
      for (auto& v : out) v *= 1e-280;
    }
    if (m - 1 <= n_max) out[static_cast<std::size_t>(m) - 1] = t[static_cast<std::size_t>(m) - 1];
  }
  double norm = t[0];
  for (int m = 1; m <= start; ++m) norm += 2.0 * t[static_cast<std::size_t>(m)];
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] /= norm;
    if (x < 0.0 && (n % 2 == 1)) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  }
  return out;
}

inline double scaled_bessel_i(int n, double x) {
  return scaled_bessel_i_array(n, x)[static_cast<std::size_t>(n)];
}

/// Cole-Hopf series solution of the viscous Burgers equation for the initial
/// condition u(x,0) = 1/2 + sin(2 pi x), truncated at n_terms.
inline double burgers_fourier_exact(double x, double t, double alpha, int n_terms = 100) {
  if (!(t > 0.0)) throw DomainError("burgers_fourier_exact: t must be > 0");
  if (!(alpha > 0.0)) throw DomainError("burgers_fourier_exact: alpha must be > 0");
  const double pi = std::numbers::pi;
  // a_n = (-1)^n I_n(-1/(4 pi alpha)), exponentially scaled; the common scale
  // factor cancels in the ratio below.
  const std::vector<double> bessel = scaled_bessel_i_array(n_terms, -1.0 / (4.0 * pi * alpha));
  const double xi = 2.0 * pi * (x - 0.5 * t);
  double num = 0.0;
  double den = bessel[0];
  for (int n = 1; n <= n_terms; ++n) {
    const double an = ((n % 2 == 0) ? 1.0 : -1.0) * bessel[static_cast<std::size_t>(n)];
    const double damp = std::exp(-4.0 * pi * pi * alpha * n * n * t);
    num += n * an * damp * std::sin(n * xi);
    den += 2.0 * an * damp * std::cos(n * xi);
  }
  num *= 4.0;
  if (std::abs(den) < 1e-280)
    throw NumericalError("burgers_fourier_exact: series denominator underflow");
  return 0.5 + 2.0 * alpha * pi * num / den;
}

// ---------------------------------------------------------------------------
// Navier-Stokes references
// ---------------------------------------------------------------------------

struct RankineHugoniot {
  State left;
  State right;
  double theta;
};

/// Pre/post-shock states for an upstream Mach number Ma > 1 with P_L = 1,
/// rho_L = 1; the inviscid fluxes of the two states coincide.
inline RankineHugoniot rankine_hugoniot(double mach, double gamma) {
  if (!(mach > 1.0)) throw DomainError("rankine_hugoniot: Ma must be > 1");
  const double theta =
      (gamma - 1.0) / (gamma + 1.0) + 2.0 / ((gamma + 1.0) * mach * mach);
  const double uL = mach * std::sqrt(gamma);
  const double PL = 1.0;
  const double rhoR = 1.0 / theta;
  const double uR = theta * mach * std::sqrt(gamma);
  const double PR =
      (gamma + 1.0 - theta * (gamma - 1.0)) / (theta * (gamma + 1.0) - (gamma - 1.0));
  RankineHugoniot rh;
  rh.theta = theta;
  rh.left = State::gas(1.0, uL, PL / (gamma - 1.0) + 0.5 * uL * uL);
  rh.right = State::gas(rhoR, rhoR * uR, PR / (gamma - 1.0) + 0.5 * rhoR * uR * uR);
  return rh;
}

struct ShockProfilePoint {
  double rho;
  double u;
  double P;
  double eta;
};

/// Analytic steady viscous shock at Pr = 3/4: x(v) is closed-form and strictly
/// decreasing in the specific volume v = 1/rho in (theta, 1); point values are
/// recovered by inverting it with bisection plus Newton polish.
class ViscousShock {
 public:
  ViscousShock(double mach, double gamma, double mu)
      : mach_(mach), gamma_(gamma), mu_(mu), rh_(rankine_hugoniot(mach, gamma)) {
    if (!(mu > 0.0)) throw DomainError("ViscousShock: mu must be > 0");
    theta_ = rh_.theta;
    u_in_ = 0.5 * (1.0 + theta_);
    prefac_ = -8.0 * std::sqrt(gamma) * mu / (3.0 * (gamma + 1.0) * mach);
  }

  double theta() const { return theta_; }
  const RankineHugoniot& states() const { return rh_; }

  /// Characteristic shock width.
  double width() const {
    return 2.0 * mach_ / (mach_ * mach_ - 1.0) * mu_ * std::sqrt(std::numbers::pi / 2.0);
  }

  double x_of_v(double v) const {
    return prefac_ * (theta_ / (1.0 - theta_) * std::log((v - theta_) / (u_in_ - theta_)) -
                      1.0 / (1.0 - theta_) * std::log((1.0 - v) / (1.0 - u_in_)));
  }

  double v_of_x(double x) const {
    double lo = theta_ + 1e-15;
    double hi = 1.0 - 1e-15;
    if (x >= x_of_v(lo)) return lo;  // beyond the downstream asymptote
    if (x <= x_of_v(hi)) return hi;  // beyond the upstream asymptote
    for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (x_of_v(mid) >= x ? lo : hi) = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      const double dxdv = prefac_ * (theta_ / ((1.0 - theta_) * (v - theta_)) +
                                     1.0 / ((1.0 - theta_) * (1.0 - v)));
      const double step = (x_of_v(v) - x) / dxdv;
      const double vn = v - step;
      if (vn > lo && vn < hi) v = vn;
    }
    return v;
  }

  ShockProfilePoint at(double x) const {
    const double v = v_of_x(x);
    ShockProfilePoint pt;
    pt.rho = 1.0 / v;
    pt.u = v * mach_ * std::sqrt(gamma_);
    pt.P = (1.0 / v) * (1.0 + 0.5 * (gamma_ - 1.0) * mach_ * mach_ * (1.0 - v * v));
    pt.eta = std::log(pt.P / std::pow(pt.rho, gamma_)) / (gamma_ - 1.0);
    return pt;
  }

 private:
  double mach_, gamma_, mu_;
  RankineHugoniot rh_;
  double theta_, u_in_, prefac_;
};

inline ShockProfilePoint viscous_shock_profile(double x, double mach, double gamma, double mu) {
  return ViscousShock(mach, gamma, mu).at(x);
}

// ---------------------------------------------------------------------------
// Linear acoustics
// ---------------------------------------------------------------------------

struct AcousticMode {
  std::complex<double> omega;
  std::array<std::complex<double>, 3> uhat;
  double k = 0.0;
};

namespace detail {

/// Roots of lambda^3 + a2 lambda^2 + a1 lambda + a0 with complex coefficients
/// (Cardano), each polished with two Newton steps.
inline std::array<std::complex<double>, 3> cubic_roots(std::complex<double> a2,
                                                       std::complex<double> a1,
                                                       std::complex<double> a0) {
  using C = std::complex<double>;
  const C p = a1 - a2 * a2 / 3.0;
  const C q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const C s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  C u = std::pow(-q / 2.0 + s, 1.0 / 3.0);
  if (std::abs(u) < 1e-300) u = std::pow(-q / 2.0 - s, 1.0 / 3.0);
  std::array<C, 3> roots;
  if (std::abs(u) < 1e-300) {
    roots.fill(-a2 / 3.0);
  } else {
    const C zeta(-0.5, std::sqrt(3.0) / 2.0);
    C w = u;
    for (int j = 0; j < 3; ++j) {
      roots[static_cast<std::size_t>(j)] = w - p / (3.0 * w) - a2 / 3.0;
      w *= zeta;
    }
  }
  for (auto& r : roots)
    for (int it = 0; it < 2; ++it) {
      const C f = ((r + a2) * r + a1) * r + a0;
      const C df = (3.0 * r + 2.0 * a2) * r + a1;
      if (std::abs(df) > 0.0) r -= f / df;
    }
  return roots;
}

}  // namespace detail

/// Downstream acoustic eigenmode of the linearized system: eigenpair of
/// k f'(base) - i k^2 D(base) whose frequency is closest to (u+c)k, with the
/// density amplitude normalized to `amplitude` at zero phase.
inline AcousticMode acoustic_mode(const ProblemSpec& spec, const State& base, double k,
                                  double amplitude = 1e-5) {
  using C = std::complex<double>;
  if (spec.kind != PdeKind::NavierStokes)
    throw UnsupportedError("acoustic_mode: Navier-Stokes kind required");
  if (k == 0.0) throw DomainError("acoustic_mode: k must be nonzero");
  require_admissible(spec, base);

  const MatP J = jacobian(spec, base);
  const MatP D = diffusion_matrix(spec, base);
  SquareMat<C, 3> B(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = C(k * J(i, j), -k * k * D(i, j));

  // Characteristic polynomial of the 3x3 matrix.
  const C tr = B(0, 0) + B(1, 1) + B(2, 2);
  const C m00 = B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1);
  const C m11 = B(0, 0) * B(2, 2) - B(0, 2) * B(2, 0);
  const C m22 = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
  const C det = B(0, 0) * m00 - B(0, 1) * (B(1, 0) * B(2, 2) - B(1, 2) * B(2, 0)) +
                B(0, 2) * (B(1, 0) * B(2, 1) - B(1, 1) * B(2, 0));
  const auto roots = detail::cubic_roots(-tr, m00 + m11 + m22, -det);

  const double target = (base[1] / base[0] + sound_speed(spec, base)) * k;
  C omega = roots[0];
  for (const C& r : roots)
    if (std::abs(r.real() - target) < std::abs(omega.real() - target)) omega = r;

  // Inverse iteration for the eigenvector.
  const double scale = std::abs(omega) + k;
  std::array<C, 3> v{C(1.0), C(1.0), C(1.0)};
  for (int it = 0; it < 4; ++it) {
    SquareMat<C, 3> shifted = B;
    for (int i = 0; i < 3; ++i) shifted(i, i) -= omega;
    LuFactor<C, 3> lu(shifted);
    if (lu.singular()) {
      for (int i = 0; i < 3; ++i) shifted(i, i) += C(0.0, 1e-13 * scale);
      lu = LuFactor<C, 3>(shifted);
      if (lu.singular()) throw NumericalError("acoustic_mode: defective eigenproblem");
    }
    lu.solve(std::span<C>(v.data(), 3));
    double nrm = 0.0;
    for (const C& vi : v) nrm = std::max(nrm, std::abs(vi));
    if (!(nrm > 0.0)) throw NumericalError("acoustic_mode: null eigenvector");
    for (C& vi : v) vi /= nrm;
  }
  if (std::abs(v[0]) < 1e-12)
    throw NumericalError("acoustic_mode: vanishing density component");
  const C norm = (amplitude / std::abs(v[0])) * std::exp(C(0.0, -std::arg(v[0])));
  AcousticMode mode;
  mode.k = k;
  mode.omega = omega;
  for (int i = 0; i < 3; ++i) mode.uhat[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] * norm;
  return mode;
}

/// Linearized solution: base + |uhat| cos(kx - Re(omega) t + phase) e^{Im(omega) t}.
inline State acoustic_exact(const AcousticMode& mode, const State& base, double x, double t) {
  State u = base;
  const double growth = std::exp(mode.omega.imag() * t);
  for (int c = 0; c < 3; ++c) {
    const auto& h = mode.uhat[static_cast<std::size_t>(c)];
    u[c] = base[c] +
           std::abs(h) * std::cos(mode.k * x - mode.omega.real() * t + std::arg(h)) * growth;
  }
  return u;
}

}  // namespace kinrel
