#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "kinrel/models.hpp"
#include "kinrel/smallmat.hpp"

namespace kinrel {

/// Wave speed no longer strictly exceeds the characteristic speeds.
struct SubcharacteristicError : std::runtime_error {
  explicit SubcharacteristicError(const std::string& msg, int point = -1)
      : std::runtime_error(msg), point_index(point) {}
  int point_index;
};

/// Two-wave kinetic closure with velocities -a and +a.
struct WaveModel {
  static constexpr int k = 2;

  double a = 1.0;      // current kinetic speed
  double ratio = 0.0;  // prescribed a / max spectral bound when adaptive
  bool adaptive = false;

  static WaveModel constant(double a) {
    if (!(a > 0.0)) throw DomainError("WaveModel: a must be > 0");
    return WaveModel{a, 0.0, false};
  }

  static WaveModel adaptive_ratio(double ratio) {
    if (!(ratio > 1.0)) throw DomainError("WaveModel: ratio must be > 1");
    return WaveModel{0.0, ratio, true};
  }
};

/// Equilibrium populations (M1, M2) = ((u -+ f(u)/a)/2) satisfying
/// M1 + M2 = u and a(-M1 + M2) = f(u) componentwise.
inline std::pair<State, State> maxwellian(const ProblemSpec& spec, const State& u, double a) {
  if (!(a > 0.0)) throw DomainError("maxwellian: a must be > 0");
  const State f = flux(spec, u);
  State m1 = u, m2 = u;
  for (int i = 0; i < spec.p; ++i) {
    m1[i] = 0.5 * (u[i] - f[i] / a);
    m2[i] = 0.5 * (u[i] + f[i] / a);
  }
  return {m1, m2};
}

/// Relaxation-time matrix T = D(u) (a^2 I - f'(u)^2)^{-1}, the only collision
/// quantity the solver materializes. Requires the strict subcharacteristic
/// condition a > spectral_bound(u).
inline MatP relaxation_matrix(const ProblemSpec& spec, const State& u, double a,
                              int point_index = -1) {
  const double bound = spectral_bound(spec, u);
  if (!(a > bound))
    throw SubcharacteristicError("subcharacteristic condition violated: a <= spectral bound",
                                 point_index);
  if (spec.p == 1) {
    const double fp = jacobian(spec, u)(0, 0);
    MatP T(1);
    T(0, 0) = spec.alpha / (a * a - fp * fp);
    return T;
  }
  const MatP J = jacobian(spec, u);
  const MatP J2 = J * J;
  // T = D B^{-1} with B = a^2 I - f'^2  <=>  B^T T^T = D^T, row by row of T.
  MatP Bt(spec.p);
  for (int i = 0; i < spec.p; ++i)
    for (int j = 0; j < spec.p; ++j) Bt(i, j) = (i == j ? a * a : 0.0) - J2(j, i);
  LuFactor<double, 3> lut(Bt);
  if (lut.singular())
    throw SubcharacteristicError("relaxation_matrix: singular a^2 I - f'(u)^2", point_index);
  const MatP D = diffusion_matrix(spec, u);
  MatP T(spec.p);
  std::array<double, 3> col;
  for (int i = 0; i < spec.p; ++i) {
    for (int j = 0; j < spec.p; ++j) col[static_cast<std::size_t>(j)] = D(i, j);
    lut.solve(std::span<double>(col.data(), static_cast<std::size_t>(spec.p)));
    for (int j = 0; j < spec.p; ++j) T(i, j) = col[static_cast<std::size_t>(j)];
  }
  return T;
}

/// Diagnostic Knudsen number: alpha/(a*ell) for scalars, mu/(a*ell*rho_c) for gas.
inline double knudsen(const ProblemSpec& spec, double a, double ell, double rho_c = 1.0) {
  if (!(a > 0.0) || !(ell > 0.0) || !(rho_c > 0.0))
    throw DomainError("knudsen: a, ell and rho_c must be > 0");
  if (spec.kind == PdeKind::NavierStokes) return spec.mu / (a * ell * rho_c);
  return spec.alpha / (a * ell);
}

struct Moments {
  State u;            // P F
  State flux_moment;  // P Lambda F
};

/// Projects one point's populations, laid out wave-major: (F1[0..p), F2[0..p)).
inline Moments project(std::span<const double> F, int p, double a) {
  Moments m;
  m.u.p = p;
  m.flux_moment.p = p;
  for (int i = 0; i < p; ++i) {
    m.u[i] = F[static_cast<std::size_t>(i)] + F[static_cast<std::size_t>(p + i)];
    m.flux_moment[i] = a * (-F[static_cast<std::size_t>(i)] + F[static_cast<std::size_t>(p + i)]);
  }
  return m;
}

/// New wave speed for the step: ratio times the largest characteristic bound
/// over the grid; constant models return the stored speed unchanged.
inline double update_wave_speed(const WaveModel& model, const ProblemSpec& spec,
                                std::span<const State> states) {
  if (!model.adaptive) return model.a;
  if (states.empty()) throw DomainError("update_wave_speed: empty grid");
  double bound = 0.0;
  for (const State& u : states) bound = std::max(bound, spectral_bound(spec, u));
  return model.ratio * bound;
}

}  // namespace kinrel
