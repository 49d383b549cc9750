#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kinrel/smallmat.hpp"

namespace kinrel {

/// p x p matrix acting on conserved components.
using MatP = SquareMat<double, 3>;

/// Inadmissible state or out-of-range parameter.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation not defined for the given problem kind.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Numerical breakdown inside an algorithm (singular local system, defective
/// eigenproblem, inadmissible updated state), with the grid point when known.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg, int point = -1)
      : std::runtime_error(msg), point_index(point) {}
  int point_index;
};

enum class PdeKind { Diffusion, Advection, Burgers, NavierStokes };

/// Conserved state: scalar u, or (rho, j, E) for gas dynamics.
struct State {
  int p = 1;
  std::array<double, 3> c{};

  static State scalar(double u) { return State{1, {u, 0.0, 0.0}}; }
  static State gas(double rho, double j, double E) { return State{3, {rho, j, E}}; }

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

/// One target convection-diffusion system: flux, diffusion, equation of state.
struct ProblemSpec {
  PdeKind kind = PdeKind::Diffusion;
  int p = 1;
  double alpha = 0.0;    // scalar diffusion coefficient
  double speed = 0.0;    // advection velocity c
  double gamma = 1.4;    // heat capacity ratio
  double mu = 0.0;       // dynamic viscosity
  double prandtl = 1.0;  // Prandtl number

  static ProblemSpec diffusion(double alpha) {
    require(alpha >= 0.0, "diffusion: alpha must be >= 0");
    ProblemSpec s;
    s.kind = PdeKind::Diffusion;
    s.alpha = alpha;
    return s;
  }

  static ProblemSpec advection(double c, double alpha) {
    require(alpha >= 0.0, "advection: alpha must be >= 0");
    ProblemSpec s;
    s.kind = PdeKind::Advection;
    s.speed = c;
    s.alpha = alpha;
    return s;
  }

  static ProblemSpec burgers(double alpha) {
    require(alpha >= 0.0, "burgers: alpha must be >= 0");
    ProblemSpec s;
    s.kind = PdeKind::Burgers;
    s.alpha = alpha;
    return s;
  }

  static ProblemSpec navier_stokes(double gamma, double mu, double prandtl) {
    require(gamma > 1.0, "navier_stokes: gamma must be > 1");
    require(mu >= 0.0, "navier_stokes: mu must be >= 0");
    require(prandtl > 0.0, "navier_stokes: Pr must be > 0");
    ProblemSpec s;
    s.kind = PdeKind::NavierStokes;
    s.p = 3;
    s.gamma = gamma;
    s.mu = mu;
    s.prandtl = prandtl;
    return s;
  }

 private:
  static void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
  }
};

/// Density / internal-energy floor below which a state counts as vacuum.
inline constexpr double kAdmissibleFloor = 1e-12;

inline bool admissible(const ProblemSpec& spec, const State& u) {
  if (spec.kind != PdeKind::NavierStokes) return std::isfinite(u[0]);
  const double rho = u[0];
  if (!(rho > kAdmissibleFloor)) return false;
  const double e_int = u[2] - u[1] * u[1] / (2.0 * rho);
  return e_int > kAdmissibleFloor;
}

inline void require_admissible(const ProblemSpec& spec, const State& u) {
  if (!admissible(spec, u))
    throw DomainError("inadmissible state: non-positive density or internal energy");
}

inline double pressure(const ProblemSpec& spec, const State& u) {
  if (spec.kind != PdeKind::NavierStokes)
    throw UnsupportedError("pressure: defined for the Navier-Stokes kind only");
  require_admissible(spec, u);
  return (spec.gamma - 1.0) * (u[2] - u[1] * u[1] / (2.0 * u[0]));
}

inline State flux(const ProblemSpec& spec, const State& u) {
  switch (spec.kind) {
    case PdeKind::Diffusion:
      return State::scalar(0.0);
    case PdeKind::Advection:
      return State::scalar(spec.speed * u[0]);
    case PdeKind::Burgers:
      return State::scalar(0.5 * u[0] * u[0]);
    case PdeKind::NavierStokes: {
      const double P = pressure(spec, u);
      const double v = u[1] / u[0];
      return State::gas(u[1], u[1] * v + P, (u[2] + P) * v);
    }
  }
  throw UnsupportedError("flux: unknown kind");
}

inline MatP jacobian(const ProblemSpec& spec, const State& u) {
  MatP J(spec.p);
  switch (spec.kind) {
    case PdeKind::Diffusion:
      break;
    case PdeKind::Advection:
      J(0, 0) = spec.speed;
      break;
    case PdeKind::Burgers:
      J(0, 0) = u[0];
      break;
    case PdeKind::NavierStokes: {
      require_admissible(spec, u);
      const double g = spec.gamma;
      const double v = u[1] / u[0];
      const double E_rho = u[2] / u[0];
      J(0, 0) = 0.0;
      J(0, 1) = 1.0;
      J(0, 2) = 0.0;
      J(1, 0) = 0.5 * (g - 3.0) * v * v;
      J(1, 1) = (3.0 - g) * v;
      J(1, 2) = g - 1.0;
      J(2, 0) = (g - 1.0) * v * v * v - g * v * E_rho;
      J(2, 1) = g * E_rho - 1.5 * (g - 1.0) * v * v;
      J(2, 2) = g * v;
      break;
    }
  }
  return J;
}

inline MatP diffusion_matrix(const ProblemSpec& spec, const State& u) {
  MatP D(spec.p);
  if (spec.kind != PdeKind::NavierStokes) {
    D(0, 0) = spec.alpha;
    return D;
  }
  require_admissible(spec, u);
  const double g = spec.gamma;
  const double v = u[1] / u[0];
  const double nu = spec.mu / u[0];
  const double g_pr = g / spec.prandtl;
  D(1, 0) = -nu * (4.0 / 3.0) * v;
  D(1, 1) = nu * (4.0 / 3.0);
  D(2, 0) = nu * (-(4.0 / 3.0) * v * v + g_pr * (v * v - u[2] / u[0]));
  D(2, 1) = nu * ((4.0 / 3.0) * v - g_pr * v);
  D(2, 2) = nu * g_pr;
  return D;
}

inline double entropy(const ProblemSpec& spec, const State& u) {
  const double P = pressure(spec, u);
  if (!(P > 0.0)) throw DomainError("entropy: non-positive pressure");
  return std::log(P / std::pow(u[0], spec.gamma)) / (spec.gamma - 1.0);
}

inline double sound_speed(const ProblemSpec& spec, const State& u) {
  const double P = pressure(spec, u);
  if (!(P > 0.0)) throw DomainError("sound_speed: non-positive pressure");
  return std::sqrt(spec.gamma * P / u[0]);
}

/// Upper bound on the characteristic speeds: |f'(u)| for scalars, |u| + c for gas.
inline double spectral_bound(const ProblemSpec& spec, const State& u) {
  switch (spec.kind) {
    case PdeKind::Diffusion:
      return 0.0;
    case PdeKind::Advection:
      return std::abs(spec.speed);
    case PdeKind::Burgers:
      return std::abs(u[0]);
    case PdeKind::NavierStokes:
      return std::abs(u[1] / u[0]) + sound_speed(spec, u);
  }
  throw UnsupportedError("spectral_bound: unknown kind");
}

}  // namespace kinrel
