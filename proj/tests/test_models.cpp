#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kinrel/exact.hpp"
#include "kinrel/models.hpp"

using namespace kinrel;
using Catch::Approx;

namespace {

State random_state(const ProblemSpec& spec, std::mt19937& rng) {
  std::uniform_real_distribution<double> scalar(-5.0, 5.0);
  if (spec.kind != PdeKind::NavierStokes) return State::scalar(scalar(rng));
  std::uniform_real_distribution<double> rho_d(0.1, 5.0);
  std::uniform_real_distribution<double> vel_d(-3.0, 3.0);
  std::uniform_real_distribution<double> p_d(0.1, 10.0);
  const double rho = rho_d(rng), vel = vel_d(rng), P = p_d(rng);
  return State::gas(rho, rho * vel, P / (spec.gamma - 1.0) + 0.5 * rho * vel * vel);
}

MatP fd_jacobian(const ProblemSpec& spec, const State& u) {
  MatP J(spec.p);
  for (int j = 0; j < spec.p; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
    State up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const State fp = flux(spec, up), fm = flux(spec, um);
    for (int i = 0; i < spec.p; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return J;
}

// Real eigenvalues of a p x p matrix through the characteristic polynomial.
std::vector<double> eigenvalues(const MatP& m) {
  if (m.dim() == 1) return {m(0, 0)};
  using C = std::complex<double>;
  const C tr = m(0, 0) + m(1, 1) + m(2, 2);
  const C m00 = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const C m11 = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  const C m22 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const C det = m(0, 0) * m00 - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  const auto roots = detail::cubic_roots(-tr, m00 + m11 + m22, -det);
  std::vector<double> out;
  for (const auto& r : roots) out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

const double kSqrtGamma = std::sqrt(1.4);

State mach2_left() {
  // rho = 1, u = 2 sqrt(gamma), P = 1
  return State::gas(1.0, 2.0 * kSqrtGamma, 2.5 + 2.8);
}

}  // namespace

TEST_CASE("flux by kind") {
  CHECK(flux(ProblemSpec::diffusion(0.01), State::scalar(7.3))[0] == 0.0);
  CHECK(flux(ProblemSpec::advection(10.0, 0.0), State::scalar(0.3))[0] == Approx(3.0));
  CHECK(flux(ProblemSpec::burgers(0.01), State::scalar(2.0))[0] == Approx(2.0));

  const auto ns = ProblemSpec::navier_stokes(1.4, 0.001, 0.75);
  const State f = flux(ns, mach2_left());
  CHECK(f[0] == Approx(2.0 * kSqrtGamma).epsilon(1e-14));  // momentum of the Mach-2 state
  CHECK(f[1] == Approx(4.0 * 1.4 + 1.0).epsilon(1e-14));
}

TEST_CASE("flux rejects inadmissible states") {
  const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
  CHECK_THROWS_AS(flux(ns, State::gas(-1.0, 0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(flux(ns, State::gas(1.0, 2.0, 1.0)), DomainError);  // negative e_int
}

TEST_CASE("jacobian closed forms") {
  CHECK(jacobian(ProblemSpec::advection(10.0, 0.0), State::scalar(123.0))(0, 0) == 10.0);
  CHECK(jacobian(ProblemSpec::burgers(0.0), State::scalar(0.5))(0, 0) == 0.5);

  const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
  const State rest = State::gas(1.0, 0.0, 1.0 / 0.4);
  const auto eig = eigenvalues(jacobian(ns, rest));
  REQUIRE(eig.size() == 3);
  CHECK(eig[0] == Approx(-kSqrtGamma).margin(1e-9));
  CHECK(eig[1] == Approx(0.0).margin(1e-9));
  CHECK(eig[2] == Approx(kSqrtGamma).margin(1e-9));
}

TEST_CASE("jacobian matches finite differences") {
  std::mt19937 rng(12345);
  for (const auto& spec :
       {ProblemSpec::advection(3.0, 0.1), ProblemSpec::burgers(0.01),
        ProblemSpec::navier_stokes(1.4, 0.01, 0.71)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const State u = random_state(spec, rng);
      const MatP J = jacobian(spec, u);
      const MatP Jfd = fd_jacobian(spec, u);
      for (int i = 0; i < spec.p; ++i)
        for (int j = 0; j < spec.p; ++j) {
          const double scale = std::max(1.0, std::abs(J(i, j)));
          REQUIRE(std::abs(J(i, j) - Jfd(i, j)) <= 1e-6 * scale);
        }
    }
  }
}

TEST_CASE("diffusion matrix") {
  SECTION("scalar") {
    const auto D = diffusion_matrix(ProblemSpec::burgers(0.01), State::scalar(0.3));
    CHECK(D(0, 0) == 0.01);
  }
  SECTION("navier-stokes eigenvalues") {
    const auto ns = ProblemSpec::navier_stokes(1.4, 0.02, 0.71);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const State u = random_state(ns, rng);
      const double nu = ns.mu / u[0];
      auto eig = eigenvalues(diffusion_matrix(ns, u));
      std::vector<double> expected{0.0, 4.0 * nu / 3.0, ns.gamma * nu / ns.prandtl};
      std::sort(expected.begin(), expected.end());
      for (int i = 0; i < 3; ++i)
        REQUIRE(eig[static_cast<std::size_t>(i)] ==
                Approx(expected[static_cast<std::size_t>(i)]).margin(1e-10));
    }
  }
  SECTION("inviscid limit is the zero matrix") {
    const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 0.71);
    const auto D = diffusion_matrix(ns, mach2_left());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(D(i, j) == 0.0);
  }
}

TEST_CASE("pressure") {
  const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
  CHECK(pressure(ns, State::gas(1.0, 0.0, 2.5)) == Approx(1.0));
  CHECK(pressure(ns, mach2_left()) == Approx(1.0));
  CHECK_THROWS_AS(pressure(ns, State::gas(1.0, 0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(pressure(ProblemSpec::burgers(0.1), State::scalar(1.0)), UnsupportedError);
}

TEST_CASE("entropy") {
  const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
  CHECK(entropy(ns, State::gas(1.0, 0.0, 2.5)) == Approx(0.0).margin(1e-14));
  const double P = std::exp(0.4);
  CHECK(entropy(ns, State::gas(1.0, 0.0, P / 0.4)) == Approx(1.0).epsilon(1e-12));
  // Mach-2 post-shock state: rho = 8/3, P = 4.5
  const double rho = 8.0 / 3.0;
  CHECK(entropy(ns, State::gas(rho, 0.0, 4.5 / 0.4)) > 0.0);
}

TEST_CASE("spectral bound") {
  CHECK(spectral_bound(ProblemSpec::advection(10.0, 0.0), State::scalar(0.0)) == 10.0);
  CHECK(spectral_bound(ProblemSpec::burgers(0.0), State::scalar(-1.5)) == 1.5);
  const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
  CHECK(spectral_bound(ns, mach2_left()) == Approx(3.0 * kSqrtGamma).epsilon(1e-14));
}

TEST_CASE("spectral bound dominates the jacobian spectrum") {
  std::mt19937 rng(99);
  for (const auto& spec :
       {ProblemSpec::advection(-4.0, 0.1), ProblemSpec::burgers(0.01),
        ProblemSpec::navier_stokes(1.4, 0.01, 0.71)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const State u = random_state(spec, rng);
      const double bound = spectral_bound(spec, u);
      for (const double lam : eigenvalues(jacobian(spec, u)))
        REQUIRE(std::abs(lam) <= bound * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ProblemSpec::diffusion(-0.1), DomainError);
  CHECK_THROWS_AS(ProblemSpec::navier_stokes(1.0, 0.1, 0.7), DomainError);
  CHECK_THROWS_AS(ProblemSpec::navier_stokes(1.4, -0.1, 0.7), DomainError);
  CHECK_THROWS_AS(ProblemSpec::navier_stokes(1.4, 0.1, 0.0), DomainError);
}
