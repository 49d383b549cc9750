#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kinrel/spatial.hpp"
#include "kinrel/stability.hpp"

using namespace kinrel;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Extended array (two ghosts per side) from a callable sampled off-grid too.
template <typename F>
std::vector<double> sampled_ext(int n, double dx, F f) {
  std::vector<double> ext(static_cast<std::size_t>(n) + 2 * kGhost);
  for (int i = -kGhost; i < n + kGhost; ++i)
    ext[static_cast<std::size_t>(i + kGhost)] = f(i * dx);
  return ext;
}

std::vector<double> periodic_ext(const std::vector<double>& interior) {
  const int n = static_cast<int>(interior.size());
  std::vector<double> ext(static_cast<std::size_t>(n) + 2 * kGhost);
  for (int i = 0; i < n; ++i) ext[static_cast<std::size_t>(i + kGhost)] = interior[static_cast<std::size_t>(i)];
  fill_ghosts_periodic(ext, n);
  return ext;
}

double max_stencil_error(SpaceOp op, int n, int sign) {
  // sin(2 pi x) on a periodic unit grid, compared with the exact derivative
  const double dx = 1.0 / n;
  std::vector<double> interior(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) interior[static_cast<std::size_t>(i)] = std::sin(2.0 * kPi * (i + 0.5) * dx);
  const auto ext = periodic_ext(interior);
  std::vector<double> out(static_cast<std::size_t>(n));
  apply_space_op(op, ext, n, sign, dx, out);
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    err = std::max(err, std::abs(out[static_cast<std::size_t>(i)] -
                                 2.0 * kPi * std::cos(2.0 * kPi * (i + 0.5) * dx)));
  return err;
}

std::complex<double> measured_symbol(SpaceOp op, int n, int mode, int sign) {
  const double dx = 1.0 / n;
  const double k = 2.0 * kPi * mode;
  std::vector<double> re(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * dx;
    re[static_cast<std::size_t>(i)] = std::cos(k * x);
    im[static_cast<std::size_t>(i)] = std::sin(k * x);
  }
  std::vector<double> dre(static_cast<std::size_t>(n)), dim(static_cast<std::size_t>(n));
  apply_space_op(op, periodic_ext(re), n, sign, dx, dre);
  apply_space_op(op, periodic_ext(im), n, sign, dx, dim);
  // d(e^{ikx}) = (symbol/dx) e^{ikx}; read the multiplier off one point.
  const std::complex<double> val(dre[0], dim[0]);
  const double x0 = 0.5 * dx;
  return val * std::exp(std::complex<double>(0.0, -k * x0)) * dx;
}

}  // namespace

TEST_CASE("grid conventions") {
  const auto per = Grid1D::periodic(8, 1.0);
  CHECK(per.dx() == Approx(0.125));
  CHECK(per.x(0) == Approx(0.0625));
  const auto dir = Grid1D::dirichlet(11, 1.0, State::scalar(0.0), State::scalar(1.0));
  CHECK(dir.dx() == Approx(0.1));
  CHECK(dir.x(0) == 0.0);
  CHECK(dir.x(10) == Approx(1.0));
  CHECK_THROWS_AS(Grid1D::periodic(4, 1.0), DomainError);
}

TEST_CASE("operators annihilate constants") {
  const int n = 32;
  std::vector<double> out(n);
  const auto ext = sampled_ext(n, 1.0 / n, [](double) { return 3.7; });
  for (const auto op : {SpaceOp::Dx1, SpaceOp::Dx2, SpaceOp::Dx4})
    for (const int sign : {+1, -1}) {
      apply_space_op(op, ext, n, sign, 1.0 / n, out);
      for (const double v : out) REQUIRE(std::abs(v) <= 1e-14);
    }
}

TEST_CASE("polynomial exactness") {
  const int n = 16;
  const double dx = 0.03;
  std::vector<double> out(n);
  SECTION("dx1 is exact on linears") {
    const auto ext = sampled_ext(n, dx, [](double x) { return 2.0 * x + 1.0; });
    for (const int sign : {+1, -1}) {
      apply_dx1(ext, n, sign, dx, out);
      for (const double v : out) REQUIRE(v == Approx(2.0).epsilon(1e-12));
    }
  }
  SECTION("dx2 is exact through cubics") {
    const auto ext = sampled_ext(n, dx, [](double x) { return x * x; });
    for (const int sign : {+1, -1}) {
      apply_dx2(ext, n, sign, dx, out);
      for (int i = 0; i < n; ++i)
        REQUIRE(out[static_cast<std::size_t>(i)] == Approx(2.0 * i * dx).margin(1e-12));
    }
  }
  SECTION("dx4 is exact through quartics on cubics") {
    const auto ext = sampled_ext(n, dx, [](double x) { return x * x * x; });
    apply_dx4(ext, n, +1, dx, out);
    for (int i = 0; i < n; ++i)
      REQUIRE(out[static_cast<std::size_t>(i)] == Approx(3.0 * i * dx * i * dx).margin(1e-12));
  }
}

TEST_CASE("observed convergence orders") {
  const std::vector<int> meshes{32, 64, 128, 256};
  const double expected_min[] = {0.95, 1.95, 3.9};
  const SpaceOp ops[] = {SpaceOp::Dx1, SpaceOp::Dx2, SpaceOp::Dx4};
  for (int k = 0; k < 3; ++k) {
    std::vector<double> errs;
    for (const int n : meshes) errs.push_back(max_stencil_error(ops[k], n, +1));
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double rate = std::log2(errs[i - 1] / errs[i]);
      INFO("op " << k << " refinement " << i << " rate " << rate);
      REQUIRE(rate >= expected_min[k]);
    }
  }
}

TEST_CASE("discrete symbols match the stability module") {
  for (const auto op : {SpaceOp::Dx1, SpaceOp::Dx2, SpaceOp::Dx4})
    for (const int mode : {1, 3, 7, 11}) {
      const int n = 64;
      const double theta = 2.0 * kPi * mode / n;
      const auto g = fourier_symbol(op, theta);
      const auto meas = measured_symbol(op, n, mode, +1);
      REQUIRE(std::abs(meas - g) <= 1e-13);
      // mirrored stencil: symbol of the negative-speed branch is -conj(g)
      const auto meas_neg = measured_symbol(op, n, mode, -1);
      REQUIRE(std::abs(meas_neg + std::conj(g)) <= 1e-13);
    }
}

TEST_CASE("periodic telescoping") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 40;
  std::vector<double> interior(static_cast<std::size_t>(n));
  for (auto& v : interior) v = d(rng);
  const auto ext = periodic_ext(interior);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (const auto op : {SpaceOp::Dx1, SpaceOp::Dx2, SpaceOp::Dx4}) {
    apply_space_op(op, ext, n, +1, 1.0 / n, out);
    double sum = 0.0;
    for (const double v : out) sum += v / n;
    REQUIRE(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("dx4 antisymmetry under reversal") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 24;
  std::vector<double> interior(static_cast<std::size_t>(n)), reversed(static_cast<std::size_t>(n));
  for (auto& v : interior) v = d(rng);
  for (int i = 0; i < n; ++i) reversed[static_cast<std::size_t>(i)] = interior[static_cast<std::size_t>(n - 1 - i)];
  std::vector<double> out(static_cast<std::size_t>(n)), out_rev(static_cast<std::size_t>(n));
  apply_dx4(periodic_ext(interior), n, +1, 1.0 / n, out);
  apply_dx4(periodic_ext(reversed), n, +1, 1.0 / n, out_rev);
  for (int i = 0; i < n; ++i)
    REQUIRE(out_rev[static_cast<std::size_t>(i)] ==
            Approx(-out[static_cast<std::size_t>(n - 1 - i)]).margin(1e-13));
}

TEST_CASE("ghost filling") {
  SECTION("periodic wraparound") {
    const auto grid = Grid1D::periodic(8, 1.0);
    PopulationField F(8, 1);
    for (int i = 0; i < 8; ++i) F.interior(0, 0)[static_cast<std::size_t>(i)] = i;
    fill_ghosts(F, grid, ProblemSpec::diffusion(0.0), 1.0);
    const auto ext = F.extended(0, 0);
    CHECK(ext[1] == 7.0);  // ghost at i = -1 wraps to value[7]
    CHECK(ext[0] == 6.0);
    CHECK(ext[static_cast<std::size_t>(kGhost + 8)] == 0.0);  // ghost at i = 8 wraps to value[0]
    CHECK(ext[static_cast<std::size_t>(kGhost + 9)] == 1.0);
  }
  SECTION("dirichlet ghosts hold the boundary maxwellian") {
    const auto spec = ProblemSpec::burgers(0.0);
    const auto grid = Grid1D::dirichlet(8, 1.0, State::scalar(0.2), State::scalar(-0.2));
    PopulationField F(8, 1);
    fill_ghosts(F, grid, spec, 2.0);
    // u_L = 0.2, f = 0.02, a = 2: M1 = 0.095, M2 = 0.105
    CHECK(F.extended(0, 0)[0] == Approx(0.095));
    CHECK(F.extended(0, 0)[1] == Approx(0.095));
    CHECK(F.extended(1, 0)[0] == Approx(0.105));
    const int top = kGhost + 8;
    CHECK(F.extended(0, 0)[static_cast<std::size_t>(top)] == Approx(-0.105));
    CHECK(F.extended(1, 0)[static_cast<std::size_t>(top)] == Approx(-0.095));
  }
  SECTION("inadmissible dirichlet state") {
    const auto ns = ProblemSpec::navier_stokes(1.4, 0.0, 1.0);
    const auto grid = Grid1D::dirichlet(8, 1.0, State::gas(-1.0, 0.0, 1.0), State::gas(1.0, 0.0, 2.5));
    PopulationField F(8, 3);
    CHECK_THROWS_AS(fill_ghosts(F, grid, ns, 10.0), DomainError);
  }
}
