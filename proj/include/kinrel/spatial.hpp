#pragma once

#include <span>
#include <vector>

#include "kinrel/kinetic.hpp"
#include "kinrel/models.hpp"

namespace kinrel {

enum class BoundaryKind { Periodic, DirichletMaxwellian };

/// Ghost layers on each side; the widest stencil reaches two cells out.
inline constexpr int kGhost = 2;

/// Uniform 1D grid. Periodic grids place points at cell centers
/// x0 + (i+1/2)dx with dx = L/n; Dirichlet grids include both boundary
/// points, x0 + i dx with dx = L/(n-1).
struct Grid1D {
  int n = 0;
  double length = 1.0;
  double x0 = 0.0;
  BoundaryKind boundary = BoundaryKind::Periodic;
  State left_state{};
  State right_state{};

  static Grid1D periodic(int n, double length = 1.0, double x0 = 0.0) {
    validate(n, length);
    return Grid1D{n, length, x0, BoundaryKind::Periodic, {}, {}};
  }

  static Grid1D dirichlet(int n, double length, const State& left, const State& right,
                          double x0 = 0.0) {
    validate(n, length);
    return Grid1D{n, length, x0, BoundaryKind::DirichletMaxwellian, left, right};
  }

  double dx() const {
    return boundary == BoundaryKind::Periodic ? length / n : length / (n - 1);
  }

  double x(int i) const {
    return boundary == BoundaryKind::Periodic ? x0 + (i + 0.5) * dx() : x0 + i * dx();
  }

 private:
  static void validate(int n, double length) {
    if (n < 5) throw DomainError("Grid1D: need at least 5 points for the stencils");
    if (!(length > 0.0)) throw DomainError("Grid1D: length must be > 0");
  }
};

/// Populations on the grid: one contiguous extended array (n + 4 entries,
/// two ghosts per side) for each of the k*p (wave, component) pairs.
struct PopulationField {
  int n = 0;
  int p = 1;
  std::vector<std::vector<double>> comp;  // index w*p + c

  PopulationField() = default;
  PopulationField(int n_, int p_)
      : n(n_), p(p_), comp(static_cast<std::size_t>(WaveModel::k) * p_,
                           std::vector<double>(static_cast<std::size_t>(n_) + 2 * kGhost, 0.0)) {}

  std::span<double> interior(int w, int c) {
    return std::span<double>(comp[static_cast<std::size_t>(w) * p + c].data() + kGhost,
                             static_cast<std::size_t>(n));
  }
  std::span<const double> interior(int w, int c) const {
    return std::span<const double>(comp[static_cast<std::size_t>(w) * p + c].data() + kGhost,
                                   static_cast<std::size_t>(n));
  }
  std::span<double> extended(int w, int c) {
    return std::span<double>(comp[static_cast<std::size_t>(w) * p + c]);
  }
  std::span<const double> extended(int w, int c) const {
    return std::span<const double>(comp[static_cast<std::size_t>(w) * p + c]);
  }

  State macro_state(int i, double /*a*/ = 0.0) const {
    State u;
    u.p = p;
    for (int c = 0; c < p; ++c)
      u[c] = comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(kGhost + i)] +
             comp[static_cast<std::size_t>(p + c)][static_cast<std::size_t>(kGhost + i)];
    return u;
  }
};

inline void fill_ghosts_periodic(std::span<double> ext, int n) {
  for (int g = 0; g < kGhost; ++g) {
    ext[static_cast<std::size_t>(g)] = ext[static_cast<std::size_t>(n + g)];
    ext[static_cast<std::size_t>(kGhost + n + g)] = ext[static_cast<std::size_t>(kGhost + g)];
  }
}

/// Boundary closure: periodic wraparound, or both ghost layers pinned to the
/// Maxwellian of the prescribed boundary states.
inline void fill_ghosts(PopulationField& field, const Grid1D& grid, const ProblemSpec& spec,
                        double a) {
  if (grid.boundary == BoundaryKind::Periodic) {
    for (auto& arr : field.comp) fill_ghosts_periodic(arr, field.n);
    return;
  }
  require_admissible(spec, grid.left_state);
  require_admissible(spec, grid.right_state);
  const auto [l1, l2] = maxwellian(spec, grid.left_state, a);
  const auto [r1, r2] = maxwellian(spec, grid.right_state, a);
  for (int w = 0; w < WaveModel::k; ++w)
    for (int c = 0; c < field.p; ++c) {
      auto ext = field.extended(w, c);
      const double lv = (w == 0) ? l1[c] : l2[c];
      const double rv = (w == 0) ? r1[c] : r2[c];
      for (int g = 0; g < kGhost; ++g) {
        ext[static_cast<std::size_t>(g)] = lv;
        ext[static_cast<std::size_t>(kGhost + field.n + g)] = rv;
      }
    }
}

enum class SpaceOp { Dx1, Dx2, Dx4 };

inline SpaceOp default_space_op(int order) {
  switch (order) {
    case 1: return SpaceOp::Dx1;
    case 2: return SpaceOp::Dx2;
    default: return SpaceOp::Dx4;
  }
}

/// First-order upwind derivative of one extended array.
inline void apply_dx1(std::span<const double> ext, int n, int sign, double dx,
                      std::span<double> out) {
  const double inv = 1.0 / dx;
  const double* f = ext.data() + kGhost;
  if (sign >= 0) {
    for (int i = 0; i < n; ++i) out[i] = (f[i] - f[i - 1]) * inv;
  } else {
    for (int i = 0; i < n; ++i) out[i] = (f[i + 1] - f[i]) * inv;
  }
}

/// Biased 4-point derivative and its mirror for negative advection speeds.
inline void apply_dx2(std::span<const double> ext, int n, int sign, double dx,
                      std::span<double> out) {
  const double inv = 1.0 / dx;
  const double* f = ext.data() + kGhost;
  if (sign >= 0) {
    for (int i = 0; i < n; ++i)
      out[i] = (f[i + 1] / 3.0 + f[i] / 2.0 - f[i - 1] + f[i - 2] / 6.0) * inv;
  } else {
    for (int i = 0; i < n; ++i)
      out[i] = (-f[i - 1] / 3.0 - f[i] / 2.0 + f[i + 1] - f[i + 2] / 6.0) * inv;
  }
}

/// Fourth-order central derivative; independent of the advection sign.
inline void apply_dx4(std::span<const double> ext, int n, int /*sign*/, double dx,
                      std::span<double> out) {
  const double c1 = 2.0 / (3.0 * dx);
  const double c2 = 1.0 / (12.0 * dx);
  const double* f = ext.data() + kGhost;
  for (int i = 0; i < n; ++i)
    out[i] = c2 * (f[i - 2] - f[i + 2]) + c1 * (f[i + 1] - f[i - 1]);
}

inline void apply_space_op(SpaceOp op, std::span<const double> ext, int n, int sign, double dx,
                           std::span<double> out) {
  switch (op) {
    case SpaceOp::Dx1: apply_dx1(ext, n, sign, dx, out); return;
    case SpaceOp::Dx2: apply_dx2(ext, n, sign, dx, out); return;
    case SpaceOp::Dx4: apply_dx4(ext, n, sign, dx, out); return;
  }
}

}  // namespace kinrel
