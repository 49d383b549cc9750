#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "kinrel/case.hpp"
#include "kinrel/kinetic.hpp"
#include "kinrel/models.hpp"
#include "kinrel/smallmat.hpp"
#include "kinrel/spatial.hpp"

namespace kinrel {

/// Coefficients of one implicit Runge-Kutta scheme. For the shipped Lobatto
/// IIIC family, b equals the last row of A and the first row of A is non-null,
/// which keeps the per-point collision solve well-posed for singular D.
struct ButcherTableau {
  int s = 0;
  int order = 0;
  SquareMat<double, 4> A;
  std::array<double, 4> b{};
  std::array<double, 4> c{};
};

inline ButcherTableau lobatto_iiic(int order) {
  ButcherTableau t;
  t.order = order;
  switch (order) {
    case 2: {
      t.s = 2;
      t.A = SquareMat<double, 4>(2);
      t.A(0, 0) = 0.5;  t.A(0, 1) = -0.5;
      t.A(1, 0) = 0.5;  t.A(1, 1) = 0.5;
      break;
    }
    case 4: {
      t.s = 3;
      t.A = SquareMat<double, 4>(3);
      t.A(0, 0) = 1.0 / 6.0;  t.A(0, 1) = -1.0 / 3.0;  t.A(0, 2) = 1.0 / 6.0;
      t.A(1, 0) = 1.0 / 6.0;  t.A(1, 1) = 5.0 / 12.0;  t.A(1, 2) = -1.0 / 12.0;
      t.A(2, 0) = 1.0 / 6.0;  t.A(2, 1) = 2.0 / 3.0;   t.A(2, 2) = 1.0 / 6.0;
      break;
    }
    case 6: {
      const double r5 = std::sqrt(5.0);
      t.s = 4;
      t.A = SquareMat<double, 4>(4);
      t.A(0, 0) = 1.0 / 12.0;  t.A(0, 1) = -r5 / 12.0;
      t.A(0, 2) = r5 / 12.0;   t.A(0, 3) = -1.0 / 12.0;
      t.A(1, 0) = 1.0 / 12.0;  t.A(1, 1) = 0.25;
      t.A(1, 2) = (10.0 - 7.0 * r5) / 60.0;  t.A(1, 3) = r5 / 60.0;
      t.A(2, 0) = 1.0 / 12.0;  t.A(2, 1) = (10.0 + 7.0 * r5) / 60.0;
      t.A(2, 2) = 0.25;        t.A(2, 3) = -r5 / 60.0;
      t.A(3, 0) = 1.0 / 12.0;  t.A(3, 1) = 5.0 / 12.0;
      t.A(3, 2) = 5.0 / 12.0;  t.A(3, 3) = 1.0 / 12.0;
      break;
    }
    default:
      throw UnsupportedError("lobatto_iiic: order must be 2, 4 or 6");
  }
  for (int j = 0; j < t.s; ++j) {
    t.b[static_cast<std::size_t>(j)] = t.A(t.s - 1, j);
    double row = 0.0;
    for (int k = 0; k < t.s; ++k) row += t.A(j, k);
    t.c[static_cast<std::size_t>(j)] = row;
  }
  return t;
}

struct DeCConfig {
  ButcherTableau tableau;
  int iterations = 1;       // M; order min(q, M) is recovered
  double cfl_lambda = 1.0;  // lambda = a dt / dx
};

/// Full solver state: populations, time, current kinetic speed.
struct SolverState {
  PopulationField F;
  double t = 0.0;
  double a = 0.0;
};

inline int wave_sign(int w) { return w == 0 ? -1 : +1; }

/// Populations initialized at equilibrium, F = M(u0).
inline SolverState initial_solver_state(const ProblemSpec& spec, const Grid1D& grid,
                                        std::span<const State> u0, const WaveModel& wave) {
  SolverState st;
  st.a = update_wave_speed(wave, spec, u0);
  if (!(st.a > 0.0)) throw DomainError("initial_solver_state: wave speed must be > 0");
  st.F = PopulationField(grid.n, spec.p);
  for (int i = 0; i < grid.n; ++i) {
    const auto [m1, m2] = maxwellian(spec, u0[static_cast<std::size_t>(i)], st.a);
    for (int c = 0; c < spec.p; ++c) {
      st.F.interior(0, c)[static_cast<std::size_t>(i)] = m1[c];
      st.F.interior(1, c)[static_cast<std::size_t>(i)] = m2[c];
    }
  }
  return st;
}

inline std::vector<State> macro_states(const PopulationField& F) {
  std::vector<State> u(static_cast<std::size_t>(F.n));
  for (int i = 0; i < F.n; ++i) u[static_cast<std::size_t>(i)] = F.macro_state(i);
  return u;
}

namespace detail {

inline bool is_zero_matrix(const MatP& m) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (m(i, j) != 0.0) return false;
  return true;
}

}  // namespace detail

/// One step of the fully explicit first-order IMEX scheme: upwind transport of
/// the macro variables, then a point-local relaxation solve written so that
/// only T (never its inverse) appears: (dt I + T) F = T G + dt M.
inline void step_imex1(SolverState& st, const Grid1D& grid, const ProblemSpec& spec, double dt,
                       SpaceOp space = SpaceOp::Dx1) {
  if (!(dt > 0.0)) throw DomainError("step_imex1: dt must be > 0");
  const int n = grid.n, p = spec.p;
  const double dx = grid.dx();
  fill_ghosts(st.F, grid, spec, st.a);

  static thread_local std::vector<std::vector<double>> sx;
  sx.assign(static_cast<std::size_t>(WaveModel::k) * p, std::vector<double>(static_cast<std::size_t>(n)));
  for (int w = 0; w < WaveModel::k; ++w)
    for (int c = 0; c < p; ++c)
      apply_space_op(space, st.F.extended(w, c), n, wave_sign(w), dx,
                     sx[static_cast<std::size_t>(w) * p + c]);

  std::array<double, 3> g1{}, g2{}, rhs{};
  for (int i = 0; i < n; ++i) {
    State u_new;
    u_new.p = p;
    for (int c = 0; c < p; ++c) {
      const double f1 = st.F.interior(0, c)[static_cast<std::size_t>(i)];
      const double f2 = st.F.interior(1, c)[static_cast<std::size_t>(i)];
      const double d1 = sx[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
      const double d2 = sx[static_cast<std::size_t>(p + c)][static_cast<std::size_t>(i)];
      g1[static_cast<std::size_t>(c)] = f1 - dt * (-st.a) * d1;
      g2[static_cast<std::size_t>(c)] = f2 - dt * (+st.a) * d2;
      u_new[c] = f1 + f2 - dt * (-st.a * d1 + st.a * d2);
    }
    if (!admissible(spec, u_new))
      throw NumericalError("step_imex1: inadmissible updated state", i);
    const auto [m1, m2] = maxwellian(spec, u_new, st.a);
    const MatP T = relaxation_matrix(spec, u_new, st.a, i);
    if (detail::is_zero_matrix(T)) {
      for (int c = 0; c < p; ++c) {
        st.F.interior(0, c)[static_cast<std::size_t>(i)] = m1[c];
        st.F.interior(1, c)[static_cast<std::size_t>(i)] = m2[c];
      }
      continue;
    }
    if (p == 1) {
      const double t00 = T(0, 0);
      st.F.interior(0, 0)[static_cast<std::size_t>(i)] = (t00 * g1[0] + dt * m1[0]) / (dt + t00);
      st.F.interior(1, 0)[static_cast<std::size_t>(i)] = (t00 * g2[0] + dt * m2[0]) / (dt + t00);
      continue;
    }
    MatP sys = T;
    for (int c = 0; c < p; ++c) sys(c, c) += dt;
    LuFactor<double, 3> lu(sys);
    if (lu.singular()) throw NumericalError("step_imex1: singular relaxation solve", i);
    for (int w = 0; w < WaveModel::k; ++w) {
      const auto& g = (w == 0) ? g1 : g2;
      const State& m = (w == 0) ? m1 : m2;
      T.matvec(std::span<const double>(g.data(), static_cast<std::size_t>(p)),
               std::span<double>(rhs.data(), static_cast<std::size_t>(p)));
      for (int c = 0; c < p; ++c) rhs[static_cast<std::size_t>(c)] += dt * m[c];
      lu.solve(std::span<double>(rhs.data(), static_cast<std::size_t>(p)));
      for (int c = 0; c < p; ++c)
        st.F.interior(w, c)[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(c)];
    }
  }
  st.t += dt;
}

/// Stage data and scratch space for the deferred-correction iteration. The
/// per-point implicit collision solve is recast so that only the relaxation
/// matrices T_j enter: [blockdiag(T_j)/dt + A (x) I_p] W = B0 - M, followed by
/// the explicit recovery F_j = B0_j - sum_k a_jk W_k, which stays well-posed
/// for T = 0 and for singular diffusion matrices.
class DecWorkspace {
 public:
  DecWorkspace(const ProblemSpec& spec, const Grid1D& grid, const ButcherTableau& tableau,
               SpaceOp space)
      : spec_(spec), grid_(grid), tab_(tableau), space_(space) {
    const auto kp = static_cast<std::size_t>(WaveModel::k) * spec.p;
    const auto n = static_cast<std::size_t>(grid.n);
    f0_.assign(kp, std::vector<double>(n));
    stages_.assign(static_cast<std::size_t>(tab_.s), PopulationField(grid.n, spec.p));
    sx_.assign(static_cast<std::size_t>(tab_.s) * kp, std::vector<double>(n));
    b0_.assign(static_cast<std::size_t>(tab_.s) * kp, std::vector<double>(n));
    ustage_.assign(static_cast<std::size_t>(tab_.s), std::vector<State>(n));
  }

  /// Resets the stage vectors to the time-t_n populations.
  void begin(const PopulationField& F, double a) {
    a_ = a;
    for (int w = 0; w < WaveModel::k; ++w)
      for (int c = 0; c < spec_.p; ++c) {
        const auto src = F.interior(w, c);
        std::copy(src.begin(), src.end(), f0_[idx(w, c)].begin());
      }
    for (auto& st : stages_)
      for (int w = 0; w < WaveModel::k; ++w)
        for (int c = 0; c < spec_.p; ++c) {
          auto dst = st.interior(w, c);
          std::copy(f0_[idx(w, c)].begin(), f0_[idx(w, c)].end(), dst.begin());
        }
  }

  /// One DeC iteration: explicit macro update at every sub-node, then the
  /// point-local linear solve for the populations.
  void iterate(double dt) {
    const int s = tab_.s, p = spec_.p, n = grid_.n;
    const double dx = grid_.dx();
    for (int j = 0; j < s; ++j) {
      fill_ghosts(stages_[static_cast<std::size_t>(j)], grid_, spec_, a_);
      for (int w = 0; w < WaveModel::k; ++w)
        for (int c = 0; c < p; ++c)
          apply_space_op(space_, stages_[static_cast<std::size_t>(j)].extended(w, c), n,
                         wave_sign(w), dx, sx_[sidx(j, w, c)]);
    }
    for (int j = 0; j < s; ++j)
      for (int w = 0; w < WaveModel::k; ++w) {
        const double vel = wave_sign(w) * a_;
        for (int c = 0; c < p; ++c) {
          auto& out = b0_[sidx(j, w, c)];
          const auto& base = f0_[idx(w, c)];
          std::copy(base.begin(), base.end(), out.begin());
          for (int k = 0; k < s; ++k) {
            const double coef = -dt * tab_.A(j, k) * vel;
            const auto& d = sx_[sidx(k, w, c)];
            for (int i = 0; i < n; ++i)
              out[static_cast<std::size_t>(i)] += coef * d[static_cast<std::size_t>(i)];
          }
        }
      }
    solve_points(dt);
  }

  int stage_count() const { return tab_.s; }
  const PopulationField& stage(int j) const { return stages_[static_cast<std::size_t>(j)]; }
  const std::vector<State>& stage_macro(int j) const { return ustage_[static_cast<std::size_t>(j)]; }

  void write_final(PopulationField& F) const {
    const auto& last = stages_[static_cast<std::size_t>(tab_.s - 1)];
    for (int w = 0; w < WaveModel::k; ++w)
      for (int c = 0; c < spec_.p; ++c) {
        const auto src = last.interior(w, c);
        auto dst = F.interior(w, c);
        std::copy(src.begin(), src.end(), dst.begin());
      }
  }

 private:
  std::size_t idx(int w, int c) const { return static_cast<std::size_t>(w) * spec_.p + c; }
  std::size_t sidx(int j, int w, int c) const {
    return static_cast<std::size_t>(j) * WaveModel::k * spec_.p + idx(w, c);
  }

  void solve_points(double dt) {
    const int s = tab_.s, p = spec_.p, n = grid_.n;
    const int dim = s * p;
    std::array<MatP, 4> T;
    std::array<State, 4> m1, m2;
    std::array<double, kMaxLocalDim> w_vec{}, rhs{};
    for (int i = 0; i < n; ++i) {
      bool all_zero = true;
      for (int j = 0; j < s; ++j) {
        State uj;
        uj.p = p;
        for (int c = 0; c < p; ++c)
          uj[c] = b0_[sidx(j, 0, c)][static_cast<std::size_t>(i)] +
                  b0_[sidx(j, 1, c)][static_cast<std::size_t>(i)];
        if (!admissible(spec_, uj))
          throw NumericalError("dec_step: inadmissible sub-node state", i);
        ustage_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = uj;
        auto mm = maxwellian(spec_, uj, a_);
        m1[static_cast<std::size_t>(j)] = mm.first;
        m2[static_cast<std::size_t>(j)] = mm.second;
        T[static_cast<std::size_t>(j)] = relaxation_matrix(spec_, uj, a_, i);
        all_zero = all_zero && detail::is_zero_matrix(T[static_cast<std::size_t>(j)]);
      }
      if (all_zero) {
        // Inviscid limit: the populations relax onto the sub-node Maxwellians.
        for (int j = 0; j < s; ++j)
          for (int c = 0; c < p; ++c) {
            stages_[static_cast<std::size_t>(j)].interior(0, c)[static_cast<std::size_t>(i)] =
                m1[static_cast<std::size_t>(j)][c];
            stages_[static_cast<std::size_t>(j)].interior(1, c)[static_cast<std::size_t>(i)] =
                m2[static_cast<std::size_t>(j)][c];
          }
        continue;
      }
      SquareMat<double, kMaxLocalDim> sys(dim);
      for (int j = 0; j < s; ++j)
        for (int k = 0; k < s; ++k) {
          const double a_jk = tab_.A(j, k);
          for (int c = 0; c < p; ++c) {
            if (a_jk != 0.0) sys(j * p + c, k * p + c) = a_jk;
            if (j == k)
              for (int d = 0; d < p; ++d)
                sys(j * p + c, k * p + d) += T[static_cast<std::size_t>(j)](c, d) / dt;
          }
        }
      const LuFactor<double, kMaxLocalDim> lu(sys);
      if (lu.singular()) throw NumericalError("dec_step: singular local system", i);
      for (int w = 0; w < WaveModel::k; ++w) {
        for (int j = 0; j < s; ++j)
          for (int c = 0; c < p; ++c) {
            const State& m = (w == 0) ? m1[static_cast<std::size_t>(j)] : m2[static_cast<std::size_t>(j)];
            rhs[static_cast<std::size_t>(j * p + c)] =
                b0_[sidx(j, w, c)][static_cast<std::size_t>(i)] - m[c];
          }
        std::copy(rhs.begin(), rhs.begin() + dim, w_vec.begin());
        lu.solve(std::span<double>(w_vec.data(), static_cast<std::size_t>(dim)));
        for (int j = 0; j < s; ++j)
          for (int c = 0; c < p; ++c) {
            double val = b0_[sidx(j, w, c)][static_cast<std::size_t>(i)];
            for (int k = 0; k < s; ++k)
              val -= tab_.A(j, k) * w_vec[static_cast<std::size_t>(k * p + c)];
            stages_[static_cast<std::size_t>(j)].interior(w, c)[static_cast<std::size_t>(i)] = val;
          }
      }
    }
  }

  ProblemSpec spec_;
  Grid1D grid_;
  ButcherTableau tab_;
  SpaceOp space_;
  double a_ = 0.0;
  std::vector<std::vector<double>> f0_;
  std::vector<PopulationField> stages_;
  std::vector<std::vector<double>> sx_;
  std::vector<std::vector<double>> b0_;
  std::vector<std::vector<State>> ustage_;
};

/// One DeC step with M iterations; the update takes the last sub-node, which
/// for Lobatto IIIC equals the b-weighted update.
inline void dec_step(SolverState& st, const Grid1D& grid, const ProblemSpec& spec,
                     const DeCConfig& cfg, double dt,
                     SpaceOp space = SpaceOp::Dx4, DecWorkspace* ws = nullptr) {
  if (!(dt > 0.0)) throw DomainError("dec_step: dt must be > 0");
  DecWorkspace local(spec, grid, cfg.tableau, space);
  DecWorkspace& work = ws ? *ws : local;
  work.begin(st.F, st.a);
  for (int it = 0; it < cfg.iterations; ++it) work.iterate(dt);
  work.write_final(st.F);
  st.t += dt;
}

/// Totals sum_i u_i dx per component (the conserved quantities on periodic grids).
inline State conserved_totals(const PopulationField& F, const Grid1D& grid) {
  State m;
  m.p = F.p;
  for (int c = 0; c < F.p; ++c) {
    double acc = 0.0;
    for (int i = 0; i < F.n; ++i) {
      acc += F.comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(kGhost + i)] +
             F.comp[static_cast<std::size_t>(F.p + c)][static_cast<std::size_t>(kGhost + i)];
    }
    m[c] = acc * grid.dx();
  }
  return m;
}

struct Snapshot {
  double t;
  std::vector<State> macro;
};

struct RunResult {
  SolverState state;
  std::vector<State> final_macro;
  std::vector<Snapshot> snapshots;
  int steps = 0;
  double mass_drift = 0.0;  // max relative drift of the conserved totals (periodic)
  double eps = std::nan("");
};

/// Advances a case from the equilibrium initialization to its end time with a
/// fixed CFL number; the final (and any snapshot-hitting) step is shortened to
/// land exactly on the requested times.
inline RunResult run(const CaseConfig& cfg) {
  const Grid1D grid = build_grid(cfg);
  const ProblemSpec& spec = cfg.problem;
  const std::vector<State> u0 = initial_macro(cfg, grid);

  RunResult result;
  SolverState st = initial_solver_state(spec, grid, u0, cfg.wave);

  const int order = cfg.scheme.order;
  const SpaceOp space = cfg.scheme.effective_space();
  const double lambda = cfg.scheme.effective_lambda();
  DeCConfig dec;
  std::unique_ptr<DecWorkspace> ws;
  if (order > 1) {
    dec.tableau = lobatto_iiic(order);
    dec.iterations = cfg.scheme.effective_iterations();
    dec.cfl_lambda = lambda;
    ws = std::make_unique<DecWorkspace>(spec, grid, dec.tableau, space);
  }

  const bool periodic = grid.boundary == BoundaryKind::Periodic;
  const State mass0 = conserved_totals(st.F, grid);

  const double t_tol = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  std::vector<double> events = cfg.snapshot_times;
  events.push_back(cfg.t_end);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [&](double x, double y) { return std::abs(x - y) <= t_tol; }),
               events.end());
  events.erase(std::remove_if(events.begin(), events.end(),
                              [&](double x) { return x <= t_tol; }),
               events.end());

  auto record_snapshot = [&](double t) {
    for (double ts : cfg.snapshot_times)
      if (std::abs(ts - t) <= t_tol) {
        result.snapshots.push_back({t, macro_states(st.F)});
        return;
      }
  };
  record_snapshot(0.0);

  for (double target : events) {
    if (target > cfg.t_end + t_tol) break;
    while (st.t < target - t_tol) {
      if (cfg.wave.adaptive) {
        const auto u = macro_states(st.F);
        st.a = update_wave_speed(cfg.wave, spec, u);
        if (!(st.a > 0.0))
          throw DomainError("run: adaptive wave speed collapsed to zero");
      }
      const double dt_cfl = lambda * grid.dx() / st.a;
      const double remaining = target - st.t;
      const bool last = remaining <= dt_cfl * (1.0 + 1e-12);
      const double dt = last ? remaining : dt_cfl;
      if (order == 1)
        step_imex1(st, grid, spec, dt, space);
      else
        dec_step(st, grid, spec, dec, dt, space, ws.get());
      if (last) st.t = target;
      ++result.steps;
      if (periodic) {
        const State m = conserved_totals(st.F, grid);
        for (int c = 0; c < spec.p; ++c) {
          const double ref = std::max(std::abs(mass0[c]), 1e-300);
          result.mass_drift = std::max(result.mass_drift, std::abs(m[c] - mass0[c]) / ref);
        }
      }
    }
    record_snapshot(st.t);
  }

  if (cfg.ell > 0.0) result.eps = knudsen(spec, st.a, cfg.ell, cfg.rho_c);
  result.final_macro = macro_states(st.F);
  result.state = std::move(st);
  return result;
}

}  // namespace kinrel
