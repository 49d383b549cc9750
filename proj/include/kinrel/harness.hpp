#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "kinrel/case.hpp"
#include "kinrel/exact.hpp"
#include "kinrel/stability.hpp"
#include "kinrel/timeint.hpp"

namespace kinrel {

/// Malformed or inconsistent case description.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative discrete norm sqrt(sum (u - u_ex)^2 / sum u_ex^2).
inline double l2_error(std::span<const double> numeric, std::span<const double> exact) {
  if (numeric.size() != exact.size()) throw DomainError("l2_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double d = numeric[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) throw DomainError("l2_error: exact field has zero norm");
  return std::sqrt(num / den);
}

struct ErrorFields {
  std::vector<double> numeric;
  std::vector<double> exact;
};

/// Numeric and reference fields the case's error norm is measured on. Acoustic
/// cases compare density perturbations about the base state; the viscous shock
/// compares entropy profiles; scalar cases compare u directly.
inline ErrorFields error_fields(const CaseConfig& cfg, const Grid1D& grid,
                                std::span<const State> macro, double t) {
  const int n = grid.n;
  ErrorFields out;
  out.numeric.resize(static_cast<std::size_t>(n));
  out.exact.resize(static_cast<std::size_t>(n));
  const auto& in = cfg.initial;
  switch (in.kind) {
    case InitialKind::Gaussian: {
      const double c = cfg.problem.kind == PdeKind::Advection ? cfg.problem.speed : 0.0;
      for (int i = 0; i < n; ++i) {
        out.numeric[static_cast<std::size_t>(i)] = macro[static_cast<std::size_t>(i)][0];
        out.exact[static_cast<std::size_t>(i)] =
            advection_diffusion_exact(grid.x(i), t, c, cfg.problem.alpha, in.delta, grid.length,
                                      in.amplitude, in.offset, in.center);
      }
      return out;
    }
    case InitialKind::TanhShock: {
      for (int i = 0; i < n; ++i) {
        out.numeric[static_cast<std::size_t>(i)] = macro[static_cast<std::size_t>(i)][0];
        out.exact[static_cast<std::size_t>(i)] =
            burgers_tanh_exact(grid.x(i), cfg.problem.alpha, in.delta);
      }
      return out;
    }
    case InitialKind::Sine: {
      if (cfg.problem.kind != PdeKind::Burgers || !(cfg.problem.alpha > 0.0))
        throw UnsupportedError("error_fields: sine reference needs viscous Burgers");
      for (int i = 0; i < n; ++i) {
        out.numeric[static_cast<std::size_t>(i)] = macro[static_cast<std::size_t>(i)][0];
        out.exact[static_cast<std::size_t>(i)] =
            burgers_fourier_exact(grid.x(i), t, cfg.problem.alpha);
      }
      return out;
    }
    case InitialKind::AcousticWave: {
      const State base = acoustic_base_state(cfg);
      const AcousticMode mode = acoustic_mode(cfg.problem, base, in.wavenumber, in.amplitude);
      for (int i = 0; i < n; ++i) {
        out.numeric[static_cast<std::size_t>(i)] = macro[static_cast<std::size_t>(i)][0] - base[0];
        out.exact[static_cast<std::size_t>(i)] =
            acoustic_exact(mode, base, grid.x(i), t)[0] - base[0];
      }
      return out;
    }
    case InitialKind::RankineHugoniotBlend: {
      const ViscousShock shock(in.mach, cfg.problem.gamma, cfg.problem.mu);
      for (int i = 0; i < n; ++i) {
        out.numeric[static_cast<std::size_t>(i)] =
            entropy(cfg.problem, macro[static_cast<std::size_t>(i)]);
        out.exact[static_cast<std::size_t>(i)] = shock.at(grid.x(i)).eta;
      }
      return out;
    }
  }
  throw UnsupportedError("error_fields: no reference solution for this case");
}

/// Runs the case and returns the error norm at the end time.
inline double case_l2_error(const CaseConfig& cfg) {
  const RunResult r = run(cfg);
  const Grid1D grid = build_grid(cfg);
  const ErrorFields f = error_fields(cfg, grid, r.final_macro, r.state.t);
  return l2_error(f.numeric, f.exact);
}

struct ConvergenceRow {
  int n = 0;
  double l2 = 0.0;
  double rate = std::nan("");  // log2(L2(N/2) / L2(N))
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

/// Mesh-refinement study: reruns the case on each grid size and tabulates the
/// error norm with the observed order between successive doublings.
inline ConvergenceReport convergence_study(const CaseConfig& base, std::span<const int> meshes) {
  if (meshes.size() < 2) throw ConfigError("convergence_study: need at least two mesh sizes");
  for (std::size_t i = 1; i < meshes.size(); ++i)
    if (meshes[i] != 2 * meshes[i - 1])
      throw ConfigError("convergence_study: mesh sizes must double");
  ConvergenceReport report;
  for (const int n : meshes) {
    CaseConfig cfg = base;
    cfg.n = n;
    ConvergenceRow row;
    row.n = n;
    row.l2 = case_l2_error(cfg);
    if (!report.rows.empty() && row.l2 > 0.0)
      row.rate = std::log2(report.rows.back().l2 / row.l2);
    report.rows.push_back(row);
  }
  return report;
}

struct KnudsenRow {
  double a = 0.0;
  double eps = 0.0;
  double l2 = 0.0;
  double rate = std::nan("");
};

/// Consistency-error sweep: varies the kinetic speed (or speed ratio for
/// adaptive models) on a fixed fine mesh and tabulates the error norm against
/// the Knudsen number; successive entries are expected to halve epsilon.
inline std::vector<KnudsenRow> knudsen_sweep(const CaseConfig& base,
                                             std::span<const double> speeds) {
  if (speeds.empty()) throw ConfigError("knudsen_sweep: no speeds given");
  if (!(base.ell > 0.0)) throw ConfigError("knudsen_sweep: case must set ell");
  std::vector<KnudsenRow> rows;
  for (const double s : speeds) {
    CaseConfig cfg = base;
    if (base.wave.adaptive)
      cfg.wave = WaveModel::adaptive_ratio(s);
    else
      cfg.wave = WaveModel::constant(s);
    const RunResult r = run(cfg);
    const Grid1D grid = build_grid(cfg);
    const ErrorFields f = error_fields(cfg, grid, r.final_macro, r.state.t);
    KnudsenRow row;
    row.a = r.state.a;
    row.eps = knudsen(cfg.problem, r.state.a, cfg.ell, cfg.rho_c);
    row.l2 = l2_error(f.numeric, f.exact);
    if (!rows.empty() && row.l2 > 0.0) row.rate = std::log2(rows.back().l2 / row.l2);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Deterministic text emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g8(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

inline std::string fmt_e8(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

}  // namespace detail

inline std::string emit_csv(const ConvergenceReport& report) {
  std::string out = "N,L2,r\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += detail::fmt_e8(row.l2);
    out += ',';
    out += detail::fmt_g8(row.rate);
    out += '\n';
  }
  return out;
}

inline std::string emit_csv(std::span<const KnudsenRow> rows) {
  std::string out = "a,eps,L2,r\n";
  for (const auto& row : rows) {
    out += detail::fmt_g8(row.a);
    out += ',';
    out += detail::fmt_g8(row.eps);
    out += ',';
    out += detail::fmt_e8(row.l2);
    out += ',';
    out += detail::fmt_g8(row.rate);
    out += '\n';
  }
  return out;
}

/// Snapshot CSV: x, conserved components, and the reference columns when a
/// closed-form solution is wired for the case.
inline std::string emit_snapshot_csv(const CaseConfig& cfg, const Grid1D& grid,
                                     std::span<const State> macro, double t) {
  const int p = cfg.problem.p;
  std::string out = "x";
  if (p == 1) {
    out += ",u";
  } else {
    out += ",rho,momentum,energy";
  }
  std::optional<ErrorFields> ref;
  try {
    ref = error_fields(cfg, grid, macro, t);
  } catch (const UnsupportedError&) {
  }
  if (ref) out += ",numeric_ref,exact_ref";
  out += '\n';
  for (int i = 0; i < grid.n; ++i) {
    out += detail::fmt_g8(grid.x(i));
    for (int c = 0; c < p; ++c) {
      out += ',';
      out += detail::fmt_e8(macro[static_cast<std::size_t>(i)][c]);
    }
    if (ref) {
      out += ',';
      out += detail::fmt_e8(ref->numeric[static_cast<std::size_t>(i)]);
      out += ',';
      out += detail::fmt_e8(ref->exact[static_cast<std::size_t>(i)]);
    }
    out += '\n';
  }
  return out;
}

/// Critical-CFL table for the DeC schemes: rows order x space operator,
/// columns M = 1..6.
inline std::string emit_stability_table_csv() {
  std::string out = "order,space,M1,M2,M3,M4,M5,M6\n";
  const char* names[] = {"dx1", "dx2", "dx4"};
  for (const int order : {2, 4})
    for (const SpaceOp space : {SpaceOp::Dx1, SpaceOp::Dx2, SpaceOp::Dx4}) {
      out += std::to_string(order);
      out += ',';
      out += names[static_cast<int>(space)];
      for (int m = 1; m <= 6; ++m) {
        char buf[16];
        std::snprintf(buf, sizeof buf, ",%.2f", critical_cfl(SchemeDescriptor::dec(order, m, space)));
        out += buf;
      }
      out += '\n';
    }
  return out;
}

// ---------------------------------------------------------------------------
// Flat INI-style configuration
// ---------------------------------------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key + ": '" + v + "'");
  }
}

inline int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
  }
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace detail

/// Parses "[section]" blocks of key = value lines into "section.key" entries.
inline ConfigMap parse_ini(std::istream& in) {
  ConfigMap map;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of(";#");
    if (comment != std::string::npos) line.erase(comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: bad section header at line " + std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
    map[section.empty() ? key : section + "." + key] = value;
  }
  return map;
}

/// Builds a case from "section.key" entries, starting from `base` so that
/// command-line overrides can be layered on a registry case.
inline CaseConfig config_from_map(const ConfigMap& map, CaseConfig base = {}) {
  CaseConfig cfg = std::move(base);
  // Problem parameters are gathered first, then the spec is rebuilt.
  std::string kind;
  double alpha = cfg.problem.alpha, speed = cfg.problem.speed;
  double gamma = cfg.problem.gamma, mu = cfg.problem.mu, prandtl = cfg.problem.prandtl;
  switch (cfg.problem.kind) {
    case PdeKind::Diffusion: kind = "diffusion"; break;
    case PdeKind::Advection: kind = "advection"; break;
    case PdeKind::Burgers: kind = "burgers"; break;
    case PdeKind::NavierStokes: kind = "navier_stokes"; break;
  }
  double wave_a = cfg.wave.adaptive ? 0.0 : cfg.wave.a;
  double wave_ratio = cfg.wave.adaptive ? cfg.wave.ratio : 0.0;

  for (const auto& [key, value] : map) {
    if (key == "case.name") cfg.name = value;
    else if (key == "problem.kind") kind = value;
    else if (key == "problem.alpha") alpha = detail::to_double(key, value);
    else if (key == "problem.speed") speed = detail::to_double(key, value);
    else if (key == "problem.gamma") gamma = detail::to_double(key, value);
    else if (key == "problem.mu") mu = detail::to_double(key, value);
    else if (key == "problem.prandtl") prandtl = detail::to_double(key, value);
    else if (key == "initial.type") {
      if (value == "gaussian") cfg.initial.kind = InitialKind::Gaussian;
      else if (value == "sine") cfg.initial.kind = InitialKind::Sine;
      else if (value == "tanh_shock") cfg.initial.kind = InitialKind::TanhShock;
      else if (value == "rankine_hugoniot") cfg.initial.kind = InitialKind::RankineHugoniotBlend;
      else if (value == "acoustic") cfg.initial.kind = InitialKind::AcousticWave;
      else throw ConfigError("config: unknown initial.type '" + value + "'");
    }
    else if (key == "initial.delta") cfg.initial.delta = detail::to_double(key, value);
    else if (key == "initial.amplitude") cfg.initial.amplitude = detail::to_double(key, value);
    else if (key == "initial.offset") cfg.initial.offset = detail::to_double(key, value);
    else if (key == "initial.center") cfg.initial.center = detail::to_double(key, value);
    else if (key == "initial.sharpen") cfg.initial.sharpen = detail::to_double(key, value);
    else if (key == "initial.mach") cfg.initial.mach = detail::to_double(key, value);
    else if (key == "initial.wavenumber") cfg.initial.wavenumber = detail::to_double(key, value);
    else if (key == "initial.base_rho") cfg.initial.base_rho = detail::to_double(key, value);
    else if (key == "initial.base_pressure") cfg.initial.base_pressure = detail::to_double(key, value);
    else if (key == "initial.base_velocity") cfg.initial.base_velocity = detail::to_double(key, value);
    else if (key == "grid.n") cfg.n = detail::to_int(key, value);
    else if (key == "grid.length") cfg.length = detail::to_double(key, value);
    else if (key == "grid.x0") cfg.x0 = detail::to_double(key, value);
    else if (key == "grid.boundary") {
      if (value == "periodic") cfg.boundary = BoundaryKind::Periodic;
      else if (value == "dirichlet") cfg.boundary = BoundaryKind::DirichletMaxwellian;
      else throw ConfigError("config: unknown grid.boundary '" + value + "'");
    }
    else if (key == "scheme.order") cfg.scheme.order = detail::to_int(key, value);
    else if (key == "scheme.iterations") cfg.scheme.iterations = detail::to_int(key, value);
    else if (key == "scheme.space") {
      cfg.scheme.space_set = true;
      if (value == "dx1") cfg.scheme.space = SpaceOp::Dx1;
      else if (value == "dx2") cfg.scheme.space = SpaceOp::Dx2;
      else if (value == "dx4") cfg.scheme.space = SpaceOp::Dx4;
      else throw ConfigError("config: unknown scheme.space '" + value + "'");
    }
    else if (key == "scheme.cfl_lambda") cfg.scheme.cfl_lambda = detail::to_double(key, value);
    else if (key == "wave.a") { wave_a = detail::to_double(key, value); wave_ratio = 0.0; }
    else if (key == "wave.ratio") { wave_ratio = detail::to_double(key, value); wave_a = 0.0; }
    else if (key == "time.t_end") cfg.t_end = detail::to_double(key, value);
    else if (key == "report.ell") cfg.ell = detail::to_double(key, value);
    else if (key == "report.rho_c") cfg.rho_c = detail::to_double(key, value);
    else if (key == "report.snapshots") cfg.snapshot_times = detail::to_list(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
  }

  try {
    if (kind == "diffusion") cfg.problem = ProblemSpec::diffusion(alpha);
    else if (kind == "advection") cfg.problem = ProblemSpec::advection(speed, alpha);
    else if (kind == "burgers") cfg.problem = ProblemSpec::burgers(alpha);
    else if (kind == "navier_stokes") cfg.problem = ProblemSpec::navier_stokes(gamma, mu, prandtl);
    else throw ConfigError("config: unknown problem.kind '" + kind + "'");
    if (wave_ratio > 0.0) cfg.wave = WaveModel::adaptive_ratio(wave_ratio);
    else cfg.wave = WaveModel::constant(wave_a);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.scheme.order != 1 && cfg.scheme.order != 2 && cfg.scheme.order != 4 &&
      cfg.scheme.order != 6)
    throw ConfigError("config: scheme.order must be 1, 2, 4 or 6");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("config: time.t_end must be >= 0");
  if (cfg.n < 5) throw ConfigError("config: grid.n must be at least 5");
  return cfg;
}

inline CaseConfig parse_config(std::istream& in, CaseConfig base = {}) {
  return config_from_map(parse_ini(in), std::move(base));
}

// ---------------------------------------------------------------------------
// Case registry
// ---------------------------------------------------------------------------

/// Built-in experiment descriptions; names accepted by the CLI and tests.
inline CaseConfig builtin_case(const std::string& name) {
  CaseConfig cfg;
  cfg.name = name;
  if (name == "diffusion") {
    cfg.problem = ProblemSpec::diffusion(0.01);
    cfg.initial = InitialSpec{};  // gaussian, delta 0.1, bump 0.01 on 1.0
    cfg.n = 100;
    cfg.wave = WaveModel::constant(2.0);
    cfg.t_end = 0.1;
    cfg.ell = 0.1;
    return cfg;
  }
  if (name == "advection-diffusion" || name == "advection") {
    cfg.problem = ProblemSpec::advection(10.0, 0.01);
    cfg.initial = InitialSpec{};
    cfg.n = 100;
    cfg.wave = WaveModel::constant(12.0);
    cfg.t_end = 0.005;
    cfg.ell = 0.1;
    return cfg;
  }
  if (name == "advection-inviscid") {
    cfg.problem = ProblemSpec::advection(10.0, 0.0);
    cfg.initial = InitialSpec{};
    cfg.n = 100;
    cfg.wave = WaveModel::constant(12.0);
    cfg.t_end = 0.005;
    return cfg;
  }
  if (name == "burgers-shock") {
    cfg.problem = ProblemSpec::burgers(0.001);
    cfg.initial.kind = InitialKind::TanhShock;
    cfg.initial.delta = 0.01;
    cfg.initial.sharpen = 10.0;
    cfg.n = 300;
    cfg.boundary = BoundaryKind::DirichletMaxwellian;
    cfg.wave = WaveModel::adaptive_ratio(10.0);
    cfg.t_end = 20.0;
    cfg.ell = 0.01;
    return cfg;
  }
  if (name == "burgers-sine") {
    cfg.problem = ProblemSpec::burgers(0.01);
    cfg.initial.kind = InitialKind::Sine;
    cfg.initial.offset = 0.5;
    cfg.initial.amplitude = 1.0;
    cfg.n = 100;
    cfg.wave = WaveModel::adaptive_ratio(10.0);
    cfg.t_end = 0.5;
    cfg.ell = 0.12;
    return cfg;
  }
  if (name == "ns-acoustic") {
    cfg.problem = ProblemSpec::navier_stokes(1.4, 0.001, 0.71);
    cfg.initial.kind = InitialKind::AcousticWave;
    cfg.initial.amplitude = 1e-5;
    cfg.n = 100;
    cfg.wave = WaveModel::adaptive_ratio(10.0);
    cfg.t_end = 0.005;
    cfg.ell = 1.0 / (2.0 * std::numbers::pi);
    cfg.rho_c = 1.0;
    return cfg;
  }
  if (name == "ns-shock" || name == "ns-shock-ma10") {
    const double mach = (name == "ns-shock") ? 2.0 : 10.0;
    cfg.problem = ProblemSpec::navier_stokes(1.4, 0.001, 0.75);
    cfg.initial.kind = InitialKind::RankineHugoniotBlend;
    cfg.initial.mach = mach;
    const ViscousShock shock(mach, 1.4, 0.001);
    const double delta = shock.width();
    cfg.n = 2501;  // dx = delta/10 over a length-250*delta domain
    cfg.length = 250.0 * delta;
    cfg.x0 = -125.0 * delta;
    cfg.boundary = BoundaryKind::DirichletMaxwellian;
    cfg.wave = WaveModel::adaptive_ratio(10.0);
    cfg.t_end = (name == "ns-shock") ? 0.5 : 0.02;
    cfg.ell = delta;
    cfg.rho_c = 1.0;
    return cfg;
  }
  throw ConfigError("unknown case '" + name + "'");
}

inline std::vector<std::string> builtin_case_names() {
  return {"diffusion",     "advection-diffusion", "advection-inviscid", "burgers-shock",
          "burgers-sine",  "ns-acoustic",         "ns-shock",           "ns-shock-ma10"};
}

}  // namespace kinrel
