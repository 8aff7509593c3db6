#include "ellcfd/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ellcfd {

void CouplingConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(nu > 0.0, "viscosity must be positive");
  require(n_correctors >= 1, "n_correctors must be at least 1");
  require(n_nonorth_correctors >= 0, "n_nonorth_correctors must be non-negative");
  require(alpha_u > 0.0 && alpha_u <= 1.0, "alpha_u must be in (0, 1]");
  require(alpha_p > 0.0 && alpha_p <= 1.0, "alpha_p must be in (0, 1]");
  require(outer_tol > 0.0, "outer_tol must be positive");
  require(max_outer >= 0, "max_outer must be non-negative");
  require(dt > 0.0, "dt must be positive");
  require(end_time >= 0.0, "end_time must be non-negative");
  require(steady_tol >= 0.0, "steady_tol must be non-negative");
  require(p_ref_cell >= 0, "p_ref_cell must be non-negative");
  scheme.validate();
  pressure_solver.validate();
  momentum_solver.validate();
}

std::string residual_csv_header() { return "solver,field,outer_iter,inner_iters,initial_res,final_res"; }

std::string to_csv(const ResidualRecord& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, ",%d,%d,%.9e,%.9e", r.outer_iter, r.inner_iters, r.initial_res, r.final_res);
  return r.solver + "," + r.field + buf;
}

RunState make_state(VectorField u, ScalarField p, const Domain& d) {
  RunState s;
  s.u = std::move(u);
  s.p = std::move(p);
  apply_bcs(s.u, d.mesh, d.geom, 0.0);
  apply_bcs(s.p, d.mesh, d.geom, 0.0);
  s.flux = fvm::flux_of(s.u, d);
  return s;
}

double continuity_error(const std::vector<double>& flux, const Domain& d) {
  double fmax = 0.0;
  for (double f : flux) fmax = std::max(fmax, std::abs(f));
  if (fmax == 0.0) return 0.0;
  double emax = 0.0;
  for (double s : fvm::surface_sum(flux, d)) emax = std::max(emax, std::abs(s));
  return emax / fmax;
}

double kinetic_energy(const VectorField& u, const Domain& d) {
  double e = 0.0;
  for (Index c = 0; c < d.n_cells(); ++c) e += 0.5 * d.geom.cell_volume[c] * mag_sqr(u[c]);
  return e;
}

namespace {

constexpr const char* kComponentNames[3] = {"Ux", "Uy", "Uz"};

double& comp(Vec3& v, int c) { return c == 0 ? v.x : (c == 1 ? v.y : v.z); }

void record_solve(RunState& s, std::string solver, std::string field, const SolveReport& r, Profiler* prof) {
  s.log.push_back({std::move(solver), std::move(field), s.outer + 1, r.iterations, r.initial_residual,
                   r.final_residual});
  if (s.log.back().solver == "cg") {
    s.cg_iterations += r.iterations;
    if (prof) prof->cg_stages += r.stage_times;
  } else {
    s.bicgstab_iterations += r.iterations;
    if (prof) prof->bicgstab_stages += r.stage_times;
  }
}

struct Momentum {
  FvMatrix<Vec3> eq;
  std::vector<double> a_p;
};

/// Assembles and solves the momentum predictor. `old_cells` is u at the
/// previous time level (PISO) or the previous iterate (SIMPLE relaxation).
Momentum solve_momentum(RunState& s, const Domain& d, const CouplingConfig& cfg, const std::vector<Vec3>& old_cells,
                        SweepResiduals& res, Profiler* prof) {
  Momentum m;
  {
    ScopedTimer t(prof, "assembly.div");
    m.eq = fvm::divergence<Vec3>(s.flux, s.u, d, cfg.scheme);
  }
  {
    ScopedTimer t(prof, "assembly.lap");
    auto lap = fvm::laplacian<Vec3>(cfg.nu, s.u, d, cfg.scheme);
    m.eq -= lap;
  }
  if (cfg.algorithm == Algorithm::piso) {
    ScopedTimer t(prof, "assembly.ddt");
    m.eq += fvm::ddt_euler<Vec3>(old_cells, cfg.dt, d);
  } else if (cfg.alpha_u < 1.0) {
    ScopedTimer t(prof, "assembly.other");
    for (Index c = 0; c < d.n_cells(); ++c) {
      const double a0 = m.eq.matrix.diagonal_value(c);
      const double a = a0 / cfg.alpha_u;
      m.eq.matrix.add_to_diagonal(c, a - a0);
      m.eq.source[c] += (a - a0) * old_cells[c];
    }
  }
  m.a_p = m.eq.diag();
  for (Index c = 0; c < d.n_cells(); ++c)
    if (!(m.a_p[c] > 0.0))
      throw CouplingError("non-positive momentum diagonal in cell " + std::to_string(c));

  std::vector<Vec3> grad_p;
  {
    ScopedTimer t(prof, "assembly.grad");
    grad_p = fvm::gauss_gradient(s.p, d);
  }
  const std::size_t n = static_cast<std::size_t>(d.n_cells());
  std::vector<double> b(n), x(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = comp(m.eq.source[i], c) - d.geom.cell_volume[i] * comp(grad_p[i], c);
      x[i] = comp(s.u[static_cast<Index>(i)], c);
    }
    SolveReport r;
    {
      ScopedTimer t(prof, "solve.bicgstab");
      r = bicgstab(m.eq.matrix, b, x, cfg.momentum_solver);
    }
    record_solve(s, "bicgstab", kComponentNames[c], r, prof);
    res.momentum = std::max(res.momentum, r.initial_residual);
    res.momentum_iters += r.iterations;
    for (std::size_t i = 0; i < n; ++i) comp(s.u[static_cast<Index>(i)], c) = x[i];
  }
  apply_bcs(s.u, d.mesh, d.geom, s.t);
  return m;
}

/// One pressure correction: solves for p, sets the conservative flux and
/// corrects the cell velocities. `coef` multiplies (phi_old - S.u_old_f)
/// and `u_prev` / `flux_prev` supply those old values.
void correct_pressure(RunState& s, const Domain& d, const CouplingConfig& cfg, const Momentum& m,
                      const VectorField& u_prev, const std::vector<double>& flux_prev, const std::vector<double>& coef,
                      bool relax_p, bool first, SweepResiduals& res, Profiler* prof) {
  const Mesh& mesh = d.mesh;
  const std::size_t n = static_cast<std::size_t>(d.n_cells());
  std::vector<double> rau(n);
  for (std::size_t c = 0; c < n; ++c) rau[c] = d.geom.cell_volume[c] / m.a_p[c];

  VectorField hbya = s.u;
  std::vector<double> phi_hbya;
  std::vector<double> rau_f;
  {
    ScopedTimer t(prof, "assembly.other");
    hbya.cells() = fvm::h_by_a(m.eq, s.u.cells());
    apply_bcs(hbya, mesh, d.geom, s.t);
    phi_hbya = fvm::flux_of(hbya, d);
    const auto u_prev_flux = fvm::flux_of(u_prev, d);
    for (Index f = 0; f < mesh.n_faces(); ++f) {
      if (!mesh.is_internal(f)) {
        const auto& bc = s.u.bc(mesh.patch_of(f));
        if (is_fixed(bc) || is_empty(bc)) continue;
      }
      phi_hbya[f] += coef[f] * (flux_prev[f] - u_prev_flux[f]);
    }
    rau_f = fvm::interpolate_cells(rau, d);
  }

  const std::vector<double> p_old = s.p.cells();
  const bool pin = !s.p.has_fixed_patch();
  if (pin && cfg.p_ref_cell >= d.n_cells()) throw CouplingError("p_ref_cell is outside the mesh");

  std::vector<double> div_hbya = fvm::surface_sum(phi_hbya, d);
  for (int corr = 0; corr <= cfg.n_nonorth_correctors; ++corr) {
    FvMatrix<double> peq;
    {
      ScopedTimer t(prof, "assembly.lap");
      peq = fvm::laplacian<double>(rau_f, s.p, d, cfg.scheme);
    }
    // A p = source + div(phiHbyA), negated so the operator is positive definite.
    HybridMatrix a = peq.matrix;
    a *= -1.0;
    std::vector<double> b(n);
    for (std::size_t c = 0; c < n; ++c) b[c] = -(peq.source[c] + div_hbya[c]);
    if (pin) {
      const double a0 = a.diagonal_value(cfg.p_ref_cell);
      a.add_to_diagonal(cfg.p_ref_cell, a0);
      b[static_cast<std::size_t>(cfg.p_ref_cell)] += a0 * cfg.p_ref_value;
    }
    SolveReport r;
    {
      ScopedTimer t(prof, "solve.cg");
      r = cg(a, b, s.p.cells(), cfg.pressure_solver);
    }
    record_solve(s, "cg", "p", r, prof);
    if (first && corr == 0) res.pressure = r.initial_residual;
    res.pressure_iters += r.iterations;
    apply_bcs(s.p, mesh, d.geom, s.t);
    if (corr == cfg.n_nonorth_correctors) {
      const auto lap_flux = fvm::face_flux(peq, s.p, d);
      for (Index f = 0; f < mesh.n_faces(); ++f) s.flux[f] = phi_hbya[f] - lap_flux[f];
    }
  }

  if (relax_p && cfg.alpha_p < 1.0) {
    for (std::size_t c = 0; c < n; ++c) s.p.cells()[c] = p_old[c] + cfg.alpha_p * (s.p.cells()[c] - p_old[c]);
    apply_bcs(s.p, mesh, d.geom, s.t);
  }

  std::vector<Vec3> grad_p;
  {
    ScopedTimer t(prof, "assembly.grad");
    grad_p = fvm::gauss_gradient(s.p, d);
  }
  for (std::size_t c = 0; c < n; ++c) s.u.cells()[c] = hbya.cells()[c] - rau[c] * grad_p[c];
  apply_bcs(s.u, mesh, d.geom, s.t);
}

double max_change(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, mag(a[i] - b[i]));
  return m;
}

}  // namespace

SweepResiduals simple_outer_iteration(RunState& s, const Domain& d, const CouplingConfig& cfg, Profiler* prof) {
  SweepResiduals res;
  const VectorField u_prev = s.u;
  const std::vector<double> flux_prev = s.flux;
  apply_bcs(s.p, d.mesh, d.geom, s.t);
  const Momentum m = solve_momentum(s, d, cfg, u_prev.cells(), res, prof);
  const std::vector<double> coef(static_cast<std::size_t>(d.mesh.n_faces()), 1.0 - cfg.alpha_u);
  correct_pressure(s, d, cfg, m, u_prev, flux_prev, coef, true, true, res, prof);
  ++s.outer;
  res.continuity = continuity_error(s.flux, d);
  res.max_change = max_change(s.u.cells(), u_prev.cells());
  return res;
}

SweepResiduals piso_time_step(RunState& s, const Domain& d, const CouplingConfig& cfg, Profiler* prof) {
  SweepResiduals res;
  const VectorField u_prev = s.u;
  const std::vector<double> flux_prev = s.flux;
  s.t = cfg.dt * static_cast<double>(s.outer + 1);
  apply_bcs(s.u, d.mesh, d.geom, s.t);
  apply_bcs(s.p, d.mesh, d.geom, s.t);
  const Momentum m = solve_momentum(s, d, cfg, u_prev.cells(), res, prof);
  std::vector<double> rau_dt(static_cast<std::size_t>(d.n_cells()));
  for (Index c = 0; c < d.n_cells(); ++c) rau_dt[c] = d.geom.cell_volume[c] / (m.a_p[c] * cfg.dt);
  const auto coef = fvm::interpolate_cells(rau_dt, d);
  for (int corr = 0; corr < cfg.n_correctors; ++corr)
    correct_pressure(s, d, cfg, m, u_prev, flux_prev, coef, false, corr == 0, res, prof);
  ++s.outer;
  res.continuity = continuity_error(s.flux, d);
  res.max_change = max_change(s.u.cells(), u_prev.cells());
  return res;
}

RunResult run_case(RunState& s, const Domain& d, const CouplingConfig& cfg, Profiler* prof,
                   const SweepCallback& on_sweep) {
  cfg.validate();
  RunResult out;
  if (cfg.algorithm == Algorithm::simple) {
    for (int it = 0; it < cfg.max_outer; ++it) {
      out.last = simple_outer_iteration(s, d, cfg, prof);
      ++out.iterations;
      if (on_sweep) on_sweep(s, out.last);
      if (std::max(out.last.momentum, out.last.pressure) < cfg.outer_tol) {
        out.converged = true;
        break;
      }
    }
    return out;
  }
  const int n_steps = cfg.end_time > 0.0 ? static_cast<int>(std::llround(cfg.end_time / cfg.dt)) : cfg.max_outer;
  out.converged = true;
  for (int it = 0; it < n_steps; ++it) {
    out.last = piso_time_step(s, d, cfg, prof);
    ++out.iterations;
    if (on_sweep) on_sweep(s, out.last);
    if (cfg.steady_tol > 0.0 && out.last.max_change < cfg.steady_tol) break;
  }
  if (cfg.steady_tol > 0.0 && !(out.last.max_change < cfg.steady_tol) && n_steps > 0) out.converged = false;
  return out;
}

}  // namespace ellcfd
