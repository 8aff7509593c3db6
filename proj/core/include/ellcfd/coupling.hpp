#pragma once

// Segregated pressure-velocity coupling on a collocated grid.
//
// SIMPLE: one under-relaxed momentum solve and one pressure solve per outer
// iteration. PISO: one momentum predictor and n_correctors pressure solves
// with explicit velocity and flux corrections per time step.
//
// Face fluxes follow the H/A form: phi = S.(H/A)_f + c_f (phi_old - S.u_old_f)
// - (V/A)_f grad(p)_f.S, where the middle term (relaxation for SIMPLE, time
// derivative for PISO) keeps the converged flux independent of the
// relaxation factor and of the time step.

#include <functional>
#include <string>
#include <vector>

#include "ellcfd/field.hpp"
#include "ellcfd/fvm.hpp"
#include "ellcfd/linsolve.hpp"
#include "ellcfd/profiler.hpp"

namespace ellcfd {

enum class Algorithm { simple, piso };

struct CouplingConfig {
  Algorithm algorithm = Algorithm::simple;
  double nu = 0.01;               ///< kinematic viscosity, m^2/s
  int n_correctors = 2;           ///< PISO pressure corrections per step
  int n_nonorth_correctors = 0;   ///< extra pressure solves for the explicit correction
  double alpha_u = 0.7;           ///< SIMPLE momentum relaxation
  double alpha_p = 0.3;           ///< SIMPLE pressure relaxation
  double outer_tol = 1e-5;        ///< SIMPLE stop: max initial residual of the sweep
  int max_outer = 1000;           ///< SIMPLE iterations or PISO steps
  double dt = 1e-4;               ///< PISO time step, s
  double end_time = 0.0;          ///< PISO end time; 0 runs max_outer steps
  double steady_tol = 0.0;        ///< PISO stop when max |du| per step falls below this; 0 disables
  Index p_ref_cell = 0;
  double p_ref_value = 0.0;
  SchemeConfig scheme;
  SolveConfig pressure_solver{1e-8, 0.0, 5000, false, true};
  SolveConfig momentum_solver{1e-8, 0.0, 1000, false, true};

  void validate() const;
};

/// One linear solve, as logged.
struct ResidualRecord {
  std::string solver;  ///< "cg" or "bicgstab"
  std::string field;   ///< "Ux", "Uy", "Uz" or "p"
  int outer_iter = 0;
  int inner_iters = 0;
  double initial_res = 0.0;
  double final_res = 0.0;
};

/// CSV header and row in the residual log format
/// solver,field,outer_iter,inner_iters,initial_res,final_res
std::string residual_csv_header();
std::string to_csv(const ResidualRecord& r);

struct RunState {
  double t = 0.0;
  int outer = 0;  ///< completed SIMPLE iterations or PISO steps
  VectorField u;
  ScalarField p;
  std::vector<double> flux;  ///< volumetric face flux, m^3/s
  long long cg_iterations = 0;
  long long bicgstab_iterations = 0;
  std::vector<ResidualRecord> log;
};

/// Initial state with BCs applied at t = 0 and fluxes S.u_f.
RunState make_state(VectorField u, ScalarField p, const Domain& d);

struct SweepResiduals {
  double momentum = 0.0;    ///< max initial residual over velocity components
  double pressure = 0.0;    ///< initial residual of the first pressure solve
  double continuity = 0.0;  ///< max_cells |sum_f sign phi_f| / max_f |phi_f|
  double max_change = 0.0;  ///< max |u_new - u_old| over cells
  int momentum_iters = 0;
  int pressure_iters = 0;
};

class CouplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One SIMPLE sweep.
SweepResiduals simple_outer_iteration(RunState& state, const Domain& d, const CouplingConfig& cfg,
                                      Profiler* prof = nullptr);

/// One PISO step; advances state.t by cfg.dt.
SweepResiduals piso_time_step(RunState& state, const Domain& d, const CouplingConfig& cfg, Profiler* prof = nullptr);

struct RunResult {
  bool converged = false;  ///< SIMPLE reached outer_tol / PISO reached end or steady_tol
  int iterations = 0;
  SweepResiduals last;
};

/// Called after every sweep with the state and its residuals.
using SweepCallback = std::function<void(const RunState&, const SweepResiduals&)>;

/// SIMPLE until outer_tol or max_outer; PISO until end_time (or max_outer
/// steps when end_time is 0) or until steady_tol is met.
RunResult run_case(RunState& state, const Domain& d, const CouplingConfig& cfg, Profiler* prof = nullptr,
                   const SweepCallback& on_sweep = {});

/// max_cells |sum_f sign phi_f| / max_f |phi_f| (0 when all fluxes vanish).
double continuity_error(const std::vector<double>& flux, const Domain& d);

/// sum_cells V |u|^2 / 2
double kinetic_energy(const VectorField& u, const Domain& d);

}  // namespace ellcfd
