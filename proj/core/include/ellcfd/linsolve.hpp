#pragma once

// Jacobi-preconditioned Krylov solvers over HybridMatrix.
//
// Convention: `x` carries the initial guess in and the solution out. The
// convergence measure is ||b - A x||_2 / max(||b||_2, 1e-30), checked before
// the first iteration and after every iteration.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellcfd/profiler.hpp"
#include "ellcfd/sparse.hpp"

namespace ellcfd {

struct SolveConfig {
  double tolerance = 1e-6;      ///< target for the normalized residual
  double abs_tolerance = 0.0;   ///< alternative floor on the unnormalized residual
  int max_iters = 1000;
  bool record_stages = false;
  bool precondition = true;     ///< Jacobi on/off

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool converged = false;
  StageTimes stage_times;   ///< zero unless record_stages
  double wall_seconds = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { singular_preconditioner, divergence, breakdown };
  SolverError(Kind kind, const std::string& what, long where)
      : std::runtime_error(what), kind_(kind), where_(where) {}
  Kind kind() const noexcept { return kind_; }
  /// Row (singular preconditioner) or iteration index (divergence, breakdown).
  long where() const noexcept { return where_; }

 private:
  Kind kind_;
  long where_;
};

inline constexpr double kResidualFloor = 1e-30;
inline constexpr double kBreakdownThreshold = 1e-300;

/// z = r / diag componentwise. Throws SolverError on a zero diagonal entry.
std::vector<double> jacobi_apply(std::span<const double> diag, std::span<const double> r);

/// ||b - A x|| / max(||b||, 1e-30)
double residual_norm(const HybridMatrix& a, std::span<const double> x, std::span<const double> b);

/// Conjugate gradients for symmetric positive definite A.
SolveReport cg(const HybridMatrix& a, std::span<const double> b, std::span<double> x, const SolveConfig& cfg);

/// BiCGStab for general nonsingular A.
SolveReport bicgstab(const HybridMatrix& a, std::span<const double> b, std::span<double> x, const SolveConfig& cfg);

/// Fixed-order dot product (block partials summed in index order).
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace ellcfd
