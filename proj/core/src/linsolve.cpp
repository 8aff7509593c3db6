#include "ellcfd/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include "ellcfd/parallel.hpp"

namespace ellcfd {

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (abs_tolerance < 0.0) throw std::invalid_argument("absolute tolerance must be non-negative");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

namespace {

std::size_t n_blocks(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

void dot_partials(std::span<const double> a, std::span<const double> b, std::vector<double>& partial) {
  const std::size_t n = a.size();
  const auto nb = static_cast<long>(n_blocks(n));
  partial.resize(static_cast<std::size_t>(nb));
  ELLCFD_PARALLEL_FOR
  for (long blk = 0; blk < nb; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(blk)] = s;
  }
}

double sum_partials(const std::vector<double>& partial) {
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

/// Timed kernels shared by both solvers.
class Kernels {
 public:
  Kernels(const HybridMatrix& a, const SolveConfig& cfg, StageTimes* times)
      : a_(a), cfg_(cfg), times_(times) {
    if (cfg.precondition) {
      StageTimer t(times_, Stage::precond);
      inv_diag_.resize(static_cast<std::size_t>(a.n()));
      for (Index i = 0; i < a.n(); ++i) {
        const double d = a.diagonal_value(i);
        if (d == 0.0)
          throw SolverError(SolverError::Kind::singular_preconditioner,
                            "zero diagonal entry in row " + std::to_string(i), i);
        inv_diag_[i] = 1.0 / d;
      }
    }
  }

  void spmv(std::span<const double> x, std::span<double> y) {
    StageTimer t(times_, Stage::smvp);
    a_.multiply(x, y);
  }

  double dot(std::span<const double> x, std::span<const double> y) {
    {
      StageTimer t(times_, Stage::dot);
      dot_partials(x, y, partial_);
    }
    StageTimer t(times_, Stage::reduction);
    return sum_partials(partial_);
  }

  double norm(std::span<const double> x) {
    {
      StageTimer t(times_, Stage::dot);
      dot_partials(x, x, partial_);
    }
    StageTimer t(times_, Stage::reduction);
    return std::sqrt(sum_partials(partial_));
  }

  /// y += alpha x
  void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    StageTimer t(times_, Stage::daxpy);
    const auto n = static_cast<long>(y.size());
    ELLCFD_PARALLEL_FOR
    for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
  }

  /// y = x + beta y
  void xpby(std::span<const double> x, double beta, std::span<double> y) {
    StageTimer t(times_, Stage::daxpy);
    const auto n = static_cast<long>(y.size());
    ELLCFD_PARALLEL_FOR
    for (long i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
  }

  void precondition(std::span<const double> r, std::span<double> z) {
    StageTimer t(times_, Stage::precond);
    const auto n = static_cast<long>(r.size());
    if (inv_diag_.empty()) {
      std::copy(r.begin(), r.end(), z.begin());
      return;
    }
    ELLCFD_PARALLEL_FOR
    for (long i = 0; i < n; ++i) z[i] = r[i] * inv_diag_[i];
  }

  /// r = b - A x
  void residual(std::span<const double> b, std::span<const double> x, std::span<double> r) {
    spmv(x, r);
    StageTimer t(times_, Stage::daxpy);
    const auto n = static_cast<long>(r.size());
    ELLCFD_PARALLEL_FOR
    for (long i = 0; i < n; ++i) r[i] = b[i] - r[i];
  }

 private:
  const HybridMatrix& a_;
  const SolveConfig& cfg_;
  StageTimes* times_;
  std::vector<double> inv_diag_;
  std::vector<double> partial_;
};

void check_dims(const HybridMatrix& a, std::span<const double> b, std::span<const double> x) {
  const auto n = static_cast<std::size_t>(a.n());
  if (b.size() != n || x.size() != n) throw std::invalid_argument("solver: dimension mismatch");
}

struct Convergence {
  double b_norm;
  const SolveConfig& cfg;
  double normalized(double r_norm) const { return r_norm / std::max(b_norm, kResidualFloor); }
  bool reached(double r_norm) const {
    return normalized(r_norm) <= cfg.tolerance || r_norm <= cfg.abs_tolerance;
  }
};

/// Attributes untimed solver time to Stage::other, then stamps the wall time.
void finish(SolveReport& rep, Clock::time_point t_start, const SolveConfig& cfg) {
  if (cfg.record_stages) {
    const double snapshot = seconds_since(t_start);
    const double timed = rep.stage_times.total();
    if (snapshot > timed) rep.stage_times[Stage::other] += snapshot - timed;
  }
  rep.wall_seconds = seconds_since(t_start);
}

void check_finite(double r, int iter) {
  if (!std::isfinite(r))
    throw SolverError(SolverError::Kind::divergence, "residual is not finite at iteration " + std::to_string(iter), iter);
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> partial;
  dot_partials(a, b, partial);
  return sum_partials(partial);
}

std::vector<double> jacobi_apply(std::span<const double> diag, std::span<const double> r) {
  if (diag.size() != r.size()) throw std::invalid_argument("jacobi_apply: dimension mismatch");
  std::vector<double> z(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (diag[i] == 0.0)
      throw SolverError(SolverError::Kind::singular_preconditioner, "zero diagonal entry in row " + std::to_string(i),
                        static_cast<long>(i));
    z[i] = r[i] / diag[i];
  }
  return z;
}

double residual_norm(const HybridMatrix& a, std::span<const double> x, std::span<const double> b) {
  check_dims(a, b, x);
  std::vector<double> r(b.size());
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return std::sqrt(dot(r, r)) / std::max(std::sqrt(dot(b, b)), kResidualFloor);
}

SolveReport cg(const HybridMatrix& a, std::span<const double> b, std::span<double> x, const SolveConfig& cfg) {
  cfg.validate();
  check_dims(a, b, x);
  const auto t_start = Clock::now();
  SolveReport rep;
  StageTimes* times = cfg.record_stages ? &rep.stage_times : nullptr;
  const auto n = static_cast<std::size_t>(a.n());

  std::vector<double> r, z, p, q;
  {
    StageTimer t(times, Stage::other);
    r.resize(n);
    z.resize(n);
    p.resize(n);
    q.resize(n);
  }
  Kernels k(a, cfg, times);
  const Convergence conv{k.norm(b), cfg};

  k.residual(b, x, r);
  double r_norm = k.norm(r);
  check_finite(r_norm, 0);
  rep.initial_residual = rep.final_residual = conv.normalized(r_norm);
  if (conv.reached(r_norm)) {
    rep.converged = true;
    finish(rep, t_start, cfg);
    return rep;
  }

  k.precondition(r, z);
  std::copy(z.begin(), z.end(), p.begin());
  double rz = k.dot(r, z);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    k.spmv(p, q);
    const double pq = k.dot(p, q);
    const double alpha = rz / pq;
    k.axpy(alpha, p, x);
    k.axpy(-alpha, q, r);
    r_norm = k.norm(r);
    check_finite(r_norm, it);
    rep.iterations = it;
    rep.final_residual = conv.normalized(r_norm);
    if (conv.reached(r_norm)) {
      rep.converged = true;
      break;
    }
    k.precondition(r, z);
    const double rz_new = k.dot(r, z);
    k.xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  finish(rep, t_start, cfg);
  return rep;
}

constexpr double kRestartRatio = 1e-12;

SolveReport bicgstab(const HybridMatrix& a, std::span<const double> b, std::span<double> x, const SolveConfig& cfg) {
  cfg.validate();
  check_dims(a, b, x);
  const auto t_start = Clock::now();
  SolveReport rep;
  StageTimes* times = cfg.record_stages ? &rep.stage_times : nullptr;
  const auto n = static_cast<std::size_t>(a.n());

  std::vector<double> r, r0, p, v, y, s, z, t;
  {
    StageTimer tm(times, Stage::other);
    for (auto* vec : {&r, &r0, &p, &v, &y, &s, &z, &t}) vec->assign(n, 0.0);
  }
  Kernels k(a, cfg, times);
  const Convergence conv{k.norm(b), cfg};

  k.residual(b, x, r);
  double r_norm = k.norm(r);
  check_finite(r_norm, 0);
  rep.initial_residual = rep.final_residual = conv.normalized(r_norm);
  if (conv.reached(r_norm)) {
    rep.converged = true;
    finish(rep, t_start, cfg);
    return rep;
  }
  std::copy(r.begin(), r.end(), r0.begin());

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    double rho_new = k.dot(r0, r);
    if (std::abs(rho_new) < kRestartRatio * k.norm(r0) * r_norm) {
      // Shadow residual lost orthogonality: restart from the current residual.
      std::copy(r.begin(), r.end(), r0.begin());
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      rho_new = k.dot(r0, r);
    }
    if (std::abs(rho_new) < kBreakdownThreshold)
      throw SolverError(SolverError::Kind::breakdown, "BiCGStab breakdown (rho) at iteration " + std::to_string(it), it);
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    // p = r + beta (p - omega v)
    k.axpy(-omega, v, p);
    k.xpby(r, beta, p);

    k.precondition(p, y);
    k.spmv(y, v);
    alpha = rho / k.dot(r0, v);
    // s = r - alpha v
    std::copy(r.begin(), r.end(), s.begin());
    k.axpy(-alpha, v, s);
    const double s_norm = k.norm(s);
    check_finite(s_norm, it);
    rep.iterations = it;
    if (conv.reached(s_norm)) {
      k.axpy(alpha, y, x);
      rep.final_residual = conv.normalized(s_norm);
      rep.converged = true;
      break;
    }

    k.precondition(s, z);
    k.spmv(z, t);
    const double tt = k.dot(t, t);
    omega = tt > 0.0 ? k.dot(t, s) / tt : 0.0;
    if (std::abs(omega) < kBreakdownThreshold)
      throw SolverError(SolverError::Kind::breakdown, "BiCGStab breakdown (omega) at iteration " + std::to_string(it), it);
    k.axpy(alpha, y, x);
    k.axpy(omega, z, x);
    // r = s - omega t
    std::copy(s.begin(), s.end(), r.begin());
    k.axpy(-omega, t, r);
    r_norm = k.norm(r);
    check_finite(r_norm, it);
    rep.final_residual = conv.normalized(r_norm);
    if (conv.reached(r_norm)) {
      rep.converged = true;
      break;
    }
  }
  finish(rep, t_start, cfg);
  return rep;
}

}  // namespace ellcfd
