#pragma once

// Finite-volume operators on a Domain.
//
// An FvMatrix represents the linear form  A phi - source ; an equation built
// from several terms is solved as A phi = source. Operators return the
// discretized integral of their term over every cell.

#include <memory>
#include <span>
#include <vector>

#include "ellcfd/field.hpp"
#include "ellcfd/mesh.hpp"
#include "ellcfd/sparse.hpp"

namespace ellcfd {

/// Mesh plus everything derived from it once: geometry and the shared pattern.
struct Domain {
  Mesh mesh;
  MeshGeometry geom;
  std::shared_ptr<const SparsityPattern> pattern;

  static Domain build(Mesh mesh, Index k_cap = 7);
  Index n_cells() const { return mesh.n_cells(); }
};

enum class ConvectionScheme { upwind, linear };

struct SchemeConfig {
  ConvectionScheme convection = ConvectionScheme::upwind;
  bool nonorth_correction = true;
  double limiter = 1.0;  ///< scales the explicit nonorthogonal correction, in [0, 1]

  void validate() const;
};

template <class T>
class FvMatrix {
 public:
  FvMatrix() = default;
  explicit FvMatrix(std::shared_ptr<const SparsityPattern> pattern);

  HybridMatrix matrix;
  std::vector<T> source;

  // Face-flux data left by laplacian(): flux_f = coeff_f (phi_N - phi_P) + correction_f.
  std::vector<double> face_coeff;
  std::vector<T> face_correction;

  Index n() const { return matrix.n(); }
  std::vector<double> diag() const { return diagonal(matrix); }

  FvMatrix& operator+=(const FvMatrix& o);
  FvMatrix& operator-=(const FvMatrix& o);
  FvMatrix& operator*=(double s);

  /// A x - source per cell.
  std::vector<T> residual(std::span<const T> x) const;
};

template <class T>
FvMatrix<T> operator+(FvMatrix<T> a, const FvMatrix<T>& b) {
  return a += b;
}
template <class T>
FvMatrix<T> operator-(FvMatrix<T> a, const FvMatrix<T>& b) {
  return a -= b;
}

namespace fvm {

/// grad_P = (1/V_P) sum_f sign S_f phi_f ; empty patches are skipped.
template <class T>
std::vector<gradient_t<T>> gauss_gradient(const Field<T>& phi, const Domain& d);

/// Integral of div(gamma grad phi). gamma_face has one entry per face.
template <class T>
FvMatrix<T> laplacian(std::span<const double> gamma_face, const Field<T>& phi, const Domain& d,
                      const SchemeConfig& scheme);
template <class T>
FvMatrix<T> laplacian(double gamma, const Field<T>& phi, const Domain& d, const SchemeConfig& scheme);

/// Face fluxes of a laplacian() result evaluated at phi; zero on
/// zero-gradient and empty faces.
std::vector<double> face_flux(const FvMatrix<double>& lap, const ScalarField& phi, const Domain& d);

/// Integral of div(flux phi). `flux` has one entry per face.
template <class T>
FvMatrix<T> divergence(std::span<const double> flux, const Field<T>& phi, const Domain& d, const SchemeConfig& scheme);

/// Implicit Euler: diagonal V/dt, source V phi_old / dt.
template <class T>
FvMatrix<T> ddt_euler(std::span<const T> old_cells, double dt, const Domain& d);

/// Net outflow sum_f sign flux_f per cell.
std::vector<double> surface_sum(std::span<const double> flux, const Domain& d);

/// S_f . u_f with linear interpolation inside and boundary values outside.
std::vector<double> flux_of(const VectorField& u, const Domain& d);

/// Rhie-Chow face flux
///   S.u_f - D_f |S|^2/(S.d) (p_N - p_P - d . grad(p)_f),  D_f = interpolated V/aP.
/// Boundary faces carry S.u_b.
std::vector<double> rhie_chow_flux(const VectorField& u, const ScalarField& p, std::span<const double> a_p,
                                   const Domain& d);

/// Cellwise H/aP where H = source - (off-diagonal part of A) u.
std::vector<Vec3> h_by_a(const FvMatrix<Vec3>& eq, std::span<const Vec3> u);

/// Interpolates a cell scalar to internal faces (boundary faces take the owner value).
std::vector<double> interpolate_cells(std::span<const double> cells, const Domain& d);

}  // namespace fvm

}  // namespace ellcfd
