#include "ellcfd/fvm.hpp"

#include <algorithm>
#include <stdexcept>

namespace ellcfd {

Domain Domain::build(Mesh mesh, Index k_cap) {
  Domain d;
  d.geom = compute_geometry(mesh);
  d.pattern = std::make_shared<const SparsityPattern>(build_pattern(mesh, k_cap));
  d.mesh = std::move(mesh);
  return d;
}

void SchemeConfig::validate() const {
  if (!(limiter >= 0.0 && limiter <= 1.0)) throw std::invalid_argument("nonorthogonal limiter must be in [0, 1]");
}

template <class T>
FvMatrix<T>::FvMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : matrix(std::move(pattern)), source(static_cast<std::size_t>(matrix.n()), T{}) {}

namespace {

template <class V>
void add_face_data(std::vector<V>& dst, const std::vector<V>& src, double s) {
  if (src.empty()) return;
  if (dst.empty()) dst.assign(src.size(), V{});
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += s * src[i];
}

}  // namespace

template <class T>
FvMatrix<T>& FvMatrix<T>::operator+=(const FvMatrix& o) {
  matrix += o.matrix;
  for (std::size_t i = 0; i < source.size(); ++i) source[i] += o.source[i];
  add_face_data(face_coeff, o.face_coeff, 1.0);
  add_face_data(face_correction, o.face_correction, 1.0);
  return *this;
}

template <class T>
FvMatrix<T>& FvMatrix<T>::operator-=(const FvMatrix& o) {
  matrix -= o.matrix;
  for (std::size_t i = 0; i < source.size(); ++i) source[i] -= o.source[i];
  add_face_data(face_coeff, o.face_coeff, -1.0);
  add_face_data(face_correction, o.face_correction, -1.0);
  return *this;
}

template <class T>
FvMatrix<T>& FvMatrix<T>::operator*=(double s) {
  matrix *= s;
  for (auto& v : source) v *= s;
  for (auto& v : face_coeff) v *= s;
  for (auto& v : face_correction) v *= s;
  return *this;
}

namespace {

std::vector<double> component(std::span<const Vec3> v, int c) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i][c];
  return out;
}

std::vector<double> apply(const HybridMatrix& a, std::span<const double> x) { return smvp(a, x); }

std::vector<Vec3> apply(const HybridMatrix& a, std::span<const Vec3> x) {
  std::vector<Vec3> out(x.size());
  for (int c = 0; c < 3; ++c) {
    const auto xc = component(x, c);
    const auto yc = smvp(a, xc);
    for (std::size_t i = 0; i < out.size(); ++i) out[i][c] = yc[i];
  }
  return out;
}

}  // namespace

template <class T>
std::vector<T> FvMatrix<T>::residual(std::span<const T> x) const {
  auto r = apply(matrix, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= source[i];
  return r;
}

template class FvMatrix<double>;
template class FvMatrix<Vec3>;

namespace fvm {

namespace {

bool is_empty_face(const Domain& d, const std::vector<Index>& face_patch_kind_empty, Index f) {
  (void)d;
  return face_patch_kind_empty[f - d.mesh.n_internal_faces()] != 0;
}

/// Per boundary face: 1 if it belongs to an empty patch.
std::vector<Index> empty_mask(const Domain& d) {
  std::vector<Index> mask(static_cast<std::size_t>(d.mesh.n_boundary_faces()), 0);
  for (const auto& p : d.mesh.patches())
    if (p.kind == PatchKind::empty)
      for (Index f = p.start; f < p.end(); ++f) mask[f - d.mesh.n_internal_faces()] = 1;
  return mask;
}

/// Over-relaxed split S = Delta + k with Delta parallel to d: returns |S|^2/(S.d) and k.
struct Split {
  double coeff;
  Vec3 k;
};
Split split(const Vec3& s, const Vec3& delta) {
  const double sd = dot(s, delta);
  const double c = mag_sqr(s) / sd;
  Vec3 k = s - c * delta;
  // Round-off on an orthogonal face.
  if (mag_sqr(k) < 1e-24 * mag_sqr(s)) k = Vec3{};
  return {c, k};
}

}  // namespace

template <class T>
std::vector<gradient_t<T>> gauss_gradient(const Field<T>& phi, const Domain& d) {
  using G = gradient_t<T>;
  const Mesh& m = d.mesh;
  const auto& g = d.geom;
  std::vector<G> grad(static_cast<std::size_t>(m.n_cells()), G{});
  const auto& owner = m.owner();
  const auto& neighbour = m.neighbour();
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    const double w = g.weight[f];
    const T phif = w * phi[owner[f]] + (1.0 - w) * phi[neighbour[f]];
    const G c = outer(g.face_area[f], phif);
    grad[owner[f]] += c;
    grad[neighbour[f]] -= c;
  }
  for (const auto& p : m.patches()) {
    if (p.kind == PatchKind::empty) continue;
    for (Index f = p.start; f < p.end(); ++f) grad[owner[f]] += outer(g.face_area[f], phi.boundary_value(f));
  }
  for (Index c = 0; c < m.n_cells(); ++c) grad[c] /= g.cell_volume[c];
  return grad;
}

template std::vector<Vec3> gauss_gradient(const Field<double>&, const Domain&);
template std::vector<Tensor3> gauss_gradient(const Field<Vec3>&, const Domain&);

template <class T>
FvMatrix<T> laplacian(std::span<const double> gamma_face, const Field<T>& phi, const Domain& d,
                      const SchemeConfig& scheme) {
  scheme.validate();
  const Mesh& m = d.mesh;
  const auto& g = d.geom;
  if (gamma_face.size() != static_cast<std::size_t>(m.n_faces()))
    throw std::invalid_argument("laplacian: one diffusivity per face required");
  FvMatrix<T> eq(d.pattern);
  eq.face_coeff.assign(static_cast<std::size_t>(m.n_faces()), 0.0);
  eq.face_correction.assign(static_cast<std::size_t>(m.n_faces()), T{});
  const auto& owner = m.owner();
  const auto& neighbour = m.neighbour();
  const auto& slots = d.pattern->face_slots();
  const bool correct = scheme.nonorth_correction && scheme.limiter > 0.0;

  std::vector<gradient_t<T>> grad;
  if (correct) grad = gauss_gradient(phi, d);

  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    if (mag(g.delta[f]) == 0.0) throw MeshError("coincident centroids at face " + std::to_string(f), f);
    const auto [c, k] = split(g.face_area[f], g.delta[f]);
    const double coeff = gamma_face[f] * c;
    const Index P = owner[f];
    const Index N = neighbour[f];
    eq.matrix.accumulate(slots[f].upper, coeff);
    eq.matrix.accumulate(slots[f].lower, coeff);
    eq.matrix.add_to_diagonal(P, -coeff);
    eq.matrix.add_to_diagonal(N, -coeff);
    eq.face_coeff[f] = coeff;
    if (correct) {
      const double w = g.weight[f];
      const auto grad_f = w * grad[P] + (1.0 - w) * grad[N];
      const T corr = (gamma_face[f] * scheme.limiter) * directional(k, grad_f);
      eq.face_correction[f] = corr;
      eq.source[P] -= corr;
      eq.source[N] += corr;
    }
  }
  for (Index pi = 0; pi < static_cast<Index>(m.patches().size()); ++pi) {
    const auto& bc = phi.bc(pi);
    if (!is_fixed(bc)) continue;
    const Patch& p = m.patches()[pi];
    for (Index f = p.start; f < p.end(); ++f) {
      const auto [c, k] = split(g.face_area[f], g.delta[f]);
      const double coeff = gamma_face[f] * c;
      const Index P = owner[f];
      eq.matrix.add_to_diagonal(P, -coeff);
      eq.source[P] -= coeff * phi.boundary_value(f);
      eq.face_coeff[f] = coeff;
      if (correct) {
        const T corr = (gamma_face[f] * scheme.limiter) * directional(k, grad[P]);
        eq.face_correction[f] = corr;
        eq.source[P] -= corr;
      }
    }
  }
  return eq;
}

template <class T>
FvMatrix<T> laplacian(double gamma, const Field<T>& phi, const Domain& d, const SchemeConfig& scheme) {
  const std::vector<double> gf(static_cast<std::size_t>(d.mesh.n_faces()), gamma);
  return laplacian<T>(gf, phi, d, scheme);
}

template FvMatrix<double> laplacian(std::span<const double>, const Field<double>&, const Domain&, const SchemeConfig&);
template FvMatrix<Vec3> laplacian(std::span<const double>, const Field<Vec3>&, const Domain&, const SchemeConfig&);
template FvMatrix<double> laplacian(double, const Field<double>&, const Domain&, const SchemeConfig&);
template FvMatrix<Vec3> laplacian(double, const Field<Vec3>&, const Domain&, const SchemeConfig&);

std::vector<double> face_flux(const FvMatrix<double>& lap, const ScalarField& phi, const Domain& d) {
  const Mesh& m = d.mesh;
  if (lap.face_coeff.size() != static_cast<std::size_t>(m.n_faces()))
    throw std::invalid_argument("face_flux needs a laplacian() result");
  std::vector<double> flux(static_cast<std::size_t>(m.n_faces()), 0.0);
  const auto& owner = m.owner();
  const auto& neighbour = m.neighbour();
  for (Index f = 0; f < m.n_internal_faces(); ++f)
    flux[f] = lap.face_coeff[f] * (phi[neighbour[f]] - phi[owner[f]]) + lap.face_correction[f];
  for (Index pi = 0; pi < static_cast<Index>(m.patches().size()); ++pi) {
    if (!is_fixed(phi.bc(pi))) continue;
    const Patch& p = m.patches()[pi];
    for (Index f = p.start; f < p.end(); ++f)
      flux[f] = lap.face_coeff[f] * (phi.boundary_value(f) - phi[owner[f]]) + lap.face_correction[f];
  }
  return flux;
}

template <class T>
FvMatrix<T> divergence(std::span<const double> flux, const Field<T>& phi, const Domain& d, const SchemeConfig& scheme) {
  const Mesh& m = d.mesh;
  if (flux.size() != static_cast<std::size_t>(m.n_faces()))
    throw std::invalid_argument("divergence: flux must be defined on every face");
  FvMatrix<T> eq(d.pattern);
  const auto& owner = m.owner();
  const auto& neighbour = m.neighbour();
  const auto& slots = d.pattern->face_slots();
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    const double F = flux[f];
    const Index P = owner[f];
    const Index N = neighbour[f];
    if (scheme.convection == ConvectionScheme::upwind) {
      eq.matrix.add_to_diagonal(P, std::max(F, 0.0));
      eq.matrix.accumulate(slots[f].upper, std::min(F, 0.0));
      eq.matrix.add_to_diagonal(N, std::max(-F, 0.0));
      eq.matrix.accumulate(slots[f].lower, -std::max(F, 0.0));
    } else {
      const double w = d.geom.weight[f];
      eq.matrix.add_to_diagonal(P, F * w);
      eq.matrix.accumulate(slots[f].upper, F * (1.0 - w));
      eq.matrix.add_to_diagonal(N, -F * (1.0 - w));
      eq.matrix.accumulate(slots[f].lower, -F * w);
    }
  }
  for (Index pi = 0; pi < static_cast<Index>(m.patches().size()); ++pi) {
    const auto& bc = phi.bc(pi);
    if (is_empty(bc)) continue;
    const Patch& p = m.patches()[pi];
    const bool fixed = is_fixed(bc);
    for (Index f = p.start; f < p.end(); ++f) {
      if (fixed)
        eq.source[owner[f]] -= flux[f] * phi.boundary_value(f);
      else
        eq.matrix.add_to_diagonal(owner[f], flux[f]);
    }
  }
  return eq;
}

template FvMatrix<double> divergence(std::span<const double>, const Field<double>&, const Domain&, const SchemeConfig&);
template FvMatrix<Vec3> divergence(std::span<const double>, const Field<Vec3>&, const Domain&, const SchemeConfig&);

template <class T>
FvMatrix<T> ddt_euler(std::span<const T> old_cells, double dt, const Domain& d) {
  if (!(dt > 0.0)) throw std::invalid_argument("ddt_euler: time step must be positive");
  if (old_cells.size() != static_cast<std::size_t>(d.n_cells())) throw std::invalid_argument("ddt_euler: size mismatch");
  FvMatrix<T> eq(d.pattern);
  for (Index c = 0; c < d.n_cells(); ++c) {
    const double a = d.geom.cell_volume[c] / dt;
    eq.matrix.add_to_diagonal(c, a);
    eq.source[c] += a * old_cells[c];
  }
  return eq;
}

template FvMatrix<double> ddt_euler(std::span<const double>, double, const Domain&);
template FvMatrix<Vec3> ddt_euler(std::span<const Vec3>, double, const Domain&);

std::vector<double> surface_sum(std::span<const double> flux, const Domain& d) {
  const Mesh& m = d.mesh;
  std::vector<double> s(static_cast<std::size_t>(m.n_cells()), 0.0);
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    s[m.owner()[f]] += flux[f];
    s[m.neighbour()[f]] -= flux[f];
  }
  for (Index f = m.n_internal_faces(); f < m.n_faces(); ++f) s[m.owner()[f]] += flux[f];
  return s;
}

std::vector<double> flux_of(const VectorField& u, const Domain& d) {
  const auto uf = interpolate_to_faces(u, d.mesh, d.geom);
  const auto mask = empty_mask(d);
  std::vector<double> flux(uf.size(), 0.0);
  for (Index f = 0; f < d.mesh.n_faces(); ++f) {
    if (!d.mesh.is_internal(f) && is_empty_face(d, mask, f)) continue;
    flux[f] = dot(d.geom.face_area[f], uf[f]);
  }
  return flux;
}

std::vector<double> interpolate_cells(std::span<const double> cells, const Domain& d) {
  const Mesh& m = d.mesh;
  std::vector<double> out(static_cast<std::size_t>(m.n_faces()));
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    const double w = d.geom.weight[f];
    out[f] = w * cells[m.owner()[f]] + (1.0 - w) * cells[m.neighbour()[f]];
  }
  for (Index f = m.n_internal_faces(); f < m.n_faces(); ++f) out[f] = cells[m.owner()[f]];
  return out;
}

std::vector<double> rhie_chow_flux(const VectorField& u, const ScalarField& p, std::span<const double> a_p,
                                   const Domain& d) {
  const Mesh& m = d.mesh;
  const auto& g = d.geom;
  if (a_p.size() != static_cast<std::size_t>(m.n_cells())) throw std::invalid_argument("rhie_chow_flux: size mismatch");
  std::vector<double> rau(a_p.size());
  for (std::size_t c = 0; c < a_p.size(); ++c) {
    if (a_p[c] == 0.0) throw std::invalid_argument("rhie_chow_flux: zero momentum diagonal in cell " + std::to_string(c));
    rau[c] = g.cell_volume[c] / a_p[c];
  }
  const auto rau_f = interpolate_cells(rau, d);
  const auto grad_p = gauss_gradient(p, d);
  auto flux = flux_of(u, d);
  const auto& owner = m.owner();
  const auto& neighbour = m.neighbour();
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    const Index P = owner[f];
    const Index N = neighbour[f];
    const double w = g.weight[f];
    const Vec3 grad_f = w * grad_p[P] + (1.0 - w) * grad_p[N];
    const double c = mag_sqr(g.face_area[f]) / dot(g.face_area[f], g.delta[f]);
    flux[f] -= rau_f[f] * c * (p[N] - p[P] - dot(g.delta[f], grad_f));
  }
  return flux;
}

std::vector<Vec3> h_by_a(const FvMatrix<Vec3>& eq, std::span<const Vec3> u) {
  auto au = apply(eq.matrix, u);
  std::vector<Vec3> h(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double a = eq.matrix.diagonal_value(static_cast<Index>(c));
    // H = source - (A u - aP u)
    h[c] = (eq.source[c] - (au[c] - a * u[c])) / a;
  }
  return h;
}

}  // namespace fvm

}  // namespace ellcfd
