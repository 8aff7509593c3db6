#include "ellcfd/field.hpp"

#include <cmath>
#include <numbers>

namespace ellcfd {

template <class T>
Field<T>::Field(std::string name, const Mesh& mesh, std::vector<bc_type> bcs, T initial)
    : name_(std::move(name)),
      n_internal_(mesh.n_internal_faces()),
      cells_(static_cast<std::size_t>(mesh.n_cells()), initial),
      boundary_(static_cast<std::size_t>(mesh.n_boundary_faces()), initial),
      bcs_(std::move(bcs)) {
  if (bcs_.size() != mesh.patches().size())
    throw FieldError("field '" + name_ + "' has " + std::to_string(bcs_.size()) + " boundary conditions for " +
                     std::to_string(mesh.patches().size()) + " patches");
  for (std::size_t i = 0; i < bcs_.size(); ++i) {
    const bool empty_patch = mesh.patches()[i].kind == PatchKind::empty;
    if (empty_patch != is_empty(bcs_[i]))
      throw FieldError("field '" + name_ + "': patch '" + mesh.patches()[i].name +
                       "' must use the empty condition iff it is an empty patch");
  }
  for (Index f = n_internal_; f < mesh.n_faces(); ++f) boundary_[f - n_internal_] = cells_[mesh.owner()[f]];
}

template <class T>
bool Field<T>::has_fixed_patch() const {
  for (const auto& bc : bcs_)
    if (is_fixed(bc)) return true;
  return false;
}

template class Field<double>;
template class Field<Vec3>;

double timed_inlet_speed(const TimedInlet& bc, double t) {
  return bc.u0 * std::sin(2.0 * std::numbers::pi * bc.frequency * t);
}

double patch_area(const Mesh& mesh, const MeshGeometry& geom, Index patch) {
  const Patch& p = mesh.patches()[patch];
  double a = 0.0;
  for (Index f = p.start; f < p.end(); ++f) a += mag(geom.face_area[f]);
  return a;
}

namespace {

template <class T, class Fn>
void for_patch_faces(Field<T>& field, const Mesh& mesh, Index patch, Fn&& fn) {
  const Patch& p = mesh.patches()[patch];
  auto& b = field.boundary();
  for (Index f = p.start; f < p.end(); ++f) b[f - mesh.n_internal_faces()] = fn(f);
}

}  // namespace

void apply_bcs(ScalarField& field, const Mesh& mesh, const MeshGeometry& /*geom*/, double /*t*/) {
  for (Index pi = 0; pi < static_cast<Index>(mesh.patches().size()); ++pi) {
    const auto& bc = field.bc(pi);
    if (const auto* fv = std::get_if<FixedValue<double>>(&bc)) {
      for_patch_faces(field, mesh, pi, [&](Index) { return fv->value; });
    } else {
      for_patch_faces(field, mesh, pi, [&](Index f) { return field[mesh.owner()[f]]; });
    }
  }
}

void apply_bcs(VectorField& field, const Mesh& mesh, const MeshGeometry& geom, double t) {
  for (Index pi = 0; pi < static_cast<Index>(mesh.patches().size()); ++pi) {
    const auto& bc = field.bc(pi);
    auto inward = [&](Index f) { return -geom.face_area[f] / mag(geom.face_area[f]); };
    if (const auto* fv = std::get_if<FixedValue<Vec3>>(&bc)) {
      for_patch_faces(field, mesh, pi, [&](Index) { return fv->value; });
    } else if (const auto* ti = std::get_if<TimedInlet>(&bc)) {
      const double speed = timed_inlet_speed(*ti, t);
      for_patch_faces(field, mesh, pi, [&](Index f) { return speed * inward(f); });
    } else if (std::holds_alternative<NoSlip>(bc)) {
      for_patch_faces(field, mesh, pi, [&](Index) { return Vec3{}; });
    } else if (const auto* mf = std::get_if<MassFlowInlet>(&bc)) {
      const Patch& p = mesh.patches()[pi];
      if (!(mf->density > 0.0)) throw FieldError("mass-flow inlet '" + p.name + "' needs a positive density");
      const double area = patch_area(mesh, geom, pi);
      if (!(area > 0.0)) throw FieldError("mass-flow inlet '" + p.name + "' has zero area");
      const double speed = mf->mass_flow / (mf->density * area);
      for_patch_faces(field, mesh, pi, [&](Index f) { return speed * inward(f); });
    } else {
      for_patch_faces(field, mesh, pi, [&](Index f) { return field[mesh.owner()[f]]; });
    }
  }
}

template <class T>
std::vector<T> interpolate_to_faces(const Field<T>& field, const Mesh& mesh, const MeshGeometry& geom) {
  std::vector<T> out(static_cast<std::size_t>(mesh.n_faces()));
  const auto& owner = mesh.owner();
  const auto& neighbour = mesh.neighbour();
  for (Index f = 0; f < mesh.n_internal_faces(); ++f) {
    const double w = geom.weight[f];
    out[f] = w * field[owner[f]] + (1.0 - w) * field[neighbour[f]];
  }
  for (Index f = mesh.n_internal_faces(); f < mesh.n_faces(); ++f) out[f] = field.boundary_value(f);
  return out;
}

template std::vector<double> interpolate_to_faces(const Field<double>&, const Mesh&, const MeshGeometry&);
template std::vector<Vec3> interpolate_to_faces(const Field<Vec3>&, const Mesh&, const MeshGeometry&);

}  // namespace ellcfd
