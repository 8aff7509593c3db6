#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ellcfd/mesh.hpp"

namespace ellcfd {

// Boundary condition kinds. Velocity profiles (timed inlet, mass flow) point
// along the inward face normal.

template <class T>
struct FixedValue {
  T value{};
};
/// u(t) = u0 sin(2 pi f t)
struct TimedInlet {
  double u0 = 0.0;
  double frequency = 0.0;
};
struct NoSlip {};
/// Uniform normal speed mass_flow / (density * patch area).
struct MassFlowInlet {
  double mass_flow = 0.0;  ///< kg/s
  double density = 1000.0; ///< kg/m^3
};
struct ZeroGradient {};
struct Empty {};

using ScalarBC = std::variant<FixedValue<double>, ZeroGradient, Empty>;
using VectorBC = std::variant<FixedValue<Vec3>, TimedInlet, NoSlip, MassFlowInlet, ZeroGradient, Empty>;

template <class T>
using BoundaryCondition = std::conditional_t<std::is_same_v<T, double>, ScalarBC, VectorBC>;

/// Fixed pressure is a fixed scalar value.
inline ScalarBC fixed_pressure(double p) { return FixedValue<double>{p}; }

template <class BC>
bool is_empty(const BC& bc) {
  return std::holds_alternative<Empty>(bc);
}
template <class BC>
bool is_zero_gradient(const BC& bc) {
  return std::holds_alternative<ZeroGradient>(bc);
}
/// Dirichlet-type: face values are prescribed.
template <class BC>
bool is_fixed(const BC& bc) {
  return !is_empty(bc) && !is_zero_gradient(bc);
}

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cell-centred field with one boundary condition per patch and cached
/// boundary-face values (indexed by face - n_internal).
template <class T>
class Field {
 public:
  using value_type = T;
  using bc_type = BoundaryCondition<T>;

  Field() = default;
  Field(std::string name, const Mesh& mesh, std::vector<bc_type> bcs, T initial = T{});

  const std::string& name() const { return name_; }
  Index n_cells() const { return static_cast<Index>(cells_.size()); }
  Index n_internal_faces() const { return n_internal_; }

  std::vector<T>& cells() { return cells_; }
  const std::vector<T>& cells() const { return cells_; }
  T& operator[](Index c) { return cells_[c]; }
  const T& operator[](Index c) const { return cells_[c]; }

  const std::vector<T>& boundary() const { return boundary_; }
  std::vector<T>& boundary() { return boundary_; }
  const T& boundary_value(Index face) const { return boundary_[face - n_internal_]; }

  const std::vector<bc_type>& bcs() const { return bcs_; }
  std::vector<bc_type>& bcs() { return bcs_; }
  const bc_type& bc(Index patch) const { return bcs_[patch]; }

  /// True if some patch prescribes the value (fixes the level of the solution).
  bool has_fixed_patch() const;

 private:
  std::string name_;
  Index n_internal_ = 0;
  std::vector<T> cells_;
  std::vector<T> boundary_;
  std::vector<bc_type> bcs_;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec3>;

struct MeshGeometry;

/// Refreshes boundary-face values for time t (seconds).
void apply_bcs(ScalarField& field, const Mesh& mesh, const MeshGeometry& geom, double t);
void apply_bcs(VectorField& field, const Mesh& mesh, const MeshGeometry& geom, double t);

/// Inward normal speed of a timed inlet at time t.
double timed_inlet_speed(const TimedInlet& bc, double t);

/// Sum of |S_f| over a patch.
double patch_area(const Mesh& mesh, const MeshGeometry& geom, Index patch);

/// Face values: linear interpolation inside, boundary values on the boundary.
template <class T>
std::vector<T> interpolate_to_faces(const Field<T>& field, const Mesh& mesh, const MeshGeometry& geom);

}  // namespace ellcfd
