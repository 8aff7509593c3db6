#pragma once

// Structured hexahedral meshes for the benchmark cases.
//
// Cells are numbered i + nx (j + ny k). Internal faces are ordered by owner,
// then neighbour, so the upper triangle is visited row by row. Boundary faces
// are grouped by patch in the order the patches are listed.

#include <cstdint>
#include <functional>

#include "ellcfd/config.hpp"
#include "ellcfd/field.hpp"
#include "ellcfd/mesh.hpp"

namespace ellcfd {

struct MeshCounts {
  std::int64_t cells = 0;
  std::int64_t faces = 0;
  std::int64_t internal_faces = 0;
};

/// Closed-form counts of an nx x ny x nz block, computed without building it.
MeshCounts box_counts(std::int64_t nx, std::int64_t ny, std::int64_t nz);

/// Lid-driven cavity: n^3 cubes in [0, L]^3, patches "lid" (y = L) and "walls".
Mesh gen_cavity(Index n, double length = 0.1);
MeshCounts cavity_counts(std::int64_t n);

/// One-cell-thick channel [0, length] x [0, height] with cube-like cells.
/// Patches "inlet" (x = 0), "outlet" (x = length), "walls" (y = 0, height)
/// and the empty pair "frontAndBack".
Mesh gen_channel(Index nx, Index ny, double length = 0.16, double height = 0.02);
MeshCounts channel_counts(std::int64_t nx, std::int64_t ny);

/// The channel sheared by x' = x + y tan(skew). Every face of the result has
/// nonorthogonality `skew_deg`. Throws std::invalid_argument beyond 45 degrees.
Mesh gen_skewed_duct(Index nx, Index ny, double skew_deg, double length = 0.16, double height = 0.02);

/// Side of an nx x ny x nz block.
enum class BoxSide { xmin, xmax, ymin, ymax, zmin, zmax };

struct BoxPatch {
  std::string name;
  PatchKind kind = PatchKind::wall;
  std::vector<BoxSide> sides;
};

/// Generic block generator. `map` sends unit-lattice points (i, j, k) to
/// physical space; every side must belong to exactly one patch.
Mesh gen_box(Index nx, Index ny, Index nz, const std::function<Vec3(Index, Index, Index)>& map,
             const std::vector<BoxPatch>& patches);

struct GeneratedCase {
  Mesh mesh;
  CaseConfig config;
};

/// Cavity preset: L = 0.1 m, u_lid = 1 m/s, nu = 0.01 m^2/s (Re = 10), SIMPLE.
GeneratedCase cavity_case(Index n);
/// Pulsating channel preset: u0 = 0.01 m/s, f = 0.5 Hz, nu = 3.3e-6 m^2/s,
/// PISO with dt = 0.1 ms.
GeneratedCase channel_case(Index nx, Index ny, double length = 0.16, double height = 0.02);
/// Skewed duct preset: fixed inlet, SIMPLE with one nonorthogonal corrector.
GeneratedCase skewed_duct_case(Index nx, Index ny, double skew_deg, double length = 0.16, double height = 0.02);

/// Velocity and pressure fields with boundary conditions chosen per patch:
/// wall patches named "lid" move at u_lid along +x, other walls are no-slip;
/// inlets follow cfg.inlet (a fixed inlet flows along +x); outlets are zero-gradient in u and p = 0;
/// empty patches are empty. Everything starts at rest with p = 0.
std::pair<VectorField, ScalarField> initial_fields(const CaseConfig& cfg, const Mesh& mesh);

}  // namespace ellcfd
