#include "ellcfd/cases.hpp"

#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellcfd {

MeshCounts box_counts(std::int64_t nx, std::int64_t ny, std::int64_t nz) {
  MeshCounts c;
  c.cells = nx * ny * nz;
  c.faces = (nx + 1) * ny * nz + nx * (ny + 1) * nz + nx * ny * (nz + 1);
  c.internal_faces = (nx - 1) * ny * nz + nx * (ny - 1) * nz + nx * ny * (nz - 1);
  return c;
}

MeshCounts cavity_counts(std::int64_t n) { return box_counts(n, n, n); }
MeshCounts channel_counts(std::int64_t nx, std::int64_t ny) { return box_counts(nx, ny, 1); }

Mesh gen_box(Index nx, Index ny, Index nz, const std::function<Vec3(Index, Index, Index)>& map,
             const std::vector<BoxPatch>& patches) {
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("block dimensions must be positive");
  const auto counts = box_counts(nx, ny, nz);
  if (counts.faces > std::numeric_limits<Index>::max() / 4)
    throw std::invalid_argument("block too large for 32-bit indices");

  std::array<int, 6> side_patch;
  side_patch.fill(-1);
  for (std::size_t p = 0; p < patches.size(); ++p)
    for (BoxSide s : patches[p].sides) {
      auto& slot = side_patch[static_cast<std::size_t>(s)];
      if (slot != -1) throw std::invalid_argument("block side assigned to two patches");
      slot = static_cast<int>(p);
    }
  for (int s : side_patch)
    if (s == -1) throw std::invalid_argument("every block side needs a patch");

  auto pid = [&](Index i, Index j, Index k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  auto cid = [&](Index i, Index j, Index k) { return i + nx * (j + ny * k); };

  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)));
  for (Index k = 0; k <= nz; ++k)
    for (Index j = 0; j <= ny; ++j)
      for (Index i = 0; i <= nx; ++i) points.push_back(map(i, j, k));

  // Outward-oriented quads of cell (i, j, k) on each side.
  auto quad = [&](Index i, Index j, Index k, BoxSide s) -> std::array<Index, 4> {
    switch (s) {
      case BoxSide::xmax: return {pid(i + 1, j, k), pid(i + 1, j + 1, k), pid(i + 1, j + 1, k + 1), pid(i + 1, j, k + 1)};
      case BoxSide::ymax: return {pid(i, j + 1, k), pid(i, j + 1, k + 1), pid(i + 1, j + 1, k + 1), pid(i + 1, j + 1, k)};
      case BoxSide::zmax: return {pid(i, j, k + 1), pid(i + 1, j, k + 1), pid(i + 1, j + 1, k + 1), pid(i, j + 1, k + 1)};
      case BoxSide::xmin: return {pid(i, j, k), pid(i, j, k + 1), pid(i, j + 1, k + 1), pid(i, j + 1, k)};
      case BoxSide::ymin: return {pid(i, j, k), pid(i + 1, j, k), pid(i + 1, j, k + 1), pid(i, j, k + 1)};
      case BoxSide::zmin: return {pid(i, j, k), pid(i, j + 1, k), pid(i + 1, j + 1, k), pid(i + 1, j, k)};
    }
    return {};
  };

  std::vector<Index> offsets{0};
  std::vector<Index> fpts;
  std::vector<Index> owner;
  std::vector<Index> neighbour;
  offsets.reserve(static_cast<std::size_t>(counts.faces) + 1);
  fpts.reserve(static_cast<std::size_t>(counts.faces) * 4);
  owner.reserve(static_cast<std::size_t>(counts.faces));
  neighbour.reserve(static_cast<std::size_t>(counts.internal_faces));
  auto push = [&](const std::array<Index, 4>& q, Index own) {
    fpts.insert(fpts.end(), q.begin(), q.end());
    offsets.push_back(static_cast<Index>(fpts.size()));
    owner.push_back(own);
  };

  for (Index k = 0; k < nz; ++k)
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        const Index c = cid(i, j, k);
        if (i + 1 < nx) {
          push(quad(i, j, k, BoxSide::xmax), c);
          neighbour.push_back(cid(i + 1, j, k));
        }
        if (j + 1 < ny) {
          push(quad(i, j, k, BoxSide::ymax), c);
          neighbour.push_back(cid(i, j + 1, k));
        }
        if (k + 1 < nz) {
          push(quad(i, j, k, BoxSide::zmax), c);
          neighbour.push_back(cid(i, j, k + 1));
        }
      }

  std::vector<Patch> out_patches;
  for (std::size_t p = 0; p < patches.size(); ++p) {
    Patch patch{patches[p].name, patches[p].kind, static_cast<Index>(owner.size()), 0};
    for (BoxSide s : patches[p].sides) {
      switch (s) {
        case BoxSide::xmin:
        case BoxSide::xmax: {
          const Index i = s == BoxSide::xmin ? 0 : nx - 1;
          for (Index k = 0; k < nz; ++k)
            for (Index j = 0; j < ny; ++j) push(quad(i, j, k, s), cid(i, j, k));
          break;
        }
        case BoxSide::ymin:
        case BoxSide::ymax: {
          const Index j = s == BoxSide::ymin ? 0 : ny - 1;
          for (Index k = 0; k < nz; ++k)
            for (Index i = 0; i < nx; ++i) push(quad(i, j, k, s), cid(i, j, k));
          break;
        }
        case BoxSide::zmin:
        case BoxSide::zmax: {
          const Index k = s == BoxSide::zmin ? 0 : nz - 1;
          for (Index j = 0; j < ny; ++j)
            for (Index i = 0; i < nx; ++i) push(quad(i, j, k, s), cid(i, j, k));
          break;
        }
      }
    }
    patch.count = static_cast<Index>(owner.size()) - patch.start;
    out_patches.push_back(std::move(patch));
  }

  return Mesh(std::move(points), std::move(offsets), std::move(fpts), std::move(owner), std::move(neighbour),
              std::move(out_patches), static_cast<Index>(counts.cells));
}

Mesh gen_cavity(Index n, double length) {
  if (n < 1) throw std::invalid_argument("cavity resolution must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("cavity size must be positive");
  const double h = length / n;
  return gen_box(
      n, n, n, [&](Index i, Index j, Index k) { return Vec3{i * h, j * h, k * h}; },
      {{"lid", PatchKind::wall, {BoxSide::ymax}},
       {"walls", PatchKind::wall, {BoxSide::xmin, BoxSide::xmax, BoxSide::ymin, BoxSide::zmin, BoxSide::zmax}}});
}

namespace {

std::vector<BoxPatch> channel_patches() {
  return {{"inlet", PatchKind::inlet, {BoxSide::xmin}},
          {"outlet", PatchKind::outlet, {BoxSide::xmax}},
          {"walls", PatchKind::wall, {BoxSide::ymin, BoxSide::ymax}},
          {"frontAndBack", PatchKind::empty, {BoxSide::zmin, BoxSide::zmax}}};
}

void check_channel(Index nx, Index ny, double length, double height) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("channel resolution must be positive");
  if (!(length > 0.0) || !(height > 0.0)) throw std::invalid_argument("channel size must be positive");
}

}  // namespace

Mesh gen_channel(Index nx, Index ny, double length, double height) {
  return gen_skewed_duct(nx, ny, 0.0, length, height);
}

Mesh gen_skewed_duct(Index nx, Index ny, double skew_deg, double length, double height) {
  check_channel(nx, ny, length, height);
  if (!(skew_deg >= 0.0 && skew_deg <= 45.0)) throw std::invalid_argument("skew angle must be in [0, 45] degrees");
  const double hx = length / nx;
  const double hy = height / ny;
  const double thickness = hy;
  const double shear = std::tan(skew_deg * std::numbers::pi / 180.0);
  return gen_box(
      nx, ny, 1,
      [&](Index i, Index j, Index k) {
        const double y = j * hy;
        return Vec3{i * hx + y * shear, y, k * thickness};
      },
      channel_patches());
}

GeneratedCase cavity_case(Index n) {
  GeneratedCase g{gen_cavity(n, 0.1), {}};
  CaseConfig& c = g.config;
  c.kind = CaseKind::cavity;
  c.u_lid = 1.0;
  c.coupling.nu = 0.01;
  c.coupling.algorithm = Algorithm::simple;
  c.coupling.outer_tol = 1e-5;
  c.coupling.max_outer = 2000;
  c.coupling.pressure_solver.tolerance = 1e-10;
  c.coupling.momentum_solver.tolerance = 1e-8;
  return g;
}

GeneratedCase channel_case(Index nx, Index ny, double length, double height) {
  GeneratedCase g{gen_channel(nx, ny, length, height), {}};
  CaseConfig& c = g.config;
  c.kind = CaseKind::channel;
  c.inlet = InletKind::timed;
  c.u0 = 0.01;
  c.frequency = 0.5;
  c.coupling.nu = 3.3e-6;
  c.coupling.algorithm = Algorithm::piso;
  c.coupling.dt = 1e-4;
  c.coupling.end_time = 0.01;
  c.coupling.max_outer = 100;
  c.coupling.pressure_solver.tolerance = 1e-10;
  c.coupling.momentum_solver.tolerance = 1e-8;
  return g;
}

GeneratedCase skewed_duct_case(Index nx, Index ny, double skew_deg, double length, double height) {
  GeneratedCase g{gen_skewed_duct(nx, ny, skew_deg, length, height), {}};
  CaseConfig& c = g.config;
  c.kind = CaseKind::skewed_duct;
  c.inlet = InletKind::fixed;
  c.inlet_velocity = 0.01;
  c.coupling.nu = 1e-5;
  c.coupling.algorithm = Algorithm::simple;
  c.coupling.n_nonorth_correctors = 1;
  c.coupling.outer_tol = 1e-5;
  c.coupling.max_outer = 2000;
  c.coupling.pressure_solver.tolerance = 1e-10;
  c.coupling.momentum_solver.tolerance = 1e-8;
  return g;
}

std::pair<VectorField, ScalarField> initial_fields(const CaseConfig& cfg, const Mesh& mesh) {
  std::vector<VectorBC> ubc;
  std::vector<ScalarBC> pbc;
  for (const Patch& p : mesh.patches()) {
    switch (p.kind) {
      case PatchKind::wall:
        if (p.name == "lid")
          ubc.emplace_back(FixedValue<Vec3>{{cfg.u_lid, 0.0, 0.0}});
        else
          ubc.emplace_back(NoSlip{});
        pbc.emplace_back(ZeroGradient{});
        break;
      case PatchKind::inlet:
        if (cfg.inlet == InletKind::timed)
          ubc.emplace_back(TimedInlet{cfg.u0, cfg.frequency});
        else if (cfg.inlet == InletKind::fixed)
          ubc.emplace_back(FixedValue<Vec3>{{cfg.inlet_velocity, 0.0, 0.0}});
        else
          ubc.emplace_back(MassFlowInlet{cfg.mass_flow, cfg.rho});
        pbc.emplace_back(ZeroGradient{});
        break;
      case PatchKind::outlet:
        ubc.emplace_back(ZeroGradient{});
        pbc.emplace_back(fixed_pressure(0.0));
        break;
      case PatchKind::empty:
        ubc.emplace_back(Empty{});
        pbc.emplace_back(Empty{});
        break;
    }
  }
  return {VectorField("U", mesh, std::move(ubc)), ScalarField("p", mesh, std::move(pbc))};
}

}  // namespace ellcfd
