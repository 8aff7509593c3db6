#include "ellcfd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellcfd {

std::string_view to_string(PatchKind kind) {
  switch (kind) {
    case PatchKind::wall: return "wall";
    case PatchKind::inlet: return "inlet";
    case PatchKind::outlet: return "outlet";
    case PatchKind::empty: return "empty";
  }
  return "wall";
}

std::optional<PatchKind> patch_kind_from_string(std::string_view s) {
  if (s == "wall") return PatchKind::wall;
  if (s == "inlet") return PatchKind::inlet;
  if (s == "outlet") return PatchKind::outlet;
  if (s == "empty") return PatchKind::empty;
  return std::nullopt;
}

namespace {

void flatten(const std::vector<std::vector<Index>>& faces, std::vector<Index>& offsets,
             std::vector<Index>& flat) {
  offsets.assign(1, 0);
  offsets.reserve(faces.size() + 1);
  flat.clear();
  for (const auto& f : faces) {
    flat.insert(flat.end(), f.begin(), f.end());
    offsets.push_back(static_cast<Index>(flat.size()));
  }
}

}  // namespace

Mesh::Mesh(std::vector<Vec3> points, std::vector<std::vector<Index>> faces, std::vector<Index> owner,
           std::vector<Index> neighbour, std::vector<Patch> patches, Index n_cells)
    : points_(std::move(points)),
      owner_(std::move(owner)),
      neighbour_(std::move(neighbour)),
      patches_(std::move(patches)),
      n_cells_(n_cells) {
  flatten(faces, face_offsets_, face_points_);
  validate();
}

Mesh::Mesh(std::vector<Vec3> points, std::vector<Index> face_offsets, std::vector<Index> face_points,
           std::vector<Index> owner, std::vector<Index> neighbour, std::vector<Patch> patches, Index n_cells)
    : points_(std::move(points)),
      face_offsets_(std::move(face_offsets)),
      face_points_(std::move(face_points)),
      owner_(std::move(owner)),
      neighbour_(std::move(neighbour)),
      patches_(std::move(patches)),
      n_cells_(n_cells) {
  validate();
}

void Mesh::validate() const {
  if (n_cells_ < 1) throw MeshError("mesh has no cells");
  if (face_offsets_.empty() || face_offsets_.front() != 0 ||
      face_offsets_.back() != static_cast<Index>(face_points_.size()))
    throw MeshError("face offsets are inconsistent with face point list");
  const auto n_faces_from_offsets = static_cast<Index>(face_offsets_.size()) - 1;
  if (static_cast<Index>(owner_.size()) != n_faces_from_offsets)
    throw MeshError("owner list has " + std::to_string(owner_.size()) + " entries for " +
                    std::to_string(n_faces_from_offsets) + " faces");
  if (neighbour_.size() > owner_.size()) throw MeshError("more neighbours than faces");

  const Index np = n_points();
  std::vector<Index> loop;
  for (Index f = 0; f < n_faces(); ++f) {
    if (face_offsets_[f + 1] < face_offsets_[f]) throw MeshError("face offsets decrease at face " + std::to_string(f), f);
    auto pts = face(f);
    if (pts.size() < 3) throw MeshError("face " + std::to_string(f) + " has fewer than 3 points", f);
    loop.assign(pts.begin(), pts.end());
    for (Index p : loop)
      if (p < 0 || p >= np) throw MeshError("face " + std::to_string(f) + " references missing point " + std::to_string(p), f);
    std::sort(loop.begin(), loop.end());
    if (std::adjacent_find(loop.begin(), loop.end()) != loop.end())
      throw MeshError("face " + std::to_string(f) + " repeats a point", f);
    if (owner_[f] < 0 || owner_[f] >= n_cells_)
      throw MeshError("face " + std::to_string(f) + " has owner out of range", f);
  }

  std::vector<char> touched(static_cast<std::size_t>(n_cells_), 0);
  for (Index f = 0; f < n_faces(); ++f) touched[owner_[f]] = 1;
  for (Index f = 0; f < n_internal_faces(); ++f) {
    const Index n = neighbour_[f];
    if (n < 0 || n >= n_cells_) throw MeshError("face " + std::to_string(f) + " has neighbour out of range", f);
    if (owner_[f] >= n)
      throw MeshError("internal face " + std::to_string(f) + " violates owner < neighbour", f);
    touched[n] = 1;
  }
  for (Index c = 0; c < n_cells_; ++c)
    if (!touched[c]) throw MeshError("cell " + std::to_string(c) + " has no faces", c);

  Index next = n_internal_faces();
  for (const auto& p : patches_) {
    if (p.count < 0) throw MeshError("patch '" + p.name + "' has negative size");
    if (p.start != next)
      throw MeshError("patch '" + p.name + "' starts at face " + std::to_string(p.start) + ", expected " +
                      std::to_string(next));
    next += p.count;
  }
  if (next != n_faces())
    throw MeshError("patches cover " + std::to_string(next - n_internal_faces()) + " of " +
                    std::to_string(n_boundary_faces()) + " boundary faces");
}

Index Mesh::patch_of(Index f) const {
  if (is_internal(f)) return -1;
  for (std::size_t i = 0; i < patches_.size(); ++i)
    if (f >= patches_[i].start && f < patches_[i].end()) return static_cast<Index>(i);
  return -1;
}

Index Mesh::find_patch(std::string_view name) const {
  for (std::size_t i = 0; i < patches_.size(); ++i)
    if (patches_[i].name == name) return static_cast<Index>(i);
  return -1;
}

double MeshGeometry::max_nonorthogonality() const {
  double m = 0.0;
  for (std::size_t f = 0; f < weight.size(); ++f)
    if (weight[f] < 1.0) m = std::max(m, nonorthogonality[f]);
  return m;
}

double MeshGeometry::total_volume() const {
  double v = 0.0;
  for (double c : cell_volume) v += c;
  return v;
}

MeshGeometry compute_geometry(const Mesh& mesh) {
  const Index nf = mesh.n_faces();
  const Index nc = mesh.n_cells();
  const auto& pts = mesh.points();
  MeshGeometry g;
  g.face_area.resize(nf);
  g.face_centroid.resize(nf);

  for (Index f = 0; f < nf; ++f) {
    auto loop = mesh.face(f);
    Vec3 seed;
    for (Index p : loop) seed += pts[p];
    seed /= static_cast<double>(loop.size());

    Vec3 area;
    std::vector<Vec3> tri_area(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = pts[loop[i]];
      const Vec3& b = pts[loop[(i + 1) % loop.size()]];
      tri_area[i] = 0.5 * cross(a - seed, b - seed);
      area += tri_area[i];
    }
    const double area_mag = mag(area);
    if (!(area_mag > 0.0)) throw MeshError("face " + std::to_string(f) + " has zero area", f);
    const Vec3 n = area / area_mag;

    Vec3 centroid;
    double wsum = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = pts[loop[i]];
      const Vec3& b = pts[loop[(i + 1) % loop.size()]];
      const double w = dot(tri_area[i], n);
      centroid += w * (seed + a + b) / 3.0;
      wsum += w;
    }
    g.face_area[f] = area;
    g.face_centroid[f] = centroid / wsum;
  }

  // Cell seeds: average of face centroids.
  std::vector<Vec3> seed(nc);
  std::vector<int> nface(nc, 0);
  const auto& owner = mesh.owner();
  const auto& neighbour = mesh.neighbour();
  for (Index f = 0; f < nf; ++f) {
    seed[owner[f]] += g.face_centroid[f];
    ++nface[owner[f]];
    if (mesh.is_internal(f)) {
      seed[neighbour[f]] += g.face_centroid[f];
      ++nface[neighbour[f]];
    }
  }
  for (Index c = 0; c < nc; ++c) seed[c] /= static_cast<double>(nface[c]);

  g.cell_volume.assign(nc, 0.0);
  g.cell_centroid.assign(nc, Vec3{});
  std::vector<Vec3> closure(nc);
  std::vector<double> area_sum(nc, 0.0);
  auto add_pyramid = [&](Index c, const Vec3& s_out, const Vec3& cf) {
    const double v = dot(s_out, cf - seed[c]) / 3.0;
    g.cell_volume[c] += v;
    g.cell_centroid[c] += v * (0.75 * cf + 0.25 * seed[c]);
    closure[c] += s_out;
    area_sum[c] += mag(s_out);
  };
  for (Index f = 0; f < nf; ++f) {
    add_pyramid(owner[f], g.face_area[f], g.face_centroid[f]);
    if (mesh.is_internal(f)) add_pyramid(neighbour[f], -g.face_area[f], g.face_centroid[f]);
  }
  for (Index c = 0; c < nc; ++c) {
    if (!(g.cell_volume[c] > 0.0))
      throw MeshError("cell " + std::to_string(c) + " has non-positive volume", c);
    g.cell_centroid[c] /= g.cell_volume[c];
    if (mag(closure[c]) > 1e-10 * area_sum[c])
      throw MeshError("cell " + std::to_string(c) + " is not closed", c);
  }

  g.delta.resize(nf);
  g.weight.assign(nf, 1.0);
  g.nonorthogonality.assign(nf, 0.0);
  for (Index f = 0; f < nf; ++f) {
    const Vec3& s = g.face_area[f];
    const Vec3 n = s / mag(s);
    const Vec3& cp = g.cell_centroid[owner[f]];
    const Vec3 d = mesh.is_internal(f) ? g.cell_centroid[neighbour[f]] - cp : g.face_centroid[f] - cp;
    const double dmag = mag(d);
    if (!(dmag > 0.0)) throw MeshError("face " + std::to_string(f) + " has coincident centroids", f);
    g.delta[f] = d;
    const double cosang = std::clamp(dot(d, s) / (dmag * mag(s)), -1.0, 1.0);
    g.nonorthogonality[f] = std::acos(cosang) * 180.0 / std::numbers::pi;
    if (g.nonorthogonality[f] > kMaxNonorthogonality)
      throw MeshError("face " + std::to_string(f) + " exceeds the nonorthogonality limit", f);
    if (mesh.is_internal(f)) {
      const double dp = std::abs(dot(n, g.face_centroid[f] - cp));
      const double dn = std::abs(dot(n, g.cell_centroid[neighbour[f]] - g.face_centroid[f]));
      if (!(dp > 0.0) || !(dn > 0.0))
        throw MeshError("face " + std::to_string(f) + " has a degenerate interpolation stencil", f);
      g.weight[f] = dn / (dp + dn);
    }
  }
  return g;
}

CellAdjacency::CellAdjacency(const Mesh& mesh) {
  const Index nc = mesh.n_cells();
  offsets_.assign(static_cast<std::size_t>(nc) + 1, 0);
  const auto& owner = mesh.owner();
  const auto& neighbour = mesh.neighbour();
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    ++offsets_[owner[f] + 1];
    if (mesh.is_internal(f)) ++offsets_[neighbour[f] + 1];
  }
  for (Index c = 0; c < nc; ++c) offsets_[c + 1] += offsets_[c];
  entries_.resize(offsets_.back());
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  // Ascending face order falls out of the face loop.
  Index patch = -1;
  Index patch_end = mesh.n_internal_faces();
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.is_internal(f)) {
      entries_[fill[owner[f]]++] = {f, +1, neighbour[f], -1};
      entries_[fill[neighbour[f]]++] = {f, -1, owner[f], -1};
    } else {
      while (f >= patch_end) {
        ++patch;
        patch_end = mesh.patches()[patch].end();
      }
      entries_[fill[owner[f]]++] = {f, +1, -1, patch};
    }
  }
}

Index CellAdjacency::n_neighbours(Index cell) const {
  Index n = 0;
  for (const auto& a : of(cell))
    if (a.other >= 0) ++n;
  return n;
}

CellAdjacency cell_face_adjacency(const Mesh& mesh) { return CellAdjacency(mesh); }

Index max_neighbours(const Mesh& mesh) {
  std::vector<Index> count(static_cast<std::size_t>(mesh.n_cells()), 0);
  for (Index f = 0; f < mesh.n_internal_faces(); ++f) {
    ++count[mesh.owner()[f]];
    ++count[mesh.neighbour()[f]];
  }
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

}  // namespace ellcfd
