#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ellcfd/vec3.hpp"

namespace ellcfd {

using Index = std::int32_t;

enum class PatchKind { wall, inlet, outlet, empty };

std::string_view to_string(PatchKind kind);
/// Parses "wall", "inlet", "outlet" or "empty"; nullopt otherwise.
std::optional<PatchKind> patch_kind_from_string(std::string_view s);

/// Named contiguous range of boundary faces.
struct Patch {
  std::string name;
  PatchKind kind = PatchKind::wall;
  Index start = 0;
  Index count = 0;

  Index end() const { return start + count; }
  friend bool operator==(const Patch&, const Patch&) = default;
};

/// Raised for topological or geometric defects. `entity` names the offending
/// face or cell when there is one.
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what, Index entity = -1)
      : std::runtime_error(what), entity_(entity) {}
  Index entity() const noexcept { return entity_; }

 private:
  Index entity_;
};

/// Face-based polyhedral mesh.
///
/// Faces [0, n_internal) are internal and carry an owner and a neighbour with
/// owner < neighbour. The remaining faces are boundary faces, partitioned into
/// patches in order. Each face is a loop of point indices whose right-hand
/// normal points out of the owner cell.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Vec3> points, std::vector<std::vector<Index>> faces, std::vector<Index> owner,
       std::vector<Index> neighbour, std::vector<Patch> patches, Index n_cells);
  /// Flat-storage constructor; face f spans face_points[face_offsets[f] .. face_offsets[f+1]).
  Mesh(std::vector<Vec3> points, std::vector<Index> face_offsets, std::vector<Index> face_points,
       std::vector<Index> owner, std::vector<Index> neighbour, std::vector<Patch> patches, Index n_cells);

  Index n_cells() const { return n_cells_; }
  Index n_points() const { return static_cast<Index>(points_.size()); }
  Index n_faces() const { return static_cast<Index>(owner_.size()); }
  Index n_internal_faces() const { return static_cast<Index>(neighbour_.size()); }
  Index n_boundary_faces() const { return n_faces() - n_internal_faces(); }

  const std::vector<Vec3>& points() const { return points_; }
  std::span<const Index> face(Index f) const {
    return {face_points_.data() + face_offsets_[f],
            static_cast<std::size_t>(face_offsets_[f + 1] - face_offsets_[f])};
  }
  const std::vector<Index>& face_offsets() const { return face_offsets_; }
  const std::vector<Index>& face_points() const { return face_points_; }
  const std::vector<Index>& owner() const { return owner_; }
  const std::vector<Index>& neighbour() const { return neighbour_; }
  const std::vector<Patch>& patches() const { return patches_; }

  bool is_internal(Index f) const { return f < n_internal_faces(); }
  /// Patch index of boundary face f, -1 for internal faces.
  Index patch_of(Index f) const;
  /// Index of the patch with the given name, -1 if absent.
  Index find_patch(std::string_view name) const;

  friend bool operator==(const Mesh&, const Mesh&) = default;

 private:
  void validate() const;

  std::vector<Vec3> points_;
  std::vector<Index> face_offsets_{0};
  std::vector<Index> face_points_;
  std::vector<Index> owner_;
  std::vector<Index> neighbour_;
  std::vector<Patch> patches_;
  Index n_cells_ = 0;
};

/// Geometric quantities derived from a Mesh.
///
/// Per-face arrays are sized n_faces. On boundary faces `delta` is the vector
/// from the owner centroid to the face centroid and `weight` is 1.
struct MeshGeometry {
  std::vector<double> cell_volume;
  std::vector<Vec3> cell_centroid;
  std::vector<Vec3> face_area;  ///< S_f, owner -> neighbour (outward on boundary)
  std::vector<Vec3> face_centroid;
  std::vector<Vec3> delta;                ///< d, owner centroid -> neighbour centroid
  std::vector<double> weight;             ///< w_f, owner-side interpolation weight
  std::vector<double> nonorthogonality;   ///< angle between d and S_f in degrees

  double max_nonorthogonality() const;
  double total_volume() const;
};

/// Largest d-S_f angle accepted by compute_geometry, in degrees.
inline constexpr double kMaxNonorthogonality = 80.0;

/// Computes face and cell geometry by triangle/pyramid decomposition.
/// Throws MeshError for zero-area faces, non-positive cell volumes,
/// coincident centroids, open cells and faces beyond kMaxNonorthogonality.
MeshGeometry compute_geometry(const Mesh& mesh);

/// One incident face of a cell.
struct Adjacency {
  Index face = -1;
  int sign = 1;      ///< +1 if the cell owns the face, -1 if it is the neighbour
  Index other = -1;  ///< the cell across the face, -1 on the boundary
  Index patch = -1;  ///< patch index for boundary faces, -1 for internal faces

  friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

/// Cell-to-face incidence in compressed form, faces in ascending order per cell.
class CellAdjacency {
 public:
  explicit CellAdjacency(const Mesh& mesh);

  std::span<const Adjacency> of(Index cell) const {
    return {entries_.data() + offsets_[cell], static_cast<std::size_t>(offsets_[cell + 1] - offsets_[cell])};
  }
  Index n_cells() const { return static_cast<Index>(offsets_.size()) - 1; }
  /// Number of internal faces of `cell`.
  Index n_neighbours(Index cell) const;

 private:
  std::vector<Index> offsets_;
  std::vector<Adjacency> entries_;
};

CellAdjacency cell_face_adjacency(const Mesh& mesh);

/// Maximum number of internal faces over all cells.
Index max_neighbours(const Mesh& mesh);

}  // namespace ellcfd
