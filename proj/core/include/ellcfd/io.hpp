#pragma once

// Text mesh files, legacy VTK output and line sampling.
//
// Mesh file layout, one section after another:
//
//   POINTS <n>        then n lines "x y z"
//   FACES <n>         then n lines "k p0 p1 ... p(k-1)"
//   OWNER <n>         then n owner cell indices
//   NEIGHBOUR <n>     then n neighbour cell indices (internal faces only)
//   PATCHES <n>       then n lines "name kind start count"
//
// Blank lines and lines starting with '#' are ignored. Reals are written with
// 17 significant digits so a write/read cycle is exact.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellcfd/mesh.hpp"

namespace ellcfd {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& section, long line, const std::string& what);
  const std::string& section() const noexcept { return section_; }
  long line() const noexcept { return line_; }

 private:
  std::string section_;
  long line_;
};

Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// One cell-data array for VTK output; `components` is 1 or 3.
struct CellData {
  std::string name;
  int components = 1;
  std::vector<double> values;  ///< n_cells * components, interleaved
};

CellData scalar_data(std::string name, const std::vector<double>& v);
CellData vector_data(std::string name, const std::vector<Vec3>& v);

/// Legacy ASCII unstructured grid. Hexahedra are written as VTK_HEXAHEDRON
/// (12), other cells as VTK_CONVEX_POINT_SET (41).
void write_vtk(const Mesh& mesh, const std::vector<CellData>& fields, std::ostream& out);
void write_vtk(const Mesh& mesh, const std::vector<CellData>& fields, const std::filesystem::path& path);

/// VTK point order of a hexahedral cell, or empty if the cell is not a hex.
std::vector<Index> hex_vertices(const Mesh& mesh, const std::vector<std::vector<Index>>& cell_faces, Index cell);


struct SampleRow {
  double s = 0.0;  ///< arc length from p0
  Index cell = -1;
  std::vector<double> values;
};

struct SampleResult {
  std::vector<SampleRow> rows;
  bool outside = false;  ///< true when no sample point lies inside the mesh
};

/// Nearest-cell sampling at n uniform parameters on [p0, p1]; points outside
/// every cell are skipped. `values` has n_cells * components entries.
SampleResult sample_line(const Mesh& mesh, const MeshGeometry& geom, const std::vector<double>& values,
                         int components, const Vec3& p0, const Vec3& p1, int n_samples);

/// "s,<names...>" header plus rows, 17 significant digits.
void write_samples_csv(const SampleResult& r, const std::vector<std::string>& columns, std::ostream& out);

/// Cell containment test against the face planes (convex cells).
bool point_in_cell(const Mesh& mesh, const MeshGeometry& geom, const std::vector<std::vector<Index>>& cell_faces,
                   Index cell, const Vec3& x);

/// Cell values as text: "CELLS <n> <components>" then one line per cell.
void write_cell_values(const std::vector<double>& values, int components, const std::filesystem::path& path);
CellData read_cell_values(const std::filesystem::path& path);

/// Face lists per cell.
std::vector<std::vector<Index>> cell_faces(const Mesh& mesh);

}  // namespace ellcfd
