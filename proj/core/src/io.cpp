#include "ellcfd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ellcfd {

ParseError::ParseError(const std::string& section, long line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (section.empty() ? std::string() : section + ": ") + what),
      section_(section),
      line_(line) {}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Line reader that skips blanks and comments and remembers line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      tokens.clear();
      std::istringstream ss(line);
      for (std::string t; ss >> t;) tokens.push_back(t);
      return true;
    }
    return false;
  }
  long line() const { return line_no_; }

 private:
  std::istream& in_;
  long line_no_ = 0;
};

template <class T>
T parse_number(const std::string& tok, const std::string& section, long line) {
  T v{};
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(section, line, "invalid number '" + tok + "'");
  return v;
}

const char* const kSections[] = {"POINTS", "FACES", "OWNER", "NEIGHBOUR", "PATCHES"};

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  std::vector<Vec3> points;
  std::vector<Index> offsets{0};
  std::vector<Index> fpts;
  std::vector<Index> owner;
  std::vector<Index> neighbour;
  std::vector<Patch> patches;
  long neighbour_line = 0;

  bool have_next = r.next(tok);
  for (const char* section : kSections) {
    if (!have_next) throw ParseError(section, r.line(), "missing section");
    if (tok.size() != 2 || tok[0] != section)
      throw ParseError(section, r.line(), "expected '" + std::string(section) + " <count>'");
    const long count = parse_number<long>(tok[1], section, r.line());
    if (count < 0) throw ParseError(section, r.line(), "negative count");
    const std::string sec = section;
    for (long i = 0; i < count; ++i) {
      if (!r.next(tok)) throw ParseError(sec, r.line(), "expected " + std::to_string(count) + " entries, found " +
                                                             std::to_string(i));
      const long ln = r.line();
      const bool is_header = std::find(std::begin(kSections), std::end(kSections), tok[0]) != std::end(kSections);
      if (is_header)
        throw ParseError(sec, ln, "expected " + std::to_string(count) + " entries, found " + std::to_string(i));
      if (sec == "POINTS") {
        if (tok.size() != 3) throw ParseError(sec, ln, "a point needs 3 coordinates");
        points.push_back({parse_number<double>(tok[0], sec, ln), parse_number<double>(tok[1], sec, ln),
                          parse_number<double>(tok[2], sec, ln)});
      } else if (sec == "FACES") {
        const long k = parse_number<long>(tok[0], sec, ln);
        if (k < 3 || static_cast<std::size_t>(k) + 1 != tok.size())
          throw ParseError(sec, ln, "face size does not match its point list");
        for (long j = 1; j <= k; ++j) {
          const Index p = parse_number<Index>(tok[static_cast<std::size_t>(j)], sec, ln);
          if (p < 0 || p >= static_cast<Index>(points.size()))
            throw ParseError(sec, ln, "dangling point index " + std::to_string(p));
          fpts.push_back(p);
        }
        offsets.push_back(static_cast<Index>(fpts.size()));
      } else if (sec == "OWNER" || sec == "NEIGHBOUR") {
        if (tok.size() != 1) throw ParseError(sec, ln, "one cell index per line expected");
        (sec == "OWNER" ? owner : neighbour).push_back(parse_number<Index>(tok[0], sec, ln));
      } else {
        if (tok.size() != 4) throw ParseError(sec, ln, "expected 'name kind start count'");
        const auto kind = patch_kind_from_string(tok[1]);
        if (!kind) throw ParseError(sec, ln, "unknown patch kind '" + tok[1] + "'");
        patches.push_back({tok[0], *kind, parse_number<Index>(tok[2], sec, ln), parse_number<Index>(tok[3], sec, ln)});
      }
    }
    if (sec == "FACES" || sec == "OWNER") {
      const std::size_t n_faces = offsets.size() - 1;
      if (sec == "OWNER" && owner.size() != n_faces)
        throw ParseError(sec, r.line(), "has " + std::to_string(owner.size()) + " entries for " +
                                            std::to_string(n_faces) + " faces");
    }
    if (sec == "NEIGHBOUR") neighbour_line = r.line();
    have_next = r.next(tok);
  }
  if (have_next) throw ParseError("", r.line(), "unexpected content after PATCHES");

  if (!patches.empty() && patches.front().start != static_cast<Index>(neighbour.size()))
    throw ParseError("NEIGHBOUR", neighbour_line,
                     "has " + std::to_string(neighbour.size()) + " entries but the first patch starts at face " +
                         std::to_string(patches.front().start));
  Index n_cells = 0;
  for (Index o : owner) n_cells = std::max(n_cells, o + 1);
  for (Index n : neighbour) n_cells = std::max(n_cells, n + 1);
  try {
    return Mesh(std::move(points), std::move(offsets), std::move(fpts), std::move(owner), std::move(neighbour),
                std::move(patches), n_cells);
  } catch (const MeshError& e) {
    throw ParseError("", 0, std::string("invalid mesh: ") + e.what());
  }
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
  try {
    return read_mesh(in);
  } catch (const ParseError& e) {
    throw ParseError(e.section(), e.line(), path.string() + ": " + e.what());
  }
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "POINTS " << mesh.n_points() << '\n';
  for (const Vec3& p : mesh.points()) out << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z) << '\n';
  out << "FACES " << mesh.n_faces() << '\n';
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const auto pts = mesh.face(f);
    out << pts.size();
    for (Index p : pts) out << ' ' << p;
    out << '\n';
  }
  out << "OWNER " << mesh.n_faces() << '\n';
  for (Index o : mesh.owner()) out << o << '\n';
  out << "NEIGHBOUR " << mesh.n_internal_faces() << '\n';
  for (Index n : mesh.neighbour()) out << n << '\n';
  out << "PATCHES " << mesh.patches().size() << '\n';
  for (const Patch& p : mesh.patches()) out << p.name << ' ' << to_string(p.kind) << ' ' << p.start << ' ' << p.count << '\n';
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_mesh(mesh, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CellData scalar_data(std::string name, const std::vector<double>& v) { return {std::move(name), 1, v}; }

CellData vector_data(std::string name, const std::vector<Vec3>& v) {
  CellData d{std::move(name), 3, {}};
  d.values.reserve(v.size() * 3);
  for (const Vec3& x : v) d.values.insert(d.values.end(), {x.x, x.y, x.z});
  return d;
}

std::vector<std::vector<Index>> cell_faces(const Mesh& mesh) {
  std::vector<std::vector<Index>> cf(static_cast<std::size_t>(mesh.n_cells()));
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    cf[mesh.owner()[f]].push_back(f);
    if (mesh.is_internal(f)) cf[mesh.neighbour()[f]].push_back(f);
  }
  return cf;
}

std::vector<Index> hex_vertices(const Mesh& mesh, const std::vector<std::vector<Index>>& cell_faces, Index cell) {
  const auto& faces = cell_faces[cell];
  if (faces.size() != 6) return {};
  std::set<Index> verts;
  std::set<std::pair<Index, Index>> edges;
  for (Index f : faces) {
    const auto pts = mesh.face(f);
    if (pts.size() != 4) return {};
    for (std::size_t i = 0; i < 4; ++i) {
      const Index a = pts[i];
      const Index b = pts[(i + 1) % 4];
      verts.insert(a);
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  if (verts.size() != 8 || edges.size() != 12) return {};
  // Base quad oriented into the cell: reverse the loop of a face the cell owns.
  const Index f0 = faces.front();
  const auto pts = mesh.face(f0);
  std::vector<Index> base(pts.begin(), pts.end());
  if (mesh.owner()[f0] == cell) std::reverse(base.begin(), base.end());
  std::vector<Index> out = base;
  for (Index v : base) {
    Index top = -1;
    for (Index w : verts) {
      if (std::find(base.begin(), base.end(), w) != base.end()) continue;
      if (edges.count({std::min(v, w), std::max(v, w)})) {
        if (top != -1) return {};
        top = w;
      }
    }
    if (top == -1) return {};
    out.push_back(top);
  }
  return out;
}

void write_vtk(const Mesh& mesh, const std::vector<CellData>& fields, std::ostream& out) {
  const auto cf = cell_faces(mesh);
  for (const CellData& d : fields) {
    if ((d.components != 1 && d.components != 3) ||
        d.values.size() != static_cast<std::size_t>(mesh.n_cells()) * static_cast<std::size_t>(d.components))
      throw std::invalid_argument("cell data '" + d.name + "' does not match the mesh");
  }
  out << "# vtk DataFile Version 3.0\n";
  out << "ellcfd\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_points() << " double\n";
  for (const Vec3& p : mesh.points()) out << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z) << '\n';

  std::vector<std::vector<Index>> conn(static_cast<std::size_t>(mesh.n_cells()));
  std::vector<int> types(conn.size());
  std::size_t total = 0;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    auto hex = hex_vertices(mesh, cf, c);
    if (!hex.empty()) {
      conn[c] = std::move(hex);
      types[c] = 12;
    } else {
      std::set<Index> v;
      for (Index f : cf[c])
        for (Index p : mesh.face(f)) v.insert(p);
      conn[c].assign(v.begin(), v.end());
      types[c] = 41;
    }
    total += conn[c].size() + 1;
  }
  out << "CELLS " << mesh.n_cells() << ' ' << total << '\n';
  for (const auto& c : conn) {
    out << c.size();
    for (Index p : c) out << ' ' << p;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.n_cells() << '\n';
  for (int t : types) out << t << '\n';
  if (fields.empty()) return;
  out << "CELL_DATA " << mesh.n_cells() << '\n';
  for (const CellData& d : fields) {
    if (d.components == 1)
      out << "SCALARS " << d.name << " double 1\nLOOKUP_TABLE default\n";
    else
      out << "VECTORS " << d.name << " double\n";
    for (std::size_t i = 0; i < d.values.size(); i += static_cast<std::size_t>(d.components)) {
      for (int k = 0; k < d.components; ++k) out << (k ? " " : "") << fmt17(d.values[i + static_cast<std::size_t>(k)]);
      out << '\n';
    }
  }
}

void write_vtk(const Mesh& mesh, const std::vector<CellData>& fields, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_vtk(mesh, fields, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

bool point_in_cell(const Mesh& mesh, const MeshGeometry& geom, const std::vector<std::vector<Index>>& cf, Index cell,
                   const Vec3& x) {
  const double scale = std::cbrt(geom.cell_volume[cell]);
  for (Index f : cf[cell]) {
    const double sign = mesh.owner()[f] == cell ? 1.0 : -1.0;
    const Vec3 n = sign * geom.face_area[f] / mag(geom.face_area[f]);
    if (dot(x - geom.face_centroid[f], n) > 1e-9 * scale) return false;
  }
  return true;
}

SampleResult sample_line(const Mesh& mesh, const MeshGeometry& geom, const std::vector<double>& values,
                         int components, const Vec3& p0, const Vec3& p1, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("sample_line needs at least one sample");
  if (components < 1 || values.size() != static_cast<std::size_t>(mesh.n_cells()) * static_cast<std::size_t>(components))
    throw std::invalid_argument("sample_line: values do not match the mesh");
  const auto cf = cell_faces(mesh);
  const CellAdjacency adj(mesh);
  SampleResult res;
  const double length = mag(p1 - p0);
  for (int i = 0; i < n_samples; ++i) {
    const double t = n_samples == 1 ? 0.0 : static_cast<double>(i) / (n_samples - 1);
    const Vec3 x = p0 + t * (p1 - p0);
    Index best = 0;
    double best_d = mag_sqr(geom.cell_centroid[0] - x);
    for (Index c = 1; c < mesh.n_cells(); ++c) {
      const double d = mag_sqr(geom.cell_centroid[c] - x);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    bool inside = point_in_cell(mesh, geom, cf, best, x);
    for (const Adjacency& a : adj.of(best)) {
      if (inside) break;
      if (a.other >= 0) inside = point_in_cell(mesh, geom, cf, a.other, x);
    }
    if (!inside) continue;
    SampleRow row{t * length, best, {}};
    const auto k = static_cast<std::size_t>(components);
    row.values.assign(values.begin() + static_cast<std::ptrdiff_t>(best * k),
                      values.begin() + static_cast<std::ptrdiff_t>((best + 1) * k));
    res.rows.push_back(std::move(row));
  }
  res.outside = res.rows.empty();
  return res;
}

void write_samples_csv(const SampleResult& r, const std::vector<std::string>& columns, std::ostream& out) {
  out << "s";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const SampleRow& row : r.rows) {
    out << fmt17(row.s);
    for (double v : row.values) out << ',' << fmt17(v);
    out << '\n';
  }
}

void write_cell_values(const std::vector<double>& values, int components, const std::filesystem::path& path) {
  if (components < 1 || values.size() % static_cast<std::size_t>(components) != 0)
    throw std::invalid_argument("cell values do not divide into components");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::size_t k = static_cast<std::size_t>(components);
  out << "CELLS " << values.size() / k << ' ' << components << '\n';
  for (std::size_t i = 0; i < values.size(); i += k) {
    for (std::size_t j = 0; j < k; ++j) out << (j ? " " : "") << fmt17(values[i + j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CellData read_cell_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  LineReader r(in);
  std::vector<std::string> tok;
  const std::string sec = "CELLS";
  if (!r.next(tok) || tok.size() != 3 || tok[0] != sec) throw ParseError(sec, r.line(), "expected 'CELLS <n> <components>'");
  const long n = parse_number<long>(tok[1], sec, r.line());
  const int k = parse_number<int>(tok[2], sec, r.line());
  if (n < 0 || k < 1) throw ParseError(sec, r.line(), "invalid header");
  CellData d{path.stem().string(), k, {}};
  d.values.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  for (long i = 0; i < n; ++i) {
    if (!r.next(tok)) throw ParseError(sec, r.line(), "expected " + std::to_string(n) + " rows, found " + std::to_string(i));
    if (tok.size() != static_cast<std::size_t>(k)) throw ParseError(sec, r.line(), "wrong number of components");
    for (const auto& t : tok) d.values.push_back(parse_number<double>(t, sec, r.line()));
  }
  return d;
}

}  // namespace ellcfd
