#include "ellcfd_tools/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ellcfd/cases.hpp"
#include "ellcfd/config.hpp"
#include "ellcfd/coupling.hpp"
#include "ellcfd/io.hpp"
#include "ellcfd/parallel.hpp"
#include "ellcfd_tools/profile_report.hpp"
#include "json.hpp"

namespace ellcfd::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void print_counts(const char* name, const MeshCounts& c) {
  std::printf("%s: %lld cells, %lld faces, %lld internal faces\n", name, static_cast<long long>(c.cells),
              static_cast<long long>(c.faces), static_cast<long long>(c.internal_faces));
}

void write_fields(const Mesh& mesh, const RunState& s, const fs::path& dir, const std::string& vtk_name) {
  const auto u = vector_data("U", s.u.cells());
  const auto p = scalar_data("p", s.p.cells());
  write_vtk(mesh, {u, p}, dir / vtk_name);
  write_cell_values(u.values, 3, dir / "U.txt");
  write_cell_values(p.values, 1, dir / "p.txt");
}

std::vector<std::string> columns_for(const std::string& field, int components) {
  if (components == 1) return {field};
  return {field + "x", field + "y", field + "z"};
}

}  // namespace

int cmd_gen(const GenOptions& o) {
  GeneratedCase g;
  if (o.case_name == "cavity") {
    require(o.n >= 1, "cavity needs --n >= 1");
    if (o.count_only) {
      print_counts("cavity", cavity_counts(o.n));
      return kExitOk;
    }
    g = cavity_case(o.n);
  } else if (o.case_name == "channel" || o.case_name == "skewed_duct") {
    require(o.nx >= 1 && o.ny >= 1, o.case_name + " needs --nx >= 1 and --ny >= 1");
    require(!o.length || *o.length > 0.0, "--length must be positive");
    require(!o.height || *o.height > 0.0, "--height must be positive");
    if (o.count_only) {
      print_counts(o.case_name.c_str(), channel_counts(o.nx, o.ny));
      return kExitOk;
    }
    const double length = o.length.value_or(0.16);
    const double height = o.height.value_or(0.02);
    if (o.case_name == "channel") {
      g = channel_case(o.nx, o.ny, length, height);
    } else {
      require(o.skew >= 0.0 && o.skew <= 45.0, "--skew must be in [0, 45] degrees");
      g = skewed_duct_case(o.nx, o.ny, o.skew, length, height);
    }
  } else {
    throw UsageError("unknown case '" + o.case_name + "' (expected cavity, channel or skewed_duct)");
  }
  require(!o.out_dir.empty(), "--out is required");
  fs::create_directories(o.out_dir);
  write_mesh(g.mesh, o.out_dir / g.config.mesh_file);
  write_config(g.config, o.out_dir / "case.ini");
  std::printf("wrote %s: %d cells, %d faces\n", o.out_dir.string().c_str(), g.mesh.n_cells(), g.mesh.n_faces());
  return kExitOk;
}

int cmd_run(const RunOptions& o) {
  CaseConfig cfg;
  try {
    cfg = read_config(o.case_dir / "case.ini");
    for (const auto& a : o.overrides) apply_override(cfg, a);
    if (o.max_outer) {
      require(*o.max_outer >= 0, "--max-outer must be non-negative");
      cfg.coupling.max_outer = *o.max_outer;
      cfg.coupling.end_time = 0.0;
    }
    if (o.record_stages) cfg.coupling.pressure_solver.record_stages = cfg.coupling.momentum_solver.record_stages = true;
    if (o.workers) {
      require(*o.workers >= 1, "--workers must be at least 1");
      cfg.workers = *o.workers;
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  set_worker_count(workers);

  const fs::path out_dir = o.out_dir.empty() ? o.case_dir / "output" : o.out_dir;
  fs::create_directories(out_dir);

  const Domain d = Domain::build(read_mesh(o.case_dir / cfg.mesh_file), cfg.k_cap);
  auto [u0, p0] = initial_fields(cfg, d.mesh);
  RunState s = make_state(std::move(u0), std::move(p0), d);
  Profiler prof;

  std::ofstream log(out_dir / "residuals.csv");
  if (!log) throw std::runtime_error("cannot write residual log in " + out_dir.string());
  log << residual_csv_header() << '\n';
  std::size_t logged = 0;
  auto flush_log = [&] {
    for (; logged < s.log.size(); ++logged) log << to_csv(s.log[logged]) << '\n';
    log.flush();
  };

  auto on_sweep = [&](const RunState& st, const SweepResiduals& r) {
    flush_log();
    if (!o.quiet)
      std::printf("%s %d t=%.6g momentum=%.3e pressure=%.3e continuity=%.3e bicgstab_iters=%d cg_iters=%d\n",
                  cfg.coupling.algorithm == Algorithm::simple ? "iter" : "step", st.outer, st.t, r.momentum,
                  r.pressure, r.continuity, r.momentum_iters, r.pressure_iters);
    if (cfg.write_interval > 0 && st.outer % cfg.write_interval == 0)
      write_vtk(d.mesh, {vector_data("U", st.u.cells()), scalar_data("p", st.p.cells())},
                out_dir / ("fields_" + std::to_string(st.outer) + ".vtk"));
  };

  RunResult result;
  std::string error;
  try {
    result = run_case(s, d, cfg.coupling, &prof, on_sweep);
  } catch (const std::exception& e) {
    error = e.what();
    flush_log();
  }

  write_fields(d.mesh, s, out_dir, "final.vtk");
  for (std::size_t k = 0; k < cfg.sample_lines.size(); ++k) {
    const auto& line = cfg.sample_lines[k];
    const bool vec = cfg.sample_field != "p";
    const auto data = vec ? vector_data("U", s.u.cells()) : scalar_data("p", s.p.cells());
    const auto r = sample_line(d.mesh, d.geom, data.values, data.components, line.p0, line.p1, line.n);
    std::ofstream out(out_dir / ("sample_" + std::to_string(k) + ".csv"));
    write_samples_csv(r, columns_for(vec ? "U" : "p", data.components), out);
  }

  const double wall = seconds_since(o.process_start);
  json report;
  report["case_dir"] = o.case_dir.string();
  report["algorithm"] = cfg.coupling.algorithm == Algorithm::simple ? "simple" : "piso";
  report["converged"] = error.empty() && result.converged;
  report["iterations"] = s.outer;
  report["time"] = s.t;
  report["wall_seconds"] = wall;
  report["workers"] = workers;
  report["cg_iterations"] = s.cg_iterations;
  report["bicgstab_iterations"] = s.bicgstab_iterations;
  report["momentum_residual"] = result.last.momentum;
  report["pressure_residual"] = result.last.pressure;
  report["continuity"] = continuity_error(s.flux, d);
  if (!error.empty()) report["error"] = error;
  write_text(out_dir / "report.json", report.dump(2) + "\n");

  ProfileData pd;
  pd.wall_seconds = wall;
  pd.workers = workers;
  pd.has_stages = cfg.coupling.pressure_solver.record_stages;
  for (const auto& [name, e] : prof.entries()) pd.timers[name] = e;
  pd.cg_stages = prof.cg_stages;
  write_text(out_dir / "profile.json", profile_to_json(pd) + "\n");

  std::printf("%s after %d %s, wall %.3f s, cg iterations %lld, bicgstab iterations %lld, workers %d\n",
              error.empty() ? (result.converged ? "converged" : "not converged") : "failed", s.outer,
              cfg.coupling.algorithm == Algorithm::simple ? "iterations" : "steps", wall, s.cg_iterations,
              s.bicgstab_iterations, workers);
  if (!error.empty()) {
    std::fprintf(stderr, "error: %s\n", error.c_str());
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_sample(const SampleOptions& o) {
  require(o.n >= 1, "--n must be at least 1");
  require(o.field == "U" || o.field == "p", "--field must be U or p");
  const fs::path run_dir = o.run_dir.empty() ? o.case_dir / "output" : o.run_dir;
  const CaseConfig cfg = read_config(o.case_dir / "case.ini");
  const Mesh mesh = read_mesh(o.case_dir / cfg.mesh_file);
  const MeshGeometry geom = compute_geometry(mesh);
  const CellData data = read_cell_values(run_dir / (o.field + ".txt"));
  if (data.values.size() != static_cast<std::size_t>(mesh.n_cells()) * static_cast<std::size_t>(data.components))
    throw std::runtime_error("field file does not match the mesh");
  const auto r = sample_line(mesh, geom, data.values, data.components, {o.from[0], o.from[1], o.from[2]},
                             {o.to[0], o.to[1], o.to[2]}, o.n);
  const auto cols = columns_for(o.field, data.components);
  if (o.out.empty()) {
    write_samples_csv(r, cols, std::cout);
  } else {
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot write " + o.out.string());
    write_samples_csv(r, cols, out);
  }
  if (r.outside) {
    std::fprintf(stderr, "error: the segment does not intersect the mesh\n");
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_profile_report(const fs::path& run_dir, bool as_json) {
  const fs::path file = run_dir / "profile.json";
  if (!fs::exists(file)) throw std::runtime_error("missing stage data: " + file.string() + " not found");
  const ProfileReport r = make_profile_report(profile_from_json(read_text(file)));
  std::fputs((as_json ? report_to_json(r) + "\n" : format_report(r)).c_str(), stdout);
  return kExitOk;
}

}  // namespace ellcfd::tools
