#pragma once

// Case configuration: an INI file with sections
//
//   [case]      kind, mesh, u_lid, inlet, u0, frequency, inlet_velocity,
//               mass_flow, k_cap, workers
//   [physics]   nu, rho
//   [scheme]    convection, nonorth_correction, limiter
//   [solvers]   cg_tol, bicgstab_tol, max_iters, record_stages
//   [coupling]  algorithm, alpha_u, alpha_p, n_correctors,
//               n_nonorth_correctors, dt, end_time, outer_tol, max_outer,
//               steady_tol
//   [io]        write_interval, sample_field, sample_lines
//
// Unknown sections and keys are rejected. sample_lines holds
// "x0 y0 z0 x1 y1 z1 n" groups separated by ';'.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ellcfd/coupling.hpp"

namespace ellcfd {

enum class CaseKind { cavity, channel, skewed_duct };
enum class InletKind { timed, fixed, mass_flow };

struct SampleLineSpec {
  Vec3 p0;
  Vec3 p1;
  int n = 0;
};

struct CaseConfig {
  CaseKind kind = CaseKind::cavity;
  std::string mesh_file = "mesh.txt";
  double u_lid = 1.0;            ///< m/s, cavity lid speed along +x
  InletKind inlet = InletKind::timed;
  double u0 = 0.01;              ///< timed inlet amplitude, m/s
  double frequency = 0.5;        ///< timed inlet frequency, Hz
  double inlet_velocity = 0.01;  ///< fixed inlet speed, m/s
  double mass_flow = 0.0;        ///< kg/s
  Index k_cap = 7;
  int workers = 0;               ///< 0: available parallelism

  double rho = 1000.0;
  CouplingConfig coupling;  ///< holds nu, scheme and solver settings

  int write_interval = 0;   ///< snapshot every n sweeps; 0 writes only the final state
  std::string sample_field = "U";
  std::vector<SampleLineSpec> sample_lines;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CaseConfig parse_config(std::istream& in);
CaseConfig read_config(const std::filesystem::path& path);
void write_config(const CaseConfig& cfg, std::ostream& out);
void write_config(const CaseConfig& cfg, const std::filesystem::path& path);

/// Applies one "section.key=value" override.
void apply_override(CaseConfig& cfg, const std::string& assignment);

std::string_view to_string(CaseKind k);
std::string_view to_string(InletKind k);

}  // namespace ellcfd
