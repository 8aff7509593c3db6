#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellcfd/profiler.hpp"

namespace ellcfd::tools {

/// Bad arguments; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct GenOptions {
  std::string case_name;  ///< cavity, channel or skewed_duct
  int n = 0;
  int nx = 0;
  int ny = 0;
  std::optional<double> length;
  std::optional<double> height;
  double skew = 0.0;
  bool count_only = false;
  std::filesystem::path out_dir;
};

/// Writes <out_dir>/mesh.txt and <out_dir>/case.ini (or only prints counts).
int cmd_gen(const GenOptions& o);

struct RunOptions {
  std::filesystem::path case_dir;
  std::filesystem::path out_dir;  ///< default <case_dir>/output
  std::vector<std::string> overrides;
  std::optional<int> max_outer;
  std::optional<int> workers;
  bool record_stages = false;
  bool quiet = false;
  Clock::time_point process_start = Clock::now();
};

/// Runs the case and writes residuals.csv, report.json, profile.json,
/// U.txt, p.txt, final.vtk, snapshots and sample CSVs to out_dir.
int cmd_run(const RunOptions& o);

struct SampleOptions {
  std::filesystem::path case_dir;
  std::filesystem::path run_dir;  ///< default <case_dir>/output
  std::string field = "U";
  double from[3] = {0, 0, 0};
  double to[3] = {0, 0, 0};
  int n = 0;
  std::filesystem::path out;  ///< empty: stdout
};

int cmd_sample(const SampleOptions& o);

int cmd_profile_report(const std::filesystem::path& run_dir, bool json);

}  // namespace ellcfd::tools
