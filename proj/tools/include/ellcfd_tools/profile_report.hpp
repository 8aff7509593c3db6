#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ellcfd/profiler.hpp"

namespace ellcfd::tools {

struct ProfileData {
  double wall_seconds = 0.0;
  int workers = 1;
  std::map<std::string, Profiler::Entry> timers;
  StageTimes cg_stages;
  bool has_stages = false;
};

struct ProfileReport {
  /// CG, BiCGStab, assembly, other as percentages of total run time.
  std::vector<std::pair<std::string, double>> solver_share;
  /// SMVP, daxpy, dot, reduction, precond, other as percentages of CG time.
  std::vector<std::pair<std::string, double>> cg_breakdown;
  /// Mean time per call of each assembly operator divided by the mean SMVP time.
  std::vector<std::pair<std::string, double>> normalized_operators;
  double smvp_seconds_per_call = 0.0;
};

/// Throws std::runtime_error when stage data is missing.
ProfileReport make_profile_report(const ProfileData& p);

ProfileData profile_from_json(const std::string& text);
std::string profile_to_json(const ProfileData& p);

std::string format_report(const ProfileReport& r);
std::string report_to_json(const ProfileReport& r);

}  // namespace ellcfd::tools
