#include "ellcfd_tools/profile_report.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace ellcfd::tools {

using nlohmann::json;

namespace {

constexpr const char* kAssemblyPrefix = "assembly.";

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

double timer(const ProfileData& p, const std::string& name) {
  auto it = p.timers.find(name);
  return it == p.timers.end() ? 0.0 : it->second.seconds;
}

}  // namespace

ProfileReport make_profile_report(const ProfileData& p) {
  const auto smvp = static_cast<std::size_t>(Stage::smvp);
  if (!p.has_stages || p.cg_stages.calls[smvp] == 0)
    throw std::runtime_error("profile has no CG stage data; rerun with --record-stages");
  if (!(p.wall_seconds > 0.0)) throw std::runtime_error("profile has no wall time");

  ProfileReport r;
  const double cg = timer(p, "solve.cg");
  const double bicg = timer(p, "solve.bicgstab");
  double assembly = 0.0;
  for (const auto& [name, e] : p.timers)
    if (starts_with(name, kAssemblyPrefix)) assembly += e.seconds;
  const double total = std::max(p.wall_seconds, cg + bicg + assembly);
  const double other = total - cg - bicg - assembly;
  r.solver_share = {{"CG", 100.0 * cg / total},
                    {"BiCGStab", 100.0 * bicg / total},
                    {"assembly", 100.0 * assembly / total},
                    {"other", 100.0 * other / total}};

  const double stage_total = p.cg_stages.total();
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    r.cg_breakdown.emplace_back(i == smvp ? "SMVP" : std::string(kStageNames[i]),
                                stage_total > 0.0 ? 100.0 * p.cg_stages.seconds[i] / stage_total : 0.0);

  r.smvp_seconds_per_call = p.cg_stages.seconds[smvp] / static_cast<double>(p.cg_stages.calls[smvp]);
  for (const auto& [name, e] : p.timers) {
    if (!starts_with(name, kAssemblyPrefix) || e.calls == 0) continue;
    const double per_call = e.seconds / static_cast<double>(e.calls);
    r.normalized_operators.emplace_back(name.substr(std::char_traits<char>::length(kAssemblyPrefix)),
                                        r.smvp_seconds_per_call > 0.0 ? per_call / r.smvp_seconds_per_call : 0.0);
  }
  return r;
}

ProfileData profile_from_json(const std::string& text) {
  const json j = json::parse(text);
  ProfileData p;
  p.wall_seconds = j.at("wall_seconds").get<double>();
  p.workers = j.value("workers", 1);
  for (const auto& [name, e] : j.at("timers").items())
    p.timers[name] = {e.at("seconds").get<double>(), e.at("calls").get<std::uint64_t>()};
  p.has_stages = j.value("record_stages", false);
  if (j.contains("cg_stages")) {
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
      const auto& s = j.at("cg_stages").at(std::string(kStageNames[i]));
      p.cg_stages.seconds[i] = s.at("seconds").get<double>();
      p.cg_stages.calls[i] = s.at("calls").get<std::uint64_t>();
    }
  }
  return p;
}

std::string profile_to_json(const ProfileData& p) {
  json j;
  j["wall_seconds"] = p.wall_seconds;
  j["workers"] = p.workers;
  j["record_stages"] = p.has_stages;
  j["timers"] = json::object();
  for (const auto& [name, e] : p.timers) j["timers"][name] = {{"seconds", e.seconds}, {"calls", e.calls}};
  j["cg_stages"] = json::object();
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    j["cg_stages"][std::string(kStageNames[i])] = {{"seconds", p.cg_stages.seconds[i]},
                                                   {"calls", p.cg_stages.calls[i]}};
  return j.dump(2);
}

std::string format_report(const ProfileReport& r) {
  std::string out;
  char line[128];
  auto table = [&](const char* title, const std::vector<std::pair<std::string, double>>& rows, const char* unit) {
    out += title;
    out += '\n';
    for (const auto& [name, v] : rows) {
      std::snprintf(line, sizeof line, "  %-12s %10.3f%s\n", name.c_str(), v, unit);
      out += line;
    }
  };
  table("(a) share of total run time", r.solver_share, " %");
  table("(b) Jacobi-CG breakdown", r.cg_breakdown, " %");
  std::snprintf(line, sizeof line, "(c) assembly operators, time per call / SMVP time per call (SMVP = %.3e s)\n",
                r.smvp_seconds_per_call);
  out += line;
  for (const auto& [name, v] : r.normalized_operators) {
    std::snprintf(line, sizeof line, "  %-12s %10.2f\n", name.c_str(), v);
    out += line;
  }
  return out;
}

std::string report_to_json(const ProfileReport& r) {
  json j;
  auto rows = [](const std::vector<std::pair<std::string, double>>& v) {
    json a = json::array();
    for (const auto& [name, x] : v) a.push_back({{"name", name}, {"value", x}});
    return a;
  };
  j["solver_share"] = rows(r.solver_share);
  j["cg_breakdown"] = rows(r.cg_breakdown);
  j["normalized_operators"] = rows(r.normalized_operators);
  j["smvp_seconds_per_call"] = r.smvp_seconds_per_call;
  return j.dump(2);
}

}  // namespace ellcfd::tools
