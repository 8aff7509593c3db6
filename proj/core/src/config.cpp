#include "ellcfd/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace ellcfd {

std::string_view to_string(CaseKind k) {
  switch (k) {
    case CaseKind::cavity: return "cavity";
    case CaseKind::channel: return "channel";
    case CaseKind::skewed_duct: return "skewed_duct";
  }
  return "?";
}

std::string_view to_string(InletKind k) {
  switch (k) {
    case InletKind::timed: return "timed";
    case InletKind::fixed: return "fixed";
    case InletKind::mass_flow: return "mass_flow";
  }
  return "?";
}

void CaseConfig::validate() const {
  coupling.validate();
  if (!(rho > 0.0)) throw ConfigError("physics.rho must be positive");
  if (k_cap < 1) throw ConfigError("case.k_cap must be at least 1");
  if (workers < 0) throw ConfigError("case.workers must be non-negative");
  if (write_interval < 0) throw ConfigError("io.write_interval must be non-negative");
  if (!(frequency >= 0.0)) throw ConfigError("case.frequency must be non-negative");
  for (const auto& s : sample_lines)
    if (s.n < 1) throw ConfigError("io.sample_lines needs a positive sample count");
}

namespace {

// Shortest representation that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

std::vector<SampleLineSpec> parse_lines(const std::string& key, const std::string& s) {
  std::vector<SampleLineSpec> out;
  std::stringstream groups(s);
  for (std::string g; std::getline(groups, g, ';');) {
    std::istringstream ss(g);
    std::vector<std::string> t;
    for (std::string w; ss >> w;) t.push_back(w);
    if (t.empty()) continue;
    if (t.size() != 7) throw ConfigError(key + ": each line needs 'x0 y0 z0 x1 y1 z1 n'");
    out.push_back({{to_double(key, t[0]), to_double(key, t[1]), to_double(key, t[2])},
                   {to_double(key, t[3]), to_double(key, t[4]), to_double(key, t[5])},
                   to_int(key, t[6])});
  }
  return out;
}

std::string format_lines(const std::vector<SampleLineSpec>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += fmt(l.p0.x) + " " + fmt(l.p0.y) + " " + fmt(l.p0.z) + " " + fmt(l.p1.x) + " " + fmt(l.p1.y) + " " +
           fmt(l.p1.z) + " " + std::to_string(l.n);
  }
  return out;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(CaseConfig&, const std::string&)> set;
  std::function<std::string(const CaseConfig&)> get;
};

#define ELLCFD_DOUBLE(sec, key, member)                                                                   \
  Key{sec, key, [](CaseConfig& c, const std::string& v) { c.member = to_double(sec "." key, v); }, \
      [](const CaseConfig& c) { return fmt(c.member); }}
#define ELLCFD_INT(sec, key, member)                                                                   \
  Key{sec, key, [](CaseConfig& c, const std::string& v) { c.member = to_int(sec "." key, v); }, \
      [](const CaseConfig& c) { return std::to_string(c.member); }}
#define ELLCFD_BOOL(sec, key, member)                                                                   \
  Key{sec, key, [](CaseConfig& c, const std::string& v) { c.member = to_bool(sec "." key, v); }, \
      [](const CaseConfig& c) { return std::string(c.member ? "true" : "false"); }}

std::string_view to_string(ConvectionScheme s) { return s == ConvectionScheme::upwind ? "upwind" : "linear"; }
std::string_view to_string(Algorithm a) { return a == Algorithm::simple ? "simple" : "piso"; }

template <class E, std::size_t N>
E parse_enum(const std::string& key, const std::string& v, const std::array<E, N>& values) {
  for (E e : values)
    if (to_string(e) == v) return e;
  throw ConfigError(key + ": unknown value '" + v + "'");
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      Key{"case", "kind",
          [](CaseConfig& c, const std::string& v) {
            c.kind = parse_enum("case.kind", v,
                                std::array{CaseKind::cavity, CaseKind::channel, CaseKind::skewed_duct});
          },
          [](const CaseConfig& c) { return std::string(to_string(c.kind)); }},
      Key{"case", "mesh", [](CaseConfig& c, const std::string& v) { c.mesh_file = v; },
          [](const CaseConfig& c) { return c.mesh_file; }},
      ELLCFD_DOUBLE("case", "u_lid", u_lid),
      Key{"case", "inlet",
          [](CaseConfig& c, const std::string& v) {
            c.inlet = parse_enum("case.inlet", v, std::array{InletKind::timed, InletKind::fixed, InletKind::mass_flow});
          },
          [](const CaseConfig& c) { return std::string(to_string(c.inlet)); }},
      ELLCFD_DOUBLE("case", "u0", u0),
      ELLCFD_DOUBLE("case", "frequency", frequency),
      ELLCFD_DOUBLE("case", "inlet_velocity", inlet_velocity),
      ELLCFD_DOUBLE("case", "mass_flow", mass_flow),
      ELLCFD_INT("case", "k_cap", k_cap),
      ELLCFD_INT("case", "workers", workers),
      ELLCFD_DOUBLE("physics", "nu", coupling.nu),
      ELLCFD_DOUBLE("physics", "rho", rho),
      Key{"scheme", "convection",
          [](CaseConfig& c, const std::string& v) {
            c.coupling.scheme.convection =
                parse_enum("scheme.convection", v, std::array{ConvectionScheme::upwind, ConvectionScheme::linear});
          },
          [](const CaseConfig& c) { return std::string(to_string(c.coupling.scheme.convection)); }},
      ELLCFD_BOOL("scheme", "nonorth_correction", coupling.scheme.nonorth_correction),
      ELLCFD_DOUBLE("scheme", "limiter", coupling.scheme.limiter),
      ELLCFD_DOUBLE("solvers", "cg_tol", coupling.pressure_solver.tolerance),
      ELLCFD_DOUBLE("solvers", "bicgstab_tol", coupling.momentum_solver.tolerance),
      Key{"solvers", "max_iters",
          [](CaseConfig& c, const std::string& v) {
            c.coupling.pressure_solver.max_iters = c.coupling.momentum_solver.max_iters =
                to_int("solvers.max_iters", v);
          },
          [](const CaseConfig& c) { return std::to_string(c.coupling.pressure_solver.max_iters); }},
      Key{"solvers", "record_stages",
          [](CaseConfig& c, const std::string& v) {
            c.coupling.pressure_solver.record_stages = c.coupling.momentum_solver.record_stages =
                to_bool("solvers.record_stages", v);
          },
          [](const CaseConfig& c) { return std::string(c.coupling.pressure_solver.record_stages ? "true" : "false"); }},
      Key{"coupling", "algorithm",
          [](CaseConfig& c, const std::string& v) {
            c.coupling.algorithm = parse_enum("coupling.algorithm", v, std::array{Algorithm::simple, Algorithm::piso});
          },
          [](const CaseConfig& c) { return std::string(to_string(c.coupling.algorithm)); }},
      ELLCFD_DOUBLE("coupling", "alpha_u", coupling.alpha_u),
      ELLCFD_DOUBLE("coupling", "alpha_p", coupling.alpha_p),
      ELLCFD_INT("coupling", "n_correctors", coupling.n_correctors),
      ELLCFD_INT("coupling", "n_nonorth_correctors", coupling.n_nonorth_correctors),
      ELLCFD_DOUBLE("coupling", "dt", coupling.dt),
      ELLCFD_DOUBLE("coupling", "end_time", coupling.end_time),
      ELLCFD_DOUBLE("coupling", "outer_tol", coupling.outer_tol),
      ELLCFD_INT("coupling", "max_outer", coupling.max_outer),
      ELLCFD_DOUBLE("coupling", "steady_tol", coupling.steady_tol),
      ELLCFD_INT("io", "write_interval", write_interval),
      Key{"io", "sample_field", [](CaseConfig& c, const std::string& v) { c.sample_field = v; },
          [](const CaseConfig& c) { return c.sample_field; }},
      Key{"io", "sample_lines",
          [](CaseConfig& c, const std::string& v) { c.sample_lines = parse_lines("io.sample_lines", v); },
          [](const CaseConfig& c) { return format_lines(c.sample_lines); }},
  };
  return k;
}

#undef ELLCFD_DOUBLE
#undef ELLCFD_INT
#undef ELLCFD_BOOL

const Key* find_key(const std::string& section, const std::string& name) {
  for (const Key& k : keys())
    if (section == k.section && name == k.name) return &k;
  return nullptr;
}

void check_tolerances(const CaseConfig& c) {
  if (!(c.coupling.pressure_solver.tolerance > 0.0)) throw ConfigError("solvers.cg_tol must be positive");
  if (!(c.coupling.momentum_solver.tolerance > 0.0)) throw ConfigError("solvers.bicgstab_tol must be positive");
  if (!(c.coupling.outer_tol > 0.0)) throw ConfigError("coupling.outer_tol must be positive");
}

}  // namespace

CaseConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  CaseConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [name, value] : body) {
      const Key* k = find_key(section, name);
      if (!k) throw ConfigError("config: unknown key '" + section + "." + name + "'");
      k->set(cfg, value.data());
    }
  }
  check_tolerances(cfg);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

CaseConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(const CaseConfig& cfg, std::ostream& out) {
  std::string section;
  for (const Key& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
}

void write_config(const CaseConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_config(cfg, out);
}

void apply_override(CaseConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  const std::string section = assignment.substr(0, dot);
  const std::string name = assignment.substr(dot + 1, eq - dot - 1);
  const Key* k = find_key(section, name);
  if (!k) throw ConfigError("unknown key '" + section + "." + name + "'");
  k->set(cfg, assignment.substr(eq + 1));
  check_tolerances(cfg);
}

}  // namespace ellcfd
