#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "ellcfd_tools/commands.hpp"

namespace {
// Time to solution counts from here, before any disk access.
const auto kProcessStart = ellcfd::Clock::now();
}  // namespace

int main(int argc, char** argv) {
  using namespace ellcfd::tools;
  CLI::App app{"Finite-volume incompressible flow solver on hybrid ELL/CRS matrices"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate a mesh and case preset");
  g->add_option("case", gen.case_name, "cavity, channel or skewed_duct")->required();
  g->add_option("--n", gen.n, "cells per edge (cavity)");
  g->add_option("--nx", gen.nx, "cells along the channel");
  g->add_option("--ny", gen.ny, "cells across the channel");
  g->add_option("--length", gen.length, "channel length, m");
  g->add_option("--height", gen.height, "channel height, m");
  g->add_option("--skew", gen.skew, "shear angle in degrees (skewed_duct)");
  g->add_flag("--count-only", gen.count_only, "print cell and face counts without building the mesh");
  g->add_option("--out,-o", gen.out_dir, "output directory");

  RunOptions run;
  run.process_start = kProcessStart;
  auto* r = app.add_subcommand("run", "run a case directory");
  r->add_option("case_dir", run.case_dir)->required()->check(CLI::ExistingDirectory);
  r->add_option("--out,-o", run.out_dir, "output directory (default <case_dir>/output)");
  r->add_option("--set", run.overrides, "override a config key: section.key=value");
  r->add_option("--max-outer", run.max_outer, "SIMPLE iterations or PISO steps");
  r->add_option("--workers", run.workers, "worker threads (default: available parallelism)");
  r->add_flag("--record-stages", run.record_stages, "time the solver stages for profile-report");
  r->add_flag("--quiet,-q", run.quiet, "no per-iteration progress lines");

  SampleOptions smp;
  std::vector<double> from, to;
  auto* s = app.add_subcommand("sample", "sample a field along a segment");
  s->add_option("case_dir", smp.case_dir)->required()->check(CLI::ExistingDirectory);
  s->add_option("--run", smp.run_dir, "run output directory (default <case_dir>/output)");
  s->add_option("--field", smp.field, "U or p");
  s->add_option("--from", from, "start point x y z")->expected(3)->required();
  s->add_option("--to", to, "end point x y z")->expected(3)->required();
  s->add_option("--n", smp.n, "number of samples")->required();
  s->add_option("--out,-o", smp.out, "CSV file (default stdout)");

  std::string report_dir;
  bool report_json = false;
  auto* p = app.add_subcommand("profile-report", "time breakdown of a run recorded with --record-stages");
  p->add_option("run_dir", report_dir)->required();
  p->add_flag("--json", report_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*r) return cmd_run(run);
    if (*s) {
      std::copy(from.begin(), from.end(), smp.from);
      std::copy(to.begin(), to.end(), smp.to);
      return cmd_sample(smp);
    }
    if (*p) return cmd_profile_report(report_dir, report_json);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
