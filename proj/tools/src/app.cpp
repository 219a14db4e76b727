#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "qlvar/error.hpp"
#include "qlvar_cli/run.hpp"

namespace qlvar::cli {

namespace {

struct Flags {
  std::string scenario;
  std::optional<double> mass;
  std::optional<int> samples;
  std::string grid;
  std::optional<double> dt;
  std::optional<double> tol;
  std::string out;
  std::string format;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--scenario", f.scenario, "Scenario file (TOML)");
  sub->add_option("--mass", f.mass, "Mass of the reference static space");
  sub->add_option("--samples", f.samples, "Random points for check-static");
  sub->add_option("--grid", f.grid, "Grid as NTHETAxNPHI");
  sub->add_option("--dt", f.dt, "Time step");
  sub->add_option("--tol", f.tol, "Isometry / equality tolerance");
  sub->add_option("--out", f.out, "Directory for report files");
  sub->add_option("--format", f.format, "Report format on stdout")->check(CLI::IsMember({"csv", "json-text"}));
}

Scenario effective_scenario(const Flags& f, Operation op) {
  Scenario s = f.scenario.empty() ? Scenario{} : load_scenario(f.scenario);
  if (s.operation && *s.operation != op)
    fail(ErrorCode::SchemaError, "scenario '" + s.name + "' is for '" + std::string(to_string(*s.operation)) +
                                     "', not '" + std::string(to_string(op)) + "'");
  if (f.mass) {
    if (*f.mass < 0.0) fail(ErrorCode::SchemaError, "--mass must be nonnegative");
    s.reference.mass = *f.mass;
  }
  if (f.samples) {
    if (*f.samples <= 0) fail(ErrorCode::SchemaError, "--samples must be positive");
    s.samples = *f.samples;
  }
  if (!f.grid.empty()) parse_grid(f.grid, s.n_theta, s.n_phi);
  if (f.dt) {
    if (!(*f.dt > 0.0)) fail(ErrorCode::SchemaError, "--dt must be positive");
    s.dt = *f.dt;
  }
  if (f.tol) {
    if (!(*f.tol > 0.0)) fail(ErrorCode::SchemaError, "--tol must be positive");
    s.tol = *f.tol;
  }
  if (!f.out.empty()) s.out_dir = f.out;
  if (!f.format.empty()) s.format = f.format;
  s.operation = op;
  return s;
}

void emit(std::ostream& os, const RunReport& r, const std::string& format) {
  if (format == "csv") {
    write_results_csv(os, r);
    if (r.convergence) {
      os << '\n';
      write_convergence_csv(os, *r.convergence);
    }
  } else {
    write_json(os, r);
  }
}

void write_outputs(const Scenario& s, const RunReport& r, double wall_seconds) {
  const std::filesystem::path dir(s.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "report.json");
    write_json(f, r);
  }
  {
    std::ofstream f(dir / "results.csv");
    write_results_csv(f, r);
  }
  if (r.convergence) {
    std::ofstream f(dir / "convergence.csv");
    write_convergence_csv(f, *r.convergence);
  }
  // kept apart from the report so that reports stay bit-identical across runs
  std::ofstream f(dir / "timing.json");
  f << nlohmann::ordered_json{{"operation", r.operation}, {"wall_time_s", wall_seconds}}.dump(2) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-local energy variations in static spaces", "qlvar"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<Operation, const char*> commands[] = {
      {Operation::CheckStatic, "Static equation residual at random points"},
      {Operation::Geom, "Geometry of the physical surface"},
      {Operation::Embed, "Embed the physical surface metric into the reference space"},
      {Operation::Energy, "Static Wang-Yau / Brown-York energy"},
      {Operation::Penrose, "Localized Penrose functional"},
      {Operation::Variation, "Energy derivative against the evolution formula"},
      {Operation::Sweep, "Convergence sweep over a resolution ladder"},
  };
  for (const auto& [op, help] : commands) add_flags(app.add_subcommand(std::string(to_string(op)), help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto op = *parse_operation(app.get_subcommands().front()->get_name());
    const Scenario s = effective_scenario(flags, op);
    const auto start = std::chrono::steady_clock::now();
    const RunReport report = run(s, op, options_from_environment());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(out, report, s.format);
    if (!s.out_dir.empty()) write_outputs(s, report, wall);
    for (const auto& w : report.warnings) err << "qlvar: warning: " << w << '\n';
    err << "qlvar: wall time " << wall << " s\n";
    return exit_code(report);
  } catch (const std::exception& e) {
    err << "qlvar: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qlvar::cli
