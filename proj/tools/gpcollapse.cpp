// gpcollapse: command-line driver for the profile, single-solve, ladder-scan
// and invariant-suite workflows.
//
// Exit status: 0 success, 1 invalid input or configuration, 2 a solve that
// did not converge (artifacts are still written).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gpcollapse/asymptotics.hpp"
#include "gpcollapse/checks.hpp"
#include "gpcollapse/field_io.hpp"
#include "gpcollapse/schema.hpp"
#include "gpcollapse/serialize.hpp"

namespace fs = std::filesystem;
using namespace gpcollapse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct ProfileArgs {
  double r_max = 20.0;
  double tol = 1e-12;
  double s = 2.0;
  double c0 = 1.0;
};

struct PhysicsArgs {
  double omega = 0.0;
  double s = 2.0;
  double c0 = 1.0;
};

struct SolveArgs {
  int n = 256;
  std::optional<double> extent;
  int max_iters = 20000;
  double residual_tol = 1e-6;
  double step0 = 1.0;
  int history_stride = 1;
};

struct MinimizeArgs {
  PhysicsArgs phys;
  SolveArgs solve;
  std::optional<double> gap;
  std::optional<double> a;
  std::string scale = "blowup";
  std::string init = "gaussian";
  bool field_csv = false;
};

struct ScanArgs {
  std::vector<double> omegas{0.0};
  double s = 2.0;
  double c0 = 1.0;
  SolveArgs solve;
  std::vector<double> ladder;
  double gap_max = 0.2;
  double gap_min = 0.01;
  int rungs = 6;
};

struct CheckArgs {
  std::uint64_t seed = CheckOptions{}.seed;
  int trials = CheckOptions{}.trials;
  std::optional<double> a_star;
};

/// Thrown for user-facing configuration problems (exit 1).
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw InvalidInput("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

void add_solve_options(CLI::App* cmd, SolveArgs& s) {
  cmd->add_option("--n", s.n, "grid points per axis (power of two)")->capture_default_str();
  cmd->add_option("--extent", s.extent, "box half-width in the solve's units");
  cmd->add_option("--max-iters", s.max_iters)->capture_default_str();
  cmd->add_option("--residual-tol", s.residual_tol, "stop when ||P grad|| falls below this")->capture_default_str();
  cmd->add_option("--step0", s.step0)->capture_default_str();
  cmd->add_option("--history-stride", s.history_stride)->capture_default_str();
}

SolveConfig make_solve_config(const SolveArgs& s, double default_extent) {
  SolveConfig cfg;
  cfg.n = s.n;
  cfg.extent = s.extent.value_or(default_extent);
  cfg.max_iters = s.max_iters;
  cfg.residual_tol = s.residual_tol;
  cfg.step0 = s.step0;
  cfg.history_stride = s.history_stride;
  cfg.validate();
  // The grid constructor holds the remaining checks (power of two, n >= 8).
  SpectralGrid check(cfg.n, cfg.extent);
  return cfg;
}

int cmd_profile(const ProfileArgs& args, const fs::path& out) {
  RadialProfile q = [&] {
    try {
      return solve_profile(args.r_max, args.tol);
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(e.what());
    }
  }();
  const GNConstants k = compute_constants(q, args.s, args.c0);
  write_file(q, out / "profile.csv", write_profile_csv);
  ordered_json j = with_schema("constants", to_json(k));
  j["q0"] = q.q0();
  j["r_max"] = q.r_max();
  j["max_residual"] = q.max_residual();
  write_json(j, out / "constants.json");
  std::cout << "a_star       " << format_double(k.a_star) << '\n'
            << "lambda_star  " << format_double(k.lambda_star) << '\n'
            << "lambda_tilde " << format_double(k.lambda_tilde) << "  (s=" << format_double(k.s)
            << ", c0=" << format_double(k.c0) << ")\n";
  return kExitOk;
}

// The blow-up energy is positive in the continuum; a negative value means
// the solve has collapsed onto the grid spacing.
void warn_unresolved() {
  std::cerr << "warning: negative blow-up energy; the grid does not resolve the profile (raise --n or lower --extent)\n";
}

int cmd_minimize(const MinimizeArgs& args, const fs::path& out) {
  const RadialProfile q = solve_profile();
  const double a_star = q.mass();

  GPParams p;
  p.omega = args.phys.omega;
  p.s = args.phys.s;
  p.c0 = args.phys.c0;
  p.a_star = a_star;
  p.scale = args.scale == "physical" ? Scale::physical : Scale::blowup;
  if (args.a && args.gap) throw InvalidInput("give either --a or --gap, not both");
  p.a = args.a ? *args.a : a_star - args.gap.value_or(0.05);
  p.validate();

  const double default_extent = p.scale == Scale::blowup ? 12.0 : 12.0 * p.length_scale();
  SolveConfig cfg = make_solve_config(args.solve, default_extent);
  cfg.init = args.init == "profile" ? InitKind::profile : InitKind::gaussian;

  const SolveReport rep = minimize(p, cfg, q);

  ordered_json j = with_schema("solve_report", ordered_json{{"params", to_json(p)}});
  j["init"] = args.init;
  const ordered_json body = to_json(rep);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  write_json(j, out / "report.json");
  write_field_binary(rep.field, out / "field.bin");
  if (args.field_csv) write_field_csv(rep.field, out / "field.csv");
  write_file(rep.history, out / "history.csv", write_history_csv);

  if (p.scale == Scale::blowup && rep.breakdown.total < 0.0) warn_unresolved();
  std::cout << rep.status << ": iters=" << rep.iters << " residual=" << format_double(rep.residual)
            << " energy=" << format_double(rep.energy_physical) << " mu=" << format_double(rep.mu) << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

void write_scan_artifacts(const ScanResult& scan, const fs::path& out, const std::string& stem) {
  write_file(scan, out / (stem + ".csv"), write_scan_csv);
  write_json(with_schema("scan", to_json(scan)), out / (stem + ".json"));
  write_file(scan, out / (stem + "_plot.csv"), write_plot_data);
}

void print_scan(const ScanResult& scan) {
  std::printf("omega=%g  s=%g\n", scan.base.omega, scan.base.s);
  std::printf("%12s %14s %14s %10s %6s %s\n", "gap", "E", "F/eps^2", "dist", "iters", "conv");
  for (const auto& r : scan.rows) {
    std::printf("%12.6g %14.8g %14.8g %10.4g %6d %s\n", r.gap, r.energy_physical, r.F_over_eps2, r.distance_to_QN,
                r.iters, r.converged ? "yes" : "NO");
  }
  if (scan.fitted) {
    std::printf("fit: exponent %.6f (target %.6f)  constant %.6f (target %.6f)\n", scan.fitted_exponent,
                scan.target_exponent, scan.fitted_constant, scan.target_constant);
  } else {
    std::printf("fit: not enough converged rungs\n");
  }
  for (const auto& r : scan.rows) {
    if (r.F < 0.0) {
      warn_unresolved();
      break;
    }
  }
}

int cmd_scan(const ScanArgs& args, const fs::path& out, int jobs) {
  std::vector<double> gaps = args.ladder;
  if (gaps.empty()) {
    if (args.rungs < kMinFitRows) throw InvalidInput("need >= 4 rungs (got " + std::to_string(args.rungs) + ")");
    gaps = geometric_gaps(args.gap_max, args.gap_min, args.rungs);
  }
  if (static_cast<int>(gaps.size()) < kMinFitRows) {
    throw InvalidInput("need >= 4 rungs (got " + std::to_string(gaps.size()) + ")");
  }
  if (args.omegas.empty()) throw InvalidInput("no rotation values given");

  const RadialProfile q = solve_profile();
  GPParams base;
  base.a_star = q.mass();
  base.s = args.s;
  base.c0 = args.c0;
  for (double g : gaps) {
    if (!(g > 0.0) || !(g < base.a_star)) throw InvalidInput("ladder gaps must lie in (0, a_star)");
  }
  for (double w : args.omegas) {
    GPParams probe = base;
    probe.omega = w;
    probe.a = base.a_star - gaps.front();
    probe.validate();
  }
  const SolveConfig cfg = make_solve_config(args.solve, 12.0);
  const std::vector<double> ladder = ladder_from_gaps(base.a_star, gaps);

  bool converged = true;
  if (args.omegas.size() == 1) {
    base.omega = args.omegas.front();
    const ScanResult scan = collapse_scan(base, ladder, cfg, q);
    write_scan_artifacts(scan, out, "scan");
    print_scan(scan);
    converged = scan.all_converged();
  } else {
    const RotationSweep sweep = rotation_sweep(base, args.omegas, ladder, cfg, q, jobs);
    ordered_json j = with_schema("rotation_sweep", ordered_json::object());
    j["omegas"] = sweep.omegas;
    j["sandwich_holds"] = sweep.sandwich_holds;
    j["spread"] = sweep.spread;
    ordered_json sandwich = ordered_json::array();
    for (const auto& per_omega : sweep.sandwich) {
      ordered_json rows = ordered_json::array();
      for (const auto& s : per_omega) rows.push_back(to_json(s));
      sandwich.push_back(rows);
    }
    j["sandwich"] = sandwich;
    for (std::size_t k = 0; k < sweep.scans.size(); ++k) {
      write_scan_artifacts(sweep.scans[k], out, "scan_omega" + std::to_string(k));
      print_scan(sweep.scans[k]);
      converged = converged && sweep.scans[k].all_converged();
    }
    write_json(j, out / "sweep.json");
    std::printf("sandwich bounds %s\n", sweep.sandwich_holds ? "hold" : "VIOLATED");
  }
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_check(const CheckArgs& args, const fs::path& out) {
  if (args.trials < 1) throw InvalidInput("--trials must be positive");
  if (args.a_star && !(*args.a_star > 0.0)) throw InvalidInput("--a-star must be positive");
  const RadialProfile q = solve_profile();
  const CheckOptions opts{.seed = args.seed, .trials = args.trials, .a_star_override = args.a_star};
  const std::vector<SuiteResult> results = run_all_suites(q, opts);

  std::ofstream csv(out / "check.csv");
  if (!csv) throw InvalidInput("cannot write check.csv");
  csv << schema_comment("check") << "\nsuite,trials,failures,worst,tolerance,passed\n";
  bool all = true;
  std::printf("%-20s %7s %8s %12s %10s %s\n", "suite", "trials", "failures", "worst", "tol", "result");
  for (const auto& r : results) {
    csv << r.name << ',' << r.trials << ',' << r.failures << ',' << format_double(r.worst) << ','
        << format_double(r.tolerance) << ',' << (r.passed ? "true" : "false") << '\n';
    std::printf("%-20s %7d %8d %12.4e %10.1e %s\n", r.name.c_str(), r.trials, r.failures, r.worst, r.tolerance,
                r.passed ? "PASS" : "FAIL");
    all = all && r.passed;
  }
  std::printf("seed=%llu  a_star=%s\n", static_cast<unsigned long long>(args.seed),
              format_double(args.a_star.value_or(q.mass())).c_str());
  return all ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of attractive 2D condensates near the collapse threshold"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.set_version_flag("--version", "gpcollapse 0.1.0");

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->envname("GPCOLLAPSE_OUT");
  const unsigned hw = std::thread::hardware_concurrency();
  int jobs = hw == 0 ? 1 : static_cast<int>(hw);
  app.add_option("--jobs", jobs, "worker threads for independent solves")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "solve for Q and its constants");
  profile->add_option("--rmax", pa.r_max, "outer radius of the shooting interval")->capture_default_str();
  profile->add_option("--tol", pa.tol, "bisection tolerance on Q(0)")->capture_default_str();
  profile->add_option("--s", pa.s, "trap exponent for lambda_tilde")->check(CLI::PositiveNumber);
  profile->add_option("--c0", pa.c0, "trap strength for lambda_tilde")->check(CLI::PositiveNumber);

  MinimizeArgs ma;
  auto* mini = app.add_subcommand("minimize", "one ground-state solve");
  mini->add_option("--omega", ma.phys.omega, "rotation speed, 0 <= omega < 1")->capture_default_str();
  auto* gap_opt = mini->add_option("--gap,--a-gap", ma.gap, "a_star - a (default 0.05)");
  mini->add_option("--a", ma.a, "coupling a")->excludes(gap_opt);
  mini->add_option("--s", ma.phys.s)->check(CLI::PositiveNumber);
  mini->add_option("--c0", ma.phys.c0)->check(CLI::PositiveNumber);
  mini->add_option("--scale", ma.scale)->check(CLI::IsMember({"blowup", "physical"}))->capture_default_str();
  mini->add_option("--init", ma.init)->check(CLI::IsMember({"gaussian", "profile"}))->capture_default_str();
  mini->add_flag("--field-csv", ma.field_csv, "also write the field as CSV");
  add_solve_options(mini, ma.solve);

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "ladder of couplings towards a_star and the energy fit");
  scan->add_option("--omega", sa.omegas, "rotation speed(s); several values run a sweep")
      ->delimiter(',')
      ->capture_default_str();
  scan->add_option("--s", sa.s)->check(CLI::PositiveNumber);
  scan->add_option("--c0", sa.c0)->check(CLI::PositiveNumber);
  scan->add_option("--ladder", sa.ladder, "explicit gaps a_star - a, comma separated")->delimiter(',');
  scan->add_option("--gap-max", sa.gap_max)->capture_default_str();
  scan->add_option("--gap-min", sa.gap_min)->capture_default_str();
  scan->add_option("--rungs", sa.rungs)->capture_default_str();
  add_solve_options(scan, sa.solve);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "run the invariant suites");
  check->add_option("--seed", ca.seed)->capture_default_str();
  check->add_option("--trials", ca.trials, "random trials per suite")->capture_default_str();
  check->add_option("--a-star", ca.a_star, "replace the computed a_star (diagnostics)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    const fs::path out = prepare_out_dir(out_dir);
    if (*profile) return cmd_profile(pa, out);
    if (*mini) return cmd_minimize(ma, out);
    if (*scan) return cmd_scan(sa, out, jobs);
    if (*check) return cmd_check(ca, out);
  } catch (const BracketError& e) {
    std::cerr << "error: shooting failed: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
