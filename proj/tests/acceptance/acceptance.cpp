// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and printed next to the
// measured values.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gpcollapse/asymptotics.hpp"
#include "gpcollapse/checks.hpp"
#include "gpcollapse/random_fields.hpp"

using namespace gpcollapse;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& measured) {
  std::printf("%s  %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), measured.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Pinned tolerances.
constexpr double kAStarAgreement = 1e-3;
constexpr double kGnQuotientBudget = 120.0;
constexpr double kExponentTol = 0.03;
constexpr double kConstantTol = 0.10;
constexpr double kScanBudget = 600.0;
constexpr double kRotationSpread = 0.05;
constexpr double kDistanceThreshold = 0.15;
constexpr double kDistanceSlack = 0.10;
constexpr double kWidthTol = 0.05;
constexpr double kHarmonicTol = 1e-4;

const std::vector<double> kGaps{0.2, 0.1, 0.05, 0.04, 0.02, 0.01};

SolveConfig scan_config() {
  SolveConfig cfg;
  cfg.n = 256;
  cfg.extent = 12.0;
  cfg.init = InitKind::profile;
  return cfg;
}

const ScanRow& row_at(const ScanResult& s, double gap) {
  for (const auto& r : s.rows) {
    if (std::abs(r.gap - gap) < 1e-12) return r;
  }
  return s.rows.back();
}

void criterion_gn_quotient(const RadialProfile& q) {
  const double a_star = q.mass();
  const SpectralGrid grid(128, 14.0);
  std::mt19937_64 rng(20240601);
  const auto t0 = Clock::now();
  double best = INFINITY, worst_dev = 0.0;
  int converged = 0;
  for (int k = 0; k < 50; ++k) {
    const auto start = random_smooth_field(grid, rng);
    const auto r = minimize_gn_quotient(start);
    worst_dev = std::max(worst_dev, std::abs(r.a_star / a_star - 1.0));
    if (!r.converged) continue;
    ++converged;
    best = std::min(best, r.a_star);
  }
  const double elapsed = seconds_since(t0);
  const double rel = std::abs(best / a_star - 1.0);
  const bool ok = converged > 0 && rel <= kAStarAgreement && elapsed < kGnQuotientBudget;
  report(1, ok, "a* shooting vs 2D GN minimization",
         fmt("shooting %.10f  2D %.10f  rel %.2e (<= %.0e)  converged %d/50  worst start %.1e  %.1f s (< %.0f s)",
             a_star, best, rel, kAStarAgreement, converged, worst_dev, elapsed, kGnQuotientBudget));
}

void criterion_suite(int id, const std::string& what, const std::vector<SuiteResult>& suites) {
  bool ok = true;
  std::string text;
  for (const auto& s : suites) {
    ok = ok && s.passed;
    if (!text.empty()) text += "  |  ";
    // Inequality suites report their smallest margin, identity suites their
    // largest error.
    const bool margin = s.name == "gn_inequality" || s.name == "diamagnetic" || s.name == "hartree_dominance";
    text += fmt(margin ? "%s: %d trials, %d failures, min margin %.3e (>= -%.0e)"
                       : "%s: %d trials, %d failures, max error %.3e (<= %.0e)",
                s.name.c_str(), s.trials, s.failures, s.worst, s.tolerance);
  }
  report(id, ok, what, text);
}

struct ScanRun {
  ScanResult scan;
  double seconds = 0.0;
};

ScanRun timed_scan(const GPParams& base, const RadialProfile& q) {
  const auto ladder = ladder_from_gaps(base.a_star, kGaps);
  const auto t0 = Clock::now();
  ScanRun run{collapse_scan(base, ladder, scan_config(), q), 0.0};
  run.seconds = seconds_since(t0);
  return run;
}

void criteria_rotation(const RadialProfile& q) {
  const GNConstants k = compute_constants(q);
  const std::vector<double> omegas{0.0, 0.5, 0.9};
  std::vector<ScanRun> runs;
  for (double w : omegas) {
    GPParams base;
    base.a_star = k.a_star;
    base.omega = w;
    runs.push_back(timed_scan(base, q));
    const auto& s = runs.back().scan;
    const double exp_err = std::abs(s.fitted_exponent - 0.5);
    const double c_err = std::abs(s.fitted_constant / s.target_constant - 1.0);
    const bool ok = s.fitted && s.all_converged() && exp_err <= kExponentTol && c_err <= kConstantTol &&
                    runs.back().seconds < kScanBudget;
    report(4, ok, fmt("energy law, omega = %.1f", w),
           fmt("exponent %.5f (0.5 +- %.2f)  constant %.5f vs %.5f (%+.2f%%, +- %.0f%%)  rungs converged %s  %.1f s "
               "(< %.0f s)",
               s.fitted_exponent, kExponentTol, s.fitted_constant, s.target_constant,
               100.0 * (s.fitted_constant / s.target_constant - 1.0), 100.0 * kConstantTol,
               s.all_converged() ? "all" : "NOT all", runs.back().seconds, kScanBudget));
  }

  // Spread at the finest rung, and the sandwich at every rung.
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : runs) {
    const double v = row_at(r.scan, 0.01).F_over_eps2;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double spread = (hi - lo) / lo;
  const double tol = 10.0 * scan_config().residual_tol;
  int violations = 0;
  double tightest = INFINITY;
  for (std::size_t w = 0; w < omegas.size(); ++w) {
    for (std::size_t i = 0; i < kGaps.size(); ++i) {
      const auto s =
          sandwich_bounds(omegas[w], runs[w].scan.rows[i].F, runs[0].scan.rows[i].F, tol);
      if (!s.holds) ++violations;
      tightest = std::min({tightest, s.f_omega - (s.lower - s.tol), s.f_zero + s.tol - s.f_omega});
    }
  }
  report(5, spread <= kRotationSpread && violations == 0, "rotation independence",
         fmt("F/eps^2 at gap 0.01 in [%.6f, %.6f], spread %.2e (<= %.0e)  sandwich violations %d/%zu  min slack %.2e",
             lo, hi, spread, kRotationSpread, violations, omegas.size() * kGaps.size(), tightest));

  // Profile convergence, measured on the non-rotating scan.
  const auto conv = profile_convergence(runs[0].scan, kDistanceThreshold, kDistanceSlack);
  const auto width = width_ratio(runs[0].scan, 0.04, 0.01);
  std::string dist;
  for (double d : conv.distances) dist += fmt("%s%.4f", dist.empty() ? "" : " ", d);
  report(6, conv.passed && width.relative_error <= kWidthTol, "profile convergence",
         fmt("distances [%s] monotone %s, final %.4f (< %.2f)  width50 ratio %.4f vs %.4f (%.2f%%, <= %.0f%%)",
             dist.c_str(), conv.monotone ? "yes" : "no", conv.final_distance, kDistanceThreshold, width.measured,
             width.expected, 100.0 * width.relative_error, 100.0 * kWidthTol));
}

void criterion_anharmonic(const RadialProfile& q) {
  GPParams base;
  base.a_star = q.mass();
  base.s = 4.0;
  base.c0 = 1.0;
  const auto run = timed_scan(base, q);
  const auto& s = run.scan;
  const double exp_err = std::abs(s.fitted_exponent - 2.0 / 3.0);
  const double c_rel = s.fitted_constant / s.target_constant - 1.0;
  const bool ok = s.fitted && s.all_converged() && exp_err <= kExponentTol && std::abs(c_rel) <= kConstantTol;
  report(7, ok, "anharmonic energy law, s = 4",
         fmt("exponent %.5f (2/3 +- %.2f)  constant %.5f vs %.5f (%+.2f%%, +- %.0f%%)  %.1f s", s.fitted_exponent,
             kExponentTol, s.fitted_constant, s.target_constant, 100.0 * c_rel, 100.0 * kConstantTol, run.seconds));
}

void criterion_hartree(const RadialProfile& q, const CheckOptions& opts) {
  const double a_star = q.mass();
  int held = 0, total = 0;
  double max_ratio = 0.0;
  for (double big_n : {1e6, 1e8}) {
    for (double beta : {0.3, 0.4}) {
      for (double gap : {0.05, 0.02}) {
        const InteractionSpec w{.sigma = 1.0, .beta = beta, .big_n = big_n};
        const auto r = hartree_upper_bound_check(w, a_star - gap, q);
        ++total;
        if (r.holds) ++held;
        max_ratio = std::max(max_ratio, r.energy_gap / r.bound);
      }
    }
  }
  CheckOptions o = opts;
  o.trials = 100;
  const auto dom = hartree_dominance_suite(q, o);
  report(8, held == total && dom.passed, "Hartree trial-state bound",
         fmt("bound holds %d/%d, max gap/bound %.3e  |  dominance: %d trials, min margin %.3e (>= -%.0e)", held, total,
             max_ratio, dom.trials, dom.worst, dom.tolerance));
}

void criterion_harmonic(const RadialProfile& q) {
  double worst = 0.0;
  bool all_converged = true;
  std::string energies;
  for (double w : {0.0, 0.5, 0.9, 0.99}) {
    GPParams p;
    p.a_star = q.mass();
    p.a = 1e-6;
    p.omega = w;
    p.scale = Scale::physical;
    SolveConfig cfg;
    cfg.n = 128;
    cfg.extent = 8.0;
    const auto rep = minimize(p, cfg, q);
    all_converged = all_converged && rep.converged;
    worst = std::max(worst, std::abs(rep.breakdown.total - 2.0));
    energies += fmt("%s%.9f", energies.empty() ? "" : " ", rep.breakdown.total);
  }
  report(10, all_converged && worst <= kHarmonicTol, "harmonic oracle, a = 1e-6",
         fmt("E(omega = 0, 0.5, 0.9, 0.99) = [%s], max |E - 2| %.2e (<= %.0e)", energies.c_str(), worst,
             kHarmonicTol));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const RadialProfile q = solve_profile();
  CheckOptions opts;

  criterion_gn_quotient(q);
  criterion_suite(2, "GN inequality and equality", {gn_inequality_suite(q, opts)});
  criterion_suite(3, "Pohozaev identities", {pohozaev_suite(q, opts)});
  criteria_rotation(q);
  criterion_anharmonic(q);
  criterion_hartree(q, opts);
  CheckOptions hundred = opts;
  hundred.trials = 100;
  criterion_suite(9, "diamagnetic and gradient suites", {diamagnetic_suite(hundred), gradient_suite(q, hundred)});
  criterion_harmonic(q);

  std::printf("%s: %d criterion line(s) failed, %.1f s total\n", failures == 0 ? "ALL PASS" : "FAILURES", failures,
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
