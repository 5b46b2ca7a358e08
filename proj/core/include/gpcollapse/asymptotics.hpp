#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gpcollapse/functional.hpp"
#include "gpcollapse/minimizer.hpp"
#include "gpcollapse/profile.hpp"

namespace gpcollapse {

struct ScanRow {
  double a = 0.0;
  double gap = 0.0;  ///< a_* - a
  double eps = 0.0;
  double omega = 0.0;
  double energy_physical = 0.0;
  double F = 0.0;  ///< blow-up scale energy
  double F_over_eps2 = 0.0;
  double mu = 0.0;
  double width50 = 0.0;  ///< physical radius holding half the mass
  double distance_to_QN = 0.0;
  double residual = 0.0;
  int iters = 0;
  bool converged = false;
  std::optional<ComplexField> field;
};

/// y = constant * x^exponent fitted by unweighted least squares in log-log.
struct PowerLawFit {
  double exponent = 0.0;
  double constant = 0.0;
  double rms = 0.0;  ///< residual RMS in log space
  int points = 0;
};

/// Throws std::invalid_argument for fewer than two points or nonpositive data.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct ScanResult {
  GPParams base;
  std::vector<ScanRow> rows;  ///< ordered by decreasing a_* - a
  bool fitted = false;
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;
  double fit_rms = 0.0;
  double target_exponent = 0.0;
  double target_constant = 0.0;
  int excluded = 0;  ///< unconverged rungs left out of the fit

  bool all_converged() const;
};

/// Minimum number of usable rungs before a fit is attempted.
inline constexpr int kMinFitRows = 4;

/// Fills the fit fields from the converged rows (needs kMinFitRows).
void fit_scan(ScanResult& scan);

/// Continuation solves along the ladder (strictly increasing a, all below
/// a_*), each rung warm-started from the previous one, followed by the
/// energy power-law fit against a_* - a. Target exponent s/(s+2) and
/// constant (lambda_tilde^2 / a_*)(s+2)/s.
ScanResult collapse_scan(const GPParams& base, std::span<const double> ladder, const SolveConfig& cfg,
                         const RadialProfile& profile, bool keep_fields = false);

/// Ladder of couplings a = a_* - gap for the given gaps (any order).
std::vector<double> ladder_from_gaps(double a_star, std::span<const double> gaps);
/// Geometric gaps from `largest` down to `smallest`, `count` rungs.
std::vector<double> geometric_gaps(double largest, double smallest, int count);

struct RotationSweep {
  std::vector<double> omegas;
  std::vector<ScanResult> scans;  ///< one per omega, same ladder
  /// sandwich[k][i]: omega k, rung i against the omega = 0 scan.
  std::vector<std::vector<SandwichRecord>> sandwich;
  bool sandwich_holds = false;
  /// Max relative spread of F/eps^2 across omegas at each rung.
  std::vector<double> spread;
};

/// One collapse scan per omega (run on up to `jobs` threads), plus the
/// row-wise sandwich bounds against the omega = 0 scan (added if absent).
RotationSweep rotation_sweep(const GPParams& base, std::span<const double> omegas, std::span<const double> ladder,
                             const SolveConfig& cfg, const RadialProfile& profile, int jobs = 1,
                             bool keep_fields = false);

struct ConvergenceRecord {
  std::vector<double> distances;
  bool monotone = false;  ///< d[i+1] <= (1 + slack) d[i] for all rungs
  double final_distance = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::vector<int> violations;  ///< rung indices that broke monotonicity
};

ConvergenceRecord profile_convergence(const ScanResult& scan, double threshold = 0.15, double slack = 0.10);

struct WidthRatio {
  double measured = 0.0;
  double expected = 0.0;  ///< (gap_hi / gap_lo)^(1/(s+2))
  double relative_error = 0.0;
};

/// width50 ratio between the rows with the given gaps (matched to 1e-9).
WidthRatio width_ratio(const ScanResult& scan, double gap_hi, double gap_lo);

struct HartreeBoundRecord {
  double a = 0.0;
  double gap = 0.0;
  double big_n = 0.0;
  double beta = 0.0;
  double e_hartree = 0.0;
  double e_gp = 0.0;
  double energy_gap = 0.0;  ///< e_hartree - e_gp (nonnegative)
  double bound = 0.0;       ///< 2 a_* (int |z| w) N^(-beta) (a_* - a)^(-5/4)
  /// ||grad Q_N|| ||Q_N||_{L6}^3 and the constant C with
  /// |int int w_N rho rho - int rho^2| = C N^(-beta) ||grad Q_N|| ||Q_N||_{L6}^3.
  double sobolev_product = 0.0;
  double measured_constant = 0.0;
  bool holds = false;
};

struct HartreeGridOptions {
  int n = 256;
  double extent = 12.0;  ///< blow-up units; the physical box is extent * ell
};

/// Evaluates both functionals on the physical blow-up profile Q_N and checks
/// the trial-state bound.
HartreeBoundRecord hartree_upper_bound_check(const InteractionSpec& w, double a, const RadialProfile& profile,
                                             double omega = 0.0, const HartreeGridOptions& grid = {});

}  // namespace gpcollapse
