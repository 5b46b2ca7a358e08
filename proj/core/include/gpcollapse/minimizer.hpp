#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpcollapse/functional.hpp"
#include "gpcollapse/grid.hpp"
#include "gpcollapse/profile.hpp"

namespace gpcollapse {

enum class InitKind { gaussian, profile, provided };

struct SolveConfig {
  int n = 256;
  double extent = 12.0;  ///< half-width of the box in the solve's own units
  int max_iters = 20000;
  double step0 = 1.0;
  double residual_tol = 1e-6;
  /// Couplings solved in order before the target one, each warm-starting
  /// the next.
  std::vector<double> continuation;
  InitKind init = InitKind::gaussian;
  std::optional<ComplexField> initial;
  /// Keep every k-th iteration in the history (the last one is always kept).
  int history_stride = 1;

  /// Throws std::invalid_argument on nonpositive tolerances or steps.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
  double step = 0.0;
};

struct SolveReport {
  ComplexField field;
  EnergyBreakdown breakdown;
  double residual = 0.0;
  double initial_residual = 0.0;
  int iters = 0;
  bool converged = false;
  std::string status;
  /// ||e^{-i theta} u - Q_N|| with the optimal phase, in the solve's scale.
  double phase_aligned_distance = 0.0;
  double theta = 0.0;
  /// -<u, H u> (gradient route) and interaction - total (identity route).
  double mu = 0.0;
  double mu_identity = 0.0;
  /// Physical-scale energy, total / energy_factor in blow-up mode.
  double energy_physical = 0.0;
  Point drift;
  double outer_mass = 0.0;
  std::vector<IterationRecord> history;
};

/// Energy became NaN or infinite during a solve.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial field for a solve on the given grid.
ComplexField initial_field(const SpectralGrid& grid, const GPParams& p, const SolveConfig& cfg,
                           const RadialProfile& profile);

/// Preconditioned projected gradient descent on the unit L2 sphere,
///   u <- normalize(u - tau P d),
/// with d the tangential gradient and backtracking on tau until the energy
/// decreases. Non-convergence is reported (converged = false); a NaN energy
/// throws NumericalError.
SolveReport minimize(const GPParams& p, const SolveConfig& cfg, const RadialProfile& profile);

struct PhaseAlignment {
  double theta = 0.0;
  double distance = 0.0;
  bool degenerate = false;
};

/// theta = arg <q, u>; distance = ||e^{-i theta} u - q||. When <q, u> = 0
/// theta is set to 0 and the degeneracy flag is raised.
PhaseAlignment phase_align(const ComplexField& u, const ComplexField& q);

struct SandwichRecord {
  double omega = 0.0;
  double f_omega = 0.0;
  double f_zero = 0.0;
  double lower = 0.0;  ///< sqrt(1 - omega^2) f_zero
  double tol = 0.0;
  bool holds = false;
};

/// sqrt(1 - omega^2) F_0 - tol <= F_omega <= F_0 + tol.
SandwichRecord sandwich_bounds(double omega, double f_omega, double f_zero, double tol);

/// Runs the omega = 0 solve with the same configuration and checks the
/// bounds with tol = 10 * residual_tol.
SandwichRecord sandwich_check(const GPParams& p, const SolveReport& report, const SolveConfig& cfg,
                              const RadialProfile& profile);

/// Decay rate c from a least-squares fit of log(mass outside R) = b - c R
/// over R in [r_lo, r_hi].
double tail_decay_rate(const ComplexField& u, double r_lo = 4.0, double r_hi = 8.0);

struct GNQuotientConfig {
  int max_iters = 1000;
  /// J is quadratic at its minimum, so this already fixes J to ~1e-10.
  double residual_tol = 1e-5;
  double step0 = 1.0;
};

struct GNQuotientResult {
  double a_star = 0.0;  ///< 2 * min J
  double quotient = 0.0;
  int iters = 0;
  bool converged = false;
  double residual = 0.0;
  std::string status;
  ComplexField field;
};

/// Minimizes J(u) = (int |grad u|^2)(int |u|^2) / int |u|^4 from the given
/// start by the same preconditioned sphere descent, applied to log J, with
/// the dilation direction projected out of every step.
GNQuotientResult minimize_gn_quotient(const ComplexField& start, const GNQuotientConfig& cfg = {});

}  // namespace gpcollapse
