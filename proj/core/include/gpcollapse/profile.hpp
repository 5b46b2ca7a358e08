#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gpcollapse/grid.hpp"

namespace gpcollapse {

/// The positive radial solution of Q'' + Q'/r - Q + Q^3 = 0 on [0, r_max],
/// sampled on uniform nodes r_i = i * dr together with Q'(r_i).
class RadialProfile {
 public:
  RadialProfile(double dr, std::vector<double> q, std::vector<double> dq, double q0);

  double q0() const { return q0_; }
  double r_max() const { return dr_ * (static_cast<double>(q_.size()) - 1.0); }
  double dr() const { return dr_; }
  std::size_t size() const { return q_.size(); }
  double r(std::size_t i) const { return dr_ * static_cast<double>(i); }
  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& dq() const { return dq_; }

  /// Q(r) by cubic Hermite interpolation of (Q, Q'); zero beyond r_max.
  double operator()(double r) const;

  /// 2 pi * integral of r^(power+1) Q(r)^2 dr, i.e. the plane integral of
  /// |x|^power Q^2. Composite Simpson on the nodes.
  double moment(double power) const;
  /// Plane integral of |grad Q|^2.
  double gradient_norm_sq() const;
  /// Plane integral of Q^p.
  double lp_integral(double p) const;
  /// ||Q||^2 = a_*.
  double mass() const { return mass_; }

  /// Max over interior nodes of |Q'' + Q'/r - Q + Q^3| with Q'' from a
  /// sixth-order central difference of the sampled Q.
  double max_residual() const;

  /// Smallest radius R with plane mass of Q^2 beyond R below fraction * a_*.
  double tail_radius(double fraction) const;

 private:
  double simpson(const std::vector<double>& f) const;

  double dr_;
  std::vector<double> q_;
  std::vector<double> dq_;
  double q0_;
  double mass_;
};

/// Shooting on q0 = Q(0) failed to produce a valid bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A materialized profile leaks mass into the outer band of the box.
class SupportOverflow : public std::runtime_error {
 public:
  SupportOverflow(const std::string& what, double outer_mass, double suggested_extent)
      : std::runtime_error(what), outer_mass_(outer_mass), suggested_extent_(suggested_extent) {}
  double outer_mass() const { return outer_mass_; }
  double suggested_extent() const { return suggested_extent_; }

 private:
  double outer_mass_;
  double suggested_extent_;
};

struct ShootingOptions {
  double lower = 1.0;  ///< initial bracket for q0
  double upper = 4.0;
  double node_spacing = 1.0 / 256.0;
  double match_radius = 6.0;  ///< outward/inward matching point
};

/// Shooting plus bisection on Q(0). Bisection runs until the bracket stops
/// shrinking in double precision (and must be at most tol); the outward
/// solution is trusted up to match_radius and joined to an inward
/// integration from r_max started on the K0 asymptote.
/// Preconditions: r_max >= 15, 0 < tol <= 1e-10.
RadialProfile solve_profile(double r_max = 20.0, double tol = 1e-12, const ShootingOptions& opts = {});

/// Shot classification used by the bisection: +1 if the trajectory crosses
/// zero (q0 too large), -1 if it turns back up or stays away from zero
/// (q0 too small), 0 if it decays cleanly all the way to r_end.
int classify_shot(double q0, double r_end);

struct GNConstants {
  double a_star = 0.0;
  double lambda_star = 0.0;
  double s = 2.0;
  double c0 = 1.0;
  double lambda_tilde = 0.0;

  /// Limit of E/(a_*-a)^(s/(s+2)): (lambda_tilde^2 / a_*) (s+2)/s.
  double energy_constant() const { return lambda_tilde * lambda_tilde / a_star * (s + 2.0) / s; }
  double energy_exponent() const { return s / (s + 2.0); }
};

/// a_* = ||Q||^2, lambda_* = (int |x|^2 Q^2)^(1/4),
/// lambda_tilde = ((s/2) c0 int |x|^s Q^2)^(1/(2+s)).
GNConstants compute_constants(const RadialProfile& p, double s = 2.0, double c0 = 1.0);

/// lambda Q_*(lambda |x - X|) with Q_* = Q / sqrt(a_*). Throws
/// std::invalid_argument for lambda <= 0 and SupportOverflow if more than
/// 1e-8 of the mass lands in the outer band of the box.
ComplexField materialize_Q(const SpectralGrid& g, const RadialProfile& p, double lambda, Point center = {});

/// Physical-scale blow-up profile Q_{lambda,0} with
/// lambda = lambda_tilde (a_* - a)^(-1/(2+s)). Requires 0 < a < a_*.
ComplexField blowup_profile(const SpectralGrid& g, const RadialProfile& p, double a, double s = 2.0, double c0 = 1.0);

/// The same profile seen at blow-up scale, where the length unit is
/// (a_* - a)^(1/(2+s)): simply Q_{lambda_tilde, 0}.
ComplexField blowup_profile_rescaled(const SpectralGrid& g, const RadialProfile& p, double s = 2.0, double c0 = 1.0);

}  // namespace gpcollapse
