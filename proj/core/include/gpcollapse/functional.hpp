#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gpcollapse/grid.hpp"

namespace gpcollapse {

enum class Scale { physical, blowup };

/// Coefficients of
///   K(u) + trap * int |x|^s |u|^2 - 2 rotation <u, L u> - (quartic/2) int |u|^4.
/// The physical functional and its blow-up rescaling are both of this form.
struct FunctionalCoefficients {
  double trap = 1.0;
  double rotation = 0.0;
  double quartic = 0.0;
  double s = 2.0;
};

/// Physical configuration. `a_star` is carried along because the blow-up
/// scale is defined through eps = sqrt(a_* - a).
struct GPParams {
  double omega = 0.0;
  double a = 0.0;
  double s = 2.0;
  double c0 = 1.0;
  Scale scale = Scale::blowup;
  double a_star = 0.0;

  /// Throws std::invalid_argument unless 0 <= omega < 1, 0 < a < a_star,
  /// s > 0, c0 > 0 and (omega == 0 or s == 2).
  void validate() const;

  double epsilon() const;
  /// Physical length of one blow-up unit, ell = eps^(2/(s+2)); sqrt(eps) at s = 2.
  double length_scale() const;
  /// Physical energy = blow-up energy / energy_factor(); eps at s = 2.
  double energy_factor() const;

  /// Blow-up scale: v(x) = ell u(ell x) turns ell^2 E(u) into
  ///   int |grad v|^2 + eps^2 c0 int |x|^s |v|^2 - 2 Omega ell^2 <v, L v>
  ///     - ((a_* - eps^2)/2) int |v|^4,
  /// which at s = 2 is the functional F_{Omega,eps}.
  FunctionalCoefficients coefficients() const;
};

/// Unnormalized input passed where a unit-norm field is required.
class NormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Terms of the energy; total = kinetic + trap - rotation - interaction with
/// rotation = 2 coef <u, L u> and interaction = (coef/2) int |u|^4 (or the
/// smeared version for Hartree). mu = interaction - total, which is the
/// Lagrange multiplier -<u, H u>.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double trap = 0.0;
  double rotation = 0.0;
  double interaction = 0.0;
  double total = 0.0;
  double mu = 0.0;
};

/// Energy functional with precomputed potential table for one grid.
class GPFunctional {
 public:
  GPFunctional(const SpectralGrid& grid, const FunctionalCoefficients& coeffs);

  const FunctionalCoefficients& coefficients() const { return coeffs_; }
  const SpectralGrid& grid() const { return grid_; }
  std::span<const double> potential() const { return potential_; }

  EnergyBreakdown energy(const ComplexField& u) const;
  /// H u = (-Lap + trap |x|^s - 2 rotation L) u - quartic |u|^2 u, the
  /// unprojected L2 gradient (half the Frechet derivative).
  ComplexField gradient(const ComplexField& u) const;
  /// Both at once, sharing the FFTs.
  EnergyBreakdown energy_and_gradient(const ComplexField& u, ComplexField& hu) const;

 private:
  SpectralGrid grid_;
  FunctionalCoefficients coeffs_;
  std::vector<double> potential_;
};

/// Throws NormalizationError when | ||u||^2 - 1 | > 1e-8.
void require_normalized(const ComplexField& u);

EnergyBreakdown gp_energy(const ComplexField& u, const GPParams& p);
EnergyBreakdown gp_energy(const ComplexField& u, const FunctionalCoefficients& c);
ComplexField gp_gradient(const ComplexField& u, const GPParams& p);
ComplexField gp_gradient(const ComplexField& u, const FunctionalCoefficients& c);

/// -Re<u, H u>.
double lagrange_multiplier(const ComplexField& u, const ComplexField& hu);

/// H u + mu u with mu = -<u, H u>: the component of the gradient tangent to
/// the unit sphere.
ComplexField project_gradient(const ComplexField& u, const ComplexField& hu);

// --- smeared interactions ---------------------------------------------------

/// w_N(x) = N^(2 beta) w(N^beta x) with w the isotropic Gaussian of
/// per-coordinate standard deviation sigma.
struct InteractionSpec {
  enum class Kind { delta, smeared };
  Kind kind = Kind::smeared;
  double sigma = 1.0;
  double beta = 0.4;
  double big_n = 1e6;

  /// Throws unless 0 < beta < 1/2, N >= 1, sigma > 0.
  void validate() const;
  /// Physical standard deviation of w_N: sigma N^(-beta).
  double width() const;
  /// Integral of |z| w(z) for the unscaled kernel: sigma sqrt(pi/2).
  double first_absolute_moment() const;
  /// w with the given per-coordinate standard deviation, sampled in box
  /// coordinates.
  static std::vector<double> sample_kernel(const SpectralGrid& grid, double width);
};

/// Hartree energy: the GP terms with interaction
/// (coef/2) int (w_N * |u|^2) |u|^2, evaluated by Fourier multiplication.
/// In blow-up scale the kernel width is measured in blow-up units.
EnergyBreakdown hartree_energy(const ComplexField& u, const GPParams& p, const InteractionSpec& w);
/// Interaction-only helper: int (w_width * |u|^2) |u|^2 for a Gaussian of
/// the given width (width 0 gives int |u|^4).
double smeared_quartic(const ComplexField& u, double width);

// --- inequalities and identities ---------------------------------------------

/// int |grad u - i c x_perp u|^2 with x_perp = (-x2, x1). Expanding gives
/// int |grad u|^2 - 2c <u, L u> + c^2 int |x|^2 |u|^2.
double magnetic_kinetic(const ComplexField& u, double c);
/// int |grad |u||^2, with grad|u| = Re(conj(u) grad u) / |u| off the zero set.
double modulus_gradient_norm_sq(const ComplexField& u);
/// magnetic_kinetic(u, c) - modulus_gradient_norm_sq(u) (nonnegative).
double diamagnetic_gap(const ComplexField& u, double c);

/// (int |grad u|^2)(int |u|^2) / int |u|^4; its infimum is a_* / 2.
double gn_quotient(const ComplexField& u);

/// Energy of the mixed state sum_j n_j |u_j><u_j|:
/// sum_j n_j [K + trap - rotation](u_j) - (coef/2) int rho^2, rho = sum n_j |u_j|^2.
double mixed_state_energy(std::span<const ComplexField> states, std::span<const double> weights,
                          const FunctionalCoefficients& c);

}  // namespace gpcollapse
