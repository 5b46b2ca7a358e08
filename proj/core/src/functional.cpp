#include "gpcollapse/functional.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gpcollapse {
namespace {

// One forward FFT of u plus whatever backward transforms the caller needs.
struct Spectrum {
  std::vector<cplx> hat;
  double kinetic = 0.0;
};

Spectrum spectrum_of(const ComplexField& u) {
  const SpectralGrid& g = u.grid();
  Spectrum s;
  s.hat.resize(g.size());
  g.fft().forward(u.values(), s.hat);
  const auto k = g.wavenumbers();
  const int n = g.n();
  double acc = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = k[j1] * k[j1];
    for (int j2 = 0; j2 < n; ++j2) acc += (k1 + k[j2] * k[j2]) * std::norm(s.hat[g.index(j1, j2)]);
  }
  s.kinetic = acc * g.cell_area() / static_cast<double>(g.size());
  return s;
}

// L u from a precomputed spectrum.
std::vector<cplx> angular_from_spectrum(const SpectralGrid& g, const std::vector<cplx>& hat) {
  const int n = g.n();
  const auto kd = g.derivative_wavenumbers();
  std::vector<cplx> d1_hat(g.size()), d2_hat(g.size());
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const auto idx = g.index(j1, j2);
      d1_hat[idx] = cplx(-kd[j1] * hat[idx].imag(), kd[j1] * hat[idx].real());
      d2_hat[idx] = cplx(-kd[j2] * hat[idx].imag(), kd[j2] * hat[idx].real());
    }
  }
  std::vector<cplx> d1(g.size()), d2(g.size());
  g.fft().backward(d1_hat, d1);
  g.fft().backward(d2_hat, d2);
  std::vector<cplx> lu(g.size());
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = g.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = g.coordinate(i2);
      const auto idx = g.index(i1, i2);
      const cplx t = x2 * d1[idx] - x1 * d2[idx];
      lu[idx] = cplx(-t.imag(), t.real());
    }
  }
  return lu;
}

double real_inner(std::span<const cplx> a, std::span<const cplx> b, double cell) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s * cell;
}

EnergyBreakdown assemble(double kinetic, double trap, double rotation, double interaction) {
  EnergyBreakdown e;
  e.kinetic = kinetic;
  e.trap = trap;
  e.rotation = rotation;
  e.interaction = interaction;
  e.total = kinetic + trap - rotation - interaction;
  e.mu = interaction - e.total;
  return e;
}

}  // namespace

void GPParams::validate() const {
  std::ostringstream msg;
  if (!(omega >= 0.0 && omega < 1.0)) msg << "omega must satisfy 0 <= omega < 1 (got " << omega << "); ";
  if (!(a_star > 0.0)) msg << "a_star must be positive; ";
  if (!(a > 0.0 && a < a_star)) msg << "coupling must satisfy 0 < a < a_star (got a=" << a << ", a_star=" << a_star << "); ";
  if (!(s > 0.0)) msg << "s must be positive; ";
  if (!(c0 > 0.0)) msg << "c0 must be positive; ";
  if (omega != 0.0 && s != 2.0) msg << "rotation is only supported for the harmonic trap s = 2; ";
  const std::string text = msg.str();
  if (!text.empty()) throw std::invalid_argument("GPParams: " + text.substr(0, text.size() - 2));
}

double GPParams::epsilon() const { return std::sqrt(a_star - a); }

double GPParams::length_scale() const { return std::pow(epsilon(), 2.0 / (s + 2.0)); }

double GPParams::energy_factor() const {
  const double ell = length_scale();
  return ell * ell;
}

FunctionalCoefficients GPParams::coefficients() const {
  validate();
  FunctionalCoefficients c;
  c.s = s;
  c.quartic = a;
  if (scale == Scale::physical) {
    c.trap = c0;
    c.rotation = omega;
  } else {
    const double eps = epsilon();
    c.trap = eps * eps * c0;
    c.rotation = omega * energy_factor();
  }
  return c;
}

void require_normalized(const ComplexField& u) {
  const double ns = u.norm_sq();
  if (!(std::abs(ns - 1.0) <= 1e-8)) {
    std::ostringstream msg;
    msg << "field is not normalized: ||u||^2 = " << ns;
    throw NormalizationError(msg.str());
  }
}

GPFunctional::GPFunctional(const SpectralGrid& grid, const FunctionalCoefficients& coeffs)
    : grid_(grid), coeffs_(coeffs), potential_(grid.size()) {
  const int n = grid.n();
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = grid.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = grid.coordinate(i2);
      const double r2 = x1 * x1 + x2 * x2;
      const double v = coeffs.s == 2.0 ? r2 : std::pow(r2, 0.5 * coeffs.s);
      potential_[grid.index(i1, i2)] = coeffs.trap * v;
    }
  }
}

EnergyBreakdown GPFunctional::energy(const ComplexField& u) const {
  require_normalized(u);
  const Spectrum sp = spectrum_of(u);
  const auto vals = u.values();
  double trap = 0.0, quartic = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double rho = std::norm(vals[i]);
    trap += potential_[i] * rho;
    quartic += rho * rho;
  }
  const double cell = grid_.cell_area();
  double rotation = 0.0;
  if (coeffs_.rotation != 0.0) {
    const auto lu = angular_from_spectrum(grid_, sp.hat);
    rotation = 2.0 * coeffs_.rotation * real_inner(vals, lu, cell);
  }
  return assemble(sp.kinetic, trap * cell, rotation, 0.5 * coeffs_.quartic * quartic * cell);
}

ComplexField GPFunctional::gradient(const ComplexField& u) const {
  ComplexField hu(grid_);
  energy_and_gradient(u, hu);
  return hu;
}

EnergyBreakdown GPFunctional::energy_and_gradient(const ComplexField& u, ComplexField& hu) const {
  require_normalized(u);
  const Spectrum sp = spectrum_of(u);
  const int n = grid_.n();
  const auto k = grid_.wavenumbers();
  std::vector<cplx> lap_hat(grid_.size());
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const auto idx = grid_.index(j1, j2);
      lap_hat[idx] = (k[j1] * k[j1] + k[j2] * k[j2]) * sp.hat[idx];
    }
  }
  if (!(hu.grid() == grid_)) hu = ComplexField(grid_);
  auto out = hu.values();
  grid_.fft().backward(lap_hat, out);  // -Lap u

  const auto vals = u.values();
  const double cell = grid_.cell_area();
  double trap = 0.0, quartic = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double rho = std::norm(vals[i]);
    trap += potential_[i] * rho;
    quartic += rho * rho;
    out[i] += (potential_[i] - coeffs_.quartic * rho) * vals[i];
  }
  double rotation = 0.0;
  if (coeffs_.rotation != 0.0) {
    const auto lu = angular_from_spectrum(grid_, sp.hat);
    rotation = 2.0 * coeffs_.rotation * real_inner(vals, lu, cell);
    for (std::size_t i = 0; i < vals.size(); ++i) out[i] -= 2.0 * coeffs_.rotation * lu[i];
  }
  return assemble(sp.kinetic, trap * cell, rotation, 0.5 * coeffs_.quartic * quartic * cell);
}

EnergyBreakdown gp_energy(const ComplexField& u, const GPParams& p) {
  return GPFunctional(u.grid(), p.coefficients()).energy(u);
}

EnergyBreakdown gp_energy(const ComplexField& u, const FunctionalCoefficients& c) {
  return GPFunctional(u.grid(), c).energy(u);
}

ComplexField gp_gradient(const ComplexField& u, const GPParams& p) {
  return GPFunctional(u.grid(), p.coefficients()).gradient(u);
}

ComplexField gp_gradient(const ComplexField& u, const FunctionalCoefficients& c) {
  return GPFunctional(u.grid(), c).gradient(u);
}

double lagrange_multiplier(const ComplexField& u, const ComplexField& hu) { return -inner(u, hu).real(); }

ComplexField project_gradient(const ComplexField& u, const ComplexField& hu) {
  ComplexField r = hu;
  r.axpy(lagrange_multiplier(u, hu), u);
  return r;
}

void InteractionSpec::validate() const {
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("InteractionSpec: beta must lie in (0, 1/2)");
  if (!(big_n >= 1.0)) throw std::invalid_argument("InteractionSpec: N must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("InteractionSpec: sigma must be positive");
}

double InteractionSpec::width() const { return sigma * std::pow(big_n, -beta); }

double InteractionSpec::first_absolute_moment() const { return sigma * std::sqrt(std::numbers::pi / 2.0); }

std::vector<double> InteractionSpec::sample_kernel(const SpectralGrid& grid, double width) {
  std::vector<double> w(grid.size());
  const double norm = 1.0 / (2.0 * std::numbers::pi * width * width);
  const int n = grid.n();
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = grid.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = grid.coordinate(i2);
      w[grid.index(i1, i2)] = norm * std::exp(-(x1 * x1 + x2 * x2) / (2.0 * width * width));
    }
  }
  return w;
}

double smeared_quartic(const ComplexField& u, double width) {
  const SpectralGrid& g = u.grid();
  const auto rho = density(u);
  if (width == 0.0) {
    double s = 0.0;
    for (double v : rho) s += v * v;
    return s * g.cell_area();
  }
  std::vector<cplx> rho_c(rho.begin(), rho.end());
  std::vector<cplx> hat(g.size());
  g.fft().forward(rho_c, hat);
  const auto k = g.wavenumbers();
  const int n = g.n();
  const double half_w2 = 0.5 * width * width;
  double s = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = k[j1] * k[j1] + k[j2] * k[j2];
      s += std::exp(-half_w2 * k2) * std::norm(hat[g.index(j1, j2)]);
    }
  }
  return s * g.cell_area() / static_cast<double>(g.size());
}

EnergyBreakdown hartree_energy(const ComplexField& u, const GPParams& p, const InteractionSpec& w) {
  const FunctionalCoefficients c = p.coefficients();
  EnergyBreakdown e = GPFunctional(u.grid(), c).energy(u);
  if (w.kind == InteractionSpec::Kind::delta) return e;
  w.validate();
  const double width = p.scale == Scale::blowup ? w.width() / p.length_scale() : w.width();
  return assemble(e.kinetic, e.trap, e.rotation, 0.5 * c.quartic * smeared_quartic(u, width));
}

double magnetic_kinetic(const ComplexField& u, double c) {
  const SpectralGrid& g = u.grid();
  const auto d1 = derivative_x1(u);
  const auto d2 = derivative_x2(u);
  const int n = g.n();
  double s = 0.0;
  const cplx ic(0.0, c);
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = g.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = g.coordinate(i2);
      const auto idx = g.index(i1, i2);
      const cplx v = u[idx];
      // x_perp = (-x2, x1)
      s += std::norm(d1[idx] + ic * x2 * v) + std::norm(d2[idx] - ic * x1 * v);
    }
  }
  return s * g.cell_area();
}

double modulus_gradient_norm_sq(const ComplexField& u) {
  const auto d1 = derivative_x1(u);
  const auto d2 = derivative_x2(u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.values().size(); ++i) {
    const cplx v = u[i];
    const double m2 = std::norm(v);
    if (m2 == 0.0) continue;
    const double g1 = (std::conj(v) * d1[i]).real();
    const double g2 = (std::conj(v) * d2[i]).real();
    s += (g1 * g1 + g2 * g2) / m2;
  }
  return s * u.grid().cell_area();
}

double diamagnetic_gap(const ComplexField& u, double c) { return magnetic_kinetic(u, c) - modulus_gradient_norm_sq(u); }

double gn_quotient(const ComplexField& u) {
  return gradient_norm_sq(u) * u.norm_sq() / lp_integral(u, 4.0);
}

double mixed_state_energy(std::span<const ComplexField> states, std::span<const double> weights,
                          const FunctionalCoefficients& c) {
  if (states.empty() || states.size() != weights.size()) {
    throw std::invalid_argument("mixed_state_energy: need one weight per state");
  }
  double total_weight = 0.0;
  for (double wj : weights) {
    if (wj < 0.0) throw std::invalid_argument("mixed_state_energy: weights must be nonnegative");
    total_weight += wj;
  }
  if (std::abs(total_weight - 1.0) > 1e-12) throw std::invalid_argument("mixed_state_energy: weights must sum to 1");

  const SpectralGrid& g = states.front().grid();
  FunctionalCoefficients linear = c;
  linear.quartic = 0.0;
  const GPFunctional one_body(g, linear);
  std::vector<double> rho(g.size(), 0.0);
  double e = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    e += weights[j] * one_body.energy(states[j]).total;
    const auto vals = states[j].values();
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += weights[j] * std::norm(vals[i]);
  }
  double q = 0.0;
  for (double v : rho) q += v * v;
  return e - 0.5 * c.quartic * q * g.cell_area();
}

}  // namespace gpcollapse
