#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gpcollapse/fft.hpp"

namespace gpcollapse {

/// A point of the plane.
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Uniform periodic grid on the square [-L, L)^2 with n points per axis.
///
/// Samples are stored row-major: index(i1, i2) = i1 * n + i2, where i1
/// runs along x1 and i2 along x2. The sample at index i sits at -L + i*h.
class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless n >= 8 is a power of two and
  /// extent > 0.
  SpectralGrid(int n, double extent);

  int n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return spacing_; }
  double cell_area() const { return spacing_ * spacing_; }
  double area() const { return 4.0 * extent_ * extent_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i1) * n_ + i2; }

  double coordinate(int i) const { return -extent_ + i * spacing_; }
  std::span<const double> coordinates() const { return coords_; }

  /// k_j = pi * j' / L with j' the signed FFT index; Nyquist mode is -n/2.
  std::span<const double> wavenumbers() const { return k_; }
  /// Same table with the Nyquist entry zeroed, used for first derivatives.
  std::span<const double> derivative_wavenumbers() const { return k_odd_; }

  const Fft2d& fft() const { return fft_; }

  bool operator==(const SpectralGrid& other) const {
    return n_ == other.n_ && extent_ == other.extent_;
  }

 private:
  int n_;
  double extent_;
  double spacing_;
  std::vector<double> coords_;
  std::vector<double> k_;
  std::vector<double> k_odd_;
  Fft2d fft_;
};

/// Complex wavefunction sampled on a SpectralGrid.
class ComplexField {
 public:
  explicit ComplexField(SpectralGrid grid);
  ComplexField(SpectralGrid grid, std::vector<cplx> values);

  template <typename F>
  static ComplexField from_function(const SpectralGrid& grid, F&& f) {
    ComplexField u(grid);
    const int n = grid.n();
    for (int i1 = 0; i1 < n; ++i1) {
      const double x1 = grid.coordinate(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        u.values_[grid.index(i1, i2)] = cplx(f(x1, grid.coordinate(i2)));
      }
    }
    return u;
  }

  const SpectralGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  cplx at(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

  /// Sum |u|^2 h^2.
  double norm_sq() const;
  /// Rescales to unit L2 norm; throws std::domain_error for a zero field.
  void normalize();
  ComplexField normalized() const;

  ComplexField conj() const;
  ComplexField& operator*=(cplx s);
  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  /// this += s * other
  ComplexField& axpy(cplx s, const ComplexField& other);

 private:
  SpectralGrid grid_;
  std::vector<cplx> values_;
};

ComplexField operator*(cplx s, ComplexField u);
ComplexField operator+(ComplexField u, const ComplexField& v);
ComplexField operator-(ComplexField u, const ComplexField& v);

/// L2 inner product <u, v> = sum conj(u) v h^2.
cplx inner(const ComplexField& u, const ComplexField& v);
double distance(const ComplexField& u, const ComplexField& v);

// --- quadrature and spectral operators -------------------------------------

/// Trapezoidal-on-torus quadrature: sum samples * h^2.
double integrate(const SpectralGrid& grid, std::span<const double> samples);

/// |u|^2 pointwise.
std::vector<double> density(const ComplexField& u);

/// Unnormalized forward FFT of the samples.
std::vector<cplx> fourier_coefficients(const ComplexField& u);
/// Fourier-side norm: sum |u_hat|^2 h^2 / n^2 (equals norm_sq by Parseval).
double fourier_norm_sq(const ComplexField& u);

/// Integral of |grad u|^2 via the multiplier |k|^2.
double gradient_norm_sq(const ComplexField& u);
/// Spectral partial derivatives (Nyquist zeroed).
ComplexField derivative_x1(const ComplexField& u);
ComplexField derivative_x2(const ComplexField& u);
/// Spectral Laplacian with multiplier -|k|^2.
ComplexField laplacian(const ComplexField& u);

/// L u = i (x2 d1 u - x1 d2 u), positions in box coordinates.
ComplexField apply_angular_momentum(const ComplexField& u);
/// Re <u, L u>.
double angular_momentum(const ComplexField& u);

/// Integral of |x|^power |u|^2 in box coordinates.
double position_moment(const ComplexField& u, double power);
/// Integral of |u|^p.
double lp_integral(const ComplexField& u, double p);
/// First moment of |u|^2 (center of mass).
Point center_of_mass(const ComplexField& u);

/// Fraction of |u|^2 mass in the outer 10% band of the box, i.e. where
/// max(|x1|, |x2|) >= 0.9 L. Decayed fields should have < 1e-10 there.
double outer_annulus_mass(const ComplexField& u);

/// Radius of the centered disk holding the given fraction of the mass.
double mass_radius(const ComplexField& u, double fraction = 0.5);

/// v(x) = ell * u(ell x), an L2-preserving dilation, evaluated on target by
/// Fourier interpolation of u. Points whose preimage falls outside the source
/// box are set to zero.
ComplexField dilate(const ComplexField& u, double ell, const SpectralGrid& target);
ComplexField dilate(const ComplexField& u, double ell);

/// v(x) = sqrt(eps) u(sqrt(eps) x). Throws std::invalid_argument for eps <= 0.
ComplexField rescale_to_blowup(const ComplexField& u, double eps);
ComplexField rescale_to_blowup(const ComplexField& u, double eps, const SpectralGrid& target);

}  // namespace gpcollapse
