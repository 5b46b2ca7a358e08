#include "gpcollapse/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace gpcollapse {

ComplexField random_smooth_field(const SpectralGrid& grid, std::mt19937_64& rng, const RandomFieldOptions& opts) {
  std::uniform_int_distribution<int> count(1, opts.max_bumps);
  std::uniform_real_distribution<double> center(-opts.max_center, opts.max_center);
  std::uniform_real_distribution<double> width(opts.min_width, opts.max_width);
  std::uniform_real_distribution<double> wave(-opts.max_wavenumber, opts.max_wavenumber);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> modulus(0.3, 1.0);

  struct Bump {
    double c1, c2, w;
    cplx amp;
  };
  const int m = count(rng);
  std::vector<Bump> bumps;
  for (int b = 0; b < m; ++b) {
    const double phase = opts.complex_valued ? angle(rng) : 0.0;
    const double c1 = center(rng);
    const double c2 = center(rng);
    const double w = width(rng);
    const double mod = modulus(rng);
    bumps.push_back({c1, c2, w, std::polar(mod, phase)});
  }
  const double kx = opts.complex_valued ? wave(rng) : 0.0;
  const double ky = opts.complex_valued ? wave(rng) : 0.0;

  auto u = ComplexField::from_function(grid, [&](double x1, double x2) {
    cplx s(0.0, 0.0);
    for (const auto& b : bumps) {
      const double d1 = x1 - b.c1, d2 = x2 - b.c2;
      s += b.amp * std::exp(-(d1 * d1 + d2 * d2) / (2.0 * b.w * b.w));
    }
    return s * std::polar(1.0, kx * x1 + ky * x2);
  });
  u.normalize();
  return u;
}

ComplexField random_band_limited_field(const SpectralGrid& grid, std::mt19937_64& rng, int max_mode) {
  const int n = grid.n();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> hat(grid.size(), cplx(0.0, 0.0));
  for (int j1 = 0; j1 < n; ++j1) {
    const int s1 = j1 < n / 2 ? j1 : j1 - n;
    for (int j2 = 0; j2 < n; ++j2) {
      const int s2 = j2 < n / 2 ? j2 : j2 - n;
      if (std::abs(s1) <= max_mode && std::abs(s2) <= max_mode) {
        hat[grid.index(j1, j2)] = cplx(gauss(rng), gauss(rng));
      }
    }
  }
  ComplexField u(grid);
  grid.fft().backward(hat, u.values());
  u.normalize();
  return u;
}

ComplexField random_tangent(const ComplexField& u, std::mt19937_64& rng, const RandomFieldOptions& opts) {
  ComplexField d = random_smooth_field(u.grid(), rng, opts);
  const double overlap = inner(u, d).real() / u.norm_sq();
  d.axpy(-overlap, u);
  d.normalize();
  return d;
}

}  // namespace gpcollapse
