#pragma once

#include <random>

#include "gpcollapse/grid.hpp"

namespace gpcollapse {

/// Knobs for random smooth localized fields: a superposition of Gaussian
/// bumps with random complex amplitudes and a random plane-wave phase.
struct RandomFieldOptions {
  int max_bumps = 3;
  double max_center = 1.5;    // |center| bound, per coordinate
  double min_width = 0.6;
  double max_width = 1.6;
  double max_wavenumber = 1.5;  // plane-wave modulation bound
  bool complex_valued = true;
};

/// Normalized smooth field concentrated well inside the box.
ComplexField random_smooth_field(const SpectralGrid& grid, std::mt19937_64& rng,
                                 const RandomFieldOptions& opts = {});

/// Normalized trigonometric polynomial with random coefficients on the modes
/// |j'| <= max_mode (periodic, not localized).
ComplexField random_band_limited_field(const SpectralGrid& grid, std::mt19937_64& rng, int max_mode = 6);

/// Random direction tangent to the unit sphere at u: Re<u, d> = 0, ||d|| = 1.
ComplexField random_tangent(const ComplexField& u, std::mt19937_64& rng, const RandomFieldOptions& opts = {});

}  // namespace gpcollapse
