#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "gpcollapse/field_io.hpp"
#include "gpcollapse/grid.hpp"
#include "gpcollapse/random_fields.hpp"

using namespace gpcollapse;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField gaussian(const SpectralGrid& g) {
  return ComplexField::from_function(g, [](double x1, double x2) {
    return std::exp(-0.5 * (x1 * x1 + x2 * x2)) / std::sqrt(kPi);
  });
}

ComplexField vortex(const SpectralGrid& g) {
  return ComplexField::from_function(g, [](double x1, double x2) {
    return cplx(x1, x2) * std::exp(-0.5 * (x1 * x1 + x2 * x2)) / std::sqrt(kPi);
  });
}

}  // namespace

TEST(SpectralGrid, RejectsBadSizes) {
  EXPECT_THROW(SpectralGrid(4, 1.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid(96, 1.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid(64, 0.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid(64, -2.0), std::invalid_argument);
  EXPECT_NO_THROW(SpectralGrid(8, 1.0));
}

TEST(SpectralGrid, SpacingAndWavenumbers) {
  const SpectralGrid g(32, 3.0);
  EXPECT_DOUBLE_EQ(g.spacing() * g.n(), 2.0 * g.extent());
  const auto k = g.wavenumbers();
  for (int j = 1; j < g.n() / 2; ++j) EXPECT_DOUBLE_EQ(k[j], -k[g.n() - j]);
  EXPECT_DOUBLE_EQ(k[g.n() / 2], -kPi * (g.n() / 2) / g.extent());
  EXPECT_EQ(g.derivative_wavenumbers()[g.n() / 2], 0.0);
}

TEST(Integrate, ConstantGivesBoxArea) {
  for (int n : {8, 64, 128}) {
    const SpectralGrid g(n, 4.0);
    const std::vector<double> ones(g.size(), 1.0);
    EXPECT_NEAR(integrate(g, ones), 64.0, 1e-12);
  }
}

TEST(Integrate, GaussianDensity) {
  const SpectralGrid g(128, 8.0);
  EXPECT_NEAR(integrate(g, density(gaussian(g))), 1.0, 1e-10);
}

TEST(Integrate, OddSamplesVanish) {
  const SpectralGrid g(128, 8.0);
  std::vector<double> s(g.size());
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double x1 = g.coordinate(i1), x2 = g.coordinate(i2);
      s[g.index(i1, i2)] = x1 * std::exp(-(x1 * x1 + x2 * x2));
    }
  }
  EXPECT_NEAR(integrate(g, s), 0.0, 1e-12);
}

TEST(GradientNormSq, GaussianAndConstant) {
  const SpectralGrid g(128, 8.0);
  EXPECT_NEAR(gradient_norm_sq(gaussian(g)), 1.0, 1e-8);
  const ComplexField c(g, std::vector<cplx>(g.size(), cplx(0.3, -0.1)));
  EXPECT_NEAR(gradient_norm_sq(c), 0.0, 1e-20);
}

TEST(GradientNormSq, LatticePlaneWave) {
  const SpectralGrid g(64, 5.0);
  const double k1 = 3.0 * kPi / g.extent();
  const cplx amp(0.7, 0.2);
  const auto u = ComplexField::from_function(g, [&](double x1, double) { return amp * std::polar(1.0, k1 * x1); });
  EXPECT_NEAR(gradient_norm_sq(u), k1 * k1 * g.area() * std::norm(amp), 1e-10);
  // The spectral derivative of a lattice plane wave is exact.
  const auto d = derivative_x1(u);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d[i] - cplx(0.0, k1) * u[i]));
  EXPECT_LT(err, 1e-12);
}

TEST(AngularMomentum, RealFieldsCarryNone) {
  const SpectralGrid g(128, 8.0);
  std::mt19937_64 rng(3);
  EXPECT_NEAR(angular_momentum(gaussian(g)), 0.0, 1e-10);
  RandomFieldOptions opts;
  opts.complex_valued = false;
  opts.max_wavenumber = 0.0;
  for (int t = 0; t < 5; ++t) EXPECT_NEAR(angular_momentum(random_smooth_field(g, rng, opts)), 0.0, 1e-10);
}

TEST(AngularMomentum, OscillatorVortex) {
  const SpectralGrid g(128, 8.0);
  const auto u1 = vortex(g);
  EXPECT_NEAR(u1.norm_sq(), 1.0, 1e-10);
  EXPECT_NEAR(angular_momentum(u1), 1.0, 1e-8);
  EXPECT_NEAR(angular_momentum(u1.conj()), -1.0, 1e-8);
}

TEST(AngularMomentum, PhaseInvariant) {
  const SpectralGrid g(64, 8.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int t = 0; t < 10; ++t) {
    const auto u = random_smooth_field(g, rng);
    const double l = angular_momentum(u);
    EXPECT_NEAR(angular_momentum(std::polar(1.0, angle(rng)) * u), l, 1e-12);
  }
}

TEST(Parseval, RandomBandLimitedFields) {
  const SpectralGrid g(64, 6.0);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto u = random_band_limited_field(g, rng);
    EXPECT_NEAR(fourier_norm_sq(u) / u.norm_sq(), 1.0, 1e-12);
  }
}

TEST(Normalize, UnitNormAndZeroField) {
  const SpectralGrid g(64, 6.0);
  std::mt19937_64 rng(2);
  auto u = random_band_limited_field(g, rng);
  u *= cplx(3.7, 1.0);
  u.normalize();
  EXPECT_NEAR(u.norm_sq(), 1.0, 1e-12);
  ComplexField zero(g);
  EXPECT_THROW(zero.normalize(), std::domain_error);
}

TEST(RescaleToBlowup, IdentityAtOne) {
  const SpectralGrid g(128, 8.0);
  const auto u = gaussian(g);
  EXPECT_LT(distance(rescale_to_blowup(u, 1.0), u), 1e-10);
}

TEST(RescaleToBlowup, GaussianClosedForm) {
  const SpectralGrid g(128, 8.0);
  const auto v = rescale_to_blowup(gaussian(g), 4.0);
  double err = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double x1 = g.coordinate(i1), x2 = g.coordinate(i2);
      const double expected = 2.0 / std::sqrt(kPi) * std::exp(-2.0 * (x1 * x1 + x2 * x2));
      err = std::max(err, std::abs(v.at(i1, i2) - expected));
    }
  }
  EXPECT_LT(err, 1e-8);
}

TEST(RescaleToBlowup, PreservesNorm) {
  const SpectralGrid g(128, 10.0);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    const auto u = random_smooth_field(g, rng);
    // Widening by 2 needs a box twice as large to hold the mass.
    EXPECT_NEAR(rescale_to_blowup(u, 0.25, SpectralGrid(128, 20.0)).norm_sq(), u.norm_sq(), 1e-8);
  }
}

TEST(RescaleToBlowup, RejectsNonPositive) {
  const SpectralGrid g(16, 2.0);
  const ComplexField u(g);
  EXPECT_THROW(rescale_to_blowup(u, 0.0), std::invalid_argument);
  EXPECT_THROW(rescale_to_blowup(u, -1.0), std::invalid_argument);
}

TEST(Moments, GaussianMomentsAndMassRadius) {
  const SpectralGrid g(128, 8.0);
  const auto u = gaussian(g);
  EXPECT_NEAR(position_moment(u, 2.0), 1.0, 1e-10);
  EXPECT_NEAR(lp_integral(u, 4.0), 1.0 / (2.0 * kPi), 1e-10);
  // Mass inside radius R is 1 - exp(-R^2).
  EXPECT_NEAR(mass_radius(u, 0.5), std::sqrt(std::log(2.0)), 3e-2);
  const SpectralGrid fine(512, 8.0);
  EXPECT_NEAR(mass_radius(gaussian(fine), 0.5), std::sqrt(std::log(2.0)), 1e-2);
  EXPECT_LT(outer_annulus_mass(u), 1e-10);
  const auto c = center_of_mass(u);
  EXPECT_NEAR(c.x1, 0.0, 1e-12);
  EXPECT_NEAR(c.x2, 0.0, 1e-12);
}

TEST(FieldIo, BinaryRoundTrip) {
  const SpectralGrid g(32, 2.5);
  std::mt19937_64 rng(1);
  const auto u = random_band_limited_field(g, rng);
  std::stringstream buf;
  write_field_binary(u, buf);
  EXPECT_EQ(buf.str().size(), 16 + 16 * g.size());
  const auto v = read_field_binary(buf);
  EXPECT_EQ(v.grid(), g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(u[i], v[i]);
}

TEST(FieldIo, CsvLayout) {
  const SpectralGrid g(8, 1.0);
  const auto u = ComplexField::from_function(g, [](double x1, double x2) { return cplx(x1, x2); });
  std::stringstream buf;
  write_field_csv(u, buf);
  std::string line;
  std::getline(buf, line);
  EXPECT_EQ(line.rfind("# schema=", 0), 0u);
  std::getline(buf, line);
  EXPECT_EQ(line, "x1,x2,re,im");
  std::getline(buf, line);
  EXPECT_EQ(line, "-1,-1,-1,-1");
  int rows = 1;
  while (std::getline(buf, line)) {
    EXPECT_NE(line.back(), ',');
    ++rows;
  }
  EXPECT_EQ(rows, 64);
}

TEST(FieldIo, SeventeenDigits) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(x), "0.30000000000000004");
}
