#include "gpcollapse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace gpcollapse {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int signed_index(int j, int n) { return j < n / 2 ? j : j - n; }

void require_same_grid(const ComplexField& u, const ComplexField& v) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("fields live on different grids");
}

// Applies a separable multiplier m(k1, k2) in Fourier space.
template <typename Multiplier>
ComplexField apply_multiplier(const ComplexField& u, Multiplier&& m) {
  const SpectralGrid& g = u.grid();
  std::vector<cplx> hat(g.size());
  g.fft().forward(u.values(), hat);
  const int n = g.n();
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) hat[g.index(j1, j2)] *= m(j1, j2);
  }
  ComplexField out(g);
  g.fft().backward(hat, out.values());
  return out;
}

}  // namespace

SpectralGrid::SpectralGrid(int n, double extent)
    : n_(n), extent_(extent), spacing_(0.0), fft_((is_power_of_two(n) && n >= 8) ? n : 8) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("SpectralGrid: n must be a power of two >= 8");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("SpectralGrid: extent must be positive");
  }
  spacing_ = 2.0 * extent / n;
  coords_.resize(n);
  k_.resize(n);
  k_odd_.resize(n);
  for (int i = 0; i < n; ++i) {
    coords_[i] = -extent + i * spacing_;
    const int js = signed_index(i, n);
    k_[i] = std::numbers::pi * js / extent;
    k_odd_[i] = (i == n / 2) ? 0.0 : k_[i];
  }
}

ComplexField::ComplexField(SpectralGrid grid)
    : grid_(std::move(grid)), values_(grid_.size(), cplx(0.0, 0.0)) {}

ComplexField::ComplexField(SpectralGrid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ComplexField: value count must equal n^2");
  }
}

double ComplexField::norm_sq() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * grid_.cell_area();
}

void ComplexField::normalize() {
  const double ns = norm_sq();
  if (!(ns > 0.0) || !std::isfinite(ns)) throw std::domain_error("cannot normalize a zero or non-finite field");
  const double inv = 1.0 / std::sqrt(ns);
  for (auto& v : values_) v *= inv;
}

ComplexField ComplexField::normalized() const {
  ComplexField out = *this;
  out.normalize();
  return out;
}

ComplexField ComplexField::conj() const {
  ComplexField out = *this;
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

ComplexField& ComplexField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) { return axpy(1.0, other); }

ComplexField& ComplexField::operator-=(const ComplexField& other) { return axpy(-1.0, other); }

ComplexField& ComplexField::axpy(cplx s, const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

ComplexField operator*(cplx s, ComplexField u) {
  u *= s;
  return u;
}

ComplexField operator+(ComplexField u, const ComplexField& v) {
  u += v;
  return u;
}

ComplexField operator-(ComplexField u, const ComplexField& v) {
  u -= v;
  return u;
}

cplx inner(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v);
  cplx s(0.0, 0.0);
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * u.grid().cell_area();
}

double distance(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v);
  double s = 0.0;
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * u.grid().cell_area());
}

double integrate(const SpectralGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("integrate: sample count must equal n^2");
  // pairwise-free Kahan sum keeps odd-symmetric integrands at rounding level
  double sum = 0.0;
  double c = 0.0;
  for (double s : samples) {
    const double y = s - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum * grid.cell_area();
}

std::vector<double> density(const ComplexField& u) {
  std::vector<double> rho(u.values().size());
  std::transform(u.values().begin(), u.values().end(), rho.begin(), [](cplx v) { return std::norm(v); });
  return rho;
}

std::vector<cplx> fourier_coefficients(const ComplexField& u) {
  std::vector<cplx> hat(u.grid().size());
  u.grid().fft().forward(u.values(), hat);
  return hat;
}

double fourier_norm_sq(const ComplexField& u) {
  const auto hat = fourier_coefficients(u);
  double s = 0.0;
  for (const auto& v : hat) s += std::norm(v);
  const double n2 = static_cast<double>(u.grid().size());
  return s * u.grid().cell_area() / n2;
}

double gradient_norm_sq(const ComplexField& u) {
  const SpectralGrid& g = u.grid();
  const auto hat = fourier_coefficients(u);
  const auto k = g.wavenumbers();
  const int n = g.n();
  double s = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      s += (k[j1] * k[j1] + k[j2] * k[j2]) * std::norm(hat[g.index(j1, j2)]);
    }
  }
  return s * g.cell_area() / static_cast<double>(g.size());
}

ComplexField derivative_x1(const ComplexField& u) {
  const auto k = u.grid().derivative_wavenumbers();
  return apply_multiplier(u, [&](int j1, int) { return cplx(0.0, k[j1]); });
}

ComplexField derivative_x2(const ComplexField& u) {
  const auto k = u.grid().derivative_wavenumbers();
  return apply_multiplier(u, [&](int, int j2) { return cplx(0.0, k[j2]); });
}

ComplexField laplacian(const ComplexField& u) {
  const auto k = u.grid().wavenumbers();
  return apply_multiplier(u, [&](int j1, int j2) { return cplx(-(k[j1] * k[j1] + k[j2] * k[j2]), 0.0); });
}

ComplexField apply_angular_momentum(const ComplexField& u) {
  const SpectralGrid& g = u.grid();
  const int n = g.n();
  const auto kd = g.derivative_wavenumbers();
  std::vector<cplx> hat(g.size());
  g.fft().forward(u.values(), hat);
  std::vector<cplx> d1_hat(g.size()), d2_hat(g.size());
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const auto idx = g.index(j1, j2);
      d1_hat[idx] = cplx(0.0, kd[j1]) * hat[idx];
      d2_hat[idx] = cplx(0.0, kd[j2]) * hat[idx];
    }
  }
  std::vector<cplx> d1(g.size()), d2(g.size());
  g.fft().backward(d1_hat, d1);
  g.fft().backward(d2_hat, d2);
  ComplexField out(g);
  auto o = out.values();
  const cplx i_unit(0.0, 1.0);
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = g.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = g.coordinate(i2);
      const auto idx = g.index(i1, i2);
      o[idx] = i_unit * (x2 * d1[idx] - x1 * d2[idx]);
    }
  }
  return out;
}

double angular_momentum(const ComplexField& u) { return inner(u, apply_angular_momentum(u)).real(); }

double position_moment(const ComplexField& u, double power) {
  const SpectralGrid& g = u.grid();
  const int n = g.n();
  double s = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = g.coordinate(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = g.coordinate(i2);
      const double r2 = x1 * x1 + x2 * x2;
      const double w = power == 2.0 ? r2 : std::pow(r2, 0.5 * power);
      s += w * std::norm(u.at(i1, i2));
    }
  }
  return s * g.cell_area();
}

double lp_integral(const ComplexField& u, double p) {
  double s = 0.0;
  for (const auto& v : u.values()) {
    const double m2 = std::norm(v);
    s += (p == 4.0) ? m2 * m2 : (p == 6.0 ? m2 * m2 * m2 : std::pow(m2, 0.5 * p));
  }
  return s * u.grid().cell_area();
}

Point center_of_mass(const ComplexField& u) {
  const SpectralGrid& g = u.grid();
  const int n = g.n();
  double m = 0.0, s1 = 0.0, s2 = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double rho = std::norm(u.at(i1, i2));
      m += rho;
      s1 += rho * g.coordinate(i1);
      s2 += rho * g.coordinate(i2);
    }
  }
  if (m == 0.0) return {};
  return {s1 / m, s2 / m};
}

double outer_annulus_mass(const ComplexField& u) {
  const SpectralGrid& g = u.grid();
  const int n = g.n();
  const double inner_edge = 0.9 * g.extent();
  double outer = 0.0, total = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double a1 = std::abs(g.coordinate(i1));
    for (int i2 = 0; i2 < n; ++i2) {
      const double rho = std::norm(u.at(i1, i2));
      total += rho;
      if (std::max(a1, std::abs(g.coordinate(i2))) >= inner_edge) outer += rho;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

double mass_radius(const ComplexField& u, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("mass_radius: fraction must lie in (0, 1)");
  const SpectralGrid& g = u.grid();
  const int n = g.n();
  std::vector<std::pair<double, double>> samples;
  samples.reserve(g.size());
  double total = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double r = std::hypot(g.coordinate(i1), g.coordinate(i2));
      const double rho = std::norm(u.at(i1, i2));
      samples.emplace_back(r, rho);
      total += rho;
    }
  }
  std::sort(samples.begin(), samples.end());
  // Cumulative mass as a piecewise-linear function of r through the sorted
  // sample radii; shells of equal radius are merged.
  const double target = fraction * total;
  double cum = 0.0, prev_r = 0.0, prev_cum = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double r = samples[i].first;
    double shell = 0.0;
    while (i < samples.size() && samples[i].first == r) shell += samples[i++].second;
    cum += shell;
    if (cum >= target) {
      if (cum == prev_cum) return r;
      const double t = (target - prev_cum) / (cum - prev_cum);
      return prev_r + t * (r - prev_r);
    }
    prev_r = r;
    prev_cum = cum;
  }
  return samples.back().first;
}

ComplexField dilate(const ComplexField& u, double ell, const SpectralGrid& target) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw std::invalid_argument("dilate: scale must be positive");
  const SpectralGrid& src = u.grid();
  const int ns = src.n();
  const int nt = target.n();
  const double L = src.extent();
  const auto hat = fourier_coefficients(u);
  const auto k = src.wavenumbers();

  // Basis E[p][j] = exp(i k_j (y_p + L)) with y_p = ell * x_p; the Nyquist
  // column uses the real cosine so the interpolant is real for real data.
  std::vector<cplx> basis(static_cast<std::size_t>(nt) * ns);
  std::vector<bool> inside(nt);
  for (int p = 0; p < nt; ++p) {
    const double y = ell * target.coordinate(p);
    inside[p] = (y >= -L && y < L);
    for (int j = 0; j < ns; ++j) {
      const double phase = k[j] * (y + L);
      basis[static_cast<std::size_t>(p) * ns + j] =
          (j == ns / 2) ? cplx(std::cos(phase), 0.0) : cplx(std::cos(phase), std::sin(phase));
    }
  }

  // G[j1][q] = sum_j2 hat[j1][j2] E[q][j2]
  std::vector<cplx> partial(static_cast<std::size_t>(ns) * nt);
  for (int j1 = 0; j1 < ns; ++j1) {
    for (int q = 0; q < nt; ++q) {
      cplx s(0.0, 0.0);
      const cplx* row = &hat[src.index(j1, 0)];
      const cplx* e = &basis[static_cast<std::size_t>(q) * ns];
      for (int j2 = 0; j2 < ns; ++j2) s += row[j2] * e[j2];
      partial[static_cast<std::size_t>(j1) * nt + q] = s;
    }
  }

  ComplexField out(target);
  auto o = out.values();
  const double norm = ell / static_cast<double>(src.size());
  for (int p = 0; p < nt; ++p) {
    const cplx* e = &basis[static_cast<std::size_t>(p) * ns];
    for (int q = 0; q < nt; ++q) {
      if (!inside[p] || !inside[q]) continue;
      cplx s(0.0, 0.0);
      for (int j1 = 0; j1 < ns; ++j1) s += e[j1] * partial[static_cast<std::size_t>(j1) * nt + q];
      o[target.index(p, q)] = s * norm;
    }
  }
  return out;
}

ComplexField dilate(const ComplexField& u, double ell) { return dilate(u, ell, u.grid()); }

ComplexField rescale_to_blowup(const ComplexField& u, double eps) { return rescale_to_blowup(u, eps, u.grid()); }

ComplexField rescale_to_blowup(const ComplexField& u, double eps, const SpectralGrid& target) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescale_to_blowup: eps must be positive");
  return dilate(u, std::sqrt(eps), target);
}

}  // namespace gpcollapse
