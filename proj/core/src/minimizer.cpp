#include "gpcollapse/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace gpcollapse {
namespace {

// Objective on the unit sphere. value_and_gradient returns the value and
// writes g with d/dt f(u + t d) = 2 Re<g, d>.
struct Objective {
  std::function<double(const ComplexField&)> value;
  std::function<double(const ComplexField&, ComplexField&)> value_and_gradient;
  std::function<void(ComplexField& r, const ComplexField& u, double shift)> precondition;
};

struct DescentOptions {
  int max_iters = 1000;
  double residual_tol = 1e-6;
  double step0 = 1.0;
  int history_stride = 1;
};

struct DescentResult {
  ComplexField u;
  double value = 0.0;
  double residual = 0.0;
  double initial_residual = 0.0;
  int iters = 0;
  bool converged = false;
  std::string status;
  std::vector<IterationRecord> history;
};

constexpr double kMaxStep = 64.0;
constexpr double kMinStep = 1e-14;
// Energies are differences of terms of size ~|mu|; changes below this
// fraction of |mu| are indistinguishable from summation noise.
constexpr double kEnergyNoise = 1e-13;

double tangent_residual(const ComplexField& u, const ComplexField& g) {
  ComplexField r = g;
  r.axpy(-inner(u, g).real(), u);
  return std::sqrt(r.norm_sq());
}

DescentResult descend(ComplexField u, const Objective& obj, const DescentOptions& opts) {
  DescentResult res{.u = u};
  u.normalize();
  ComplexField g(u.grid());
  double f = obj.value_and_gradient(u, g);
  double tau = opts.step0;
  const int stride = std::max(1, opts.history_stride);

  for (int it = 0;; ++it) {
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg << "non-finite energy at iteration " << it << " (step " << tau << ")";
      throw NumericalError(msg.str());
    }
    const double mu = -inner(u, g).real();
    ComplexField r = g;
    r.axpy(mu, u);
    const double residual = std::sqrt(r.norm_sq());
    if (it == 0) res.initial_residual = residual;
    const bool done = residual <= opts.residual_tol;
    if (it % stride == 0 || done || it == opts.max_iters) res.history.push_back({it, f, residual, tau});
    res.iters = it;
    res.residual = residual;
    res.value = f;
    if (done) {
      res.converged = true;
      res.status = "converged";
      break;
    }
    if (it == opts.max_iters) {
      res.status = "iteration limit reached";
      break;
    }

    // Preconditioned direction, then made tangent: Re<u, d> = 0.
    ComplexField d = r;
    obj.precondition(d, u, std::max(std::abs(mu), 1.0));
    d.axpy(-inner(u, d).real(), u);
    const double slope = 2.0 * inner(r, d).real();
    if (!(slope > 0.0)) {
      res.status = "preconditioned direction is not a descent direction";
      break;
    }

    const double noise = kEnergyNoise * std::max(std::abs(mu), 1.0);
    bool accepted = false;
    bool have_gradient = false;
    while (tau >= kMinStep) {
      ComplexField trial = u;
      trial.axpy(-tau, d);
      trial.normalize();
      const double ft = obj.value(trial);
      if (std::isfinite(ft) && ft < f) {
        u = std::move(trial);
        accepted = true;
        break;
      }
      if (std::isfinite(ft) && ft < f + noise) {
        // The energy cannot resolve this step; take it only if it lowers
        // the residual.
        ComplexField gt(u.grid());
        const double ft2 = obj.value_and_gradient(trial, gt);
        if (tangent_residual(trial, gt) < residual) {
          u = std::move(trial);
          g = std::move(gt);
          f = ft2;
          accepted = have_gradient = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) {
      res.status = "line search stalled";
      break;
    }
    if (!have_gradient) f = obj.value_and_gradient(u, g);
    tau = std::min(tau * 1.5, kMaxStep);
  }
  res.u = std::move(u);
  return res;
}

// P = P_V^(1/2) P_lap P_V^(1/2), P_lap = (shift - Lap)^(-1),
// P_V = (1 + V / shift)^(-1): tames both the high wavenumbers and the
// large trap values near the box edge.
void combined_preconditioner(ComplexField& r, std::span<const double> potential, double shift) {
  const SpectralGrid& g = r.grid();
  auto vals = r.values();
  std::vector<double> pv(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    pv[i] = 1.0 / std::sqrt(1.0 + potential[i] / shift);
    vals[i] *= pv[i];
  }
  std::vector<cplx> hat(g.size());
  g.fft().forward(vals, hat);
  const auto k = g.wavenumbers();
  const int n = g.n();
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) hat[g.index(j1, j2)] *= shift / (shift + k[j1] * k[j1] + k[j2] * k[j2]);
  }
  g.fft().backward(hat, vals);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= pv[i];
}

}  // namespace

void SolveConfig::validate() const {
  if (!(residual_tol > 0.0)) throw std::invalid_argument("SolveConfig: residual_tol must be positive");
  if (!(step0 > 0.0)) throw std::invalid_argument("SolveConfig: step0 must be positive");
  if (max_iters < 0) throw std::invalid_argument("SolveConfig: max_iters must be nonnegative");
  if (!(extent > 0.0)) throw std::invalid_argument("SolveConfig: extent must be positive");
}

ComplexField initial_field(const SpectralGrid& grid, const GPParams& p, const SolveConfig& cfg,
                           const RadialProfile& profile) {
  switch (cfg.init) {
    case InitKind::provided: {
      if (!cfg.initial) throw std::invalid_argument("SolveConfig: init=provided without an initial field");
      if (!(cfg.initial->grid() == grid)) throw std::invalid_argument("SolveConfig: initial field is on a different grid");
      const auto& vals = cfg.initial->values();
      const auto bad = std::find_if(vals.begin(), vals.end(), [](cplx z) { return !std::isfinite(std::norm(z)); });
      if (bad != vals.end()) {
        std::ostringstream msg;
        msg << "initial field is not finite at sample " << (bad - vals.begin());
        throw NumericalError(msg.str());
      }
      return cfg.initial->normalized();
    }
    case InitKind::profile:
      if (p.scale == Scale::blowup) return blowup_profile_rescaled(grid, profile, p.s, p.c0);
      return blowup_profile(grid, profile, p.a, p.s, p.c0);
    case InitKind::gaussian:
    default: {
      // Harmonic-oscillator ground state expressed in the solve's units.
      const double width = p.scale == Scale::blowup ? 1.0 / p.length_scale() : 1.0;
      const double w = std::min(width, grid.extent() / 4.0);
      auto u = ComplexField::from_function(grid, [w](double x1, double x2) {
        return std::exp(-(x1 * x1 + x2 * x2) / (2.0 * w * w));
      });
      u.normalize();
      return u;
    }
  }
}

PhaseAlignment phase_align(const ComplexField& u, const ComplexField& q) {
  const cplx overlap = inner(q, u);
  PhaseAlignment out;
  const double scale = std::sqrt(u.norm_sq() * q.norm_sq());
  if (std::abs(overlap) <= 1e-14 * std::max(scale, 1e-300)) {
    out.theta = 0.0;
    out.degenerate = true;
  } else {
    out.theta = std::arg(overlap);
  }
  ComplexField aligned = u;
  aligned *= std::polar(1.0, -out.theta);
  out.distance = distance(aligned, q);
  return out;
}

SolveReport minimize(const GPParams& p, const SolveConfig& cfg, const RadialProfile& profile) {
  p.validate();
  cfg.validate();
  const SpectralGrid grid(cfg.n, cfg.extent);
  ComplexField u = initial_field(grid, p, cfg, profile);

  std::vector<double> ladder = cfg.continuation;
  ladder.push_back(p.a);
  DescentResult last{.u = u};
  GPParams rung = p;
  int total_iters = 0;
  std::vector<IterationRecord> history;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    rung.a = ladder[k];
    rung.validate();
    const GPFunctional functional(grid, rung.coefficients());
    const auto potential = functional.potential();
    Objective obj{
        [&](const ComplexField& v) { return functional.energy(v).total; },
        [&](const ComplexField& v, ComplexField& g) { return functional.energy_and_gradient(v, g).total; },
        [&](ComplexField& r, const ComplexField&, double shift) { combined_preconditioner(r, potential, shift); }};
    DescentOptions opts{cfg.max_iters, cfg.residual_tol, cfg.step0, cfg.history_stride};
    last = descend(u, obj, opts);
    u = last.u;
    for (auto rec : last.history) {
      rec.iter += total_iters;
      history.push_back(rec);
    }
    total_iters += last.iters;
  }

  const GPFunctional functional(grid, p.coefficients());
  ComplexField hu(grid);
  const EnergyBreakdown e = functional.energy_and_gradient(u, hu);
  // Far from a_* the physical Q_N can be wider than the box; the distance is
  // then not meaningful and is reported as NaN.
  PhaseAlignment align{.theta = 0.0, .distance = std::numeric_limits<double>::quiet_NaN(), .degenerate = true};
  try {
    const ComplexField reference = p.scale == Scale::blowup ? blowup_profile_rescaled(grid, profile, p.s, p.c0)
                                                            : blowup_profile(grid, profile, p.a, p.s, p.c0);
    align = phase_align(u, reference);
  } catch (const SupportOverflow&) {
  }

  SolveReport rep{.field = u};
  rep.breakdown = e;
  rep.mu = lagrange_multiplier(u, hu);
  rep.mu_identity = e.interaction - e.total;
  rep.breakdown.mu = rep.mu;
  rep.residual = last.residual;
  rep.initial_residual = history.empty() ? last.initial_residual : history.front().residual;
  rep.iters = total_iters;
  rep.converged = last.converged;
  rep.status = last.status;
  rep.phase_aligned_distance = align.distance;
  rep.theta = align.theta;
  rep.energy_physical = p.scale == Scale::blowup ? e.total / p.energy_factor() : e.total;
  rep.drift = center_of_mass(u);
  rep.outer_mass = outer_annulus_mass(u);
  rep.history = std::move(history);
  return rep;
}

SandwichRecord sandwich_bounds(double omega, double f_omega, double f_zero, double tol) {
  SandwichRecord s;
  s.omega = omega;
  s.f_omega = f_omega;
  s.f_zero = f_zero;
  s.lower = std::sqrt(1.0 - omega * omega) * f_zero;
  s.tol = tol;
  s.holds = (s.lower - tol <= f_omega) && (f_omega <= f_zero + tol);
  return s;
}

SandwichRecord sandwich_check(const GPParams& p, const SolveReport& report, const SolveConfig& cfg,
                              const RadialProfile& profile) {
  GPParams still = p;
  still.omega = 0.0;
  const SolveReport zero = minimize(still, cfg, profile);
  return sandwich_bounds(p.omega, report.breakdown.total, zero.breakdown.total, 10.0 * cfg.residual_tol);
}

double tail_decay_rate(const ComplexField& u, double r_lo, double r_hi) {
  if (!(r_hi > r_lo)) throw std::invalid_argument("tail_decay_rate: need r_hi > r_lo");
  const SpectralGrid& g = u.grid();
  const int samples = 9;
  std::vector<double> radii(samples), logs(samples);
  for (int k = 0; k < samples; ++k) {
    const double R = r_lo + (r_hi - r_lo) * k / (samples - 1);
    double outside = 0.0;
    for (int i1 = 0; i1 < g.n(); ++i1) {
      for (int i2 = 0; i2 < g.n(); ++i2) {
        if (std::hypot(g.coordinate(i1), g.coordinate(i2)) > R) outside += std::norm(u.at(i1, i2));
      }
    }
    radii[k] = R;
    logs[k] = std::log(std::max(outside * g.cell_area(), 1e-300));
  }
  double mr = 0.0, ml = 0.0;
  for (int k = 0; k < samples; ++k) {
    mr += radii[k];
    ml += logs[k];
  }
  mr /= samples;
  ml /= samples;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < samples; ++k) {
    num += (radii[k] - mr) * (logs[k] - ml);
    den += (radii[k] - mr) * (radii[k] - mr);
  }
  return -num / den;
}

GNQuotientResult minimize_gn_quotient(const ComplexField& start, const GNQuotientConfig& cfg) {
  const SpectralGrid& grid = start.grid();
  const std::vector<double> no_potential(grid.size(), 0.0);

  auto value = [](const ComplexField& v) { return std::log(gn_quotient(v)); };
  // d log J = dK/K + dM/M - dP/P, so g = -Lap u / K + u / M - 2 |u|^2 u / P.
  auto value_and_gradient = [&](const ComplexField& v, ComplexField& g) {
    const double kin = gradient_norm_sq(v);
    const double mass = v.norm_sq();
    const double quart = lp_integral(v, 4.0);
    g = laplacian(v);
    auto gv = g.values();
    const auto vv = v.values();
    for (std::size_t i = 0; i < gv.size(); ++i) {
      gv[i] = -gv[i] / kin + vv[i] / mass - 2.0 * std::norm(vv[i]) * vv[i] / quart;
    }
    return std::log(kin * mass / quart);
  };
  auto precondition = [&](ComplexField& r, const ComplexField& v, double) {
    // J is scale invariant; measure wavenumbers against the field's own
    // kinetic scale so the preconditioner follows any drift in width.
    const double kin = gradient_norm_sq(v);
    combined_preconditioner(r, no_potential, std::max(kin, 1e-3));
    // The preconditioned direction picks up a component along the dilation
    // generator x.grad v + v, a flat direction of J; following it lets the
    // width drift until the field feels the periodic box.
    ComplexField dil = v;
    const auto d1 = derivative_x1(v);
    const auto d2 = derivative_x2(v);
    auto dv = dil.values();
    for (int i1 = 0; i1 < grid.n(); ++i1) {
      const double x1 = grid.coordinate(i1);
      for (int i2 = 0; i2 < grid.n(); ++i2) {
        const auto idx = grid.index(i1, i2);
        dv[idx] += x1 * d1[idx] + grid.coordinate(i2) * d2[idx];
      }
    }
    const double dd = dil.norm_sq();
    if (dd > 0.0) r.axpy(-inner(dil, r).real() / dd, dil);
  };

  Objective obj{value, value_and_gradient, precondition};
  DescentOptions opts{cfg.max_iters, cfg.residual_tol, cfg.step0, 1 << 30};
  DescentResult d = descend(start, obj, opts);
  GNQuotientResult out{.field = d.u};
  out.quotient = gn_quotient(d.u);
  out.a_star = 2.0 * out.quotient;
  out.iters = d.iters;
  out.converged = d.converged;
  out.residual = d.residual;
  out.status = d.status;
  return out;
}

}  // namespace gpcollapse
