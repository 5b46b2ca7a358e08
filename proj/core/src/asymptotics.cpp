#include "gpcollapse/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

namespace gpcollapse {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired points");
  const auto m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_power_law: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: abscissae must not all coincide");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = ly[i] - (intercept + fit.exponent * lx[i]);
    ss += e * e;
  }
  fit.rms = std::sqrt(ss / m);
  fit.points = static_cast<int>(x.size());
  return fit;
}

bool ScanResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.converged; });
}

void fit_scan(ScanResult& scan) {
  std::vector<double> gaps, energies;
  scan.excluded = 0;
  for (const auto& r : scan.rows) {
    if (r.converged && r.energy_physical > 0.0) {
      gaps.push_back(r.gap);
      energies.push_back(r.energy_physical);
    } else {
      ++scan.excluded;
    }
  }
  scan.fitted = static_cast<int>(gaps.size()) >= kMinFitRows;
  if (!scan.fitted) return;
  const PowerLawFit fit = fit_power_law(gaps, energies);
  scan.fitted_exponent = fit.exponent;
  scan.fitted_constant = fit.constant;
  scan.fit_rms = fit.rms;
}

std::vector<double> ladder_from_gaps(double a_star, std::span<const double> gaps) {
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> ladder;
  for (double g : sorted) ladder.push_back(a_star - g);
  return ladder;
}

std::vector<double> geometric_gaps(double largest, double smallest, int count) {
  if (count < 2 || !(largest > smallest) || !(smallest > 0.0)) {
    throw std::invalid_argument("geometric_gaps: need count >= 2 and largest > smallest > 0");
  }
  std::vector<double> g(count);
  const double ratio = std::pow(smallest / largest, 1.0 / (count - 1));
  for (int k = 0; k < count; ++k) g[k] = largest * std::pow(ratio, k);
  g.back() = smallest;
  return g;
}

ScanResult collapse_scan(const GPParams& base, std::span<const double> ladder, const SolveConfig& cfg,
                         const RadialProfile& profile, bool keep_fields) {
  if (ladder.empty()) throw std::invalid_argument("collapse_scan: empty ladder");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] > ladder[i - 1])) throw std::invalid_argument("collapse_scan: ladder must be strictly increasing in a");
  }
  if (!(ladder.front() > 0.0) || !(ladder.back() < base.a_star)) {
    throw std::invalid_argument("collapse_scan: every rung needs 0 < a < a_star");
  }
  const GNConstants k = compute_constants(profile, base.s, base.c0);
  ScanResult scan;
  scan.base = base;
  scan.target_exponent = k.energy_exponent();
  scan.target_constant = k.energy_constant();

  SolveConfig rung_cfg = cfg;
  rung_cfg.continuation.clear();
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    GPParams p = base;
    p.a = ladder[i];
    p.scale = Scale::blowup;
    p.validate();
    const SolveReport rep = minimize(p, rung_cfg, profile);

    ScanRow row;
    row.a = p.a;
    row.gap = p.a_star - p.a;
    row.eps = p.epsilon();
    row.omega = p.omega;
    row.F = rep.breakdown.total;
    row.F_over_eps2 = row.F / (row.eps * row.eps);
    row.energy_physical = rep.energy_physical;
    row.mu = rep.mu;
    row.width50 = mass_radius(rep.field, 0.5) * p.length_scale();
    row.distance_to_QN = rep.phase_aligned_distance;
    row.residual = rep.residual;
    row.iters = rep.iters;
    row.converged = rep.converged;
    if (keep_fields) row.field = rep.field;
    scan.rows.push_back(std::move(row));

    // Warm start the next rung from this minimizer (same blow-up grid).
    rung_cfg.init = InitKind::provided;
    rung_cfg.initial = rep.field;
  }
  fit_scan(scan);
  return scan;
}

RotationSweep rotation_sweep(const GPParams& base, std::span<const double> omegas, std::span<const double> ladder,
                             const SolveConfig& cfg, const RadialProfile& profile, int jobs, bool keep_fields) {
  RotationSweep sweep;
  sweep.omegas.assign(omegas.begin(), omegas.end());
  auto zero_it = std::find(sweep.omegas.begin(), sweep.omegas.end(), 0.0);
  if (zero_it == sweep.omegas.end()) sweep.omegas.insert(sweep.omegas.begin(), 0.0);
  const std::size_t zero_index =
      static_cast<std::size_t>(std::find(sweep.omegas.begin(), sweep.omegas.end(), 0.0) - sweep.omegas.begin());

  sweep.scans.resize(sweep.omegas.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < sweep.omegas.size(); start += width) {
    std::vector<std::future<ScanResult>> batch;
    const std::size_t stop = std::min(start + width, sweep.omegas.size());
    for (std::size_t k = start; k < stop; ++k) {
      GPParams p = base;
      p.omega = sweep.omegas[k];
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                 [p, ladder, &cfg, &profile, keep_fields] {
                                   return collapse_scan(p, ladder, cfg, profile, keep_fields);
                                 }));
    }
    for (std::size_t k = start; k < stop; ++k) sweep.scans[k] = batch[k - start].get();
  }

  const ScanResult& still = sweep.scans[zero_index];
  const double tol = 10.0 * cfg.residual_tol;
  sweep.sandwich_holds = true;
  sweep.sandwich.resize(sweep.omegas.size());
  for (std::size_t k = 0; k < sweep.omegas.size(); ++k) {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const SandwichRecord s = sandwich_bounds(sweep.omegas[k], sweep.scans[k].rows[i].F, still.rows[i].F, tol);
      sweep.sandwich[k].push_back(s);
      sweep.sandwich_holds = sweep.sandwich_holds && s.holds;
    }
  }
  sweep.spread.resize(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& scan : sweep.scans) {
      lo = std::min(lo, scan.rows[i].F_over_eps2);
      hi = std::max(hi, scan.rows[i].F_over_eps2);
    }
    sweep.spread[i] = (hi - lo) / std::abs(still.rows[i].F_over_eps2);
  }
  return sweep;
}

ConvergenceRecord profile_convergence(const ScanResult& scan, double threshold, double slack) {
  if (scan.rows.empty()) throw std::invalid_argument("profile_convergence: empty scan");
  ConvergenceRecord rec;
  rec.threshold = threshold;
  for (const auto& r : scan.rows) rec.distances.push_back(r.distance_to_QN);
  rec.monotone = true;
  for (std::size_t i = 1; i < rec.distances.size(); ++i) {
    if (rec.distances[i] > (1.0 + slack) * rec.distances[i - 1]) {
      rec.monotone = false;
      rec.violations.push_back(static_cast<int>(i));
    }
  }
  rec.final_distance = rec.distances.back();
  rec.passed = rec.monotone && rec.final_distance < threshold;
  return rec;
}

WidthRatio width_ratio(const ScanResult& scan, double gap_hi, double gap_lo) {
  auto find = [&](double gap) -> const ScanRow& {
    for (const auto& r : scan.rows) {
      if (std::abs(r.gap - gap) <= 1e-9 * std::max(1.0, gap)) return r;
    }
    throw std::invalid_argument("width_ratio: no rung with the requested gap");
  };
  const ScanRow& hi = find(gap_hi);
  const ScanRow& lo = find(gap_lo);
  WidthRatio w;
  w.measured = hi.width50 / lo.width50;
  w.expected = std::pow(gap_hi / gap_lo, 1.0 / (scan.base.s + 2.0));
  w.relative_error = std::abs(w.measured - w.expected) / w.expected;
  return w;
}

HartreeBoundRecord hartree_upper_bound_check(const InteractionSpec& w, double a, const RadialProfile& profile,
                                             double omega, const HartreeGridOptions& grid_opts) {
  w.validate();
  const GNConstants k = compute_constants(profile);
  GPParams p;
  p.a_star = k.a_star;
  p.a = a;
  p.omega = omega;
  p.scale = Scale::physical;
  p.validate();

  const SpectralGrid grid(grid_opts.n, grid_opts.extent * p.length_scale());
  const ComplexField qn = blowup_profile(grid, profile, a);

  HartreeBoundRecord rec;
  rec.a = a;
  rec.gap = k.a_star - a;
  rec.big_n = w.big_n;
  rec.beta = w.beta;
  rec.e_gp = gp_energy(qn, p).total;
  rec.e_hartree = hartree_energy(qn, p, w).total;
  rec.energy_gap = rec.e_hartree - rec.e_gp;
  const double n_beta = std::pow(w.big_n, -w.beta);
  rec.bound = 2.0 * k.a_star * w.first_absolute_moment() * n_beta * std::pow(rec.gap, -1.25);
  rec.sobolev_product = std::sqrt(gradient_norm_sq(qn)) * std::sqrt(lp_integral(qn, 6.0));
  const double smeared_gap = std::abs(smeared_quartic(qn, 0.0) - smeared_quartic(qn, w.width()));
  rec.measured_constant = smeared_gap / (n_beta * rec.sobolev_product);
  rec.holds = rec.energy_gap <= rec.bound;
  return rec;
}

}  // namespace gpcollapse
