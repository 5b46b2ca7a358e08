#include "gpcollapse/profile.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gpcollapse {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kSeriesStart = 1e-4;
constexpr double kAbsTol = 1e-15;
constexpr double kRelTol = 1e-13;

// y = (Q, Q') in r.
struct Outward {
  void operator()(const State& y, State& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -y[1] / r + y[0] - y[0] * y[0] * y[0];
  }
};

// Same equation in t = -r so the integrator always runs forward.
struct Inward {
  void operator()(const State& y, State& dy, double t) const {
    const double r = -t;
    dy[0] = -y[1];
    dy[1] = -(-y[1] / r + y[0] - y[0] * y[0] * y[0]);
  }
};

// Regular expansion Q = q0 + c2 r^2 + c4 r^4 about the origin.
State series_start(double q0) {
  const double c2 = (q0 - q0 * q0 * q0) / 4.0;
  const double c4 = (1.0 - 3.0 * q0 * q0) * c2 / 16.0;
  const double r = kSeriesStart;
  return {q0 + c2 * r * r + c4 * r * r * r * r, 2.0 * c2 * r + 4.0 * c4 * r * r * r};
}

auto make_stepper(double abs_tol = kAbsTol) {
  return odeint::make_dense_output(abs_tol, kRelTol, odeint::runge_kutta_dopri5<State>());
}

// Node sampling lands a step on every node, so the samples carry the
// integrator's local accuracy rather than that of the dense interpolant.
auto make_node_stepper(double abs_tol = kAbsTol) {
  return odeint::make_controlled(abs_tol, kRelTol, odeint::runge_kutta_dopri5<State>());
}

// Integrates the outward problem and records (Q, Q') at the given radii.
std::vector<State> sample_outward(double q0, const std::vector<double>& radii) {
  std::vector<State> out;
  out.reserve(radii.size());
  std::vector<double> times;
  times.reserve(radii.size() + 1);
  times.push_back(kSeriesStart);
  times.insert(times.end(), radii.begin(), radii.end());
  State y = series_start(q0);
  bool first = true;
  odeint::integrate_times(make_node_stepper(), Outward{}, y, times.begin(), times.end(), 1e-3,
                          [&](const State& s, double) {
                            if (first) {
                              first = false;
                              return;
                            }
                            out.push_back(s);
                          });
  return out;
}

// Inward solution started as amp * K0 at r_far; returns samples at the radii
// (given in increasing order).
std::vector<State> sample_inward(double amp, double r_far, const std::vector<double>& radii) {
  std::vector<double> times;
  times.reserve(radii.size() + 1);
  times.push_back(-r_far);
  for (auto it = radii.rbegin(); it != radii.rend(); ++it) times.push_back(-*it);
  State y = {amp * std::cyl_bessel_k(0.0, r_far), -amp * std::cyl_bessel_k(1.0, r_far)};
  std::vector<State> rev;
  rev.reserve(radii.size());
  bool first = true;
  // The tail is far below any fixed absolute tolerance at large r_far but
  // never changes sign, so step control is purely relative.
  odeint::integrate_times(make_node_stepper(0.0), Inward{}, y, times.begin(), times.end(), 1e-3,
                          [&](const State& s, double) {
                            if (first) {
                              first = false;
                              return;
                            }
                            rev.push_back(s);
                          });
  return {rev.rbegin(), rev.rend()};
}

}  // namespace

RadialProfile::RadialProfile(double dr, std::vector<double> q, std::vector<double> dq, double q0)
    : dr_(dr), q_(std::move(q)), dq_(std::move(dq)), q0_(q0), mass_(0.0) {
  if (!(dr > 0.0)) throw std::invalid_argument("RadialProfile: node spacing must be positive");
  if (q_.size() != dq_.size() || q_.size() < 9 || (q_.size() - 1) % 2 != 0) {
    throw std::invalid_argument("RadialProfile: need an even number (>= 8) of intervals");
  }
  mass_ = moment(0.0);
}

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  const double last = r_max();
  if (r >= last) return r == last ? q_.back() : 0.0;
  const auto i = static_cast<std::size_t>(r / dr_);
  const double t = r / dr_ - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * q_[i] + h10 * dr_ * dq_[i] + h01 * q_[i + 1] + h11 * dr_ * dq_[i + 1];
}

double RadialProfile::simpson(const std::vector<double>& f) const {
  const std::size_t m = f.size() - 1;
  double s = f.front() + f.back();
  for (std::size_t i = 1; i < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * dr_ / 3.0;
}

double RadialProfile::moment(double power) const {
  std::vector<double> f(q_.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double ri = r(i);
    f[i] = (ri == 0.0) ? 0.0 : std::pow(ri, power + 1.0) * q_[i] * q_[i];
  }
  return 2.0 * std::numbers::pi * simpson(f);
}

double RadialProfile::gradient_norm_sq() const {
  std::vector<double> f(q_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = r(i) * dq_[i] * dq_[i];
  return 2.0 * std::numbers::pi * simpson(f);
}

double RadialProfile::lp_integral(double p) const {
  std::vector<double> f(q_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = r(i) * std::pow(std::abs(q_[i]), p);
  return 2.0 * std::numbers::pi * simpson(f);
}

double RadialProfile::max_residual() const {
  static constexpr std::array<double, 7> c = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  const double inv_h2 = 1.0 / (dr_ * dr_);
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < q_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) d2 += c[k] * q_[i + k - 3];
    d2 *= inv_h2;
    const double qi = q_[i];
    const double res = d2 + dq_[i] / r(i) - qi + qi * qi * qi;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double RadialProfile::tail_radius(double fraction) const {
  const double target = fraction * mass_;
  double tail = 0.0;
  for (std::size_t i = q_.size() - 1; i > 0; --i) {
    const double f1 = r(i) * q_[i] * q_[i];
    const double f0 = r(i - 1) * q_[i - 1] * q_[i - 1];
    const double next = tail + 2.0 * std::numbers::pi * 0.5 * (f0 + f1) * dr_;
    if (next >= target) return r(i);
    tail = next;
  }
  return 0.0;
}

int classify_shot(double q0, double r_end) {
  auto stepper = make_stepper();
  stepper.initialize(series_start(q0), kSeriesStart, 1e-3);
  while (stepper.current_time() < r_end) {
    stepper.do_step(Outward{});
    const State& y = stepper.current_state();
    if (!std::isfinite(y[0]) || y[0] < 0.0) return +1;
    if (y[1] > 0.0) return -1;
  }
  // Neither event happened: either stuck near the Q = 1 equilibrium or the
  // shot is as good as double precision allows.
  return stepper.current_state()[0] > 0.5 ? -1 : 0;
}

RadialProfile solve_profile(double r_max, double tol, const ShootingOptions& opts) {
  if (!(r_max >= 15.0)) throw std::invalid_argument("solve_profile: r_max must be >= 15");
  if (!(tol > 0.0 && tol <= 1e-10)) throw std::invalid_argument("solve_profile: tol must lie in (0, 1e-10]");

  double lo = opts.lower, hi = opts.upper;
  const int c_lo = classify_shot(lo, r_max);
  const int c_hi = classify_shot(hi, r_max);
  if (c_lo >= 0 || c_hi <= 0) {
    std::ostringstream msg;
    msg << "solve_profile: bracket [" << lo << ", " << hi << "] does not straddle the ground state"
        << " (classes " << c_lo << ", " << c_hi << "; expected -1 then +1)";
    throw BracketError(msg.str());
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int c = classify_shot(mid, r_max);
    if (c == 0) {
      lo = hi = mid;
      break;
    }
    (c > 0 ? hi : lo) = mid;
  }
  if (hi - lo > tol * std::max(1.0, lo)) {
    throw BracketError("solve_profile: bisection stalled above the requested tolerance");
  }
  const double q0 = 0.5 * (lo + hi);

  const double dr = opts.node_spacing;
  auto intervals = static_cast<std::size_t>(std::ceil(r_max / dr));
  if (intervals % 2 == 1) ++intervals;
  const double r_end = dr * static_cast<double>(intervals);
  const auto match_index = static_cast<std::size_t>(std::round(opts.match_radius / dr));
  const double r_match = dr * static_cast<double>(match_index);

  std::vector<double> out_radii, in_radii;
  for (std::size_t i = 1; i <= match_index; ++i) out_radii.push_back(dr * static_cast<double>(i));
  for (std::size_t i = match_index; i < intervals; ++i) in_radii.push_back(dr * static_cast<double>(i));
  const auto outward = sample_outward(q0, out_radii);
  const State at_match = outward.back();

  // Amplitude of the K0 tail so the inward branch meets the outward one; the
  // cubic term is tiny in the tail, so a few fixed-point updates suffice.
  double amp = at_match[0] / std::cyl_bessel_k(0.0, r_match);
  std::vector<State> inward;
  for (int it = 0; it < 6; ++it) {
    inward = sample_inward(amp, r_end, in_radii);
    amp *= at_match[0] / inward.front()[0];
  }
  inward = sample_inward(amp, r_end, in_radii);
  const double slope_mismatch = std::abs(inward.front()[1] - at_match[1]) / std::abs(at_match[1]);
  if (slope_mismatch > 1e-6) {
    std::ostringstream msg;
    msg << "solve_profile: outward and inward branches disagree in slope by " << slope_mismatch;
    throw BracketError(msg.str());
  }

  std::vector<double> q(intervals + 1), dq(intervals + 1);
  q[0] = q0;
  dq[0] = 0.0;
  for (std::size_t i = 1; i <= match_index; ++i) {
    q[i] = outward[i - 1][0];
    dq[i] = outward[i - 1][1];
  }
  for (std::size_t i = match_index + 1; i < intervals; ++i) {
    q[i] = inward[i - match_index][0];
    dq[i] = inward[i - match_index][1];
  }
  q[intervals] = amp * std::cyl_bessel_k(0.0, r_end);
  dq[intervals] = -amp * std::cyl_bessel_k(1.0, r_end);
  return RadialProfile(dr, std::move(q), std::move(dq), q0);
}

GNConstants compute_constants(const RadialProfile& p, double s, double c0) {
  if (!(s > 0.0) || !(c0 > 0.0)) throw std::invalid_argument("compute_constants: s and c0 must be positive");
  GNConstants k;
  k.a_star = p.mass();
  k.lambda_star = std::pow(p.moment(2.0), 0.25);
  k.s = s;
  k.c0 = c0;
  k.lambda_tilde = std::pow(0.5 * s * c0 * p.moment(s), 1.0 / (2.0 + s));
  return k;
}

ComplexField materialize_Q(const SpectralGrid& g, const RadialProfile& p, double lambda, Point center) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("materialize_Q: lambda must be positive");
  const double scale = lambda / std::sqrt(p.mass());
  auto u = ComplexField::from_function(g, [&](double x1, double x2) {
    return scale * p(lambda * std::hypot(x1 - center.x1, x2 - center.x2));
  });
  const double outer = outer_annulus_mass(u);
  if (outer > 1e-8) {
    const double reach = std::max(std::abs(center.x1), std::abs(center.x2)) + p.tail_radius(1e-10) / lambda;
    const double suggested = reach / 0.9;
    std::ostringstream msg;
    msg << "materialize_Q: " << outer << " of the mass lies in the outer band of the box; use extent >= "
        << suggested;
    throw SupportOverflow(msg.str(), outer, suggested);
  }
  return u;
}

ComplexField blowup_profile(const SpectralGrid& g, const RadialProfile& p, double a, double s, double c0) {
  const GNConstants k = compute_constants(p, s, c0);
  if (!(a > 0.0) || !(a < k.a_star)) throw std::invalid_argument("blowup_profile: need 0 < a < a_star");
  const double lambda = k.lambda_tilde * std::pow(k.a_star - a, -1.0 / (2.0 + s));
  return materialize_Q(g, p, lambda);
}

ComplexField blowup_profile_rescaled(const SpectralGrid& g, const RadialProfile& p, double s, double c0) {
  return materialize_Q(g, p, compute_constants(p, s, c0).lambda_tilde);
}

}  // namespace gpcollapse
