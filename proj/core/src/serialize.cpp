#include "gpcollapse/serialize.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "gpcollapse/field_io.hpp"
#include "gpcollapse/schema.hpp"

namespace gpcollapse {

namespace {

// nlohmann writes NaN/inf as null; keep them as strings so a failed solve
// still produces a readable report.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

const char* scale_name(Scale s) { return s == Scale::blowup ? "blowup" : "physical"; }

}  // namespace

ordered_json to_json(const EnergyBreakdown& e) {
  return {{"kinetic", num(e.kinetic)},         {"trap", num(e.trap)},   {"rotation", num(e.rotation)},
          {"interaction", num(e.interaction)}, {"total", num(e.total)}, {"mu", num(e.mu)}};
}

ordered_json to_json(const GNConstants& k) {
  return {{"a_star", k.a_star}, {"lambda_star", k.lambda_star}, {"s", k.s}, {"c0", k.c0}, {"lambda_tilde", k.lambda_tilde}};
}

ordered_json to_json(const GPParams& p) {
  return {{"omega", p.omega}, {"a", p.a},   {"gap", p.a_star - p.a},           {"s", p.s},
          {"c0", p.c0},       {"a_star", p.a_star}, {"scale", scale_name(p.scale)}};
}

ordered_json to_json(const SolveReport& r) {
  const auto& g = r.field.grid();
  ordered_json j;
  j["status"] = r.status;
  j["converged"] = r.converged;
  j["iters"] = r.iters;
  j["residual"] = num(r.residual);
  j["initial_residual"] = num(r.initial_residual);
  j["energy"] = to_json(r.breakdown);
  j["energy_physical"] = num(r.energy_physical);
  j["mu"] = num(r.mu);
  j["mu_identity"] = num(r.mu_identity);
  j["phase_aligned_distance"] = num(r.phase_aligned_distance);
  j["theta"] = num(r.theta);
  j["drift"] = {num(r.drift.x1), num(r.drift.x2)};
  j["outer_mass"] = num(r.outer_mass);
  j["grid"] = {{"n", g.n()}, {"extent", g.extent()}};
  return j;
}

ordered_json to_json(const ScanResult& s) {
  ordered_json j;
  j["params"] = to_json(s.base);
  ordered_json fit;
  fit["fitted"] = s.fitted;
  fit["exponent"] = s.fitted ? num(s.fitted_exponent) : ordered_json(nullptr);
  fit["constant"] = s.fitted ? num(s.fitted_constant) : ordered_json(nullptr);
  fit["rms"] = s.fitted ? num(s.fit_rms) : ordered_json(nullptr);
  fit["target_exponent"] = s.target_exponent;
  fit["target_constant"] = s.target_constant;
  fit["excluded"] = s.excluded;
  j["fit"] = fit;
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"a", r.a},
                    {"gap", r.gap},
                    {"eps", r.eps},
                    {"omega", r.omega},
                    {"energy_physical", num(r.energy_physical)},
                    {"F", num(r.F)},
                    {"F_over_eps2", num(r.F_over_eps2)},
                    {"mu", num(r.mu)},
                    {"width50", num(r.width50)},
                    {"distance_to_QN", num(r.distance_to_QN)},
                    {"residual", num(r.residual)},
                    {"iters", r.iters},
                    {"converged", r.converged}});
  }
  j["rows"] = rows;
  return j;
}

ordered_json to_json(const SandwichRecord& s) {
  return {{"omega", s.omega}, {"f_omega", num(s.f_omega)}, {"f_zero", num(s.f_zero)},
          {"lower", num(s.lower)}, {"tol", s.tol}, {"holds", s.holds}};
}

ordered_json to_json(const ConvergenceRecord& c) {
  ordered_json d = ordered_json::array();
  for (double v : c.distances) d.push_back(num(v));
  return {{"distances", d},
          {"monotone", c.monotone},
          {"final_distance", num(c.final_distance)},
          {"threshold", c.threshold},
          {"passed", c.passed},
          {"violations", c.violations}};
}

ordered_json to_json(const WidthRatio& w) {
  return {{"measured", num(w.measured)}, {"expected", w.expected}, {"relative_error", num(w.relative_error)}};
}

ordered_json to_json(const HartreeBoundRecord& h) {
  return {{"a", h.a},
          {"gap", h.gap},
          {"N", h.big_n},
          {"beta", h.beta},
          {"e_hartree", num(h.e_hartree)},
          {"e_gp", num(h.e_gp)},
          {"energy_gap", num(h.energy_gap)},
          {"bound", num(h.bound)},
          {"sobolev_product", num(h.sobolev_product)},
          {"measured_constant", num(h.measured_constant)},
          {"holds", h.holds}};
}

ordered_json with_schema(const std::string& kind, const ordered_json& body) {
  ordered_json j;
  j["schema"] = schema_id(kind);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void write_profile_csv(const RadialProfile& p, std::ostream& out) {
  out << schema_comment("profile") << "\nr,Q\n";
  for (std::size_t i = 0; i < p.size(); ++i) out << format_double(p.r(i)) << ',' << format_double(p.q()[i]) << '\n';
}

void write_history_csv(const std::vector<IterationRecord>& h, std::ostream& out) {
  out << schema_comment("history") << "\niter,energy,residual,step\n";
  for (const auto& r : h) {
    out << r.iter << ',' << format_double(r.energy) << ',' << format_double(r.residual) << ','
        << format_double(r.step) << '\n';
  }
}

void write_scan_csv(const ScanResult& s, std::ostream& out) {
  out << schema_comment("scan")
      << "\na,gap,eps,omega,energy_physical,F,F_over_eps2,mu,width50,distance_to_QN,residual,iters,converged\n";
  for (const auto& r : s.rows) {
    for (double v : {r.a, r.gap, r.eps, r.omega, r.energy_physical, r.F, r.F_over_eps2, r.mu, r.width50,
                     r.distance_to_QN, r.residual}) {
      out << format_double(v) << ',';
    }
    out << r.iters << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void write_plot_data(const ScanResult& s, std::ostream& out) {
  out << schema_comment("plot") << "\nlog_gap,log_energy\n";
  for (const auto& r : s.rows) {
    if (!r.converged || !(r.energy_physical > 0.0)) continue;
    out << format_double(std::log(r.gap)) << ',' << format_double(std::log(r.energy_physical)) << '\n';
  }
}

}  // namespace gpcollapse
