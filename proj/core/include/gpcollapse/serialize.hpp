#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "gpcollapse/asymptotics.hpp"
#include "gpcollapse/functional.hpp"
#include "gpcollapse/minimizer.hpp"
#include "gpcollapse/profile.hpp"

namespace gpcollapse {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const EnergyBreakdown& e);
ordered_json to_json(const GNConstants& k);
ordered_json to_json(const GPParams& p);
ordered_json to_json(const SolveReport& r);
/// Fit summary plus the rows (without fields).
ordered_json to_json(const ScanResult& s);
ordered_json to_json(const SandwichRecord& s);
ordered_json to_json(const ConvergenceRecord& c);
ordered_json to_json(const WidthRatio& w);
ordered_json to_json(const HartreeBoundRecord& h);

/// Adds {"schema": schema_id(kind)} as the first key.
ordered_json with_schema(const std::string& kind, const ordered_json& body);

void write_json(const ordered_json& j, const std::filesystem::path& path);

void write_profile_csv(const RadialProfile& p, std::ostream& out);
void write_history_csv(const std::vector<IterationRecord>& h, std::ostream& out);
void write_scan_csv(const ScanResult& s, std::ostream& out);
/// Columns log_gap, log_energy for the converged rungs.
void write_plot_data(const ScanResult& s, std::ostream& out);

/// Opens `path` for writing and forwards to one of the writers above.
template <class T, class Writer>
void write_file(const T& value, const std::filesystem::path& path, Writer writer);

}  // namespace gpcollapse

#include <fstream>
#include <stdexcept>

template <class T, class Writer>
void gpcollapse::write_file(const T& value, const std::filesystem::path& path, Writer writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(value, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}
