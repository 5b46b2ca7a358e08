#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gpcollapse/schema.hpp"
#include "gpcollapse/serialize.hpp"
#include "shared_profile.hpp"

using namespace gpcollapse;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

ScanResult sample_scan() {
  ScanResult s;
  s.base.a_star = 11.7;
  s.base.a = 11.5;
  const double gaps[] = {0.2, 0.1, 0.05, 0.02};
  for (double g : gaps) {
    ScanRow r;
    r.gap = g;
    r.a = 11.7 - g;
    r.eps = std::sqrt(g);
    r.energy_physical = 0.637 * std::sqrt(g) + 1.0 / 3.0;
    r.F = r.energy_physical * r.eps;
    r.F_over_eps2 = r.F / g;
    r.converged = g != 0.05;
    r.iters = 42;
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace

TEST(Schema, Identifiers) {
  EXPECT_EQ(schema_id("scan"), "gpcollapse.scan/1");
  EXPECT_EQ(schema_comment("profile"), "# schema=gpcollapse.profile/1");
}

TEST(Json, SchemaComesFirst) {
  ordered_json body;
  body["z"] = 1;
  body["a"] = 2;
  const auto j = with_schema("report", body);
  auto it = j.begin();
  EXPECT_EQ(it.key(), "schema");
  EXPECT_EQ(it.value(), "gpcollapse.report/1");
  EXPECT_EQ((++it).key(), "z");
  EXPECT_EQ((++it).key(), "a");
}

TEST(Json, DoublesRoundTripExactly) {
  EnergyBreakdown e;
  e.kinetic = 0.1 + 0.2;
  e.total = 1.0 / 3.0;
  e.mu = -std::nextafter(2.0, 3.0);
  const auto text = to_json(e).dump();
  const auto back = ordered_json::parse(text);
  EXPECT_EQ(back["kinetic"].get<double>(), e.kinetic);
  EXPECT_EQ(back["total"].get<double>(), e.total);
  EXPECT_EQ(back["mu"].get<double>(), e.mu);
}

TEST(Json, NonFiniteValuesBecomeStrings) {
  EnergyBreakdown e;
  e.total = std::numeric_limits<double>::quiet_NaN();
  e.mu = std::numeric_limits<double>::infinity();
  const auto j = to_json(e);
  EXPECT_EQ(j["total"], "nan");
  EXPECT_EQ(j["mu"], "inf");
}

TEST(Json, ScanCarriesFitAndRows) {
  auto s = sample_scan();
  fit_scan(s);
  const auto j = to_json(s);
  EXPECT_FALSE(j["fit"]["fitted"].get<bool>());
  EXPECT_TRUE(j["fit"]["exponent"].is_null());
  EXPECT_EQ(j["fit"]["excluded"], 1);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][2]["converged"], false);
  EXPECT_EQ(j["params"]["a_star"].get<double>(), 11.7);
}

TEST(Json, WriteJsonFile) {
  const auto path = std::filesystem::temp_directory_path() / "gpcollapse_test_write.json";
  write_json(with_schema("constants", {{"x", 1.5}}), path);
  std::ifstream in(path);
  const auto j = ordered_json::parse(in);
  EXPECT_EQ(j["schema"], "gpcollapse.constants/1");
  EXPECT_EQ(j["x"], 1.5);
  std::filesystem::remove(path);
  EXPECT_THROW(write_json(ordered_json{}, "/nonexistent-dir/x.json"), std::runtime_error);
}

TEST(Csv, ScanLayoutAndDigits) {
  const auto s = sample_scan();
  std::ostringstream out;
  write_scan_csv(s, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "# schema=gpcollapse.scan/1");
  EXPECT_EQ(split(lines[1]).size(), 13u);
  const auto cells = split(lines[2]);
  ASSERT_EQ(cells.size(), 13u);
  EXPECT_EQ(std::stod(cells[4]), s.rows[0].energy_physical);
  EXPECT_EQ(cells[11], "42");
  EXPECT_EQ(cells[12], "true");
  EXPECT_EQ(split(lines[4])[12], "false");
}

TEST(Csv, PlotDataSkipsUnconverged) {
  const auto s = sample_scan();
  std::ostringstream out;
  write_plot_data(s, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1], "log_gap,log_energy");
  EXPECT_EQ(std::stod(split(lines[2])[0]), std::log(0.2));
}

TEST(Csv, HistoryAndProfile) {
  std::vector<IterationRecord> h{{0, 1.5, 0.1, 1.0}, {5, 1.25, 1e-7, 2.25}};
  std::ostringstream out;
  write_history_csv(h, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[1], "iter,energy,residual,step");
  EXPECT_EQ(lines[3], "5,1.25,9.9999999999999995e-08,2.25");

  std::ostringstream prof;
  write_profile_csv(gpcollapse::testing::profile(), prof);
  const auto pl = lines_of(prof.str());
  EXPECT_EQ(pl[0], "# schema=gpcollapse.profile/1");
  EXPECT_EQ(pl[1], "r,Q");
  EXPECT_EQ(pl.size(), gpcollapse::testing::profile().size() + 2);
  EXPECT_EQ(std::stod(split(pl[2])[1]), gpcollapse::testing::profile().q0());
}

TEST(WriteFile, ForwardsAndReportsFailures) {
  const auto path = std::filesystem::temp_directory_path() / "gpcollapse_test_scan.csv";
  write_file(sample_scan(), path, write_scan_csv);
  EXPECT_GT(std::filesystem::file_size(path), 100u);
  std::filesystem::remove(path);
  EXPECT_THROW(write_file(sample_scan(), "/nonexistent-dir/scan.csv", write_scan_csv), std::runtime_error);
}
