#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mmw/commands.hpp"
#include "mmw/errors.hpp"

using namespace mmw;
using namespace mmw::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

template <class F>
std::string capture(F&& f) {
  std::ostringstream out;
  f(out);
  return out.str();
}

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(MMWDOSE_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (const auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Range, Inclusive) {
  const auto r = linear_range(0.0, 1.0, 0.1);
  ASSERT_EQ(r.size(), 11u);
  EXPECT_EQ(r.back(), 1.0);
  EXPECT_EQ(linear_range(2.0, 2.0, 1.0).size(), 1u);
  EXPECT_THROW(linear_range(1.0, 0.0, 0.1), DomainError);
  EXPECT_THROW(linear_range(0.0, 1.0, 0.0), DomainError);
}

TEST(Reflect, GabrielNormalIncidence) {
  ReflectOptions opt;
  opt.models = {SkinModel::Gabriel};
  opt.angle_stop_deg = 0.0;
  opt.polarizations = {Polarization::Parallel};
  const auto rows = parse_csv(capture([&](std::ostream& os) { cmd_reflect(opt, os); }));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"model", "polarization", "theta_deg", "reflectance"}));
  EXPECT_NEAR(std::stod(rows[1][3]), 0.378, 0.005);
}

TEST(Reflect, VacuumOverrideIsAllZero) {
  ReflectOptions opt;
  opt.permittivity = ComplexPermittivity(1.0, 0.0);
  const auto rows = parse_csv(capture([&](std::ostream& os) { cmd_reflect(opt, os); }));
  ASSERT_EQ(rows.size(), 1u + 2u * 90u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][3]), 1e-26);
}

TEST(Reflect, BadAnglesAndFrequency) {
  std::ostringstream os;
  ReflectOptions opt;
  opt.angle_stop_deg = 90.0;
  EXPECT_THROW(cmd_reflect(opt, os), DomainError);
  opt = {};
  opt.frequency_ghz = 120.0;
  EXPECT_THROW(cmd_reflect(opt, os), OutOfRangeError);
}

TEST(Depth, GabrielAndMonotoneTissue) {
  DepthOptions opt;
  opt.materials = {"gabriel"};
  opt.frequencies_ghz = {60.0};
  auto rows = parse_csv(capture([&](std::ostream& os) { cmd_depth(opt, os); }));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][4], "penetration_depth_mm");
  EXPECT_NEAR(std::stod(rows[1][4]), 0.48, 0.02);

  opt = {};
  rows = parse_csv(capture([&](std::ostream& os) { cmd_depth(opt, os); }));
  ASSERT_EQ(rows.size(), 1u + 16u);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t i = 1; i < 4; ++i) {
      EXPECT_LT(std::stod(rows[1 + 4 * m + i][4]), std::stod(rows[1 + 4 * m + i - 1][4])) << rows[1 + 4 * m][0];
    }
  }
}

TEST(Depth, ErrorRows) {
  DepthOptions opt;
  opt.permittivity = ComplexPermittivity(2.0, 0.0);
  opt.frequencies_ghz = {60.0};
  auto rows = parse_csv(capture([&](std::ostream& os) { cmd_depth(opt, os); }));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][4], "");
  EXPECT_EQ(rows[1][6].rfind("error:", 0), 0u);

  opt = {};
  opt.materials = {"gabriel"};
  opt.frequencies_ghz = {90.0};
  rows = parse_csv(capture([&](std::ostream& os) { cmd_depth(opt, os); }));
  EXPECT_EQ(rows[1][6].rfind("error:", 0), 0u);

  opt.materials = {"kidney"};
  std::ostringstream os;
  EXPECT_THROW(cmd_depth(opt, os), UsageError);
}

TEST(Fields, ProfileHeaderAndEnergy) {
  ScenarioConfig c;
  c.sample_step_mm = 0.5;
  const auto rows = parse_csv(capture([&](std::ostream& os) { cmd_fields(c, os); }));
  EXPECT_EQ(rows[0][0], "z_mm");
  EXPECT_EQ(rows[0][5], "sar_rho_W_per_m3");
  EXPECT_EQ(rows[1][1], "skin");
  EXPECT_EQ(rows.back()[0], "35");
  // Flux at the surface equals the transmitted power.
  EXPECT_NEAR(std::stod(rows[1][6]), 10.0 * (1.0 - 0.3785), 5e-3);
}

TEST(Temp, SurfaceValueAndProportionality) {
  ScenarioConfig c;
  c.incident_pd = 50.0;
  const auto p50 = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, {}, os); }));
  c.incident_pd = 10.0;
  const auto p10 = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, {}, os); }));
  ASSERT_EQ(p50.size(), p10.size());
  EXPECT_EQ(p50[0], (std::vector<std::string>{"z_mm", "theta_degC"}));
  EXPECT_NEAR(std::stod(p50[1][1]), 0.8, 0.2);
  for (std::size_t i = 1; i + 1 < p50.size(); ++i) {
    EXPECT_NEAR(std::stod(p50[i][1]) / std::stod(p10[i][1]), 5.0, 1e-9);
  }
  EXPECT_EQ(p50.back()[0], "35");
  EXPECT_EQ(std::stod(p50.back()[1]), 0.0);
}

TEST(Temp, ZeroPowerIsAllZero) {
  ScenarioConfig c;
  c.incident_pd = 0.0;
  const auto rows = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, {}, os); }));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 0.0);
}

TEST(Temp, FiniteDifferenceAndTransientModes) {
  ScenarioConfig c;
  c.sample_step_mm = 1.0;
  TempOptions fd;
  fd.method = ThermalMethod::FiniteDifference;
  const auto a = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, {}, os); }));
  const auto b = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, fd, os); }));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_NEAR(std::stod(a[i][1]), std::stod(b[i][1]), 1e-3);

  TempOptions tr;
  tr.duration_s = 60.0;
  tr.report_interval_s = 30.0;
  tr.fd_grid_step_um = 50.0;
  const auto t = parse_csv(capture([&](std::ostream& os) { cmd_temp(c, tr, os); }));
  EXPECT_EQ(t[0], (std::vector<std::string>{"time_s", "z_mm", "theta_degC"}));
  EXPECT_EQ(t.size(), 1u + 3u * 36u);
  EXPECT_EQ(std::stod(t[1][2]), 0.0);
}

TEST(SweepClothing, RowsAndBareSkinEndpoint) {
  ScenarioConfig c;
  c.preset = ModelPreset::HatOnForehead;
  SweepOptions opt;
  opt.stop_mm = 1.0;
  opt.step_mm = 0.25;
  const auto rows = parse_csv(capture([&](std::ostream& os) { cmd_sweep_clothing(c, opt, os); }));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "d_c_mm");
  EXPECT_EQ(rows[0][5], "theta_surface_degC");

  ScenarioConfig bare;
  bare.preset = ModelPreset::NakedForehead;
  bare.sample_step_mm = 35.0;
  const auto naked = parse_csv(capture([&](std::ostream& os) { cmd_temp(bare, {}, os); }));
  EXPECT_EQ(rows[1][5], naked[1][1]);

  std::ostringstream os;
  c.preset = ModelPreset::NakedSkin;
  EXPECT_THROW(cmd_sweep_clothing(c, opt, os), UsageError);
}

TEST(Compliance, ReportAndCodes) {
  ComplianceOptions opt;
  std::ostringstream os;
  EXPECT_EQ(cmd_compliance(opt, os), kOk);
  EXPECT_NE(os.str().find("verdict: Compliant"), std::string::npos);
  opt.distance_mm = 50.0;
  EXPECT_EQ(cmd_compliance(opt, os), kNonCompliant);
  opt.population = Population::Occupational_Controlled;
  EXPECT_EQ(cmd_compliance(opt, os), kOk);
  opt.distance_mm = 30.0;
  EXPECT_EQ(cmd_compliance(opt, os), kNearField);
}

TEST(FarField, Table) {
  const auto rows = parse_csv(capture([](std::ostream& os) { cmd_farfield({}, os); }));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[1][1], "near");
  EXPECT_EQ(rows[1][2], "");
  EXPECT_EQ(rows[3][1], "far");
  EXPECT_NEAR(std::stod(rows[3][2]), 32.0, 0.2);
  EXPECT_NEAR(std::stod(rows[5][2]), 0.08, 0.001);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run("compliance --distance-mm 100").code, 0);
  EXPECT_EQ(run("compliance --distance-mm 50").code, 2);
  EXPECT_EQ(run("compliance --distance-mm 50 --population occupational").code, 0);
  EXPECT_EQ(run("compliance --distance-mm 30").code, 3);
  EXPECT_EQ(run("compliance --standard NOPE").code, 1);
  EXPECT_EQ(run("compliance -f 5").code, 1);
  EXPECT_EQ(run("temp --pd -3").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("reflect --help").code, 0);
}

TEST(Binary, DeterministicOutput) {
  const auto a = run("temp --model hat_on_forehead --pd 50");
  const auto b = run("temp --model hat_on_forehead --pd 50");
  EXPECT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(Binary, ConfigFileWithFlagOverride) {
  const auto dir = std::filesystem::temp_directory_path() / "mmwdose_cli_test";
  std::filesystem::create_directories(dir);
  const auto config = dir / "scenario.json";
  const auto out = dir / "theta.csv";
  {
    std::ofstream f(config);
    f << R"({"model": "naked_skin", "incident_pd_W_per_m2": 10, "sample_step_mm": 35, "output": ")"
      << out.string() << "\"}";
  }
  EXPECT_EQ(run("temp -c " + config.string() + " --pd 50").code, 0);
  std::ifstream f(out);
  std::stringstream buf;
  buf << f.rdbuf();
  const auto rows = parse_csv(buf.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(std::stod(rows[1][1]), 0.766, 0.01);
  std::filesystem::remove_all(dir);
}
