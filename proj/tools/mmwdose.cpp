// mmwdose: millimetre-wave reflection, heating and exposure-limit calculations.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmw/commands.hpp"
#include "mmw/errors.hpp"

namespace {

using namespace mmw;
using namespace mmw::cli;

struct ScenarioFlags {
  std::string config_path;
  std::optional<std::string> model;
  std::optional<double> frequency_ghz;
  std::optional<double> pd;
  std::optional<std::string> skin_model;
  std::optional<double> clothing_mm;
  std::optional<double> air_c;
  std::optional<double> blood_c;
  std::optional<double> depth_mm;
  std::optional<double> step_mm;
  std::optional<std::string> data_dir;
  std::optional<std::string> output;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "Scenario file (JSON, see docs/config.md)")->check(CLI::ExistingFile);
    app->add_option("--model", model, "naked_skin | naked_forehead | clothed_skin | hat_on_forehead");
    app->add_option("-f,--frequency-GHz", frequency_ghz, "Frequency, GHz");
    app->add_option("--pd", pd, "Incident power density, W/m^2");
    app->add_option("--skin-model", skin_model, "Pin skin permittivity to a skin-model entry");
    app->add_option("--clothing-mm", clothing_mm, "Clothing thickness, mm");
    app->add_option("--air-C", air_c, "Air temperature, degC");
    app->add_option("--blood-C", blood_c, "Blood temperature, degC");
    app->add_option("--depth-mm", depth_mm, "Thermal domain depth, mm");
    app->add_option("--step-mm", step_mm, "Sampling step of exported profiles, mm");
    app->add_option("--data-dir", data_dir, "Directory holding replacement tissue tables");
    app->add_option("-o,--output", output, "Write CSV here instead of stdout");
  }

  // Flags win over the file.
  ScenarioConfig resolve(std::optional<ModelPreset> fallback_preset = std::nullopt) const {
    ScenarioConfig c = config_path.empty() ? ScenarioConfig{} : ScenarioConfig::from_file(config_path);
    if (config_path.empty() && fallback_preset) c.preset = *fallback_preset;
    if (model) {
      const auto p = parse_model_preset(*model);
      if (!p) throw UsageError("unknown model '" + *model + "'");
      c.preset = *p;
      c.layers.clear();
    }
    if (frequency_ghz) c.frequency_ghz = *frequency_ghz;
    if (pd) c.incident_pd = *pd;
    if (skin_model) {
      c.skin_model = parse_skin_model(*skin_model);
      if (!c.skin_model) throw UsageError("unknown skin model '" + *skin_model + "'");
    }
    if (clothing_mm) c.clothing_thickness_mm = *clothing_mm;
    if (air_c) c.air_temperature = *air_c;
    if (blood_c) c.blood_temperature = *blood_c;
    if (depth_mm) c.thermal_depth_mm = *depth_mm;
    if (step_mm) c.sample_step_mm = *step_mm;
    if (data_dir) c.data_dir = *data_dir;
    if (output) c.output = *output;
    c.validate();
    return c;
  }
};

struct DeviceFlags {
  DeviceOptions device;

  void attach(CLI::App* app) {
    app->add_option("--power-W", device.power_w, "Radiated power, W")->capture_default_str();
    app->add_option("--gain-dB", device.gain_db, "Antenna gain, dBi")->capture_default_str();
    app->add_option("--dimension-mm", device.largest_dimension_mm, "Largest antenna dimension, mm")
        ->capture_default_str();
    app->add_option("-f,--frequency-GHz", device.frequency_ghz, "Frequency, GHz")->capture_default_str();
  }
};

std::optional<ComplexPermittivity> permittivity_from(const std::optional<double>& re, const std::optional<double>& im) {
  if (!re && !im) return std::nullopt;
  if (!re || !im) throw UsageError("--eps-real and --eps-imag must be given together");
  return ComplexPermittivity(*re, *im);
}

int emit(const std::optional<std::string>& path, const std::function<int(std::ostream&)>& run) {
  if (!path) return run(std::cout);
  std::ofstream file(*path);
  if (!file) throw UsageError("cannot write '" + *path + "'");
  const int code = run(file);
  file.close();
  if (!file) throw UsageError("failed writing '" + *path + "'");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Millimetre-wave exposure of layered tissue: reflection, absorption, heating and limits"};
  app.require_subcommand(1);
  std::function<int()> action;

  // reflect
  auto* reflect = app.add_subcommand("reflect", "Power reflectance of the air/skin interface versus angle");
  ReflectOptions ropt;
  std::vector<std::string> reflect_models;
  std::optional<double> r_re, r_im;
  std::string pol = "both";
  std::optional<std::string> reflect_out;
  reflect->add_option("--model", reflect_models, "Skin model(s); default all six");
  reflect->add_option("--eps-real", r_re, "Explicit permittivity, real part");
  reflect->add_option("--eps-imag", r_im, "Explicit permittivity, loss factor");
  reflect->add_option("-f,--frequency-GHz", ropt.frequency_ghz, "Frequency, GHz")->capture_default_str();
  reflect->add_option("--angle-start", ropt.angle_start_deg, "First angle, deg")->capture_default_str();
  reflect->add_option("--angle-stop", ropt.angle_stop_deg, "Last angle, deg")->capture_default_str();
  reflect->add_option("--angle-step", ropt.angle_step_deg, "Angle step, deg")->capture_default_str();
  reflect->add_option("--pol", pol, "parallel | perpendicular | both")
      ->check(CLI::IsMember({"parallel", "perpendicular", "both"}))
      ->capture_default_str();
  reflect->add_option("-o,--output", reflect_out, "Write CSV here instead of stdout");
  reflect->callback([&] {
    action = [&] {
      for (const auto& m : reflect_models) {
        const auto model = parse_skin_model(m);
        if (!model) throw UsageError("unknown skin model '" + m + "'");
        ropt.models.push_back(*model);
      }
      ropt.permittivity = permittivity_from(r_re, r_im);
      if (pol == "parallel") ropt.polarizations = {Polarization::Parallel};
      if (pol == "perpendicular") ropt.polarizations = {Polarization::Perpendicular};
      return emit(reflect_out, [&](std::ostream& os) { return cmd_reflect(ropt, os); });
    };
  });

  // depth
  auto* depth = app.add_subcommand("depth", "Penetration and absorption depth versus frequency");
  DepthOptions dopt;
  std::vector<double> depth_freqs;
  std::optional<double> d_re, d_im;
  std::optional<std::string> depth_out;
  depth->add_option("--material", dopt.materials, "Skin model or tissue name(s); default skin, sat, muscle, bone");
  depth->add_option("--eps-real", d_re, "Explicit permittivity, real part");
  depth->add_option("--eps-imag", d_im, "Explicit permittivity, loss factor");
  depth->add_option("-f,--frequency-GHz", depth_freqs, "Frequencies, GHz; default 40 60 80 100");
  depth->add_option("--fraction", dopt.absorbed_fraction, "Absorbed fraction for the second depth column")
      ->capture_default_str();
  depth->add_option("-o,--output", depth_out, "Write CSV here instead of stdout");
  depth->callback([&] {
    action = [&] {
      if (!depth_freqs.empty()) dopt.frequencies_ghz = depth_freqs;
      dopt.permittivity = permittivity_from(d_re, d_im);
      return emit(depth_out, [&](std::ostream& os) { return cmd_depth(dopt, os); });
    };
  });

  // fields
  auto* fields = app.add_subcommand("fields", "Field, SAR*rho and power-flux profile through the layer stack");
  ScenarioFlags fields_flags;
  fields_flags.attach(fields);
  fields->callback([&] {
    action = [&] {
      const auto config = fields_flags.resolve();
      return emit(config.output, [&](std::ostream& os) { return cmd_fields(config, os); });
    };
  });

  // temp
  auto* temp = app.add_subcommand("temp", "Steady or transient temperature elevation profile");
  ScenarioFlags temp_flags;
  temp_flags.attach(temp);
  TempOptions topt;
  std::string method = "closed";
  temp->add_option("--method", method, "closed | fd")->check(CLI::IsMember({"closed", "fd"}))->capture_default_str();
  temp->add_option("--grid-um", topt.fd_grid_step_um, "Finite-difference grid step, um (<= 50)")
      ->capture_default_str();
  temp->add_option("--duration-s", topt.duration_s, "Run a transient of this length instead of the steady state");
  temp->add_option("--dt-s", topt.time_step_s, "Transient time step, s")->capture_default_str();
  temp->add_option("--report-s", topt.report_interval_s, "Interval between transient profiles, s")
      ->capture_default_str();
  temp->callback([&] {
    action = [&] {
      topt.method = method == "fd" ? ThermalMethod::FiniteDifference : ThermalMethod::ClosedForm;
      const auto config = temp_flags.resolve();
      return emit(config.output, [&](std::ostream& os) { return cmd_temp(config, topt, os); });
    };
  });

  // sweep-clothing
  auto* sweep = app.add_subcommand("sweep-clothing", "Transmission and surface heating versus clothing thickness");
  ScenarioFlags sweep_flags;
  sweep_flags.attach(sweep);
  SweepOptions sopt;
  sweep->add_option("--start-mm", sopt.start_mm, "First thickness, mm")->capture_default_str();
  sweep->add_option("--stop-mm", sopt.stop_mm, "Last thickness, mm")->capture_default_str();
  sweep->add_option("--d-step-mm", sopt.step_mm, "Thickness step, mm")->capture_default_str();
  sweep->callback([&] {
    action = [&] {
      const auto config = sweep_flags.resolve(ModelPreset::HatOnForehead);
      return emit(config.output, [&](std::ostream& os) { return cmd_sweep_clothing(config, sopt, os); });
    };
  });

  // compliance
  auto* compliance = app.add_subcommand("compliance", "Far-field power density against a regulatory limit");
  DeviceFlags compliance_device;
  compliance_device.attach(compliance);
  ComplianceOptions copt;
  std::string standard = "ICNIRP";
  std::string population = "general";
  compliance->add_option("--distance-mm", copt.distance_mm, "Distance from the antenna, mm")->capture_default_str();
  compliance->add_option("--standard", standard, "ICNIRP | FCC_MPE | IEEE_1992_peak | IEEE_2005")
      ->capture_default_str();
  compliance->add_option("--population", population, "general | occupational")->capture_default_str();
  compliance->add_flag("--peak", copt.localized_peak, "Use the spatial-peak limit");
  compliance->add_option("--catalog", copt.catalog_path, "Replacement limit catalog (JSON)");
  compliance->callback([&] {
    action = [&] {
      copt.device = compliance_device.device;
      const auto s = parse_standard(standard);
      if (!s) throw UsageError("unknown standard '" + standard + "'");
      const auto p = parse_population(population);
      if (!p) throw UsageError("unknown population '" + population + "'");
      copt.standard = *s;
      copt.population = *p;
      return cmd_compliance(copt, std::cout);
    };
  });

  // farfield
  auto* farfield = app.add_subcommand("farfield", "Far-field power density versus distance");
  DeviceFlags farfield_device;
  farfield_device.attach(farfield);
  FarFieldOptions fopt;
  std::vector<double> distances;
  std::optional<std::string> farfield_out;
  farfield->add_option("--distance-mm", distances, "Distances, mm; default 30 40 50 100 1000");
  farfield->add_option("-o,--output", farfield_out, "Write CSV here instead of stdout");
  farfield->callback([&] {
    action = [&] {
      fopt.device = farfield_device.device;
      if (!distances.empty()) fopt.distances_mm = distances;
      return emit(farfield_out, [&](std::ostream& os) { return cmd_farfield(fopt, os); });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "mmwdose: error: " << e.what() << '\n';
    return kError;
  }
}
