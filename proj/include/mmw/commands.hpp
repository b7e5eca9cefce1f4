#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmw/compliance.hpp"
#include "mmw/dielectrics.hpp"
#include "mmw/planewave.hpp"
#include "mmw/scenario.hpp"

namespace mmw::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kError = 1, kNonCompliant = 2, kNearField = 3 };

struct ReflectOptions {
  std::vector<SkinModel> models;  // empty: all six
  std::optional<ComplexPermittivity> permittivity;  // replaces the model list
  double frequency_ghz = 60.0;
  double angle_start_deg = 0.0;
  double angle_stop_deg = 89.0;
  double angle_step_deg = 1.0;
  std::vector<Polarization> polarizations{Polarization::Parallel, Polarization::Perpendicular};
};

/// model,polarization,theta_deg,reflectance
int cmd_reflect(const ReflectOptions& options, std::ostream& out);

struct DepthOptions {
  /// Skin-model or tissue names; empty: skin, sat, muscle and bone.
  std::vector<std::string> materials;
  std::optional<ComplexPermittivity> permittivity;  // a single explicit medium
  std::vector<double> frequencies_ghz{40.0, 60.0, 80.0, 100.0};
  double absorbed_fraction = 0.9;
};

/// material,frequency_GHz,eps_real,eps_imag,penetration_depth_mm,absorption_depth_mm,note
/// Rows that cannot be evaluated keep the note and leave the numeric columns empty.
int cmd_depth(const DepthOptions& options, std::ostream& out);

/// z_mm,layer,E_abs_V_per_m,E_re_V_per_m,E_im_V_per_m,sar_rho_W_per_m3,power_flux_W_per_m2
/// z is measured from the outermost interface.
int cmd_fields(const ScenarioConfig& config, std::ostream& out);

enum class ThermalMethod { ClosedForm, FiniteDifference };

struct TempOptions {
  ThermalMethod method = ThermalMethod::ClosedForm;
  double fd_grid_step_um = 10.0;
  std::optional<double> duration_s;  // transient run when set
  double time_step_s = 1.0;
  double report_interval_s = 60.0;
};

/// z_mm,theta_degC (steady) or time_s,z_mm,theta_degC (transient); z from the skin surface.
int cmd_temp(const ScenarioConfig& config, const TempOptions& options, std::ostream& out);

struct SweepOptions {
  double start_mm = 0.0;
  double stop_mm = 10.0;
  double step_mm = 0.01;
};

/// d_c_mm,T_air_clothing_two_bounce,T_skin_two_bounce,T_air_clothing,T_skin,theta_surface_degC
int cmd_sweep_clothing(const ScenarioConfig& config, const SweepOptions& options, std::ostream& out);

struct DeviceOptions {
  double power_w = 0.1;
  double gain_db = 10.0;
  double largest_dimension_mm = 10.0;
  double frequency_ghz = 60.0;
};

struct ComplianceOptions {
  DeviceOptions device;
  double distance_mm = 100.0;
  Standard standard = Standard::ICNIRP;
  Population population = Population::GeneralPublic_Uncontrolled;
  bool localized_peak = false;
  std::optional<std::string> catalog_path;
};

/// Human-readable report; returns kOk, kNonCompliant or kNearField.
int cmd_compliance(const ComplianceOptions& options, std::ostream& out);

struct FarFieldOptions {
  DeviceOptions device;
  std::vector<double> distances_mm{30.0, 40.0, 50.0, 100.0, 1000.0};
};

/// distance_mm,region,power_density_W_per_m2; near-field rows leave the density empty.
int cmd_farfield(const FarFieldOptions& options, std::ostream& out);

/// Inclusive arithmetic range with the end point snapped onto the grid.
std::vector<double> linear_range(double start, double stop, double step);

}  // namespace mmw::cli
