#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmw/bioheat.hpp"
#include "mmw/dielectrics.hpp"
#include "mmw/multilayer.hpp"

namespace mmw {

/// One entry of a custom layer list. A missing thickness marks the semi-infinite last layer.
struct LayerSpec {
  Tissue tissue;
  std::optional<double> thickness_mm;
  std::optional<double> eps_real;
  std::optional<double> eps_imag;
};

/// Inputs shared by the fields, temp and sweep-clothing commands.
/// File format: JSON, documented in docs/config.md.
struct ScenarioConfig {
  ModelPreset preset = ModelPreset::NakedSkin;
  std::vector<LayerSpec> layers;  // replaces the preset when non-empty
  double frequency_ghz = 60.0;
  double incident_pd = 10.0;  // W/m^2
  std::optional<SkinModel> skin_model;  // pins the skin permittivity to a skin-model entry
  double clothing_thickness_mm = 1.0;
  double air_temperature = 23.0;
  double blood_temperature = 37.0;
  double thermal_depth_mm = 35.0;
  double sample_step_mm = 0.05;  // spacing of exported profiles
  std::optional<std::string> data_dir;  // tissue tables; bundled data when unset
  std::optional<std::string> output;

  static ScenarioConfig from_json(std::string_view text);
  static ScenarioConfig from_file(const std::filesystem::path& path);

  /// Checks every field against the solver preconditions; throws DomainError.
  void validate() const;

  Frequency frequency() const { return Frequency::ghz(frequency_ghz); }
  PlaneWaveExcitation excitation() const { return {frequency(), incident_pd}; }
  ThermalEnvironment environment() const;
  DielectricDatabase database() const;
  LayerStack build_stack(const DielectricDatabase& db = DielectricDatabase::bundled()) const;
};

}  // namespace mmw
