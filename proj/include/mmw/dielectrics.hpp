#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmw/units.hpp"

namespace mmw {

/// Relative complex permittivity eps* = eps' - j eps'' (e^{+jwt} phasors).
/// eps'' is stored as a non-negative loss factor.
class ComplexPermittivity {
 public:
  /// Throws DomainError unless eps_real > 0 and eps_imag >= 0.
  ComplexPermittivity(double eps_real, double eps_imag);

  double eps_real() const { return eps_real_; }
  double eps_imag() const { return eps_imag_; }

  /// The complex value eps' - j eps''.
  std::complex<double> value() const { return {eps_real_, -eps_imag_}; }

  bool lossless() const { return eps_imag_ == 0.0; }

  bool operator==(const ComplexPermittivity&) const = default;

 private:
  double eps_real_;
  double eps_imag_;
};

enum class SkinModel {
  Gandhi,
  Gabriel,
  ChahatPalm,
  ChahatWristForearm,
  AlekseevPalm,
  AlekseevForearm,
};

inline constexpr SkinModel kAllSkinModels[] = {
    SkinModel::Gandhi,       SkinModel::Gabriel,      SkinModel::ChahatPalm,
    SkinModel::ChahatWristForearm, SkinModel::AlekseevPalm, SkinModel::AlekseevForearm,
};

enum class Tissue { Skin, SAT, Muscle, Bone, Clothing, Blood };

std::string_view to_string(SkinModel model);
std::string_view to_string(Tissue tissue);
std::optional<SkinModel> parse_skin_model(std::string_view name);
std::optional<Tissue> parse_tissue(std::string_view name);

struct SkinModelRecord {
  SkinModel model;
  Frequency frequency;
  ComplexPermittivity permittivity;
};

/// One tabulated tissue dielectric entry. A record with no frequency applies at
/// every frequency and is stored by loss factor rather than conductivity.
struct TissueDielectricRecord {
  Tissue tissue;
  std::optional<Frequency> frequency;
  double eps_real;
  std::optional<double> sigma;     // S/m
  std::optional<double> eps_imag;  // used when sigma is absent
};

struct TissueThermalRecord {
  Tissue tissue;
  double density;                  // kg/m^3
  double specific_heat;            // J/kg/degC
  double thermal_conductivity;     // W/m/degC
  double perfusion;                // mL/kg/min
  double metabolic_heat;           // W/m^3
  std::optional<double> thickness; // m; absent for blood
};

/// Result of a tabulated lookup; `interpolated` is set whenever the frequency
/// did not coincide with a table column.
struct PermittivityLookup {
  ComplexPermittivity permittivity;
  bool interpolated;
};

/// eps'' = sigma / (2 pi f eps0).
double sigma_to_eps_imag(double sigma, Frequency frequency);
/// sigma = eps'' 2 pi f eps0.
double eps_imag_to_sigma(double eps_imag, Frequency frequency);

/// Immutable tissue property tables. Safe to share across threads once built.
class DielectricDatabase {
 public:
  /// Tables compiled from data/*.csv at build time.
  static const DielectricDatabase& bundled();

  /// Parses the three CSV tables (see docs/data_format.md for the schema).
  static DielectricDatabase from_csv(std::string_view skin_models_csv,
                                     std::string_view tissue_dielectric_csv,
                                     std::string_view tissue_thermal_csv);

  /// Loads skin_models.csv, tissue_dielectric.csv and tissue_thermal.csv from
  /// `directory`; any file that is missing falls back to the bundled table.
  static DielectricDatabase from_directory(const std::filesystem::path& directory);

  /// Tabulated value at 28/60/73 GHz, linear interpolation of eps' and eps''
  /// in between. Throws OutOfRangeError outside the tabulated span.
  PermittivityLookup skin_model(SkinModel model, Frequency frequency) const;

  /// Tissue permittivity. Exact at tabulated frequencies; linear in eps' and
  /// sigma between them. Frequency-independent records (clothing) hold eps''.
  PermittivityLookup tissue(Tissue tissue, Frequency frequency) const;

  const TissueThermalRecord& thermal(Tissue tissue) const;

  const std::vector<SkinModelRecord>& skin_model_records() const { return skin_models_; }
  const std::vector<TissueDielectricRecord>& tissue_dielectric_records() const { return dielectric_; }
  const std::vector<TissueThermalRecord>& tissue_thermal_records() const { return thermal_; }

 private:
  std::vector<SkinModelRecord> skin_models_;
  std::vector<TissueDielectricRecord> dielectric_;
  std::vector<TissueThermalRecord> thermal_;
};

/// Convenience wrappers over DielectricDatabase::bundled().
PermittivityLookup lookup_skin_model(SkinModel model, Frequency frequency);

}  // namespace mmw
