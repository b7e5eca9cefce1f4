#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mmw/dielectrics.hpp"
#include "mmw/units.hpp"

namespace mmw {

/// The four one-dimensional body models.
enum class ModelPreset {
  NakedSkin,      // skin 1 mm | SAT 3 mm | muscle
  NakedForehead,  // skin 1 mm | SAT 3 mm | bone
  ClothedSkin,    // clothing | NakedSkin
  HatOnForehead,  // clothing | NakedForehead
};

inline constexpr ModelPreset kAllPresets[] = {ModelPreset::NakedSkin, ModelPreset::NakedForehead,
                                              ModelPreset::ClothedSkin, ModelPreset::HatOnForehead};

std::string_view to_string(ModelPreset preset);
std::optional<ModelPreset> parse_model_preset(std::string_view name);

/// The preset with any clothing layer removed (ClothedSkin -> NakedSkin, ...).
ModelPreset unclothed(ModelPreset preset);

inline constexpr double kSemiInfinite = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultClothingThickness = 1e-3;

struct TissueLayer {
  Tissue tissue;
  double thickness;  // m; kSemiInfinite for the terminating layer
  std::optional<ComplexPermittivity> permittivity;  // replaces the database value when set
};

/// Ordered slabs behind an air half-space. The first interface sits at z = 0;
/// the last layer is semi-infinite. Clothing may only appear as the first layer.
class LayerStack {
 public:
  explicit LayerStack(std::vector<TissueLayer> layers);

  static LayerStack preset(ModelPreset preset, double clothing_thickness = kDefaultClothingThickness);

  const std::vector<TissueLayer>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  std::optional<ModelPreset> model_preset() const { return preset_; }
  bool clothed() const { return layers_.front().tissue == Tissue::Clothing; }

  /// Global z of every layer's left interface.
  std::vector<double> interface_positions() const;

  /// Copy with every layer of `tissue` pinned to `eps`.
  LayerStack with_permittivity(Tissue tissue, const ComplexPermittivity& eps) const;

  /// Copy without layer `index`; the preset tag is dropped.
  LayerStack without_layer(std::size_t index) const;

 private:
  std::vector<TissueLayer> layers_;
  std::optional<ModelPreset> preset_;
};

struct PlaneWaveExcitation {
  Frequency frequency;
  double incident_power_density;  // W/m^2, time averaged
};

/// Peak amplitude |E0+| = sqrt(2 eta0 PD) of a plane wave carrying `power_density` W/m^2.
double incident_amplitude(double power_density);

/// Forward/backward amplitudes of one layer in its local coordinate z' = z - start:
///   E(z') = E+ e^{-jkz'} + E- e^{+jkz'},  H(z') = (E+ e^{-jkz'} - E- e^{+jkz'}) / eta.
struct LayerField {
  Tissue tissue;
  ComplexPermittivity permittivity;
  double conductivity;  // S/m, eps'' omega eps0
  double start;         // m, global position of the left interface
  double thickness;     // m, infinite for the last layer
  std::complex<double> e_plus;
  std::complex<double> e_minus;
  std::complex<double> k;    // beta - j alpha, rad/m
  std::complex<double> eta;  // ohm

  double alpha() const { return -k.imag(); }
  double beta() const { return k.real(); }

  std::complex<double> e_field(double local_z) const;
  std::complex<double> h_field(double local_z) const;

  /// Volumetric heating sigma |E|^2 / 2 (W/m^3) from the three-term expansion
  ///   |E+|^2 e^{-2 alpha z} + |E-|^2 e^{2 alpha z} + 2u cos 2 beta z + 2v sin 2 beta z,
  /// u + jv = E+ conj(E-).
  double sar_rho(double local_z) const;

  /// Integral of sar_rho over the layer, W/m^2.
  double absorbed_power() const;
};

struct InterfaceResidual {
  double position;    // m
  double e_relative;  // |E_left - E_right| / |E0+|
  double h_relative;  // |H_left - H_right| eta0 / |E0+|
};

struct LayerFieldSolution {
  Frequency frequency;
  double incident_power_density = 0.0;
  std::complex<double> incident_amplitude;  // E0+
  std::complex<double> reflected_amplitude;  // E0-
  std::vector<LayerField> layers;

  double reflectance() const;
  double reflected_power_density() const;
  double absorbed_power_density() const;

  /// Index of the layer containing global z >= 0; interfaces belong to the deeper layer.
  std::size_t layer_index_at(double z) const;

  std::complex<double> e_field(double z) const;
  std::complex<double> h_field(double z) const;
  double sar_rho(double z) const;

  /// Time-averaged Poynting flux 0.5 Re(E H*) at global z, W/m^2.
  double power_flux(double z) const;

  /// Power entering layer `index` across its left interface, as a fraction of the incident power.
  double transmitted_fraction(std::size_t index) const;

  std::vector<InterfaceResidual> interface_residuals() const;
};

/// Solves E/H continuity at every interface as one linear system. Permittivities
/// come from each layer's override or from `db` at the excitation frequency.
LayerFieldSolution solve_layer_fields(const LayerStack& stack, const PlaneWaveExcitation& excitation,
                                      const DielectricDatabase& db = DielectricDatabase::bundled());

/// SAR * rho (W/m^3) at each global depth. Throws OutOfRangeError for z < 0.
std::vector<double> sar_rho_profile(const LayerFieldSolution& solution, std::span<const double> z_grid);

/// Two-bounce transmission through a clothing layer:
///   air/clothing  1 - |R0|^2
///   into skin     (1 - |R0|^2)(1 - |R1|^2) exp(-2 alpha_c d_c)
/// Multiple internal reflections are ignored; see solve_layer_fields for the exact result.
struct ClothingTransmission {
  double air_clothing;
  double clothing_skin;
};

ClothingTransmission clothing_transmission(const LayerStack& stack, Frequency frequency,
                                           const DielectricDatabase& db = DielectricDatabase::bundled());

struct ClothingSweepPoint {
  double clothing_thickness;  // m
  ClothingTransmission two_bounce;
  double full_air_clothing;   // fraction of incident power crossing the air/clothing interface
  double full_clothing_skin;  // fraction of incident power entering the skin
};

/// Transmission versus clothing thickness for a clothed preset, both routes side by side.
std::vector<ClothingSweepPoint> clothing_transmission_sweep(
    ModelPreset clothed_preset, std::span<const double> thicknesses, Frequency frequency,
    const DielectricDatabase& db = DielectricDatabase::bundled());

}  // namespace mmw
