#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mmw/dielectrics.hpp"
#include "mmw/multilayer.hpp"

namespace mmw {

/// Depth at which the temperature elevation is pinned to zero.
inline constexpr double kThermalDomainDepth = 35e-3;
/// Skin-to-air surface heat-transfer coefficient, W/m^2/degC.
inline constexpr double kAirSkinHeatTransfer = 7.0;

/// Perfusion sink coefficient h_b (W/m^3/degC) of a tissue:
///   rho_blood c_blood (w * 1e-6 / 60) rho_tissue,
/// with w in mL/kg/min converted to volumetric perfusion per second via the tissue density.
double heat_transfer_coefficient(const TissueThermalRecord& tissue, const TissueThermalRecord& blood);
/// Same, with the bundled blood properties.
double heat_transfer_coefficient(const TissueThermalRecord& tissue);

struct ThermalEnvironment {
  double air_temperature = 23.0;    // degC
  double blood_temperature = 37.0;  // degC
  double depth = kThermalDomainDepth;
  /// Overrides the automatic choice (7 W/m^2/degC to air, 0 under clothing).
  std::optional<double> surface_heat_transfer;
};

struct ThermalLayer {
  Tissue tissue;
  std::size_t field_layer;  // index into LayerFieldSolution::layers
  double start;             // m, measured from the skin surface
  double thickness;         // m
  double density;
  double specific_heat;
  double conductivity;           // W/m/degC
  double perfusion_coefficient;  // h_b, W/m^3/degC
  double metabolic_heat;         // W/m^3
};

/// Thermal domain of a layer stack: the tissue layers only (clothing carries no
/// heat equation), truncated at `depth`.
struct ThermalStack {
  std::vector<ThermalLayer> layers;
  double air_temperature = 23.0;
  double blood_temperature = 37.0;
  double surface_heat_transfer = kAirSkinHeatTransfer;

  double depth() const { return layers.back().start + layers.back().thickness; }

  static ThermalStack from_layer_stack(const LayerStack& stack,
                                       const DielectricDatabase& db = DielectricDatabase::bundled(),
                                       const ThermalEnvironment& env = {});
};

/// Closed-form temperature elevation inside one layer (local coordinate z from its left face):
///   theta = C_A e^{-m z} + C_B e^{m (z - d)} + zeta + xi + psi,  m = sqrt(h_b / k),
/// zeta = Z e^{-2 alpha z}, xi = X e^{2 alpha z}, psi = P_c cos 2 beta z + P_s sin 2 beta z.
/// With h_b = 0 the homogeneous part is C_A + C_B z.
/// The deepest layer uses C_A e^{-m z} (1 - e^{-2 m (d - z)}) (or C_A (d - z)) so theta vanishes
/// at the cutoff without cancellation.
struct ThermalLayerSolution {
  ThermalLayer layer;
  bool anchored_at_cutoff = false;
  double c_a = 0.0;
  double c_b = 0.0;
  double decay_rate = 0.0;  // m, 1/m
  double alpha = 0.0;
  double beta = 0.0;
  double zeta_amplitude = 0.0;
  double xi_amplitude = 0.0;
  double psi_cos = 0.0;
  double psi_sin = 0.0;

  double theta(double local_z) const;
  double dtheta(double local_z) const;
  double particular(double local_z) const;
  double dparticular(double local_z) const;
};

struct ThermalInterfaceResidual {
  double position;
  double theta_jump;  // degC
  double flux_jump;   // W/m^2
};

class ThermalSolution {
 public:
  ThermalSolution(std::vector<ThermalLayerSolution> layers, double surface_heat_transfer);

  /// Temperature elevation at depth z in [0, depth()]; exactly zero at depth().
  double theta(double z) const;
  /// Conductive heat flux -k dtheta/dz, W/m^2 (positive into the body).
  double heat_flux(double z) const;
  double surface_theta() const { return theta(0.0); }
  double depth() const { return depth_; }

  std::vector<double> sample(std::span<const double> z) const;

  const std::vector<ThermalLayerSolution>& layers() const { return layers_; }

  std::vector<ThermalInterfaceResidual> interface_residuals() const;
  /// k1 theta'(0) - h theta(0), W/m^2.
  double surface_residual() const;
  /// theta evaluated from the last layer's closed form at the cut-off depth.
  double cutoff_residual() const;

 private:
  std::vector<ThermalLayerSolution> layers_;
  double surface_heat_transfer_;
  double depth_;

  std::size_t layer_index_at(double z) const;
};

/// Steady-state elevation from k theta'' - h_b theta + SAR rho = 0, per-layer closed form,
/// with k1 theta'(0) = h theta(0), continuity of theta and k theta' between layers, and
/// theta(depth) = 0. Throws NumericError when 4 alpha^2 k is too close to h_b.
ThermalSolution solve_steady_theta(const ThermalStack& thermal, const LayerFieldSolution& fields);

struct SampledProfile {
  std::vector<double> z;      // m
  std::vector<double> theta;  // degC
};

/// Second-order finite-difference solution of the same boundary-value problem on a
/// grid no coarser than `grid_step` (<= 50 um). Interfaces and boundaries are grid nodes.
SampledProfile solve_steady_theta_fd(const ThermalStack& thermal, const LayerFieldSolution& fields,
                                     double grid_step);

struct TransientOptions {
  double grid_step = 50e-6;
  /// Seconds between stored profiles; <= 0 stores only the initial and final states.
  double report_interval = 0.0;
};

struct TransientSolution {
  std::vector<double> z;
  std::vector<double> times;
  std::vector<std::vector<double>> theta;  // theta[i] is the profile at times[i]
};

/// Backward-Euler integration of rho c dtheta/dt = k theta'' - h_b theta + SAR rho from theta = 0.
TransientSolution solve_transient_theta(const ThermalStack& thermal, const LayerFieldSolution& fields,
                                        double duration, double time_step, const TransientOptions& options = {});

struct ExposureResult {
  LayerFieldSolution fields;
  ThermalStack thermal;
  ThermalSolution theta;
};

/// Field solve followed by the closed-form thermal solve.
ExposureResult simulate_exposure(const LayerStack& stack, const PlaneWaveExcitation& excitation,
                                 const DielectricDatabase& db = DielectricDatabase::bundled(),
                                 const ThermalEnvironment& env = {});

struct ClothingTemperaturePoint {
  double clothing_thickness;  // m
  double surface_theta;       // degC at the skin surface
};

/// Surface elevation versus clothing thickness in [0, 10] mm for a clothed preset.
/// Zero thickness means no clothing at all (the unclothed preset, skin open to air).
std::vector<ClothingTemperaturePoint> clothing_thickness_temperature_sweep(
    ModelPreset clothed_preset, std::span<const double> thicknesses, const PlaneWaveExcitation& excitation,
    const DielectricDatabase& db = DielectricDatabase::bundled(), const ThermalEnvironment& env = {});

}  // namespace mmw
