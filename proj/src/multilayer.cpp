#include "mmw/multilayer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mmw/constants.hpp"
#include "mmw/errors.hpp"
#include "mmw/planewave.hpp"

namespace mmw {

namespace {

using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};

struct PresetName {
  ModelPreset preset;
  std::string_view name;
};

constexpr PresetName kPresetNames[] = {
    {ModelPreset::NakedSkin, "naked_skin"},
    {ModelPreset::NakedForehead, "naked_forehead"},
    {ModelPreset::ClothedSkin, "clothed_skin"},
    {ModelPreset::HatOnForehead, "hat_on_forehead"},
};

// Largest alpha*d accepted for a finite layer: e^{alpha d} must stay representable
// with room for the amplitudes.
constexpr double kMaxOpticalDepth = 300.0;

ComplexPermittivity layer_permittivity(const TissueLayer& layer, Frequency f, const DielectricDatabase& db) {
  if (layer.permittivity) return *layer.permittivity;
  return db.tissue(layer.tissue, f).permittivity;
}

}  // namespace

std::string_view to_string(ModelPreset preset) {
  for (const auto& p : kPresetNames) {
    if (p.preset == preset) return p.name;
  }
  return "unknown";
}

std::optional<ModelPreset> parse_model_preset(std::string_view name) {
  for (const auto& p : kPresetNames) {
    if (p.name == name) return p.preset;
  }
  return std::nullopt;
}

ModelPreset unclothed(ModelPreset preset) {
  switch (preset) {
    case ModelPreset::ClothedSkin: return ModelPreset::NakedSkin;
    case ModelPreset::HatOnForehead: return ModelPreset::NakedForehead;
    default: return preset;
  }
}

LayerStack::LayerStack(std::vector<TissueLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DomainError("layer stack is empty");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    const bool last = i + 1 == layers_.size();
    if (layer.tissue == Tissue::Blood) throw DomainError("blood cannot be used as a layer");
    if (layer.tissue == Tissue::Clothing && (i != 0 || last)) {
      throw DomainError("clothing is only allowed as the outermost finite layer");
    }
    if (last) {
      if (!std::isinf(layer.thickness) || layer.thickness < 0.0) {
        throw DomainError("the last layer must be semi-infinite");
      }
    } else if (!(layer.thickness >= 0.0) || !std::isfinite(layer.thickness)) {
      throw DomainError(fmt::format("layer {} ({}) needs a finite non-negative thickness, got {}", i,
                                    to_string(layer.tissue), layer.thickness));
    }
  }
}

LayerStack LayerStack::preset(ModelPreset preset, double clothing_thickness) {
  const Tissue deep =
      (preset == ModelPreset::NakedSkin || preset == ModelPreset::ClothedSkin) ? Tissue::Muscle : Tissue::Bone;
  std::vector<TissueLayer> layers;
  if (preset == ModelPreset::ClothedSkin || preset == ModelPreset::HatOnForehead) {
    layers.push_back({Tissue::Clothing, clothing_thickness, std::nullopt});
  }
  layers.push_back({Tissue::Skin, 1e-3, std::nullopt});
  layers.push_back({Tissue::SAT, 3e-3, std::nullopt});
  layers.push_back({deep, kSemiInfinite, std::nullopt});
  LayerStack stack(std::move(layers));
  stack.preset_ = preset;
  return stack;
}

std::vector<double> LayerStack::interface_positions() const {
  std::vector<double> z;
  z.reserve(layers_.size());
  double acc = 0.0;
  for (const auto& layer : layers_) {
    z.push_back(acc);
    acc += layer.thickness;
  }
  return z;
}

LayerStack LayerStack::with_permittivity(Tissue tissue, const ComplexPermittivity& eps) const {
  auto copy = *this;
  for (auto& layer : copy.layers_) {
    if (layer.tissue == tissue) layer.permittivity = eps;
  }
  return copy;
}

LayerStack LayerStack::without_layer(std::size_t index) const {
  if (index >= layers_.size()) throw OutOfRangeError("layer index out of range");
  auto layers = layers_;
  layers.erase(layers.begin() + static_cast<std::ptrdiff_t>(index));
  return LayerStack(std::move(layers));
}

double incident_amplitude(double power_density) {
  if (!(power_density >= 0.0) || !std::isfinite(power_density)) {
    throw DomainError(fmt::format("incident power density must be non-negative, got {}", power_density));
  }
  return std::sqrt(2.0 * constants::kFreeSpaceImpedance * power_density);
}

cd LayerField::e_field(double local_z) const {
  return e_plus * std::exp(-kJ * k * local_z) + e_minus * std::exp(kJ * k * local_z);
}

cd LayerField::h_field(double local_z) const {
  return (e_plus * std::exp(-kJ * k * local_z) - e_minus * std::exp(kJ * k * local_z)) / eta;
}

double LayerField::sar_rho(double local_z) const {
  const double a = alpha();
  const double b = beta();
  const cd uv = e_plus * std::conj(e_minus);
  const double value = std::norm(e_plus) * std::exp(-2.0 * a * local_z) +
                       std::norm(e_minus) * std::exp(2.0 * a * local_z) +
                       2.0 * uv.real() * std::cos(2.0 * b * local_z) +
                       2.0 * uv.imag() * std::sin(2.0 * b * local_z);
  return std::max(0.0, 0.5 * conductivity * value);
}

double LayerField::absorbed_power() const {
  if (conductivity == 0.0) return 0.0;
  const double a = alpha();
  const double b = beta();
  if (std::isinf(thickness)) return 0.5 * conductivity * std::norm(e_plus) / (2.0 * a);

  const double d = thickness;
  const double decay = a > 0.0 ? -std::expm1(-2.0 * a * d) / (2.0 * a) : d;
  const double growth = a > 0.0 ? std::expm1(2.0 * a * d) / (2.0 * a) : d;
  const double cos_int = std::sin(2.0 * b * d) / (2.0 * b);
  const double sin_int = std::pow(std::sin(b * d), 2) / b;
  const cd uv = e_plus * std::conj(e_minus);
  return 0.5 * conductivity *
         (std::norm(e_plus) * decay + std::norm(e_minus) * growth + 2.0 * uv.real() * cos_int +
          2.0 * uv.imag() * sin_int);
}

double LayerFieldSolution::reflectance() const {
  if (std::abs(incident_amplitude) == 0.0) return 0.0;
  return std::norm(reflected_amplitude / incident_amplitude);
}

double LayerFieldSolution::reflected_power_density() const {
  return std::norm(reflected_amplitude) / (2.0 * constants::kFreeSpaceImpedance);
}

double LayerFieldSolution::absorbed_power_density() const {
  double total = 0.0;
  for (const auto& layer : layers) total += layer.absorbed_power();
  return total;
}

std::size_t LayerFieldSolution::layer_index_at(double z) const {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw OutOfRangeError(fmt::format("depth {} m lies outside the layered domain [0, inf)", z));
  }
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    if (z < layers[i].start + layers[i].thickness) return i;
  }
  return layers.size() - 1;
}

cd LayerFieldSolution::e_field(double z) const {
  const auto& layer = layers[layer_index_at(z)];
  return layer.e_field(z - layer.start);
}

cd LayerFieldSolution::h_field(double z) const {
  const auto& layer = layers[layer_index_at(z)];
  return layer.h_field(z - layer.start);
}

double LayerFieldSolution::sar_rho(double z) const {
  const auto& layer = layers[layer_index_at(z)];
  return layer.sar_rho(z - layer.start);
}

double LayerFieldSolution::power_flux(double z) const {
  return 0.5 * std::real(e_field(z) * std::conj(h_field(z)));
}

double LayerFieldSolution::transmitted_fraction(std::size_t index) const {
  if (index >= layers.size()) throw OutOfRangeError("layer index out of range");
  if (incident_power_density == 0.0) return 0.0;
  const auto& layer = layers[index];
  return 0.5 * std::real(layer.e_field(0.0) * std::conj(layer.h_field(0.0))) / incident_power_density;
}

std::vector<InterfaceResidual> LayerFieldSolution::interface_residuals() const {
  std::vector<InterfaceResidual> out;
  const double scale = std::max(std::abs(incident_amplitude), std::numeric_limits<double>::min());
  const double eta0 = constants::kFreeSpaceImpedance;
  // Air side of the first interface.
  const cd e_air = incident_amplitude + reflected_amplitude;
  const cd h_air = (incident_amplitude - reflected_amplitude) / eta0;
  out.push_back({0.0, std::abs(e_air - layers[0].e_field(0.0)) / scale,
                 std::abs(h_air - layers[0].h_field(0.0)) * eta0 / scale});
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const auto& left = layers[i];
    const auto& right = layers[i + 1];
    out.push_back({right.start, std::abs(left.e_field(left.thickness) - right.e_field(0.0)) / scale,
                   std::abs(left.h_field(left.thickness) - right.h_field(0.0)) * eta0 / scale});
  }
  return out;
}

LayerFieldSolution solve_layer_fields(const LayerStack& stack, const PlaneWaveExcitation& excitation,
                                      const DielectricDatabase& db) {
  const Frequency f = excitation.frequency;
  if (!(f.in_hz() > 0.0)) throw DomainError("excitation frequency must be positive");

  LayerFieldSolution sol;
  sol.frequency = f;
  sol.incident_power_density = excitation.incident_power_density;
  sol.incident_amplitude = incident_amplitude(excitation.incident_power_density);

  const auto starts = stack.interface_positions();
  const double omega = 2.0 * constants::kPi * f.in_hz();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const auto& layer = stack.layers()[i];
    const auto eps = layer_permittivity(layer, f, db);
    LayerField field{layer.tissue,
                     eps,
                     eps.eps_imag() * omega * constants::kVacuumPermittivity,
                     starts[i],
                     layer.thickness,
                     {},
                     {},
                     wavenumber(eps, f),
                     wave_impedance(eps)};
    if (std::isfinite(layer.thickness) && field.alpha() * layer.thickness > kMaxOpticalDepth) {
      throw NumericError(fmt::format("layer {} is too lossy to resolve (alpha*d = {:.1f})", i,
                                     field.alpha() * layer.thickness));
    }
    sol.layers.push_back(field);
  }

  // Unknowns: [E0-, (E1+, E1-'), ..., E_N+]; two rows per interface. Each backward wave is referenced
  // at its layer's right face (E- = E-' e^{-jkd}) so every coefficient stays bounded by one.
  const std::size_t n = stack.size();
  const std::size_t unknowns = 2 * n;
  auto plus_col = [&](std::size_t layer) { return 1 + 2 * layer; };
  auto minus_col = [&](std::size_t layer) { return 2 + 2 * layer; };
  std::vector<cd> decay(n, cd{0.0, 0.0});
  for (std::size_t i = 0; i + 1 < n; ++i) decay[i] = std::exp(-kJ * sol.layers[i].k * sol.layers[i].thickness);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(unknowns, unknowns);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(unknowns);
  const double eta0 = constants::kFreeSpaceImpedance;
  const cd e0 = sol.incident_amplitude;

  // Air/first-layer interface: E0+ + E0- = E1(0), (E0+ - E0-)/eta0 = H1(0).
  {
    const auto& right = sol.layers[0];
    a(0, 0) = -1.0;
    a(0, plus_col(0)) = 1.0;
    if (n > 1) a(0, minus_col(0)) = decay[0];
    rhs(0) = e0;
    a(1, 0) = 1.0;
    a(1, plus_col(0)) = eta0 / right.eta;
    if (n > 1) a(1, minus_col(0)) = -decay[0] * eta0 / right.eta;
    rhs(1) = e0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& left = sol.layers[i];
    const auto& right = sol.layers[i + 1];
    const bool right_has_minus = i + 2 < n;
    const std::size_t re = 2 * (i + 1);
    const std::size_t rh = re + 1;
    a(re, plus_col(i)) = decay[i];
    a(re, minus_col(i)) = 1.0;
    a(re, plus_col(i + 1)) = -1.0;
    if (right_has_minus) a(re, minus_col(i + 1)) = -decay[i + 1];
    a(rh, plus_col(i)) = decay[i] * eta0 / left.eta;
    a(rh, minus_col(i)) = -eta0 / left.eta;
    a(rh, plus_col(i + 1)) = -eta0 / right.eta;
    if (right_has_minus) a(rh, minus_col(i + 1)) = decay[i + 1] * eta0 / right.eta;
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericError(fmt::format("interface system is singular (rcond = {:.3g})", rcond));
  }
  const Eigen::VectorXcd x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericError("interface system produced non-finite amplitudes");

  sol.reflected_amplitude = x(0);
  for (std::size_t i = 0; i < n; ++i) {
    sol.layers[i].e_plus = x(plus_col(i));
    sol.layers[i].e_minus = (i + 1 < n) ? x(minus_col(i)) * decay[i] : cd{0.0, 0.0};
  }
  return sol;
}

std::vector<double> sar_rho_profile(const LayerFieldSolution& solution, std::span<const double> z_grid) {
  std::vector<double> out;
  out.reserve(z_grid.size());
  for (const double z : z_grid) out.push_back(solution.sar_rho(z));
  return out;
}

ClothingTransmission clothing_transmission(const LayerStack& stack, Frequency frequency,
                                           const DielectricDatabase& db) {
  if (!stack.clothed() || stack.size() < 2) {
    throw UsageError("clothing transmission needs a stack whose first layer is clothing");
  }
  const auto& cloth = stack.layers()[0];
  const auto eps_c = layer_permittivity(cloth, frequency, db);
  const auto eps_s = layer_permittivity(stack.layers()[1], frequency, db);

  const double r0 = std::norm(reflection_coefficient(eps_c, 0.0, Polarization::Perpendicular));
  const cd n_c = std::sqrt(eps_c.value());
  const cd n_s = std::sqrt(eps_s.value());
  const double r1 = std::norm((n_c - n_s) / (n_c + n_s));
  const double alpha_c = attenuation_constant(eps_c, frequency);

  return {1.0 - r0, (1.0 - r0) * (1.0 - r1) * std::exp(-2.0 * alpha_c * cloth.thickness)};
}

std::vector<ClothingSweepPoint> clothing_transmission_sweep(ModelPreset clothed_preset,
                                                            std::span<const double> thicknesses,
                                                            Frequency frequency, const DielectricDatabase& db) {
  if (unclothed(clothed_preset) == clothed_preset) {
    throw UsageError(fmt::format("preset '{}' has no clothing layer", to_string(clothed_preset)));
  }
  std::vector<ClothingSweepPoint> out;
  out.reserve(thicknesses.size());
  for (const double d : thicknesses) {
    const auto stack = LayerStack::preset(clothed_preset, d);
    // Transmission fractions are independent of the incident level.
    const auto sol = solve_layer_fields(stack, {frequency, 1.0}, db);
    out.push_back({d, clothing_transmission(stack, frequency, db), sol.transmitted_fraction(0),
                   sol.transmitted_fraction(1)});
  }
  return out;
}

}  // namespace mmw
