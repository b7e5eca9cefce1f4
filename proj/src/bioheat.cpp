#include "mmw/bioheat.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mmw/errors.hpp"

namespace mmw {

namespace {

constexpr double kMaxSweepThickness = 10e-3;
constexpr double kMaxFdStep = 50e-6;

void check_consistent(const ThermalStack& thermal, const LayerFieldSolution& fields) {
  if (thermal.layers.empty()) throw DomainError("thermal stack is empty");
  for (const auto& layer : thermal.layers) {
    if (layer.field_layer >= fields.layers.size() || fields.layers[layer.field_layer].tissue != layer.tissue) {
      throw DomainError("thermal stack does not match the field solution's tissue layers");
    }
  }
}

// Tridiagonal system in finite-volume form: every row is the heat balance of the
// half cells adjoining one node.
struct FdSystem {
  std::vector<double> z;
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> source;  // integrated SAR*rho per node, W/m^2
  std::vector<double> mass;    // integrated rho*c per node, J/m^2/degC
};

FdSystem assemble_fd(const ThermalStack& thermal, const LayerFieldSolution& fields, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= kMaxFdStep * (1.0 + 1e-12))) {
    throw DomainError(fmt::format("finite-difference step must lie in (0, 50 um], got {} m", grid_step));
  }
  std::vector<std::size_t> cells;
  std::size_t nodes = 1;
  for (const auto& layer : thermal.layers) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(layer.thickness / grid_step - 1e-9)));
    cells.push_back(n);
    nodes += n;
  }

  FdSystem sys;
  sys.z.assign(nodes, 0.0);
  sys.lower.assign(nodes, 0.0);
  sys.diag.assign(nodes, 0.0);
  sys.upper.assign(nodes, 0.0);
  sys.source.assign(nodes, 0.0);
  sys.mass.assign(nodes, 0.0);

  std::size_t p = 0;
  for (std::size_t j = 0; j < thermal.layers.size(); ++j) {
    const auto& layer = thermal.layers[j];
    const auto& field = fields.layers[layer.field_layer];
    const std::size_t n = cells[j];
    const double h = layer.thickness / static_cast<double>(n);
    const double k = layer.conductivity;
    const double hb = layer.perfusion_coefficient;
    const double rc = layer.density * layer.specific_heat;
    for (std::size_t i = 0; i < n; ++i, ++p) {
      const double zl = static_cast<double>(i) * h;
      const double zr = (i + 1 == n) ? layer.thickness : static_cast<double>(i + 1) * h;
      sys.z[p] = layer.start + zl;
      sys.z[p + 1] = layer.start + zr;

      sys.diag[p] += -k / h - 0.5 * h * hb;
      sys.upper[p] += k / h;
      sys.source[p] += 0.5 * h * field.sar_rho(zl);
      sys.mass[p] += 0.5 * h * rc;

      sys.diag[p + 1] += -k / h - 0.5 * h * hb;
      sys.lower[p + 1] += k / h;
      sys.source[p + 1] += 0.5 * h * field.sar_rho(zr);
      sys.mass[p + 1] += 0.5 * h * rc;
    }
  }
  sys.diag[0] -= thermal.surface_heat_transfer;
  return sys;
}

// Thomas algorithm; the last row is the Dirichlet condition theta = 0.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  lower[n - 1] = 0.0;
  diag[n - 1] = 1.0;
  rhs[n - 1] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(std::abs(diag[i - 1]) > 0.0)) throw NumericError("finite-difference matrix is singular");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    if (!(std::abs(diag[i]) > 0.0)) throw NumericError("finite-difference matrix is singular");
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  for (const double v : x) {
    if (!std::isfinite(v)) throw NumericError("finite-difference solve produced non-finite values");
  }
  return x;
}

struct Basis {
  double value[2];
  double slope[2];
};

Basis homogeneous_basis(const ThermalLayerSolution& s, double z) {
  const double m = s.decay_rate;
  const double d = s.layer.thickness;
  if (m == 0.0) {
    if (s.anchored_at_cutoff) return {{d - z, 1.0}, {-1.0, 0.0}};
    return {{1.0, z}, {0.0, 1.0}};
  }
  const double em = std::exp(-m * z);
  const double ep = std::exp(m * (z - d));
  if (s.anchored_at_cutoff) {
    // e^{-mz} - e^{m(z-2d)}, written with expm1 so it stays accurate next to z = d.
    const double tail = std::exp(-2.0 * m * (d - z));
    return {{-em * std::expm1(-2.0 * m * (d - z)), ep}, {-m * em * (1.0 + tail), m * ep}};
  }
  return {{em, ep}, {-m * em, m * ep}};
}

}  // namespace

double heat_transfer_coefficient(const TissueThermalRecord& tissue, const TissueThermalRecord& blood) {
  const double perfusion_per_second = tissue.perfusion * 1e-6 / 60.0;  // m^3 blood / kg tissue / s
  return blood.density * blood.specific_heat * perfusion_per_second * tissue.density;
}

double heat_transfer_coefficient(const TissueThermalRecord& tissue) {
  return heat_transfer_coefficient(tissue, DielectricDatabase::bundled().thermal(Tissue::Blood));
}

ThermalStack ThermalStack::from_layer_stack(const LayerStack& stack, const DielectricDatabase& db,
                                            const ThermalEnvironment& env) {
  if (!(env.depth > 0.0)) throw DomainError("thermal depth must be positive");
  ThermalStack thermal;
  thermal.air_temperature = env.air_temperature;
  thermal.blood_temperature = env.blood_temperature;
  thermal.surface_heat_transfer = env.surface_heat_transfer.value_or(stack.clothed() ? 0.0 : kAirSkinHeatTransfer);
  if (thermal.surface_heat_transfer < 0.0) throw DomainError("surface heat-transfer coefficient must be >= 0");

  const auto& blood = db.thermal(Tissue::Blood);
  const std::size_t first = stack.clothed() ? 1 : 0;
  double start = 0.0;
  for (std::size_t i = first; i < stack.size(); ++i) {
    const auto& layer = stack.layers()[i];
    const bool last = i + 1 == stack.size();
    const double thickness = last ? env.depth - start : layer.thickness;
    if (last && !(thickness > 0.0)) {
      throw DomainError(fmt::format("finite tissue layers ({} m) fill the {} m thermal domain", start, env.depth));
    }
    if (thickness == 0.0) continue;
    const auto& rec = db.thermal(layer.tissue);
    thermal.layers.push_back({layer.tissue, i, start, thickness, rec.density, rec.specific_heat,
                              rec.thermal_conductivity, heat_transfer_coefficient(rec, blood), rec.metabolic_heat});
    start += thickness;
  }
  return thermal;
}

double ThermalLayerSolution::particular(double z) const {
  return zeta_amplitude * std::exp(-2.0 * alpha * z) + xi_amplitude * std::exp(2.0 * alpha * z) +
         psi_cos * std::cos(2.0 * beta * z) + psi_sin * std::sin(2.0 * beta * z);
}

double ThermalLayerSolution::dparticular(double z) const {
  return -2.0 * alpha * zeta_amplitude * std::exp(-2.0 * alpha * z) +
         2.0 * alpha * xi_amplitude * std::exp(2.0 * alpha * z) -
         2.0 * beta * psi_cos * std::sin(2.0 * beta * z) + 2.0 * beta * psi_sin * std::cos(2.0 * beta * z);
}

double ThermalLayerSolution::theta(double z) const {
  const auto b = homogeneous_basis(*this, z);
  return c_a * b.value[0] + c_b * b.value[1] + particular(z);
}

double ThermalLayerSolution::dtheta(double z) const {
  const auto b = homogeneous_basis(*this, z);
  return c_a * b.slope[0] + c_b * b.slope[1] + dparticular(z);
}

ThermalSolution::ThermalSolution(std::vector<ThermalLayerSolution> layers, double surface_heat_transfer)
    : layers_(std::move(layers)), surface_heat_transfer_(surface_heat_transfer) {
  if (layers_.empty()) throw DomainError("thermal solution has no layers");
  depth_ = layers_.back().layer.start + layers_.back().layer.thickness;
}

std::size_t ThermalSolution::layer_index_at(double z) const {
  if (!(z >= 0.0 && z <= depth_)) {
    throw OutOfRangeError(fmt::format("depth {} m lies outside the thermal domain [0, {}]", z, depth_));
  }
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    if (z < layers_[i].layer.start + layers_[i].layer.thickness) return i;
  }
  return layers_.size() - 1;
}

double ThermalSolution::theta(double z) const {
  const auto& s = layers_[layer_index_at(z)];
  if (z == depth_) return 0.0;
  return s.theta(z - s.layer.start);
}

double ThermalSolution::heat_flux(double z) const {
  const auto& s = layers_[layer_index_at(z)];
  return -s.layer.conductivity * s.dtheta(z - s.layer.start);
}

std::vector<double> ThermalSolution::sample(std::span<const double> z) const {
  std::vector<double> out;
  out.reserve(z.size());
  for (const double v : z) out.push_back(theta(v));
  return out;
}

std::vector<ThermalInterfaceResidual> ThermalSolution::interface_residuals() const {
  std::vector<ThermalInterfaceResidual> out;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const auto& r = layers_[i + 1];
    const double d = l.layer.thickness;
    out.push_back({r.layer.start, l.theta(d) - r.theta(0.0),
                   l.layer.conductivity * l.dtheta(d) - r.layer.conductivity * r.dtheta(0.0)});
  }
  return out;
}

double ThermalSolution::surface_residual() const {
  const auto& s = layers_.front();
  return s.layer.conductivity * s.dtheta(0.0) - surface_heat_transfer_ * s.theta(0.0);
}

double ThermalSolution::cutoff_residual() const {
  const auto& s = layers_.back();
  return s.theta(s.layer.thickness);
}

ThermalSolution solve_steady_theta(const ThermalStack& thermal, const LayerFieldSolution& fields) {
  check_consistent(thermal, fields);

  std::vector<ThermalLayerSolution> layers;
  for (const auto& layer : thermal.layers) {
    const auto& field = fields.layers[layer.field_layer];
    ThermalLayerSolution s;
    s.layer = layer;
    const double k = layer.conductivity;
    const double hb = layer.perfusion_coefficient;
    s.decay_rate = std::sqrt(hb / k);
    s.alpha = field.alpha();
    s.beta = field.beta();
    if (s.decay_rate * layer.thickness > 300.0) {
      throw NumericError(fmt::format("layer '{}' is too thick for the closed form (m*d = {:.1f})",
                                     to_string(layer.tissue), s.decay_rate * layer.thickness));
    }
    const double sigma = field.conductivity;
    if (sigma > 0.0) {
      const double resonance = 4.0 * s.alpha * s.alpha * k - hb;
      const double scale = 4.0 * s.alpha * s.alpha * k + hb;
      if (std::abs(resonance) < 1e-6 * scale) {
        throw NumericError(fmt::format(
            "layer '{}': 4 alpha^2 k is within 1e-6 of h_b; use solve_steady_theta_fd for this configuration",
            to_string(layer.tissue)));
      }
      const auto uv = field.e_plus * std::conj(field.e_minus);
      s.zeta_amplitude = -sigma / (2.0 * resonance) * std::norm(field.e_plus);
      s.xi_amplitude = -sigma / (2.0 * resonance) * std::norm(field.e_minus);
      // SAR*rho carries sigma (u cos + v sin); the oscillatory response divides by 4 beta^2 k + h_b.
      const double osc = 4.0 * s.beta * s.beta * k + hb;
      s.psi_cos = sigma * uv.real() / osc;
      s.psi_sin = sigma * uv.imag() / osc;
    }
    layers.push_back(s);
  }
  layers.back().anchored_at_cutoff = true;

  const std::size_t n = layers.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);

  {
    const auto& s = layers.front();
    const double k = s.layer.conductivity;
    const double h = thermal.surface_heat_transfer;
    const auto b = homogeneous_basis(s, 0.0);
    for (int c = 0; c < 2; ++c) a(0, c) = b.slope[c] - h / k * b.value[c];
    rhs(0) = -(s.dparticular(0.0) - h / k * s.particular(0.0));
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto& l = layers[j];
    const auto& r = layers[j + 1];
    const double d = l.layer.thickness;
    const double kl = l.layer.conductivity;
    const double kr = r.layer.conductivity;
    const auto bl = homogeneous_basis(l, d);
    const auto br = homogeneous_basis(r, 0.0);
    const auto row_t = static_cast<Eigen::Index>(2 * j + 1);
    const auto row_q = static_cast<Eigen::Index>(2 * j + 2);
    for (int c = 0; c < 2; ++c) {
      a(row_t, static_cast<Eigen::Index>(2 * j + c)) = bl.value[c];
      a(row_t, static_cast<Eigen::Index>(2 * j + 2 + c)) = -br.value[c];
      a(row_q, static_cast<Eigen::Index>(2 * j + c)) = kl / kr * bl.slope[c];
      a(row_q, static_cast<Eigen::Index>(2 * j + 2 + c)) = -br.slope[c];
    }
    rhs(row_t) = r.particular(0.0) - l.particular(d);
    rhs(row_q) = r.dparticular(0.0) - kl / kr * l.dparticular(d);
  }
  {
    const auto& s = layers.back();
    const auto b = homogeneous_basis(s, s.layer.thickness);
    const auto row = static_cast<Eigen::Index>(2 * n - 1);
    for (int c = 0; c < 2; ++c) a(row, static_cast<Eigen::Index>(2 * n - 2 + c)) = b.value[c];
    rhs(row) = -s.particular(s.layer.thickness);
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw NumericError(fmt::format("thermal boundary system is singular (rcond = {:.3g})", lu.rcond()));
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericError("thermal boundary system produced non-finite coefficients");
  for (std::size_t j = 0; j < n; ++j) {
    layers[j].c_a = x(static_cast<Eigen::Index>(2 * j));
    layers[j].c_b = x(static_cast<Eigen::Index>(2 * j + 1));
  }
  return ThermalSolution(std::move(layers), thermal.surface_heat_transfer);
}

SampledProfile solve_steady_theta_fd(const ThermalStack& thermal, const LayerFieldSolution& fields,
                                     double grid_step) {
  check_consistent(thermal, fields);
  auto sys = assemble_fd(thermal, fields, grid_step);
  std::vector<double> rhs(sys.source.size());
  std::transform(sys.source.begin(), sys.source.end(), rhs.begin(), [](double s) { return -s; });
  auto theta = solve_tridiagonal(sys.lower, sys.diag, sys.upper, std::move(rhs));
  return {std::move(sys.z), std::move(theta)};
}

TransientSolution solve_transient_theta(const ThermalStack& thermal, const LayerFieldSolution& fields,
                                        double duration, double time_step, const TransientOptions& options) {
  check_consistent(thermal, fields);
  if (!(time_step > 0.0) || !std::isfinite(time_step) || !(duration > 0.0) || !std::isfinite(duration)) {
    throw NumericError(fmt::format("time stepping needs positive finite duration and step (got {} s, {} s)",
                                   duration, time_step));
  }
  const double raw_steps = std::ceil(duration / time_step - 1e-9);
  if (raw_steps > 1e7) throw NumericError(fmt::format("{} time steps requested; refusing", raw_steps));
  const auto steps = static_cast<std::size_t>(std::max(1.0, raw_steps));
  const double dt = duration / static_cast<double>(steps);

  const auto sys = assemble_fd(thermal, fields, options.grid_step);
  const std::size_t n = sys.z.size();

  // (M - dt A) theta^{n+1} = M theta^n + dt s
  std::vector<double> lower(n), diag(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = -dt * sys.lower[i];
    diag[i] = sys.mass[i] - dt * sys.diag[i];
    upper[i] = -dt * sys.upper[i];
  }

  TransientSolution out;
  out.z = sys.z;
  std::vector<double> theta(n, 0.0);
  out.times.push_back(0.0);
  out.theta.push_back(theta);

  double next_report = options.report_interval > 0.0 ? options.report_interval : duration;
  std::vector<double> rhs(n);
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = sys.mass[i] * theta[i] + dt * sys.source[i];
    theta = solve_tridiagonal(lower, diag, upper, rhs);
    const double t = dt * static_cast<double>(step);
    if (step == steps || t >= next_report - 1e-9 * dt) {
      out.times.push_back(t);
      out.theta.push_back(theta);
      while (next_report <= t + 1e-9 * dt) next_report += options.report_interval > 0.0 ? options.report_interval : duration;
    }
  }
  return out;
}

ExposureResult simulate_exposure(const LayerStack& stack, const PlaneWaveExcitation& excitation,
                                 const DielectricDatabase& db, const ThermalEnvironment& env) {
  auto fields = solve_layer_fields(stack, excitation, db);
  auto thermal = ThermalStack::from_layer_stack(stack, db, env);
  auto theta = solve_steady_theta(thermal, fields);
  return {std::move(fields), std::move(thermal), std::move(theta)};
}

std::vector<ClothingTemperaturePoint> clothing_thickness_temperature_sweep(
    ModelPreset clothed_preset, std::span<const double> thicknesses, const PlaneWaveExcitation& excitation,
    const DielectricDatabase& db, const ThermalEnvironment& env) {
  if (unclothed(clothed_preset) == clothed_preset) {
    throw UsageError(fmt::format("preset '{}' has no clothing layer", to_string(clothed_preset)));
  }
  std::vector<ClothingTemperaturePoint> out;
  out.reserve(thicknesses.size());
  for (const double d : thicknesses) {
    if (!(d >= 0.0 && d <= kMaxSweepThickness * (1.0 + 1e-12))) {
      throw DomainError(fmt::format("clothing thickness {} m lies outside [0, 10 mm]", d));
    }
    const auto stack = d == 0.0 ? LayerStack::preset(unclothed(clothed_preset)) : LayerStack::preset(clothed_preset, d);
    out.push_back({d, simulate_exposure(stack, excitation, db, env).theta.surface_theta()});
  }
  return out;
}

}  // namespace mmw
