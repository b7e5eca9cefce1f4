#include "mmw/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mmw/bioheat.hpp"
#include "mmw/constants.hpp"
#include "mmw/errors.hpp"
#include "mmw/multilayer.hpp"

namespace mmw::cli {

namespace {

std::string_view to_string(Polarization pol) { return pol == Polarization::Parallel ? "parallel" : "perpendicular"; }

std::string num(double v) { return fmt::format("{:.15g}", v); }

// Linear interpolation of a nodal profile onto `z` (both ascending, z inside the node span).
std::vector<double> resample(const std::vector<double>& nodes, const std::vector<double>& values,
                             const std::vector<double>& z) {
  std::vector<double> out;
  out.reserve(z.size());
  for (const double x : z) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it == nodes.end()) {
      out.push_back(values.back());
      continue;
    }
    const auto i = static_cast<std::size_t>(it - nodes.begin());
    if (*it == x || i == 0) {
      out.push_back(values[i]);
      continue;
    }
    const double t = (x - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    out.push_back(values[i - 1] + t * (values[i] - values[i - 1]));
  }
  return out;
}

std::vector<double> depth_grid_m(const ScenarioConfig& config, double extent_mm) {
  auto z = linear_range(0.0, extent_mm, config.sample_step_mm);
  if (z.back() < extent_mm) z.push_back(extent_mm);
  for (auto& v : z) v *= 1e-3;
  return z;
}

ComplexPermittivity lookup_material(const std::string& name, Frequency f, const DielectricDatabase& db) {
  if (const auto model = parse_skin_model(name)) return db.skin_model(*model, f).permittivity;
  if (const auto tissue = parse_tissue(name)) return db.tissue(*tissue, f).permittivity;
  throw UsageError(fmt::format("unknown skin model or tissue '{}'", name));
}

std::string area_text(const AveragingArea& area) {
  switch (area.kind) {
    case AveragingArea::Kind::Fixed: return fmt::format("{:.4g} cm^2", area.area_m2 * 1e4);
    case AveragingArea::Kind::ProjectedBody: return "projected body area";
    case AveragingArea::Kind::Unspecified: break;
  }
  return "not specified";
}

}  // namespace

std::vector<double> linear_range(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw DomainError(fmt::format("invalid range {}:{}:{}", start, step, stop));
  }
  const double count = std::floor((stop - start) / step + 1e-9);
  if (count > 1e7) throw DomainError("range has too many points");
  std::vector<double> out;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(count); ++i) {
    out.push_back(start + static_cast<double>(i) * step);
  }
  if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
  return out;
}

int cmd_reflect(const ReflectOptions& options, std::ostream& out) {
  const auto f = Frequency::ghz(options.frequency_ghz);
  if (!(options.frequency_ghz > 0.0)) throw DomainError("frequency must be positive");
  const auto angles = linear_range(options.angle_start_deg, options.angle_stop_deg, options.angle_step_deg);
  if (angles.front() < 0.0 || angles.back() >= 90.0) throw DomainError("angles must lie in [0, 90) degrees");

  std::vector<std::pair<std::string, ComplexPermittivity>> media;
  if (options.permittivity) {
    media.emplace_back("custom", *options.permittivity);
  } else {
    const auto& db = DielectricDatabase::bundled();
    const std::vector<SkinModel> models =
        options.models.empty() ? std::vector<SkinModel>(std::begin(kAllSkinModels), std::end(kAllSkinModels))
                               : options.models;
    for (const auto m : models) media.emplace_back(std::string(mmw::to_string(m)), db.skin_model(m, f).permittivity);
  }

  fmt::print(out, "model,polarization,theta_deg,reflectance\n");
  for (const auto& [name, eps] : media) {
    for (const auto pol : options.polarizations) {
      for (const double a : angles) {
        const auto pc = power_coefficients(eps, a * constants::kPi / 180.0, pol);
        fmt::print(out, "{},{},{},{}\n", name, to_string(pol), num(a), num(pc.reflectance));
      }
    }
  }
  return kOk;
}

int cmd_depth(const DepthOptions& options, std::ostream& out) {
  if (!(options.absorbed_fraction > 0.0 && options.absorbed_fraction < 1.0)) {
    throw DomainError("absorbed fraction must lie in (0, 1)");
  }
  std::vector<std::string> materials = options.materials;
  if (options.permittivity) {
    materials = {"custom"};
  } else if (materials.empty()) {
    materials = {"skin", "sat", "muscle", "bone"};
  }
  for (const auto& m : materials) {
    if (m != "custom" && !parse_skin_model(m) && !parse_tissue(m)) {
      throw UsageError(fmt::format("unknown skin model or tissue '{}'", m));
    }
  }

  const auto& db = DielectricDatabase::bundled();
  fmt::print(out, "material,frequency_GHz,eps_real,eps_imag,penetration_depth_mm,absorption_depth_mm,note\n");
  for (const auto& m : materials) {
    for (const double fg : options.frequencies_ghz) {
      const auto f = Frequency::ghz(fg);
      try {
        if (!(fg > 0.0)) throw DomainError("frequency must be positive");
        const auto eps = options.permittivity ? *options.permittivity : lookup_material(m, f, db);
        std::string eps_cols = fmt::format("{},{}", num(eps.eps_real()), num(eps.eps_imag()));
        try {
          const double dp = penetration_depth(eps, f);
          const double da = absorption_depth(eps, f, options.absorbed_fraction);
          fmt::print(out, "{},{},{},{},{},\n", m, num(fg), eps_cols, num(dp * 1e3), num(da * 1e3));
        } catch (const DomainError& e) {
          fmt::print(out, "{},{},{},,,error: {}\n", m, num(fg), eps_cols, e.what());
        }
      } catch (const OutOfRangeError& e) {
        fmt::print(out, "{},{},,,,,error: {}\n", m, num(fg), e.what());
      } catch (const DomainError& e) {
        fmt::print(out, "{},{},,,,,error: {}\n", m, num(fg), e.what());
      }
    }
  }
  return kOk;
}

int cmd_fields(const ScenarioConfig& config, std::ostream& out) {
  const auto db = config.database();
  const auto stack = config.build_stack(db);
  const auto sol = solve_layer_fields(stack, config.excitation(), db);
  const double clothing = stack.clothed() ? stack.layers().front().thickness : 0.0;

  fmt::print(out, "z_mm,layer,E_abs_V_per_m,E_re_V_per_m,E_im_V_per_m,sar_rho_W_per_m3,power_flux_W_per_m2\n");
  for (const double z : depth_grid_m(config, clothing * 1e3 + config.thermal_depth_mm)) {
    const auto i = sol.layer_index_at(z);
    const auto e = sol.e_field(z);
    fmt::print(out, "{},{},{},{},{},{},{}\n", num(z * 1e3), mmw::to_string(sol.layers[i].tissue), num(std::abs(e)),
               num(e.real()), num(e.imag()), num(sol.sar_rho(z)), num(sol.power_flux(z)));
  }
  return kOk;
}

int cmd_temp(const ScenarioConfig& config, const TempOptions& options, std::ostream& out) {
  const auto db = config.database();
  const auto stack = config.build_stack(db);
  const auto fields = solve_layer_fields(stack, config.excitation(), db);
  const auto thermal = ThermalStack::from_layer_stack(stack, db, config.environment());
  auto z = depth_grid_m(config, thermal.depth() * 1e3);
  for (auto& v : z) v = std::min(v, thermal.depth());
  z.back() = thermal.depth();

  if (options.duration_s) {
    TransientOptions topt;
    topt.grid_step = options.fd_grid_step_um * 1e-6;
    topt.report_interval = options.report_interval_s;
    const auto tr = solve_transient_theta(thermal, fields, *options.duration_s, options.time_step_s, topt);
    fmt::print(out, "time_s,z_mm,theta_degC\n");
    for (std::size_t t = 0; t < tr.times.size(); ++t) {
      const auto theta = resample(tr.z, tr.theta[t], z);
      for (std::size_t i = 0; i < z.size(); ++i) {
        fmt::print(out, "{},{},{}\n", num(tr.times[t]), num(z[i] * 1e3), num(theta[i]));
      }
    }
    return kOk;
  }

  std::vector<double> theta;
  if (options.method == ThermalMethod::FiniteDifference) {
    const auto fd = solve_steady_theta_fd(thermal, fields, options.fd_grid_step_um * 1e-6);
    theta = resample(fd.z, fd.theta, z);
  } else {
    theta = solve_steady_theta(thermal, fields).sample(z);
  }
  fmt::print(out, "z_mm,theta_degC\n");
  for (std::size_t i = 0; i < z.size(); ++i) fmt::print(out, "{},{}\n", num(z[i] * 1e3), num(theta[i]));
  return kOk;
}

int cmd_sweep_clothing(const ScenarioConfig& config, const SweepOptions& options, std::ostream& out) {
  if (!config.layers.empty()) throw UsageError("sweep-clothing works on a clothed preset, not a custom layer list");
  if (unclothed(config.preset) == config.preset) {
    throw UsageError(fmt::format("sweep-clothing needs a clothed preset, got '{}'", mmw::to_string(config.preset)));
  }
  const auto thicknesses = linear_range(options.start_mm, options.stop_mm, options.step_mm);
  if (thicknesses.front() < 0.0 || thicknesses.back() > 10.0 + 1e-12) {
    throw DomainError("clothing thickness range must lie within [0, 10] mm");
  }
  const auto db = config.database();
  const auto f = config.frequency();

  fmt::print(out, "d_c_mm,T_air_clothing_two_bounce,T_skin_two_bounce,T_air_clothing,T_skin,theta_surface_degC\n");
  for (const double d : thicknesses) {
    auto point = config;
    point.clothing_thickness_mm = d;
    // Transmission is taken through a garment of thickness d (zero included) so both routes stay defined.
    auto em_stack = LayerStack::preset(config.preset, d * 1e-3);
    if (config.skin_model) {
      em_stack = em_stack.with_permittivity(Tissue::Skin, db.skin_model(*config.skin_model, f).permittivity);
    }
    const auto two_bounce = clothing_transmission(em_stack, f, db);
    const auto sol = solve_layer_fields(em_stack, {f, 1.0}, db);
    const auto exposure = simulate_exposure(point.build_stack(db), point.excitation(), db, point.environment());
    fmt::print(out, "{},{},{},{},{},{}\n", num(d), num(two_bounce.air_clothing), num(two_bounce.clothing_skin),
               num(sol.transmitted_fraction(0)), num(sol.transmitted_fraction(1)),
               num(exposure.theta.surface_theta()));
  }
  return kOk;
}

int cmd_compliance(const ComplianceOptions& options, std::ostream& out) {
  const auto catalog = options.catalog_path ? LimitCatalog::from_file(*options.catalog_path) : LimitCatalog::bundled();
  const auto f = Frequency::ghz(options.device.frequency_ghz);
  const DeviceFarFieldDescriptor device{options.device.power_w, db_to_linear(options.device.gain_db),
                                        options.device.largest_dimension_mm * 1e-3, options.distance_mm * 1e-3};
  const ExposureContext context{options.standard, options.population, f, options.localized_peak};
  const auto report = evaluate(device, context, catalog);

  fmt::print(out, "standard: {}\n", mmw::to_string(options.standard));
  fmt::print(out, "population: {}\n", mmw::to_string(options.population));
  fmt::print(out, "exposure: {}\n", options.localized_peak ? "spatial peak" : "whole body");
  fmt::print(out, "frequency: {} GHz\n", num(options.device.frequency_ghz));
  fmt::print(out, "limit: {} W/m^2\n", num(report.limit.pd_limit));
  fmt::print(out, "averaging area: {}\n", area_text(report.limit.averaging_area));
  fmt::print(out, "averaging time: {:.4g} min\n", report.limit.averaging_time_min);
  fmt::print(out, "clause: {}\n", report.limit.source_clause);
  fmt::print(out, "fraunhofer distance: {:.4g} mm\n",
             fraunhofer_distance(device.largest_dimension, f) * 1e3);
  fmt::print(out, "measurement boundary: {:.4g} mm\n", report.near_field_boundary * 1e3);
  fmt::print(out, "distance: {} mm\n", num(options.distance_mm));
  if (report.power_density) {
    fmt::print(out, "power density: {:.6g} W/m^2\n", *report.power_density);
    fmt::print(out, "margin: {:+.3f} dB\n", *report.margin_db);
  } else {
    fmt::print(out, "power density: not evaluated (near field; use numerical modelling)\n");
  }
  fmt::print(out, "verdict: {}\n", mmw::to_string(report.verdict));

  switch (report.verdict) {
    case Verdict::Compliant: return kOk;
    case Verdict::NonCompliant: return kNonCompliant;
    case Verdict::NearFieldIndeterminate: break;
  }
  return kNearField;
}

int cmd_farfield(const FarFieldOptions& options, std::ostream& out) {
  const auto f = Frequency::ghz(options.device.frequency_ghz);
  const double boundary = fraunhofer_distance(options.device.largest_dimension_mm * 1e-3, f);
  fmt::print(out, "distance_mm,region,power_density_W_per_m2\n");
  for (const double d_mm : options.distances_mm) {
    const DeviceFarFieldDescriptor device{options.device.power_w, db_to_linear(options.device.gain_db),
                                          options.device.largest_dimension_mm * 1e-3, d_mm * 1e-3};
    if (device.distance < boundary) {
      fmt::print(out, "{},near,\n", num(d_mm));
    } else {
      fmt::print(out, "{},far,{}\n", num(d_mm), num(far_field_pd(device, f)));
    }
  }
  return kOk;
}

}  // namespace mmw::cli
