#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmw/bioheat.hpp"
#include "mmw/errors.hpp"
#include "mmw/planewave.hpp"

using namespace mmw;

namespace {

const auto k60 = Frequency::ghz(60);

double max_fd_error(const ExposureResult& r, double step) {
  const auto fd = solve_steady_theta_fd(r.thermal, r.fields, step);
  double err = 0.0;
  for (std::size_t i = 0; i < fd.z.size(); ++i) err = std::max(err, std::abs(fd.theta[i] - r.theta.theta(fd.z[i])));
  return err;
}

std::vector<double> grid(double stop, double step) {
  std::vector<double> z;
  for (double v = 0.0; v < stop; v += step) z.push_back(v);
  z.push_back(stop);
  return z;
}

}  // namespace

TEST(ThermalStack, DerivedFromPresets) {
  for (const auto p : kAllPresets) {
    const auto stack = LayerStack::preset(p);
    const auto t = ThermalStack::from_layer_stack(stack);
    EXPECT_NEAR(t.depth(), 35e-3, 1e-15) << to_string(p);
    ASSERT_EQ(t.layers.size(), 3u);
    EXPECT_EQ(t.layers[0].tissue, Tissue::Skin);
    EXPECT_NEAR(t.layers[2].thickness, 31e-3, 1e-15);
    EXPECT_EQ(t.surface_heat_transfer, stack.clothed() ? 0.0 : 7.0);
    EXPECT_EQ(t.layers[0].field_layer, stack.clothed() ? 1u : 0u);
    EXPECT_EQ(t.air_temperature, 23.0);
    EXPECT_EQ(t.blood_temperature, 37.0);
  }
}

TEST(ThermalStack, EnvironmentOverridesAndErrors) {
  ThermalEnvironment env;
  env.surface_heat_transfer = 12.0;
  env.depth = 20e-3;
  const auto t = ThermalStack::from_layer_stack(LayerStack::preset(ModelPreset::ClothedSkin), DielectricDatabase::bundled(), env);
  EXPECT_EQ(t.surface_heat_transfer, 12.0);
  EXPECT_NEAR(t.depth(), 20e-3, 1e-15);
  env.depth = 3e-3;
  EXPECT_THROW(ThermalStack::from_layer_stack(LayerStack::preset(ModelPreset::NakedSkin), DielectricDatabase::bundled(), env),
               DomainError);
}

TEST(ThermalStack, ZeroThicknessLayersAreDropped) {
  const LayerStack s({{Tissue::Skin, 1e-3, std::nullopt},
                      {Tissue::SAT, 0.0, std::nullopt},
                      {Tissue::Muscle, kSemiInfinite, std::nullopt}});
  const auto t = ThermalStack::from_layer_stack(s);
  ASSERT_EQ(t.layers.size(), 2u);
  EXPECT_EQ(t.layers[1].tissue, Tissue::Muscle);
  EXPECT_EQ(t.layers[1].field_layer, 2u);
}

TEST(Steady, ZeroPowerIsZeroEverywhere) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 0.0});
  for (const double z : grid(35e-3, 0.5e-3)) EXPECT_EQ(r.theta.theta(z), 0.0);
}

TEST(Steady, PresetSurfaceValues) {
  // Oracle: independent finite-volume prototype on a 5 um grid.
  const double expected[] = {0.1532, 0.1838, 0.2190, 0.2741};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto r = simulate_exposure(LayerStack::preset(kAllPresets[i]), {k60, 10.0});
    EXPECT_NEAR(r.theta.surface_theta(), expected[i], 1e-3) << to_string(kAllPresets[i]);
  }
}

TEST(Steady, BoundaryAndInterfaceConditions) {
  for (const auto p : kAllPresets) {
    const auto r = simulate_exposure(LayerStack::preset(p), {k60, 50.0});
    EXPECT_EQ(r.theta.theta(35e-3), 0.0);
    EXPECT_LT(std::abs(r.theta.cutoff_residual()), 1e-12);
    EXPECT_LT(std::abs(r.theta.surface_residual()), 1e-9);
    for (const auto& res : r.theta.interface_residuals()) {
      EXPECT_LT(std::abs(res.theta_jump), 1e-9);
      EXPECT_LT(std::abs(res.flux_jump), 1e-9);
    }
    EXPECT_THROW(r.theta.theta(35.1e-3), OutOfRangeError);
    EXPECT_THROW(r.theta.theta(-1e-6), OutOfRangeError);
  }
}

TEST(Steady, SatisfiesTheOdeInsideEachLayer) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  for (const auto& s : r.theta.layers()) {
    const double h = 1e-7;
    for (const double frac : {0.2, 0.5, 0.8}) {
      const double z = frac * s.layer.thickness;
      const double d2 = (s.dtheta(z + h) - s.dtheta(z - h)) / (2.0 * h);
      const auto& field = r.fields.layers[s.layer.field_layer];
      const double residual = s.layer.conductivity * d2 - s.layer.perfusion_coefficient * s.theta(z) + field.sar_rho(z);
      EXPECT_LT(std::abs(residual), 1e-5 * std::max(1.0, field.sar_rho(z))) << to_string(s.layer.tissue);
    }
  }
}

TEST(Steady, NonNegative) {
  for (const auto p : kAllPresets) {
    const auto r = simulate_exposure(LayerStack::preset(p), {Frequency::ghz(100), 10.0});
    for (const double z : grid(35e-3, 0.05e-3)) EXPECT_GE(r.theta.theta(z), 0.0);
  }
}

TEST(Steady, HeatFluxSignAtSurface) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  // Heat leaves through the skin: -k theta'(0) = -h theta(0) < 0.
  EXPECT_NEAR(r.theta.heat_flux(0.0), -7.0 * r.theta.surface_theta(), 1e-9);
  const auto clothed = simulate_exposure(LayerStack::preset(ModelPreset::ClothedSkin), {k60, 10.0});
  EXPECT_NEAR(clothed.theta.heat_flux(0.0), 0.0, 1e-9);
}

TEST(Steady, MismatchedFieldSolutionIsRejected) {
  const auto a = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  const auto b = solve_layer_fields(LayerStack::preset(ModelPreset::ClothedSkin), {k60, 10.0});
  EXPECT_THROW(solve_steady_theta(a.thermal, b), DomainError);
}

TEST(Steady, ResonantLayerDefersToFiniteDifference) {
  const auto& db = DielectricDatabase::bundled();
  const double k = db.thermal(Tissue::Skin).thermal_conductivity;
  const double hb = heat_transfer_coefficient(db.thermal(Tissue::Skin));
  const double target = std::sqrt(hb / (4.0 * k));
  double lo = 1e-6, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (attenuation_constant(ComplexPermittivity(2.0, mid), k60) < target ? lo : hi) = mid;
  }
  const LayerStack s({{Tissue::Skin, kSemiInfinite, ComplexPermittivity(2.0, 0.5 * (lo + hi))}});
  const auto fields = solve_layer_fields(s, {k60, 10.0});
  const auto thermal = ThermalStack::from_layer_stack(s);
  EXPECT_THROW(solve_steady_theta(thermal, fields), NumericError);
  const auto fd = solve_steady_theta_fd(thermal, fields, 10e-6);
  EXPECT_GT(fd.theta.front(), 0.0);
}

TEST(FiniteDifference, AgreesWithClosedForm) {
  for (const auto p : kAllPresets) {
    const auto r = simulate_exposure(LayerStack::preset(p), {k60, 10.0});
    EXPECT_LT(max_fd_error(r, 10e-6), 1e-3) << to_string(p);
  }
}

TEST(FiniteDifference, SecondOrderConvergence) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  const double coarse = max_fd_error(r, 20e-6);
  const double fine = max_fd_error(r, 10e-6);
  EXPECT_NEAR(std::log2(coarse / fine), 2.0, 0.2);
}

TEST(FiniteDifference, ZeroSourceAndGridLimits) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedForehead), {k60, 0.0});
  const auto fd = solve_steady_theta_fd(r.thermal, r.fields, 50e-6);
  for (const double v : fd.theta) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(fd.z.back(), 35e-3, 1e-15);
  EXPECT_EQ(fd.theta.back(), 0.0);
  EXPECT_THROW(solve_steady_theta_fd(r.thermal, r.fields, 51e-6), DomainError);
  EXPECT_THROW(solve_steady_theta_fd(r.thermal, r.fields, 0.0), DomainError);
}

TEST(Transient, MonotoneApproachToSteadyState) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  TransientOptions opt;
  opt.grid_step = 10e-6;
  opt.report_interval = 2000.0;
  const auto tr = solve_transient_theta(r.thermal, r.fields, 40000.0, 20.0, opt);
  ASSERT_GE(tr.times.size(), 3u);
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.times.back(), 40000.0);
  for (std::size_t t = 1; t < tr.theta.size(); ++t) {
    for (std::size_t i = 0; i < tr.z.size(); ++i) EXPECT_GE(tr.theta[t][i], tr.theta[t - 1][i] - 1e-15);
  }
  double err = 0.0;
  for (std::size_t i = 0; i < tr.z.size(); ++i) err = std::max(err, std::abs(tr.theta.back()[i] - r.theta.theta(tr.z[i])));
  EXPECT_LT(err, 1e-3);
}

TEST(Transient, LinearInPower) {
  const auto stack = LayerStack::preset(ModelPreset::HatOnForehead);
  const auto a = simulate_exposure(stack, {k60, 10.0});
  const auto b = simulate_exposure(stack, {k60, 20.0});
  TransientOptions opt;
  opt.report_interval = 30.0;
  const auto ta = solve_transient_theta(a.thermal, a.fields, 120.0, 1.0, opt);
  const auto tb = solve_transient_theta(b.thermal, b.fields, 120.0, 1.0, opt);
  ASSERT_EQ(ta.times.size(), tb.times.size());
  for (std::size_t t = 0; t < ta.times.size(); ++t) {
    for (std::size_t i = 0; i < ta.z.size(); ++i) {
      EXPECT_NEAR(tb.theta[t][i], 2.0 * ta.theta[t][i], 1e-12 * std::max(1.0, ta.theta[t][i]));
    }
  }
}

TEST(Transient, BadStepping) {
  const auto r = simulate_exposure(LayerStack::preset(ModelPreset::NakedSkin), {k60, 10.0});
  EXPECT_THROW(solve_transient_theta(r.thermal, r.fields, 10.0, 0.0), NumericError);
  EXPECT_THROW(solve_transient_theta(r.thermal, r.fields, -1.0, 1.0), NumericError);
  EXPECT_THROW(solve_transient_theta(r.thermal, r.fields, 1e9, 1e-3), NumericError);
}

TEST(Sweep, ClothingThicknessTemperature) {
  std::vector<double> d;
  for (int i = 0; i <= 600; ++i) d.push_back(i * 1e-5);
  const auto sweep = clothing_thickness_temperature_sweep(ModelPreset::HatOnForehead, d, {k60, 10.0});
  const double naked = simulate_exposure(LayerStack::preset(ModelPreset::NakedForehead), {k60, 10.0}).theta.surface_theta();
  EXPECT_NEAR(sweep.front().surface_theta, naked, 1e-15);

  std::vector<double> peaks, values;
  for (std::size_t i = 1; i + 1 < sweep.size(); ++i) {
    if (sweep[i].surface_theta > sweep[i - 1].surface_theta && sweep[i].surface_theta >= sweep[i + 1].surface_theta) {
      peaks.push_back(sweep[i].clothing_thickness * 1e3);
      values.push_back(sweep[i].surface_theta);
    }
  }
  ASSERT_GE(peaks.size(), 3u);
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    EXPECT_NEAR(peaks[i] - peaks[i - 1], 1.97, 0.1);
    EXPECT_LT(values[i], values[i - 1]);
  }
  EXPECT_LT(peaks.front(), 1.0);
  EXPECT_GT(values.front(), naked);
}

TEST(Sweep, RangeIsChecked) {
  const double bad[] = {10.5e-3};
  EXPECT_THROW(clothing_thickness_temperature_sweep(ModelPreset::HatOnForehead, bad, {k60, 10.0}), DomainError);
  const double ok[] = {1e-3};
  EXPECT_THROW(clothing_thickness_temperature_sweep(ModelPreset::NakedSkin, ok, {k60, 10.0}), UsageError);
}
