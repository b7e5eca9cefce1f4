#include <gtest/gtest.h>

#include <cmath>

#include "mmw/constants.hpp"
#include "mmw/errors.hpp"
#include "mmw/planewave.hpp"

using namespace mmw;

namespace {

constexpr double kDeg = constants::kPi / 180.0;

}  // namespace

TEST(Constants, DerivedFromPrintedValues) {
  EXPECT_NEAR(constants::kSpeedOfLight, 2.99863e8, 1e3);
  EXPECT_NEAR(constants::kFreeSpaceImpedance, 376.819, 1e-3);
}

TEST(Fresnel, NormalIncidenceMatchesClosedForm) {
  const ComplexPermittivity eps(8.0, 10.9);
  const auto n = std::sqrt(eps.value());
  const double expected = std::norm((1.0 - n) / (1.0 + n));
  for (const auto pol : {Polarization::Parallel, Polarization::Perpendicular}) {
    EXPECT_NEAR(power_coefficients(eps, 0.0, pol).reflectance, expected, 1e-14);
  }
  EXPECT_NEAR(expected, 0.378, 0.005);
}

TEST(Fresnel, VacuumReflectsNothing) {
  const ComplexPermittivity vacuum(1.0, 0.0);
  for (double a = 0.0; a < 89.5; a += 7.0) {
    EXPECT_NEAR(std::abs(reflection_coefficient(vacuum, a * kDeg, Polarization::Parallel)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(reflection_coefficient(vacuum, a * kDeg, Polarization::Perpendicular)), 0.0, 1e-14);
  }
}

TEST(Fresnel, LosslessDielectricHasTrueBrewsterZero) {
  const ComplexPermittivity eps(4.0, 0.0);
  const double brewster = std::atan(2.0);
  EXPECT_NEAR(power_coefficients(eps, brewster, Polarization::Parallel).reflectance, 0.0, 1e-20);
  EXPECT_NEAR(brewster_angle(eps), brewster, 1e-5);
}

TEST(Fresnel, AngleDomainIsChecked) {
  const ComplexPermittivity eps(8.0, 10.9);
  EXPECT_THROW(reflection_coefficient(eps, -0.01, Polarization::Parallel), DomainError);
  EXPECT_THROW(reflection_coefficient(eps, constants::kPi / 2, Polarization::Parallel), DomainError);
}

TEST(Fresnel, GrazingIncidenceApproachesTotalReflection) {
  const ComplexPermittivity eps(8.0, 10.9);
  EXPECT_GT(power_coefficients(eps, 89.9 * kDeg, Polarization::Perpendicular).reflectance, 0.99);
  EXPECT_GT(power_coefficients(eps, 89.99 * kDeg, Polarization::Parallel).reflectance, 0.95);
}

TEST(Brewster, GabrielAt60GHz) {
  // Oracle: dense 0.01 degree scan of |R_par|^2 gives 74.57 degrees.
  const double a = brewster_angle(ComplexPermittivity(8.0, 10.9)) / kDeg;
  EXPECT_NEAR(a, 74.5726, 0.01);
}

TEST(Brewster, IsTheParallelMinimum) {
  const ComplexPermittivity eps(11.6, 6.7);
  const double a = brewster_angle(eps);
  const double r = power_coefficients(eps, a, Polarization::Parallel).reflectance;
  for (const double d : {-0.5, -0.05, 0.05, 0.5}) {
    EXPECT_LE(r, power_coefficients(eps, a + d * kDeg, Polarization::Parallel).reflectance);
  }
}

TEST(Brewster, NeedsOpticallyDenserMedium) {
  EXPECT_THROW(brewster_angle(ComplexPermittivity(1.0, 0.5)), DomainError);
}

TEST(Propagation, GabrielPenetrationDepth) {
  const ComplexPermittivity eps(8.0, 10.9);
  const auto f = Frequency::ghz(60);
  EXPECT_NEAR(penetration_depth(eps, f) * 1e3, 0.47875, 1e-4);
  EXPECT_NEAR(absorption_depth(eps, f, 0.9) * 1e3, 0.5512, 1e-3);
  EXPECT_NEAR(attenuation_constant(eps, f) * penetration_depth(eps, f), 1.0, 1e-15);
}

TEST(Propagation, WavenumberBranch) {
  const ComplexPermittivity eps(8.0, 10.9);
  const auto k = wavenumber(eps, Frequency::ghz(60));
  EXPECT_GT(k.real(), 0.0);
  EXPECT_LT(k.imag(), 0.0);
  const double k0 = 2.0 * constants::kPi * 60e9 / constants::kSpeedOfLight;
  EXPECT_NEAR(std::abs(k * k / (k0 * k0) - eps.value()), 0.0, 1e-12);
}

TEST(Propagation, ClothingWavelength) {
  const auto k = wavenumber(ComplexPermittivity(1.6, 0.06), Frequency::ghz(60));
  EXPECT_NEAR(2.0 * constants::kPi / k.real() * 1e3, 3.9504, 1e-3);
}

TEST(Propagation, ImpedanceOfVacuum) {
  EXPECT_NEAR(std::abs(wave_impedance(ComplexPermittivity(1.0, 0.0)) - constants::kFreeSpaceImpedance), 0.0, 1e-12);
}

TEST(Propagation, LosslessAndBadInputs) {
  const auto f = Frequency::ghz(60);
  EXPECT_THROW(penetration_depth(ComplexPermittivity(2.0, 0.0), f), DomainError);
  EXPECT_THROW(absorption_depth(ComplexPermittivity(8.0, 10.9), f, 1.0), DomainError);
  EXPECT_THROW(absorption_depth(ComplexPermittivity(8.0, 10.9), f, 0.0), DomainError);
  EXPECT_THROW(wavenumber(ComplexPermittivity(8.0, 10.9), Frequency::ghz(0)), DomainError);
}

TEST(Propagation, DepthShrinksWithFrequency) {
  const ComplexPermittivity eps(8.0, 10.9);
  EXPECT_GT(penetration_depth(eps, Frequency::ghz(40)), penetration_depth(eps, Frequency::ghz(60)));
}
