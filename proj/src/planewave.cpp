#include "mmw/planewave.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "mmw/constants.hpp"
#include "mmw/errors.hpp"

namespace mmw {

namespace {

constexpr double kHalfPi = constants::kPi / 2.0;
constexpr double kDegree = constants::kPi / 180.0;

void check_angle(double theta_i) {
  if (!(theta_i >= 0.0 && theta_i < kHalfPi)) {
    throw DomainError(fmt::format("incidence angle must lie in [0, pi/2), got {} rad", theta_i));
  }
}

double parallel_reflectance(const std::complex<double>& eps, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto root = std::sqrt(eps - s * s);
  return std::norm((-eps * c + root) / (eps * c + root));
}

}  // namespace

std::complex<double> reflection_coefficient(const ComplexPermittivity& eps, double theta_i,
                                            Polarization pol) {
  check_angle(theta_i);
  const auto e = eps.value();
  const double c = std::cos(theta_i);
  const double s = std::sin(theta_i);
  const auto root = std::sqrt(e - s * s);
  if (pol == Polarization::Parallel) return (-e * c + root) / (e * c + root);
  return (c - root) / (c + root);
}

PowerCoefficients power_coefficients(const ComplexPermittivity& eps, double theta_i, Polarization pol) {
  const double r2 = std::norm(reflection_coefficient(eps, theta_i, pol));
  return {r2, 1.0 - r2};
}

double brewster_angle(const ComplexPermittivity& eps) {
  if (!(eps.eps_real() > 1.0)) {
    throw DomainError(fmt::format("Brewster angle needs eps' > 1, got {}", eps.eps_real()));
  }
  const auto e = eps.value();

  // Coarse unimodality screen: the profile must fall then rise.
  std::array<double, 90> coarse{};
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = parallel_reflectance(e, i * kDegree);
  int minima = 0;
  for (std::size_t i = 1; i + 1 < coarse.size(); ++i) {
    if (coarse[i] < coarse[i - 1] && coarse[i] <= coarse[i + 1]) ++minima;
  }
  if (minima != 1) {
    throw NumericError(fmt::format("parallel reflectance has {} interior minima; Brewster search is ill-posed", minima));
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = kHalfPi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = parallel_reflectance(e, x1);
  double f2 = parallel_reflectance(e, x2);
  const double tol = 1e-3 * kDegree;
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = parallel_reflectance(e, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = parallel_reflectance(e, x2);
    }
  }
  return 0.5 * (a + b);
}

std::complex<double> wavenumber(const ComplexPermittivity& eps, Frequency frequency) {
  if (!(frequency.in_hz() > 0.0)) throw DomainError("frequency must be positive");
  const double omega = 2.0 * constants::kPi * frequency.in_hz();
  // Principal root of eps' - j eps'' has Re > 0 and Im <= 0, i.e. beta - j alpha.
  return omega / constants::kSpeedOfLight * std::sqrt(eps.value());
}

std::complex<double> wave_impedance(const ComplexPermittivity& eps) {
  return constants::kFreeSpaceImpedance / std::sqrt(eps.value());
}

double attenuation_constant(const ComplexPermittivity& eps, Frequency frequency) {
  return -wavenumber(eps, frequency).imag();
}

double penetration_depth(const ComplexPermittivity& eps, Frequency frequency) {
  if (eps.lossless()) throw DomainError("penetration depth is infinite in a lossless medium");
  return 1.0 / attenuation_constant(eps, frequency);
}

double absorption_depth(const ComplexPermittivity& eps, Frequency frequency, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("absorbed fraction must lie in (0, 1)");
  return -std::log1p(-fraction) * penetration_depth(eps, frequency) / 2.0;
}

}  // namespace mmw
