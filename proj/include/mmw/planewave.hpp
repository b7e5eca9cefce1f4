#pragma once

#include <complex>

#include "mmw/dielectrics.hpp"
#include "mmw/units.hpp"

namespace mmw {

enum class Polarization { Parallel, Perpendicular };

/// Air/medium reflection coefficient for a plane wave incident at `theta_i`
/// radians from the normal, 0 <= theta_i < pi/2. The square root of
/// (eps* - sin^2 theta) is taken on the principal branch (Re >= 0).
std::complex<double> reflection_coefficient(const ComplexPermittivity& eps, double theta_i,
                                            Polarization pol);

struct PowerCoefficients {
  double reflectance;    // |R|^2
  double transmittance;  // 1 - |R|^2
};

PowerCoefficients power_coefficients(const ComplexPermittivity& eps, double theta_i, Polarization pol);

/// Incidence angle (radians) minimising parallel-polarisation reflectance.
/// For lossy media this is the pseudo-Brewster angle. Requires eps' > 1;
/// located by golden-section search to 0.01 degree.
double brewster_angle(const ComplexPermittivity& eps);

/// Complex wavenumber k = beta - j alpha = omega sqrt(mu0 eps0 eps*) with beta > 0, alpha >= 0.
std::complex<double> wavenumber(const ComplexPermittivity& eps, Frequency frequency);

/// Intrinsic impedance eta = sqrt(mu0 / (eps0 eps*)), ohms.
std::complex<double> wave_impedance(const ComplexPermittivity& eps);

/// Field attenuation constant alpha, Np/m.
double attenuation_constant(const ComplexPermittivity& eps, Frequency frequency);

/// Depth 1/alpha at which transmitted power density falls to 1/e^2 of its
/// surface value. Throws DomainError for a lossless medium.
double penetration_depth(const ComplexPermittivity& eps, Frequency frequency);

/// Depth containing `fraction` of the transmitted power in a lossy half-space,
/// -ln(1 - fraction) / (2 alpha).
double absorption_depth(const ComplexPermittivity& eps, Frequency frequency, double fraction);

}  // namespace mmw
