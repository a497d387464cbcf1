#pragma once

#include <complex>

namespace dmnls {

/// A * exp(-|x|^2 / sigma0) in two dimensions.
struct GaussianParams {
  double sigma0 = 1.0;
  double amplitude = 1.0;

  /// Throws std::invalid_argument unless sigma0 > 0 and amplitude > 0.
  void validate() const;

  /// Amplitude (2 lambda / (pi sigma0))^{1/2}, giving L^2 mass lambda.
  static GaussianParams with_mass(double lambda, double sigma0);
};

/// e^{i r Delta} applied to the Gaussian, evaluated at (x, y):
/// A sigma0/sigma(r) exp(-|x|^2/sigma(r)), sigma(r) = sigma0 + 4 i r.
std::complex<double> evolved_gaussian(const GaussianParams& gp, double r, double x, double y);

double gaussian_mass(const GaussianParams& gp);     // A^2 pi sigma0 / 2
double gaussian_kinetic(const GaussianParams& gp);  // A^2 pi

/// \int_a^b ||e^{i r Delta} g||_{L^q}^q dr in closed form up to a 1D integral,
/// which is done adaptively. Infinite endpoints are accepted for q > 3.
double window_qnorm(const GaussianParams& gp, double q, double a, double b);

/// H of the mass-lambda Gaussian with width sigma0 for nonlinearity p and
/// average dispersion dav, evaluated from its closed form.
double gaussian_hamiltonian(double lambda, double sigma0, double p, double dav);

}  // namespace dmnls
