#include "dmnls/gaussian_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "dmnls/quadrature.hpp"

namespace dmnls {

using std::numbers::pi;

namespace {

// \int_0^U of a smooth integrand decaying in u, on dyadic panels so that
// sharply peaked profiles (U >> 1) keep full relative accuracy.
double integrate_from_origin(const std::function<double(double)>& f, double upper) {
  if (upper == 0.0) return 0.0;
  if (upper < 0.0) throw std::invalid_argument("integrate_from_origin: negative upper limit");
  double sum = 0.0;
  double lo = 0.0;
  double hi = std::min(1.0, upper);
  while (true) {
    sum += integrate_adaptive(f, lo, hi);
    if (hi >= upper) break;
    lo = hi;
    hi = std::isinf(upper) && hi >= 1024.0 ? upper : std::min(2.0 * hi, upper);
  }
  return sum;
}

}  // namespace

void GaussianParams::validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("Gaussian amplitude must be positive");
  }
}

GaussianParams GaussianParams::with_mass(double lambda, double sigma0) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  GaussianParams gp{sigma0, std::sqrt(2.0 * lambda / (pi * sigma0))};
  gp.validate();
  return gp;
}

std::complex<double> evolved_gaussian(const GaussianParams& gp, double r, double x, double y) {
  gp.validate();
  const std::complex<double> sigma(gp.sigma0, 4.0 * r);
  return gp.amplitude * (gp.sigma0 / sigma) * std::exp(-(x * x + y * y) / sigma);
}

double gaussian_mass(const GaussianParams& gp) {
  return gp.amplitude * gp.amplitude * pi * gp.sigma0 / 2.0;
}

double gaussian_kinetic(const GaussianParams& gp) { return gp.amplitude * gp.amplitude * pi; }

double window_qnorm(const GaussianParams& gp, double q, double a, double b) {
  gp.validate();
  if (!(q >= 2.0)) throw std::invalid_argument("window_qnorm requires q >= 2");
  if (!(a < b)) throw std::invalid_argument("window_qnorm requires a < b");
  if ((std::isinf(a) || std::isinf(b)) && !(q > 3.0)) {
    throw std::invalid_argument("infinite window diverges for q <= 3");
  }
  const double s0 = gp.sigma0;
  // Work in u = 4r / sigma0 so the integrand is (1 + u^2)^{(2-q)/2}, O(1) near the origin.
  const double e = (2.0 - q) / 2.0;
  auto integrand = [e](double u) { return std::pow(1.0 + u * u, e); };
  const double scale = s0 / 4.0;
  const double ua = std::isinf(a) ? a : a / scale;
  const double ub = std::isinf(b) ? b : b / scale;
  // The integrand is even in u.
  const double integral = q == 2.0 ? ub - ua
                                   : (ub >= 0.0 ? integrate_from_origin(integrand, ub)
                                                : -integrate_from_origin(integrand, -ub)) -
                                         (ua >= 0.0 ? integrate_from_origin(integrand, ua)
                                                    : -integrate_from_origin(integrand, -ua));
  // sigma0^{q-1} * sigma0^{2-q} * (sigma0/4) from the substitution.
  return std::pow(gp.amplitude, q) * (pi / q) * s0 * scale * integral;
}

double gaussian_hamiltonian(double lambda, double sigma0, double p, double dav) {
  if (!(lambda > 0.0) || !(sigma0 > 0.0) || !(dav > 0.0) || !(p > 1.0)) {
    throw std::invalid_argument("gaussian_hamiltonian: arguments must be positive with p > 1");
  }
  const double e = (p - 1.0) / 2.0;
  auto integrand = [e](double u) { return std::pow(1.0 / (1.0 + u * u), e); };
  // \int_0^1 (1 + (4r/sigma0)^2)^{-e} dr with r = sigma0 u / 4.
  const double integral = sigma0 / 4.0 * integrate_from_origin(integrand, 4.0 / sigma0);
  const double coeff = std::pow(2.0 * lambda, (p + 1.0) / 2.0) * std::pow(pi, (1.0 - p) / 2.0) /
                       (dav * lambda * (p + 1.0) * (p + 1.0));
  return dav * lambda / sigma0 * (1.0 - coeff * std::pow(sigma0, (3.0 - p) / 2.0) * integral);
}

}  // namespace dmnls
