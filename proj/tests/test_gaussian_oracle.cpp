#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dmnls/gaussian_oracle.hpp"
#include "dmnls/spectral.hpp"

using namespace dmnls;
using std::numbers::pi;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("evolved_gaussian closed form") {
  const GaussianParams gp{1.0, 1.0};
  CHECK(evolved_gaussian(gp, 0.0, 0.3, -0.4) == Complex(std::exp(-0.25)));
  const auto at0 = evolved_gaussian(gp, 0.25, 0.0, 0.0);
  CHECK(at0.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(at0.imag() == doctest::Approx(-0.5).epsilon(1e-15));
  // |1/(1+i)| e^{-Re 1/(1+i)} at |x| = 1.
  CHECK(std::abs(evolved_gaussian(gp, 0.25, 0.6, 0.8)) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(evolved_gaussian(gp, 0.25, 0.6, 0.8)) == doctest::Approx(0.42888).epsilon(1e-5));
  CHECK_THROWS_AS(evolved_gaussian({0.0, 1.0}, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evolved_gaussian({1.0, -1.0}, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("mass-normalized amplitude") {
  const GaussianParams gp = GaussianParams::with_mass(3.0, 2.0);
  CHECK(gaussian_mass(gp) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(gaussian_kinetic(gp) == doctest::Approx(2.0 * 3.0 / 2.0).epsilon(1e-15));
}

TEST_CASE("window_qnorm against closed-form antiderivatives") {
  const GaussianParams bare{1.0, 1.0};
  for (double s0 : {0.3, 1.0, 4.0}) {
    CHECK(window_qnorm({s0, 1.0}, 2.0, 0.0, 1.0) == doctest::Approx(pi * s0 / 2.0).epsilon(1e-14));
  }
  // (pi/16) atan 4
  CHECK(window_qnorm(bare, 4.0, 0.0, 1.0) == doctest::Approx(pi / 16.0 * std::atan(4.0)).epsilon(1e-10));
  // (pi/16) arctan 4 = 0.2603237
  CHECK(std::abs(window_qnorm(bare, 4.0, 0.0, 1.0) - pi / 16.0 * std::atan(4.0)) < 1e-12);
  // (pi/6) \int_R (1+16r^2)^{-2} dr = (pi/6)(pi/8)
  CHECK(window_qnorm(bare, 6.0, -kInf, kInf) == doctest::Approx(pi * pi / 48.0).epsilon(1e-10));
  CHECK(window_qnorm(bare, 6.0, -kInf, kInf) == doctest::Approx(0.205617).epsilon(1e-6));
  // Global (4,4): pi^2 s0^2 / 16.
  CHECK(window_qnorm({2.0, 1.0}, 4.0, -kInf, kInf) == doctest::Approx(pi * pi / 4.0).epsilon(1e-10));
  // Amplitude enters as A^q.
  CHECK(window_qnorm({1.0, 2.0}, 6.0, 0.0, 1.0) ==
        doctest::Approx(64.0 * window_qnorm(bare, 6.0, 0.0, 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(window_qnorm(bare, 1.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(window_qnorm(bare, 3.0, 0.0, kInf), std::invalid_argument);
}

TEST_CASE("window_qnorm decreases in q for the unit Gaussian on [0,1]") {
  const GaussianParams bare{1.0, 1.0};
  const double q2 = window_qnorm(bare, 2.0, 0.0, 1.0);
  const double q4 = window_qnorm(bare, 4.0, 0.0, 1.0);
  const double q6 = window_qnorm(bare, 6.0, 0.0, 1.0);
  CHECK(q2 > q4);
  CHECK(q4 > q6);
}

TEST_CASE("gaussian_hamiltonian closed-form values") {
  CHECK(gaussian_hamiltonian(1.0, 1.0, 3.0, 1.0) ==
        doctest::Approx(1.0 - std::atan(4.0) / (16.0 * pi)).epsilon(1e-12));
  // 1 - arctan(4) / (16 pi) = 0.9736237
  CHECK(std::abs(gaussian_hamiltonian(1.0, 1.0, 3.0, 1.0) - (1.0 - std::atan(4.0) / (16.0 * pi))) < 1e-12);
  const double sub = gaussian_hamiltonian(1.0, 100.0, 2.0, 1.0);
  CHECK(sub < 0.0);
  CHECK(sub == doctest::Approx(-0.00773).epsilon(1e-3));
  CHECK(std::abs(gaussian_hamiltonian(1e-12, 1.0, 3.0, 1.0)) < 1e-11);
}

TEST_CASE("gaussian_hamiltonian agrees with window_qnorm and the Gaussian norms") {
  for (double p : {2.0, 3.0, 4.5, 6.0}) {
    for (double s0 : {0.2, 1.0, 7.0}) {
      const double lambda = 1.7, dav = 0.8;
      const GaussianParams gp = GaussianParams::with_mass(lambda, s0);
      const double h = 0.5 * dav * gaussian_kinetic(gp) - window_qnorm(gp, p + 1.0, 0.0, 1.0) / (p + 1.0);
      CHECK(gaussian_hamiltonian(lambda, s0, p, dav) == doctest::Approx(h).epsilon(1e-10));
    }
  }
}

TEST_CASE("supercritical Gaussian energy: positive at moderate widths, unbounded below as sigma0 -> 0") {
  // For p = 6, lambda = 1, dav = 1 the bracket is 1 - c sigma0^{-1/2} with c ~ 2.2e-3,
  // so H > 0 (and growing) down to sigma0 ~ 5e-6 and only then turns negative.
  const double h1 = gaussian_hamiltonian(1.0, 1.0, 6.0, 1.0);
  const double h01 = gaussian_hamiltonian(1.0, 0.1, 6.0, 1.0);
  const double h001 = gaussian_hamiltonian(1.0, 0.01, 6.0, 1.0);
  CHECK(h1 > 0.0);
  CHECK(h01 > h1);
  CHECK(h001 > h01);
  const double a = gaussian_hamiltonian(1.0, 1e-7, 6.0, 1.0);
  const double b = gaussian_hamiltonian(1.0, 1e-9, 6.0, 1.0);
  const double c = gaussian_hamiltonian(1.0, 1e-11, 6.0, 1.0);
  CHECK(b < a);
  CHECK(c < b);
  CHECK(b < -1e3);
}
