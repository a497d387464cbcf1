#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

#include "dmnls/functional.hpp"
#include "dmnls/gaussian_oracle.hpp"
#include "test_fields.hpp"

using namespace dmnls;
using std::numbers::pi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ComplexField gaussian_field(const SpectralGrid& g, const GaussianParams& gp) {
  return sample_function(g, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("potential_term matches the Gaussian oracle") {
  const SpectralGrid g = make_grid(256, 40.0);
  const QuadratureRule rule = period_rule(32);
  const GaussianParams bare{1.0, 1.0};
  const ComplexField f = gaussian_field(g, bare);
  CHECK(std::abs(potential_term(f, 3.0, rule) - window_qnorm(bare, 4.0, 0.0, 1.0)) < 1e-6);
  CHECK(std::abs(potential_term(f, 1.0, rule) - pi / 2.0) < 1e-8);
  CHECK(potential_term(ComplexField(g), 3.0, rule) == 0.0);
}

TEST_CASE("quadrature doubling m=32 -> 64 changes the potential by < 1e-8") {
  const SpectralGrid g = make_grid(128, 30.0);
  const ComplexField f = testing::random_smooth_field(g, 5);
  for (double p : {2.0, 3.0, 5.0}) {
    const double a = potential_term(f, p, period_rule(32));
    const double b = potential_term(f, p, period_rule(64));
    CHECK(rel(a, b) < 1e-8);
  }
}

TEST_CASE("hamiltonian of the mass-1 Gaussian and linearity in dav") {
  const SpectralGrid g = make_grid(256, 40.0);
  const QuadratureRule rule = period_rule(32);
  const ComplexField f = gaussian_field(g, GaussianParams::with_mass(1.0, 1.0));
  const EnergyBreakdown e = hamiltonian(f, {1.0, 3.0, 1.0}, rule);
  CHECK(std::abs(e.total - gaussian_hamiltonian(1.0, 1.0, 3.0, 1.0)) < 1e-5);
  CHECK(e.total == e.kinetic - e.potential);
  CHECK(e.mass == doctest::Approx(1.0).epsilon(1e-10));

  const EnergyBreakdown e2 = hamiltonian(f, {2.0, 3.0, 1.0}, rule);
  CHECK(e2.kinetic == doctest::Approx(2.0 * e.kinetic).epsilon(1e-15));
  CHECK(e2.potential == e.potential);

  const EnergyBreakdown z = hamiltonian(ComplexField(g), {1.0, 3.0, 1.0}, rule);
  CHECK(z.total == 0.0);
  CHECK(z.kinetic == 0.0);
  CHECK(z.potential == 0.0);
  CHECK_THROWS_AS(hamiltonian(f, {0.0, 3.0, 1.0}, rule), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian(f, {1.0, 1.0, 1.0}, rule), std::invalid_argument);
}

TEST_CASE("nonlocal_force: zero, gauge equivariance, pairing identity") {
  const SpectralGrid g = make_grid(64, 20.0);
  const QuadratureRule rule = period_rule(32);
  CHECK(l2_norm(nonlocal_force(ComplexField(g), 3.0, rule)) == 0.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    const ComplexField f = testing::random_smooth_field(g, seed);
    for (double p : {2.0, 3.0, 4.5}) {
      const ComplexField nf = nonlocal_force(f, p, rule);
      const Complex phase = std::polar(1.0, 0.83);
      const ComplexField rotated = nonlocal_force(phase * f, p, rule);
      CHECK(l2_norm(rotated - phase * nf) <= 1e-12 * l2_norm(nf));
      CHECK(rel(inner_real(nf, f), potential_term(f, p, rule)) < 1e-10);
    }
  }
}

TEST_CASE("gradient_h agrees with central differences of H") {
  const SpectralGrid g = make_grid(64, 20.0);
  const QuadratureRule rule = period_rule(32);
  const ModelParams params{1.3, 3.0, 1.0};
  const double eps = 1e-5;
  for (unsigned seed = 0; seed < 5; ++seed) {
    const ComplexField f = testing::random_smooth_field(g, 40 + seed);
    const ComplexField dir = testing::random_smooth_field(g, 80 + seed);
    const ComplexField grad = gradient_h(f, params, rule);
    ComplexField plus = f, minus = f;
    plus.add_scaled(eps, dir);
    minus.add_scaled(-eps, dir);
    const double fd =
        (hamiltonian(plus, params, rule).total - hamiltonian(minus, params, rule).total) / (2 * eps);
    CHECK(rel(inner_real(grad, dir), fd) < 1e-5);
  }
  CHECK(l2_norm(gradient_h(ComplexField(g), params, rule)) == 0.0);
}

TEST_CASE("lagrange multiplier: pairing form and energy form agree") {
  const SpectralGrid g = make_grid(64, 20.0);
  const QuadratureRule rule = period_rule(32);
  for (double p : {2.0, 3.0, 5.0}) {
    const ModelParams params{1.0, p, 1.0};
    const ComplexField f = testing::random_smooth_field(g, 9);
    const double omega = lagrange_multiplier(f, params, rule);
    const EnergyBreakdown e = hamiltonian(f, params, rule);
    const double lhs = -omega * e.mass;
    const double rhs = 2.0 * e.total - (1.0 - 2.0 / (p + 1.0)) * potential_term(f, p, rule);
    CHECK(rel(lhs, rhs) < 1e-10);
    // omega equals -Re<grad H, f>/||f||^2.
    CHECK(rel(omega, -inner_real(gradient_h(f, params, rule), f) / e.mass) < 1e-10);
  }
  CHECK_THROWS_AS(lagrange_multiplier(ComplexField(g), {1.0, 3.0, 1.0}, rule),
                  std::invalid_argument);
}

TEST_CASE("window quadrature layout") {
  const WindowQuadrature unit(TimeWindow{0.0, 1.0});
  CHECK(unit.near().size() == 32);
  CHECK(unit.far().size() == 0);
  const WindowQuadrature sym(TimeWindow{-1.0, 1.0});
  CHECK(sym.near().size() == 64);
  const WindowQuadrature global(TimeWindow::global());
  CHECK(global.near().size() == 64);
  CHECK(global.far().size() == 64);
  CHECK_THROWS_AS(WindowQuadrature(TimeWindow{1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("windowed norms of the Gaussian match the oracle on long and infinite windows") {
  const SpectralGrid g = make_grid(256, 40.0);
  const GaussianParams bare{1.0, 1.0};
  const ComplexField f = gaussian_field(g, bare);
  struct Case {
    double q, a, b;
  };
  for (const Case c : {Case{4, 0, 5}, Case{6, -50, 50}, Case{4, -kInf, kInf}, Case{6, -kInf, kInf},
                       Case{5, -3, kInf}, Case{4, -7, -2}}) {
    const WindowQuadrature wq(TimeWindow{c.a, c.b}, 32);
    CHECK(rel(windowed_norm(f, c.q, wq), window_qnorm(bare, c.q, c.a, c.b)) < 1e-9);
  }
  // Sharp (4,4) Strichartz: 1/4 at Gaussians.
  CHECK(std::abs(strichartz_ratio(f, 4.0, WindowQuadrature(TimeWindow::global())) - 0.25) < 1e-9);
}

TEST_CASE("weinstein_ratio: homogeneity and Gaussian values") {
  const SpectralGrid g = make_grid(256, 40.0);
  const ComplexField f = gaussian_field(g, {1.0, 1.0});
  const WindowQuadrature unit(TimeWindow{0.0, 1.0});
  const double w = weinstein_ratio(f, 6.0, unit);
  // (2 / (3 pi^2)) (1/34 + arctan(4) / 8), about 0.0131811.
  CHECK(rel(w, 2.0 / (3.0 * pi * pi) * (1.0 / 34.0 + std::atan(4.0) / 8.0)) < 1e-9);
  for (Complex c : {Complex{7.0}, Complex{-0.3, 2.0}}) {
    CHECK(rel(weinstein_ratio(c * f, 6.0, unit), w) < 1e-12);
  }
  const WindowQuadrature t20(TimeWindow{-20.0, 20.0});
  CHECK(std::abs(weinstein_ratio(f, 6.0, t20) - 1.0 / (12.0 * pi)) < 1e-4);
  CHECK(std::abs(weinstein_ratio(f, 6.0, WindowQuadrature(TimeWindow::global())) - 1.0 / (12.0 * pi)) <
        1e-10);
  CHECK_THROWS_AS(weinstein_ratio(ComplexField(g), 6.0, unit), std::invalid_argument);
  const ComplexField flat = sample_function(g, [](double, double) { return Complex{1.0}; });
  CHECK_THROWS_AS(weinstein_ratio(flat, 6.0, unit), std::invalid_argument);
}

TEST_CASE("windowed force is the gradient of the windowed norm") {
  const SpectralGrid g = make_grid(64, 24.0);
  const double eps = 1e-5;
  for (const TimeWindow w : {TimeWindow{0.0, 1.0}, TimeWindow{-3.0, 2.0}, TimeWindow::global()}) {
    const WindowQuadrature wq(w, 24);
    const ComplexField f = testing::random_smooth_field(g, 21, 2, 0.05);
    const ComplexField dir = testing::random_smooth_field(g, 22, 2, 0.05);
    for (double q : {4.0, 6.0}) {
      const WindowedNormAndForce nf = windowed_norm_with_force(f, q, wq);
      CHECK(rel(nf.value, windowed_norm(f, q, wq)) < 1e-13);
      ComplexField plus = f, minus = f;
      plus.add_scaled(eps, dir);
      minus.add_scaled(-eps, dir);
      const double fd = (windowed_norm(plus, q, wq) - windowed_norm(minus, q, wq)) / (2 * eps);
      CHECK(rel(q * inner_real(nf.force, dir), fd) < 1e-6);
    }
  }
}

TEST_CASE("window identity W_[0,1](e^{-i Delta/2} f(sqrt2 .)) = W_[-1,1](f)") {
  const SpectralGrid g = make_grid(128, 24.0);
  const WindowQuadrature unit(TimeWindow{0.0, 1.0}, 64);
  const WindowQuadrature sym(TimeWindow{-1.0, 1.0}, 64);
  auto profile = [](double x, double y) {
    return Complex{std::exp(-(x * x + 2.0 * y * y) / 2.0)} * std::polar(1.0, 0.3 * x);
  };
  const ComplexField f = sample_function(g, profile);
  const ComplexField squeezed = propagate(
      sample_function(g, [&](double x, double y) { return profile(std::sqrt(2.0) * x, std::sqrt(2.0) * y); }),
      -0.5);
  CHECK(rel(weinstein_ratio(squeezed, 6.0, unit), weinstein_ratio(f, 6.0, sym)) < 1e-6);
}

TEST_CASE("scaling identity H(sqrt(mu) f) = mu K - mu^{(p+1)/2} P") {
  const SpectralGrid g = make_grid(64, 20.0);
  const QuadratureRule rule = period_rule(32);
  const ComplexField f = testing::random_smooth_field(g, 3);
  for (double p : {2.0, 3.0, 5.0}) {
    const ModelParams params{1.0, p, 1.0};
    const EnergyBreakdown e = hamiltonian(f, params, rule);
    for (double mu : {0.2, 0.5, 0.9}) {
      const EnergyBreakdown s = hamiltonian(std::sqrt(mu) * f, params, rule);
      const double predicted = mu * e.kinetic - std::pow(mu, (p + 1) / 2) * e.potential;
      CHECK(rel(s.total, predicted) < 1e-12);
      // Implies H(sqrt(mu) f) >= mu^{(p+1)/2} H(f) for 0 < mu < 1.
      CHECK(s.total >= std::pow(mu, (p + 1) / 2) * e.total);
    }
  }
}

TEST_CASE("Strichartz-type ratio suites are bounded over a random corpus") {
  const SpectralGrid g = make_grid(64, 24.0);
  const QuadratureRule rule = period_rule(32);
  struct Suite {
    const char* name;
    std::vector<double> qs;
    double kin_exp;   // power of ||grad f||_2
    double mass_exp;  // power of ||f||_2 (as a function of q)
    bool lemma22ii;
  };
  // Lemma 2.1: ||f||^q; 2.2(i): ||grad f||^{(q-2)/2} ||f||^{(q+2)/2}; 2.2(ii): ||grad f||^2 ||f||^{q-2}.
  auto denominators = [](int kind, double q, double kin, double mass) {
    const double gn = std::sqrt(kin), fn = std::sqrt(mass);
    if (kind == 0) return std::pow(fn, q);
    if (kind == 1) return std::pow(gn, (q - 2) / 2) * std::pow(fn, (q + 2) / 2);
    return gn * gn * std::pow(fn, q - 2);
  };
  const std::vector<std::vector<double>> qsets = {{2, 3, 4}, {2, 4, 6}, {4, 5, 6}};
  for (int kind = 0; kind < 3; ++kind) {
    for (double q : qsets[kind]) {
      double lo = kInf, hi = 0.0;
      for (unsigned seed = 0; seed < 50; ++seed) {
        // Vary the scale so the corpus is not trivially uniform.
        const ComplexField f0 = testing::random_smooth_field(g, 1000 + seed);
        const double scale = 0.5 + (seed % 5) * 0.25;
        const ComplexField f = regrid(f0, scale);
        const ComplexField fg(g, std::vector<Complex>(f.values().begin(), f.values().end()));
        const FieldNorms n = field_norms(f);
        const double ratio = space_time_norm(f, q, rule) / denominators(kind, q, n.kinetic, n.mass);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      MESSAGE("suite " << kind << " q=" << q << " empirical max " << hi);
      CHECK(std::isfinite(hi));
      CHECK(hi < 1e3 * lo);
    }
  }
}

TEST_CASE("q=3 Gaussian ratio against ||grad f||^2 ||f|| grows along sigma0") {
  auto ratio = [](double s0) {
    const GaussianParams gp{s0, 1.0};
    return window_qnorm(gp, 3.0, 0.0, 1.0) /
           (gaussian_kinetic(gp) * std::sqrt(gaussian_mass(gp)));
  };
  CHECK(ratio(100.0) > 5.0 * ratio(1.0));
  // Closed form (1/3)(2/pi)^{1/2} sigma0^{1/2} \int_0^1 (1+(4r/sigma0)^2)^{-1/2} dr at sigma0 = 1.
  CHECK(ratio(1.0) == doctest::Approx(std::sqrt(2.0 / pi) / 3.0 * std::asinh(4.0) / 4.0).epsilon(1e-10));
}

TEST_CASE("Lipschitz diagnostic of the nonlocal term is bounded") {
  const SpectralGrid g = make_grid(64, 24.0);
  const QuadratureRule rule = period_rule(32);
  for (double q : {4.0, 6.0}) {
    double hi = 0.0;
    for (unsigned seed = 0; seed < 30; ++seed) {
      const ComplexField f = testing::random_smooth_field(g, 500 + seed);
      const ComplexField h = testing::random_smooth_field(g, 900 + seed);
      ComplexField gg = f;
      gg.add_scaled(0.05 * (1 + seed % 4), h);
      auto h1 = [](const ComplexField& u) {
        const FieldNorms n = field_norms(u);
        return std::sqrt(n.mass + n.kinetic);
      };
      const double num = std::abs(space_time_norm(f, q, rule) - space_time_norm(gg, q, rule));
      const double den =
          (std::pow(h1(f), q - 1) + std::pow(h1(gg), q - 1)) * l2_norm(f - gg);
      hi = std::max(hi, num / den);
    }
    MESSAGE("Lipschitz q=" << q << " empirical max " << hi);
    CHECK(std::isfinite(hi));
    CHECK(hi < 10.0);
  }
}
