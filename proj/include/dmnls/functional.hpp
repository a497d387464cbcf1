#pragma once

#include <limits>

#include "dmnls/quadrature.hpp"
#include "dmnls/spectral.hpp"

namespace dmnls {

/// Average dispersion, nonlinearity exponent and target mass.
struct ModelParams {
  double dav = 1.0;
  double p = 3.0;
  double lambda = 1.0;

  /// Throws std::invalid_argument unless dav > 0, p > 1, lambda > 0.
  void validate() const;
  double q() const noexcept { return p + 1.0; }
};

/// H(f) = kinetic - potential, with
///   kinetic   = (dav/2) ||grad f||^2
///   potential = 1/(p+1) \int_0^1 ||e^{i r Delta} f||_{p+1}^{p+1} dr.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double mass = 0.0;
};

/// Default dispersion-period rule: 32-point Gauss-Legendre on [0, 1].
QuadratureRule period_rule(int m = 32);

/// \int ||e^{i r Delta} f||_q^q dr over the rule's nodes (direct propagation).
double space_time_norm(const ComplexField& f, double q, const QuadratureRule& rule);

/// \int_0^1 ||e^{i r Delta} f||_{p+1}^{p+1} dr.
double potential_term(const ComplexField& f, double p, const QuadratureRule& rule);

EnergyBreakdown hamiltonian(const ComplexField& f, const ModelParams& params,
                            const QuadratureRule& rule);

/// N(f) = \int e^{-i r Delta}(|e^{i r Delta} f|^{p-1} e^{i r Delta} f) dr.
ComplexField nonlocal_force(const ComplexField& f, double p, const QuadratureRule& rule);

/// First variation of H in the real pairing Re<f, g>: -dav Delta f - N(f).
ComplexField gradient_h(const ComplexField& f, const ModelParams& params,
                        const QuadratureRule& rule);

struct EnergyAndGradient {
  EnergyBreakdown energy;
  ComplexField gradient;
};

/// H and its gradient from one pass over the quadrature nodes.
EnergyAndGradient hamiltonian_with_gradient(const ComplexField& f, const ModelParams& params,
                                            const QuadratureRule& rule);

/// omega = (potential_term - dav ||grad f||^2) / ||f||^2, the multiplier in
/// -omega f = -dav Delta f - N(f). Throws std::invalid_argument on zero mass.
double lagrange_multiplier(const ComplexField& f, const ModelParams& params,
                           const QuadratureRule& rule);

/// Time interval of a space-time norm. Endpoints may be infinite.
struct TimeWindow {
  double a = 0.0;
  double b = 1.0;

  static TimeWindow global() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  bool is_global() const noexcept;
  bool is_finite() const noexcept;
};

/// Quadrature for \int_a^b ||e^{i r Delta} f||_q^q dr.
///
/// Times with |r| <= split are handled by propagating on the grid. Beyond that
/// the evolved field is far-field dominated and the integral is carried out in
/// s = -1/(4 r) using
///   |e^{i r Delta} f|(x) = (4 pi |r|)^{-1} |F[e^{-i s |y|^2} f]|(x / (2 r)),
/// which keeps long (or infinite) windows exact on a periodic grid.
class WindowQuadrature {
 public:
  explicit WindowQuadrature(TimeWindow window, int m = 32, double split = 1.0);

  const TimeWindow& window() const noexcept { return window_; }
  double split() const noexcept { return split_; }
  /// Direct-propagation nodes in r.
  const QuadratureRule& near() const noexcept { return near_; }
  /// Far-field nodes in s; may be empty.
  const QuadratureRule& far() const noexcept { return far_; }

 private:
  TimeWindow window_;
  double split_;
  QuadratureRule near_;
  QuadratureRule far_;
};

/// \int_window ||e^{i r Delta} f||_q^q dr.
double windowed_norm(const ComplexField& f, double q, const WindowQuadrature& wq);

struct WindowedNormAndForce {
  double value = 0.0;
  /// (1/q) times the gradient of `value` in the real pairing.
  ComplexField force;
};

WindowedNormAndForce windowed_norm_with_force(const ComplexField& f, double q,
                                              const WindowQuadrature& wq);

/// Weinstein-type ratio windowed_norm / (||grad f||^2 ||f||^{q-2}).
/// Throws std::invalid_argument on zero mass or zero kinetic energy.
double weinstein_ratio(const ComplexField& f, double q, const WindowQuadrature& wq);

/// Strichartz-type ratio windowed_norm / ||f||^q.
double strichartz_ratio(const ComplexField& f, double q, const WindowQuadrature& wq);

}  // namespace dmnls
