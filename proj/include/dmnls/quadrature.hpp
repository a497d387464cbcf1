#pragma once

#include <functional>
#include <vector>

namespace dmnls {

/// Nodes and weights on [a, b]. Nodes are strictly increasing and interior.
struct QuadratureRule {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

/// m-point Gauss-Legendre rule mapped to [a, b]; exact for polynomials of degree <= 2m-1.
/// Throws std::invalid_argument for m < 2 or a >= b.
QuadratureRule gauss_legendre_rule(int m, double a, double b);

/// m-point Gauss-Legendre on each panel [breaks[i], breaks[i+1]].
QuadratureRule composite_gauss_legendre(int m, const std::vector<double>& breaks);

/// Breakpoints on [a, b] refined geometrically toward `focus` (clamped into [a, b]):
/// panels grow by `ratio` starting from `first` away from the focus.
std::vector<double> graded_breaks(double a, double b, double focus, double first, double ratio);

/// Adaptive Gauss-Kronrod integration; a and b may be infinite.
/// Throws std::runtime_error when the error estimate exceeds the tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10);

}  // namespace dmnls
