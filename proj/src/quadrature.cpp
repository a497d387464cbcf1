#include "dmnls/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmnls {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

QuadratureRule gauss_legendre_rule(int m, double a, double b) {
  if (m < 2) throw std::invalid_argument("Gauss-Legendre rule needs m >= 2");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("Gauss-Legendre interval must be finite with a < b");
  }
  QuadratureRule rule{a, b, std::vector<double>(m), std::vector<double>(m)};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[m - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[m - 1 - i] = half * w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = mid;
  return rule;
}

QuadratureRule composite_gauss_legendre(int m, const std::vector<double>& breaks) {
  if (breaks.size() < 2) throw std::invalid_argument("composite rule needs at least one panel");
  QuadratureRule rule{breaks.front(), breaks.back(), {}, {}};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const QuadratureRule panel = gauss_legendre_rule(m, breaks[p], breaks[p + 1]);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

std::vector<double> graded_breaks(double a, double b, double focus, double first, double ratio) {
  if (!(a < b)) throw std::invalid_argument("graded_breaks: need a < b");
  if (!(first > 0.0) || !(ratio >= 1.0)) throw std::invalid_argument("graded_breaks: bad grading");
  focus = std::clamp(focus, a, b);
  std::vector<double> left, right;
  for (double w = first, x = focus; x > a;) {
    x = std::max(a, x - w);
    // Merge a sliver panel into its neighbour.
    if (x - a < 0.25 * w) x = a;
    left.push_back(x);
    w *= ratio;
  }
  for (double w = first, x = focus; x < b;) {
    x = std::min(b, x + w);
    if (b - x < 0.25 * w) x = b;
    right.push_back(x);
    w *= ratio;
  }
  std::vector<double> breaks(left.rbegin(), left.rend());
  breaks.push_back(focus);
  breaks.insert(breaks.end(), right.begin(), right.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 25, rel_tol, &error);
  if (!(error <= std::max(rel_tol * std::abs(value), 1e-300) * 10.0)) {
    throw std::runtime_error("adaptive quadrature failed to reach tolerance");
  }
  return value;
}

}  // namespace dmnls
