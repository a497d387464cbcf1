#include "dmnls/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dmnls/parallel.hpp"

namespace dmnls {

namespace {

using std::numbers::pi;

// x^e for x = |u|^2 >= 0, with the common small exponents done without pow.
inline double norm_pow(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.5) return x * std::sqrt(x);
  if (e == 0.0) return 1.0;
  if (e == 3.0) return x * x * x;
  return x > 0.0 ? std::pow(x, e) : 0.0;
}

void require_usable(const ComplexField& f, const char* op) {
  if (!f.is_finite()) throw std::domain_error(std::string(op) + ": non-finite input field");
}

struct NodeOutput {
  double value = 0.0;
  std::vector<Complex> force;  // spectrum (near) or physical samples (far)
};

// Runs `node(j, out)` for every quadrature node and hands the outputs to
// `consume` in node order, so reductions do not depend on the thread count.
template <class NodeFn, class ConsumeFn>
void for_each_node(std::size_t count, NodeFn&& node, ConsumeFn&& consume) {
  const std::size_t chunk = std::max<std::size_t>(1, thread_count());
  std::vector<NodeOutput> outputs(chunk);
  for (std::size_t start = 0; start < count; start += chunk) {
    const std::size_t len = std::min(chunk, count - start);
    parallel_for(len, [&](std::size_t i) { node(start + i, outputs[i]); });
    for (std::size_t i = 0; i < len; ++i) consume(start + i, outputs[i]);
  }
}

// Direct-propagation nodes. `spectrum` is the DFT of f. Adds
// sum_j w_j e^{-i r_j Delta}(|u_j|^{q-2} u_j) to force_spectrum (as a spectrum)
// when requested and returns sum_j w_j ||u_j||_q^q.
double near_terms(const SpectralGrid& grid, std::span<const Complex> spectrum, double q,
                  const QuadratureRule& rule, std::vector<Complex>* force_spectrum) {
  const std::size_t size = grid.size();
  const double area = grid.cell_area();
  const double value_exp = q / 2.0;
  const double force_exp = (q - 2.0) / 2.0;
  std::vector<double> node_values(rule.size());
  if (force_spectrum) force_spectrum->assign(size, Complex{});

  auto node = [&](std::size_t j, NodeOutput& out) {
    const double r = rule.nodes[j];
    std::vector<Complex> work(spectrum.begin(), spectrum.end());
    apply_free_phase(grid, free_phase_axis(grid, r), work);
    std::vector<Complex> u(size);
    backward_dft(grid, work, u);
    std::vector<double> terms(size);
    for (std::size_t i = 0; i < size; ++i) terms[i] = norm_pow(std::norm(u[i]), value_exp);
    out.value = area * pairwise_sum(terms);
    if (force_spectrum) {
      for (std::size_t i = 0; i < size; ++i) u[i] *= norm_pow(std::norm(u[i]), force_exp);
      out.force.resize(size);
      forward_dft(grid, u, out.force);
      apply_free_phase(grid, free_phase_axis(grid, -r), out.force);
    }
  };
  auto consume = [&](std::size_t j, NodeOutput& out) {
    node_values[j] = rule.weights[j] * out.value;
    if (force_spectrum) {
      const double w = rule.weights[j];
      for (std::size_t i = 0; i < size; ++i) (*force_spectrum)[i] += w * out.force[i];
    }
  };
  for_each_node(rule.size(), node, consume);
  return pairwise_sum(node_values);
}

// Far-field nodes in s = -1/(4r). Returns the contribution to the time
// integral; adds the matching force (physical space) when requested.
double far_terms(const ComplexField& f, double q, const QuadratureRule& rule,
                 ComplexField* force) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  const std::size_t size = grid.size();
  const double area = grid.cell_area();
  const double dk = 2.0 * pi / grid.length();
  const double value_exp = q / 2.0;
  const double force_exp = (q - 2.0) / 2.0;
  const double cq = std::pow(4.0 * pi, -q) * std::pow(4.0, q - 2.0);
  std::vector<double> node_values(rule.size());

  auto chirp_axis = [&](double s) {
    std::vector<Complex> axis(n);
    for (int i = 0; i < n; ++i) {
      const double y = grid.coordinate(i);
      axis[i] = std::polar(1.0, -s * y * y);
    }
    return axis;
  };

  auto node = [&](std::size_t l, NodeOutput& out) {
    const double s = rule.nodes[l];
    const auto chirp = chirp_axis(s);
    std::vector<Complex> h(size);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + j;
        h[idx] = chirp[i] * chirp[j] * f.values()[idx];
      }
    }
    std::vector<Complex> w(size);
    forward_dft(grid, h, w);
    std::vector<double> terms(size);
    for (std::size_t i = 0; i < size; ++i) {
      w[i] *= area;
      terms[i] = norm_pow(std::norm(w[i]), value_exp);
    }
    out.value = dk * dk * pairwise_sum(terms);
    if (force) {
      for (std::size_t i = 0; i < size; ++i) w[i] *= norm_pow(std::norm(w[i]), force_exp);
      out.force.resize(size);
      backward_dft(grid, w, out.force);
      const double scale = dk * dk * static_cast<double>(size);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * n + j;
          out.force[idx] *= scale * std::conj(chirp[i] * chirp[j]);
        }
      }
    }
  };
  auto consume = [&](std::size_t l, NodeOutput& out) {
    const double weight = rule.weights[l] * cq * std::pow(std::abs(rule.nodes[l]), q - 4.0);
    node_values[l] = weight * out.value;
    if (force) {
      auto dst = force->values();
      for (std::size_t i = 0; i < size; ++i) dst[i] += weight * out.force[i];
    }
  };
  for_each_node(rule.size(), node, consume);
  return pairwise_sum(node_values);
}

double kinetic_from_spectrum(const SpectralGrid& grid, std::span<const Complex> spectrum) {
  const int n = grid.n();
  std::vector<double> terms(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      terms[idx] = grid.k_squared(i, j) * std::norm(spectrum[idx]);
    }
  }
  return grid.cell_area() / static_cast<double>(grid.size()) * pairwise_sum(terms);
}

double mass_of(const ComplexField& f) { return inner_real(f, f); }

}  // namespace

void ModelParams::validate() const {
  if (!(dav > 0.0) || !std::isfinite(dav)) throw std::invalid_argument("dav must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive");
  }
}

QuadratureRule period_rule(int m) { return gauss_legendre_rule(m, 0.0, 1.0); }

double space_time_norm(const ComplexField& f, double q, const QuadratureRule& rule) {
  require_usable(f, "space_time_norm");
  if (!(q >= 2.0)) throw std::invalid_argument("space-time norm needs q >= 2");
  std::vector<Complex> spec(f.grid().size());
  forward_dft(f.grid(), f.values(), spec);
  return near_terms(f.grid(), spec, q, rule, nullptr);
}

double potential_term(const ComplexField& f, double p, const QuadratureRule& rule) {
  return space_time_norm(f, p + 1.0, rule);
}

EnergyBreakdown hamiltonian(const ComplexField& f, const ModelParams& params,
                            const QuadratureRule& rule) {
  params.validate();
  require_usable(f, "hamiltonian");
  const SpectralGrid& grid = f.grid();
  std::vector<Complex> spec(grid.size());
  forward_dft(grid, f.values(), spec);
  EnergyBreakdown e;
  e.mass = mass_of(f);
  e.kinetic = 0.5 * params.dav * kinetic_from_spectrum(grid, spec);
  e.potential = near_terms(grid, spec, params.q(), rule, nullptr) / params.q();
  e.total = e.kinetic - e.potential;
  return e;
}

ComplexField nonlocal_force(const ComplexField& f, double p, const QuadratureRule& rule) {
  require_usable(f, "nonlocal_force");
  const SpectralGrid& grid = f.grid();
  std::vector<Complex> spec(grid.size());
  forward_dft(grid, f.values(), spec);
  std::vector<Complex> force_spec;
  near_terms(grid, spec, p + 1.0, rule, &force_spec);
  ComplexField out(grid);
  backward_dft(grid, force_spec, out.values());
  return out;
}

EnergyAndGradient hamiltonian_with_gradient(const ComplexField& f, const ModelParams& params,
                                            const QuadratureRule& rule) {
  params.validate();
  require_usable(f, "hamiltonian_with_gradient");
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  std::vector<Complex> spec(grid.size());
  forward_dft(grid, f.values(), spec);
  std::vector<Complex> force_spec;
  EnergyBreakdown e;
  e.mass = mass_of(f);
  e.kinetic = 0.5 * params.dav * kinetic_from_spectrum(grid, spec);
  e.potential = near_terms(grid, spec, params.q(), rule, &force_spec) / params.q();
  e.total = e.kinetic - e.potential;
  // -dav Delta f - N(f) assembled in Fourier space.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      force_spec[idx] = params.dav * grid.k_squared(i, j) * spec[idx] - force_spec[idx];
    }
  }
  ComplexField gradient(grid);
  backward_dft(grid, force_spec, gradient.values());
  return {e, std::move(gradient)};
}

ComplexField gradient_h(const ComplexField& f, const ModelParams& params,
                        const QuadratureRule& rule) {
  return hamiltonian_with_gradient(f, params, rule).gradient;
}

double lagrange_multiplier(const ComplexField& f, const ModelParams& params,
                           const QuadratureRule& rule) {
  params.validate();
  const FieldNorms norms = field_norms(f);
  if (!(norms.mass > 0.0)) throw std::invalid_argument("lagrange_multiplier: zero-mass field");
  return (potential_term(f, params.p, rule) - params.dav * norms.kinetic) / norms.mass;
}

bool TimeWindow::is_global() const noexcept {
  return std::isinf(a) && a < 0.0 && std::isinf(b) && b > 0.0;
}

bool TimeWindow::is_finite() const noexcept { return std::isfinite(a) && std::isfinite(b); }

WindowQuadrature::WindowQuadrature(TimeWindow window, int m, double split)
    : window_(window), split_(split) {
  if (!(window.a < window.b) || std::isnan(window.a) || std::isnan(window.b)) {
    throw std::invalid_argument("time window needs a < b");
  }
  if (!(split > 0.0) || !std::isfinite(split)) throw std::invalid_argument("split must be positive");
  const double na = std::max(window.a, -split);
  const double nb = std::min(window.b, split);
  if (na < nb) {
    // Unit-length panels at most, with a break at r = 0 when the window straddles it.
    std::vector<double> breaks;
    auto add_panels = [&](double lo, double hi) {
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) - 1e-12)));
      for (int i = 0; i < panels; ++i) breaks.push_back(lo + (hi - lo) * i / panels);
    };
    if (na < 0.0 && nb > 0.0) {
      add_panels(na, 0.0);
      add_panels(0.0, nb);
    } else {
      add_panels(na, nb);
    }
    breaks.push_back(nb);
    near_ = composite_gauss_legendre(m, breaks);
  } else {
    near_ = QuadratureRule{0.0, 0.0, {}, {}};
  }
  far_ = QuadratureRule{0.0, 0.0, {}, {}};
  auto append_far = [&](double s_lo, double s_hi) {
    if (!(s_lo < s_hi)) return;
    const QuadratureRule piece = gauss_legendre_rule(m, s_lo, s_hi);
    far_.nodes.insert(far_.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    far_.weights.insert(far_.weights.end(), piece.weights.begin(), piece.weights.end());
  };
  // r in [split, b]: s = -1/(4r) runs over [-1/(4 t1), -1/(4b)].
  if (window.b > split) {
    const double t1 = std::max(window.a, split);
    append_far(-0.25 / t1, std::isinf(window.b) ? 0.0 : -0.25 / window.b);
  }
  // r in [a, t2], t2 <= -split: s runs over [1/(4|a|), 1/(4|t2|)].
  if (window.a < -split) {
    const double t2 = std::min(window.b, -split);
    append_far(std::isinf(window.a) ? 0.0 : -0.25 / window.a, -0.25 / t2);
  }
  if (!far_.nodes.empty()) {
    far_.a = far_.nodes.front();
    far_.b = far_.nodes.back();
  }
}

WindowedNormAndForce windowed_norm_with_force(const ComplexField& f, double q,
                                              const WindowQuadrature& wq) {
  require_usable(f, "windowed_norm");
  if (!(q >= 2.0)) throw std::invalid_argument("windowed norm needs q >= 2");
  if (!wq.window().is_finite() && !(q > 3.0)) {
    throw std::invalid_argument("unbounded windows diverge for q <= 3");
  }
  const SpectralGrid& grid = f.grid();
  WindowedNormAndForce out{0.0, ComplexField(grid)};
  double near = 0.0;
  if (wq.near().size() > 0) {
    std::vector<Complex> spec(grid.size());
    forward_dft(grid, f.values(), spec);
    std::vector<Complex> force_spec;
    near = near_terms(grid, spec, q, wq.near(), &force_spec);
    backward_dft(grid, force_spec, out.force.values());
  }
  double far = 0.0;
  if (wq.far().size() > 0) far = far_terms(f, q, wq.far(), &out.force);
  out.value = near + far;
  return out;
}

double windowed_norm(const ComplexField& f, double q, const WindowQuadrature& wq) {
  require_usable(f, "windowed_norm");
  if (!(q >= 2.0)) throw std::invalid_argument("windowed norm needs q >= 2");
  if (!wq.window().is_finite() && !(q > 3.0)) {
    throw std::invalid_argument("unbounded windows diverge for q <= 3");
  }
  double near = 0.0;
  if (wq.near().size() > 0) near = space_time_norm(f, q, wq.near());
  double far = 0.0;
  if (wq.far().size() > 0) far = far_terms(f, q, wq.far(), nullptr);
  return near + far;
}

double weinstein_ratio(const ComplexField& f, double q, const WindowQuadrature& wq) {
  const FieldNorms norms = field_norms(f);
  if (!(norms.mass > 0.0)) throw std::invalid_argument("weinstein_ratio: zero-mass field");
  if (!(norms.kinetic > 0.0)) throw std::invalid_argument("weinstein_ratio: zero kinetic energy");
  return windowed_norm(f, q, wq) / (norms.kinetic * std::pow(norms.mass, (q - 2.0) / 2.0));
}

double strichartz_ratio(const ComplexField& f, double q, const WindowQuadrature& wq) {
  const double mass = mass_of(f);
  if (!(mass > 0.0)) throw std::invalid_argument("strichartz_ratio: zero-mass field");
  return windowed_norm(f, q, wq) / std::pow(mass, q / 2.0);
}

}  // namespace dmnls
