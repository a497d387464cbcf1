#include "dmnls/solve.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dmnls/gaussian_oracle.hpp"

namespace dmnls {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kStepGrowth = 1.5;
constexpr double kMinStep = 1e-14;
// Spreading: energy indistinguishable from zero while the field reaches the box.
constexpr double kZeroEnergy = 1e-6;
constexpr double kSpreadKinetic = 1e-3;
constexpr double kSpreadTail = 1e-3;

// Applies the radial Fourier multiplier m(|k|^2).
template <class Multiplier>
ComplexField apply_multiplier(const ComplexField& f, Multiplier&& m) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  std::vector<Complex> spec(grid.size());
  forward_dft(grid, f.values(), spec);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) spec[static_cast<std::size_t>(i) * n + j] *= m(grid.k_squared(i, j));
  }
  ComplexField out(grid);
  backward_dft(grid, spec, out.values());
  return out;
}

// Removes the component of d along f.
void project_out(ComplexField& d, const ComplexField& f, double mass) {
  d.add_scaled(-inner_real(d, f) / mass, f);
}

bool is_spreading(const ComplexField& f, const EnergyBreakdown& e, double dav) {
  if (e.total < -kZeroEnergy) return false;
  const double grad_sq = 2.0 * e.kinetic / dav;
  return grad_sq < kSpreadKinetic || tail_mass_fraction(f, 0.25 * f.grid().length()) > kSpreadTail;
}

double log_ratio(double norm, const FieldNorms& fn, double q, RatioKind kind) {
  if (kind == RatioKind::Strichartz) return std::log(norm) - 0.5 * q * std::log(fn.mass);
  return std::log(norm) - std::log(fn.kinetic) - 0.5 * (q - 2.0) * std::log(fn.mass);
}

struct AscentPoint {
  ComplexField field;
  double log_value = 0.0;
  ComplexField gradient;
  FieldNorms norms;
};

AscentPoint evaluate_ascent(ComplexField f, double q, const WindowQuadrature& wq, RatioKind kind) {
  const WindowedNormAndForce nf = windowed_norm_with_force(f, q, wq);
  const FieldNorms fn = field_norms(f);
  if (!(nf.value > 0.0) || !(fn.mass > 0.0) || (kind == RatioKind::Weinstein && !(fn.kinetic > 0.0))) {
    throw std::invalid_argument("maximize_weinstein: degenerate field");
  }
  // d log N = q F / N, d log M = 2 f / M, d log K = -2 Delta f / K.
  ComplexField g = (q / nf.value) * nf.force;
  if (kind == RatioKind::Weinstein) {
    g.add_scaled(2.0 / fn.kinetic, laplacian(f));
    g.add_scaled(-(q - 2.0) / fn.mass, f);
  } else {
    g.add_scaled(-q / fn.mass, f);
  }
  const double lv = log_ratio(nf.value, fn, q, kind);
  return {std::move(f), lv, std::move(g), fn};
}

// Unit mass and unit kinetic energy. The shape g(x / a) / a has kinetic
// energy divided by a^2; the returned log a is the dilation that undoes it.
std::pair<ComplexField, double> normalize_shape(const ComplexField& f) {
  ComplexField g = rescale_to_mass(f, 1.0);
  const double a = std::sqrt(field_norms(g).kinetic);
  if (!(a > 0.0)) throw std::invalid_argument("maximize_weinstein: zero kinetic energy");
  return {(1.0 / a) * regrid(g, a), std::log(a)};
}

// Mass-preserving dilation e^s f(e^s x), done by relabelling the grid.
ComplexField dilate(const ComplexField& f, double s) {
  return std::exp(s) * regrid(f, std::exp(-s));
}

// Generator of dilate at s = 0: f + x . grad f.
ComplexField dilation_generator(const ComplexField& f) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  const auto k = grid.wavenumbers();
  std::vector<Complex> spec(grid.size());
  forward_dft(grid, f.values(), spec);
  std::vector<Complex> dx(spec.size()), dy(spec.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      // Odd derivatives drop the unpaired Nyquist mode.
      dx[idx] = (i == n / 2) ? Complex{} : Complex{0.0, k[i]} * spec[idx];
      dy[idx] = (j == n / 2) ? Complex{} : Complex{0.0, k[j]} * spec[idx];
    }
  }
  backward_dft(grid, dx, dx);
  backward_dft(grid, dy, dy);
  ComplexField out = f;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      out(i, j) += grid.coordinate(i) * dx[idx] + grid.coordinate(j) * dy[idx];
    }
  }
  return out;
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(step0 > 0.0)) throw std::invalid_argument("step0 must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("backtrack_factor must lie in (0, 1)");
  }
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (std::isnan(energy_floor) || std::isnan(target_energy)) {
    throw std::invalid_argument("energy thresholds must not be NaN");
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    case SolveStatus::EnergyUnbounded: return "energy_unbounded";
    case SolveStatus::Spreading: return "spreading";
    case SolveStatus::TargetReached: return "target_reached";
    case SolveStatus::Stalled: return "stalled";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& name) {
  for (SolveStatus s : {SolveStatus::Converged, SolveStatus::BudgetExhausted,
                        SolveStatus::EnergyUnbounded, SolveStatus::Spreading,
                        SolveStatus::TargetReached, SolveStatus::Stalled}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown solver status '" + name + "'");
}

ComplexField rescale_to_mass(const ComplexField& f, double lambda) {
  const double mass = inner_real(f, f);
  if (!(mass > 0.0)) throw std::invalid_argument("cannot rescale a zero-mass field");
  return std::sqrt(lambda / mass) * f;
}

ComplexField default_initial_field(const SpectralGrid& grid, double lambda, std::uint64_t seed) {
  const GaussianParams gp = GaussianParams::with_mass(lambda, lambda);
  ComplexField f = sample_function(grid, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-0.5, 0.5);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double width = std::sqrt(lambda);
    for (int b = 0; b < 3; ++b) {
      const double cx = offset(rng) * width, cy = offset(rng) * width;
      const Complex amp = std::polar(0.05 * gp.amplitude, phase(rng));
      f.add_scaled(amp, sample_function(grid, [&](double x, double y) {
                     const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                     return Complex{std::exp(-r2 / gp.sigma0)};
                   }));
    }
  }
  return rescale_to_mass(f, lambda);
}

ComplexField canonicalize(const ComplexField& f) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  double total = 0.0, mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = std::norm(f(i, j));
      total += w;
      mx += w * grid.coordinate(i);
      my += w * grid.coordinate(j);
    }
  }
  if (!(total > 0.0)) return f;
  ComplexField out = translate(f, -mx / total, -my / total);
  const Complex centre = out(n / 2, n / 2);
  if (std::abs(centre) > 0.0) out *= std::conj(centre) / std::abs(centre);
  return out;
}

MinimizeReport minimize_at_mass(const ModelParams& params, const ComplexField& init,
                                const SolverOptions& opts, const QuadratureRule& rule) {
  params.validate();
  opts.validate();
  const double lambda = params.lambda;
  ComplexField f = rescale_to_mass(init, lambda);
  EnergyAndGradient eg = hamiltonian_with_gradient(f, params, rule);

  MinimizeReport report{f, eg.energy, 0.0, 0.0, 0, SolveStatus::BudgetExhausted, {eg.energy.total}, -1};
  double tau = opts.step0;
  int iter = 0;
  for (;; ++iter) {
    const double mass = eg.energy.mass;
    const double omega = -inner_real(eg.gradient, f) / mass;
    ComplexField g_perp = eg.gradient;
    g_perp.add_scaled(omega, f);
    report.omega = omega;
    report.el_residual = l2_norm(g_perp);

    if (eg.energy.total < opts.energy_floor) {
      report.status = SolveStatus::EnergyUnbounded;
      report.floor_crossing = iter;
      break;
    }
    if (eg.energy.total < opts.target_energy) {
      report.status = SolveStatus::TargetReached;
      break;
    }
    if (report.el_residual <= opts.grad_tol) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (is_spreading(f, eg.energy, params.dav)) {
      report.status = SolveStatus::Spreading;
      break;
    }
    if (iter >= opts.max_iters) break;

    // Below the field's own wavenumber scale the shift would make low modes too stiff.
    const double shift = std::max(omega, eg.energy.kinetic / mass);
    ComplexField dir = apply_multiplier(g_perp, [&](double k2) { return 1.0 / (shift + params.dav * k2); });
    project_out(dir, f, mass);
    const double slope = inner_real(g_perp, dir);

    bool accepted = false;
    while (tau >= kMinStep) {
      ComplexField trial = f;
      trial.add_scaled(-tau, dir);
      trial = rescale_to_mass(trial, lambda);
      EnergyAndGradient trial_eg = hamiltonian_with_gradient(trial, params, rule);
      if (trial_eg.energy.total <= eg.energy.total - kArmijo * tau * slope &&
          trial_eg.energy.total < eg.energy.total) {
        f = std::move(trial);
        eg = std::move(trial_eg);
        accepted = true;
        break;
      }
      tau *= opts.backtrack_factor;
    }
    if (!accepted) {
      report.status = SolveStatus::Stalled;
      break;
    }
    report.energy_trace.push_back(eg.energy.total);
    tau = std::min(tau * kStepGrowth, 1e3 * opts.step0);
  }

  report.iterations = iter;
  if (report.status == SolveStatus::Converged) {
    f = canonicalize(f);
    eg = hamiltonian_with_gradient(f, params, rule);
    report.omega = -inner_real(eg.gradient, f) / eg.energy.mass;
    ComplexField g_perp = eg.gradient;
    g_perp.add_scaled(report.omega, f);
    report.el_residual = l2_norm(g_perp);
  }
  report.final_field = std::move(f);
  report.energy = eg.energy;
  return report;
}

WeinsteinReport maximize_weinstein(double q, const TimeWindow& window, const ComplexField& init,
                                   const SolverOptions& opts, int m, RatioKind kind) {
  opts.validate();
  if (!(q > 2.0)) throw std::invalid_argument("maximize_weinstein needs q > 2");
  if (!(inner_real(init, init) > 0.0)) throw std::invalid_argument("maximize_weinstein: zero init");
  // The field is held as f = e^s g(e^s x) with g at unit mass and unit kinetic
  // energy. Then ratio(f) = e^{e s} ratio_{e^{2s} window}(g), with e = q - 6
  // (Weinstein) or q - 4 (Strichartz), so the quadrature always sees g on its
  // own time scale and the samples stay resolved however far s moves.
  const double scale_exp = kind == RatioKind::Weinstein ? q - 6.0 : q - 4.0;
  const bool invariant = window.is_global() && scale_exp == 0.0;
  auto evaluate = [&](ComplexField g, double s) {
    const double stretch = std::exp(2.0 * s);
    const WindowQuadrature wq(TimeWindow{window.a * stretch, window.b * stretch}, m);
    AscentPoint pt = evaluate_ascent(std::move(g), q, wq, kind);
    pt.log_value += scale_exp * s;
    return pt;
  };

  auto [g0, s0] = normalize_shape(init);
  double scale = invariant ? 0.0 : s0;
  AscentPoint cur = evaluate(std::move(g0), scale);
  WeinsteinReport report{cur.field, std::exp(cur.log_value), window, q, 0,
                         SolveStatus::BudgetExhausted, {std::exp(cur.log_value)}};
  double tau = opts.step0;
  int iter = 0;
  for (;; ++iter) {
    const double mass = cur.norms.mass;
    ComplexField g = cur.gradient;
    project_out(g, cur.field, mass);
    ComplexField gen = dilation_generator(cur.field);
    project_out(gen, cur.field, mass);
    // Derivative of the log ratio along s; zero up to rounding when invariant.
    const double scale_slope = invariant ? 0.0 : inner_real(g, gen);
    const double gen_sq = inner_real(gen, gen);
    if (gen_sq > 0.0) g.add_scaled(-inner_real(g, gen) / gen_sq, gen);
    if (std::hypot(l2_norm(g), scale_slope) <= opts.grad_tol) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (iter >= opts.max_iters) break;
    ComplexField dir = apply_multiplier(g, [](double k2) { return 1.0 / (1.0 + k2); });
    project_out(dir, cur.field, mass);
    if (gen_sq > 0.0) dir.add_scaled(-inner_real(dir, gen) / gen_sq, gen);
    const double slope = inner_real(cur.gradient, dir) + scale_slope * scale_slope;

    bool accepted = false;
    while (tau >= kMinStep) {
      ComplexField trial = cur.field;
      trial.add_scaled(tau, dir);
      auto [shape, shift] = normalize_shape(trial);
      const double trial_scale = invariant ? 0.0 : scale + tau * scale_slope + shift;
      AscentPoint next = evaluate(std::move(shape), trial_scale);
      if (next.log_value >= cur.log_value + kArmijo * tau * slope && next.log_value > cur.log_value) {
        cur = std::move(next);
        scale = trial_scale;
        accepted = true;
        break;
      }
      tau *= opts.backtrack_factor;
    }
    if (!accepted) {
      report.status = SolveStatus::Stalled;
      break;
    }
    report.ratio_trace.push_back(std::exp(cur.log_value));
    tau = std::min(tau * kStepGrowth, 1e3 * opts.step0);
  }
  report.iterations = iter;
  report.ratio = std::exp(cur.log_value);
  report.final_field = dilate(cur.field, scale);
  return report;
}

}  // namespace dmnls
