#include "dmnls/threshold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmnls/gaussian_oracle.hpp"

namespace dmnls {

double lambda_cr_from_constant(double p, double dav, double cp) {
  if (!(p >= 3.0 && p <= 5.0)) throw std::invalid_argument("lambda_cr formula needs 3 <= p <= 5");
  if (!(dav > 0.0)) throw std::invalid_argument("dav must be positive");
  if (!(cp > 0.0)) throw std::invalid_argument("best-constant estimate must be positive");
  return std::pow(dav * (p + 1.0) / (2.0 * cp), 2.0 / (p - 1.0));
}

EnergySample sample_energy(double p, double dav, double lambda, const SweepSetup& setup,
                           bool stop_when_negative) {
  const ModelParams params{dav, p, lambda};
  params.validate();
  const double sigma0 = setup.init_sigma0 > 0.0 ? setup.init_sigma0 : lambda;
  const GaussianParams gp = GaussianParams::with_mass(lambda, sigma0);
  const ComplexField init = sample_function(
      setup.grid, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
  SolverOptions opts = setup.opts;
  if (stop_when_negative) opts.target_energy = -kNegativeEnergy;
  const MinimizeReport r = minimize_at_mass(params, init, opts, setup.rule);
  const double h = r.energy.total;
  return {lambda, std::min(h, 0.0), r.omega, r.status, h < -kNegativeEnergy};
}

ThresholdReport bisect_threshold(double p, double dav, double lambda_lo, double lambda_hi,
                                 double tol, const SweepSetup& setup, double cp_estimate) {
  if (!(p >= 3.0 && p < 5.0)) throw std::invalid_argument("bisect_threshold needs 3 <= p < 5");
  if (!(lambda_lo > 0.0 && lambda_lo < lambda_hi)) {
    throw std::invalid_argument("bisect_threshold needs 0 < lambda_lo < lambda_hi");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  ThresholdReport report;
  report.p = p;
  report.dav = dav;
  report.cp_estimate = cp_estimate;
  report.lambda_cr_formula = cp_estimate > 0.0 ? lambda_cr_from_constant(p, dav, cp_estimate)
                                               : std::numeric_limits<double>::quiet_NaN();
  auto probe = [&](double lambda) {
    report.samples.push_back(sample_energy(p, dav, lambda, setup, true));
    return report.samples.back().negative;
  };
  if (probe(lambda_lo)) {
    throw std::invalid_argument("bracket does not straddle the threshold: lower end has negative energy");
  }
  if (!probe(lambda_hi)) {
    throw std::invalid_argument("bracket does not straddle the threshold: upper end has zero energy");
  }
  double lo = lambda_lo, hi = lambda_hi;
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) ? hi : lo) = mid;
  }
  report.lambda_lo = lo;
  report.lambda_hi = hi;
  report.lambda_cr_bisect = 0.5 * (lo + hi);
  return report;
}

ComplexField critical_family_member(const ComplexField& profile, double lambda, double beta) {
  const double mass = inner_real(profile, profile);
  if (!(mass > 0.0)) throw std::invalid_argument("critical profile has zero mass");
  // Q(sqrt2 beta x) relabels the grid; mass picks up 1 / (2 beta^2).
  const double kappa = std::sqrt(2.0) * beta;
  const double mu = std::sqrt(2.0 * lambda * beta * beta / mass);
  return propagate(mu * regrid(profile, 1.0 / kappa), -0.5);
}

std::vector<SeriesPoint> critical_scan(double dav, double lambda, const std::vector<double>& betas,
                                       const std::optional<ComplexField>& profile, int m) {
  if (!profile) throw std::invalid_argument("critical_scan: missing profile");
  if (!(dav > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("critical_scan: dav and lambda must be positive");
  const FieldNorms qn = field_norms(*profile);
  if (!(qn.mass > 0.0)) throw std::invalid_argument("critical_scan: zero-mass profile");
  std::vector<SeriesPoint> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    if (!(beta > 0.0)) throw std::invalid_argument("critical_scan: beta must be positive");
    const double b2 = beta * beta;
    const double window = windowed_norm(*profile, 6.0, WindowQuadrature(TimeWindow{-b2, b2}, m));
    const double bracket = dav * qn.kinetic / qn.mass -
                           lambda * lambda / 3.0 * window / (qn.mass * qn.mass * qn.mass);
    out.push_back({beta, lambda * b2 * bracket});
  }
  return out;
}

ComplexField gaussian_surrogate_profile(const SpectralGrid& grid) {
  const GaussianParams gp{1.0, 1.0};
  return sample_function(grid, [&](double x, double y) { return evolved_gaussian(gp, 0.0, x, y); });
}

std::vector<SeriesPoint> supercritical_gaussian_scan(double p, double lambda, double dav,
                                                     const std::vector<double>& sigma0s) {
  if (!(p > 5.0)) throw std::invalid_argument("supercritical scan needs p > 5");
  std::vector<SeriesPoint> out;
  out.reserve(sigma0s.size());
  for (double s : sigma0s) out.push_back({s, gaussian_hamiltonian(lambda, s, p, dav)});
  return out;
}

std::vector<EnergySample> energy_curve(double p, double dav, const std::vector<double>& lambdas,
                                       const SweepSetup& setup) {
  if (!(p > 1.0 && p < 5.0)) throw std::invalid_argument("energy_curve needs 1 < p < 5");
  std::vector<EnergySample> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) out.push_back(sample_energy(p, dav, lambda, setup));
  return out;
}

}  // namespace dmnls
