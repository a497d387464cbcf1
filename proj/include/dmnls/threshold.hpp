#pragma once

#include <optional>
#include <vector>

#include "dmnls/solve.hpp"

namespace dmnls {

struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Energy separating "negative-energy" from "zero-energy" solver outcomes.
inline constexpr double kNegativeEnergy = 1e-5;

/// (dav (p+1) / (2 cp))^{2/(p-1)}. Requires 3 <= p <= 5, dav > 0, cp > 0.
double lambda_cr_from_constant(double p, double dav, double cp);

/// Grid, quadrature and solver settings shared by the mass sweeps.
struct SweepSetup {
  SpectralGrid grid;
  QuadratureRule rule = period_rule(32);
  SolverOptions opts;
  /// Width of the initial Gaussian; 0 selects sigma0 = lambda.
  double init_sigma0 = 0.0;
};

/// Ground-state energy estimate at one mass. The energy is min(H, 0) of the
/// final iterate since E_lambda <= 0 always holds.
struct EnergySample {
  double lambda = 0.0;
  double energy = 0.0;
  double omega = 0.0;
  SolveStatus status = SolveStatus::BudgetExhausted;
  bool negative = false;
};

EnergySample sample_energy(double p, double dav, double lambda, const SweepSetup& setup,
                           bool stop_when_negative = false);

struct ThresholdReport {
  double p = 0.0;
  double dav = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda_cr_bisect = 0.0;
  /// Upper bound on lambda_cr from the formula (cp_estimate is a lower bound on C_p);
  /// NaN when no estimate was supplied.
  double lambda_cr_formula = 0.0;
  double cp_estimate = 0.0;
  std::vector<EnergySample> samples;
};

/// Bisection on "minimize_at_mass reaches H < -1e-5" until hi - lo < tol.
/// Throws std::invalid_argument when p is outside [3, 5) or the bracket does not
/// straddle the sign change. cp_estimate <= 0 skips the formula value.
ThresholdReport bisect_threshold(double p, double dav, double lambda_lo, double lambda_hi,
                                 double tol, const SweepSetup& setup, double cp_estimate = 0.0);

/// H along the p = 5 blow-down family mu e^{-i Delta/2} Q(sqrt2 beta x),
/// mu^2 = 2 lambda beta^2 / ||Q||^2, evaluated as
///   lambda beta^2 (dav ||grad Q||^2/||Q||^2 - lambda^2/3 ||Q||^{-6} \int_{-beta^2}^{beta^2} ||e^{ir Delta} Q||_6^6 dr).
/// Throws std::invalid_argument when the profile is missing.
std::vector<SeriesPoint> critical_scan(double dav, double lambda, const std::vector<double>& betas,
                                       const std::optional<ComplexField>& profile, int m = 32);

/// The field whose energy critical_scan reports for one beta.
ComplexField critical_family_member(const ComplexField& profile, double lambda, double beta);

/// Unit-width Gaussian used when no ascent profile is available.
ComplexField gaussian_surrogate_profile(const SpectralGrid& grid);

/// gaussian_hamiltonian along sigma0 values. Requires p > 5.
std::vector<SeriesPoint> supercritical_gaussian_scan(double p, double lambda, double dav,
                                                     const std::vector<double>& sigma0s);

/// One minimize_at_mass run per lambda. Requires 1 < p < 5.
std::vector<EnergySample> energy_curve(double p, double dav, const std::vector<double>& lambdas,
                                       const SweepSetup& setup);

}  // namespace dmnls
