#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dmnls/functional.hpp"

namespace dmnls {

struct SolverOptions {
  int max_iters = 5000;
  double step0 = 1.0;
  double backtrack_factor = 0.5;
  /// Stationarity tolerance on the L^2 norm of the projected gradient.
  double grad_tol = 1e-6;
  /// Minimization aborts with EnergyUnbounded once H drops below this.
  double energy_floor = -1e3;
  /// Minimization stops with TargetReached once H drops below this.
  double target_energy = -std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on an out-of-range field.
  void validate() const;
};

enum class SolveStatus {
  Converged,
  BudgetExhausted,
  EnergyUnbounded,
  Spreading,      // energy ~ 0 while the field leaves the box
  TargetReached,  // energy fell below SolverOptions::target_energy
  Stalled,        // line search found no progress at working precision
};

std::string to_string(SolveStatus status);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
SolveStatus solve_status_from_string(const std::string& name);

struct MinimizeReport {
  ComplexField final_field;
  EnergyBreakdown energy;
  double omega = 0.0;
  /// ||gradient_h(f) + omega f||_2
  double el_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::BudgetExhausted;
  /// H after every accepted step, starting with the initial field.
  std::vector<double> energy_trace;
  /// Iteration at which H crossed the energy floor, or -1.
  int floor_crossing = -1;
};

/// Mass-lambda Gaussian with sigma0 = lambda, plus a small seeded smooth
/// perturbation when seed != 0.
ComplexField default_initial_field(const SpectralGrid& grid, double lambda, std::uint64_t seed = 0);

/// Scales f to mass lambda. Throws std::invalid_argument on zero mass.
ComplexField rescale_to_mass(const ComplexField& f, double lambda);

/// Shifts the density centroid to the origin and rotates the phase so that the
/// sample nearest the origin is real and nonnegative.
ComplexField canonicalize(const ComplexField& f);

/// Preconditioned projected gradient descent for inf{H(f) : ||f||^2 = lambda}.
MinimizeReport minimize_at_mass(const ModelParams& params, const ComplexField& init,
                                const SolverOptions& opts, const QuadratureRule& rule);

/// Which ratio maximize_weinstein ascends.
enum class RatioKind {
  Weinstein,   // windowed_norm / (||grad f||^2 ||f||^{q-2})
  Strichartz,  // windowed_norm / ||f||^q
};

struct WeinsteinReport {
  ComplexField final_field;
  double ratio = 0.0;
  TimeWindow window;
  double q = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::BudgetExhausted;
  /// Ratio after every accepted step, starting with the normalized init.
  std::vector<double> ratio_trace;
};

/// Gradient ascent on the log of the ratio with backtracking. Iterates are kept
/// at unit mass; on the global window the grid is also rescaled so that the
/// kinetic energy is one (the ratio is then invariant under both scalings).
WeinsteinReport maximize_weinstein(double q, const TimeWindow& window, const ComplexField& init,
                                   const SolverOptions& opts, int m = 32,
                                   RatioKind kind = RatioKind::Weinstein);

}  // namespace dmnls
