#pragma once

// Time evolution of the junction under three models: exact Bose-Hubbard,
// self-consistent mean field, and the pendulum reduction of the mean field.
//
// Phase convention: phi = arg <a_2^dagger a_1>, which reproduces the phi of
// the product state |n, phi>. For product states the mean-field dynamics is
// the canonical system
//
//     E(n, phi) = (E_C / 2)(n - nbar_1)^2 + lam sqrt(n (N - n)) cos(phi)
//     dn/dt = dE/dphi,   dphi/dt = -dE/dn,
//
// whose stable point sits at phi* = pi for lam > 0 (0 for lam < 0). Small
// oscillations around it obey theta'' = -omega^2 sin(theta), theta = phi - phi*,
// with omega^2 = E_phiphi * E_nn taken from the curvature at the stable point.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bosonlab/fock_space.hpp"
#include "bosonlab/jj_model.hpp"

namespace bosonlab {

struct Trajectory {
  std::vector<double> times;
  std::vector<double> n1;
  std::vector<double> phi;  // unwrapped; NaN where <a_2^dagger a_1> vanishes
  std::vector<double> norm_drift;
  std::vector<double> energy_like;
  std::vector<double> product_fidelity;  // NaN when not tracked
  std::vector<double> phi_rate;          // pendulum runs only

  std::size_t size() const noexcept { return times.size(); }
};

/// Linearization of the mean-field energy around its stable point.
struct MeanFieldReduction {
  double phi_star = 0.0;
  double n_eq = 0.0;
  double phase_stiffness = 0.0;   // d^2E/dphi^2
  double number_stiffness = 0.0;  // d^2E/dn^2
  double omega = 0.0;
};

MeanFieldReduction mean_field_reduction(const JJParams& params);

/// Energy of |n, phi> under the mean-field functional; conserved by evolve_meanfield.
double mean_field_energy(const JJParams& params, double n, double phi);

struct ReducedRates {
  double n_dot = 0.0;
  double phi_dot = 0.0;
};

/// Exact (n, phi) velocities of a product state under the mean-field dynamics.
ReducedRates reduced_rates(const JJParams& params, double n, double phi);

struct MeanFieldOptions {
  std::size_t output_every = 1;
  double krylov_tol = 1e-13;
  /// Each output step is split into midpoint sub-steps; the split doubles
  /// until halving the sub-step changes the state by at most this much; the
  /// accepted state is the Richardson extrapolation of the two, renormalized.
  double step_tol = 1e-6;
  bool track_fidelity = true;
};

/// Integrates i d|psi>/dt = H[psi]|psi> with a midpoint predictor-corrector:
/// H is built from psi_n, a half step gives the midpoint state, H is rebuilt
/// there and used for the full step. Each sub-propagation is a Krylov
/// exponential of the tridiagonal generator, so every sub-step is unitary.
/// Throws IntegrationFailure when the product fidelity drops below 1 - 1e-3.
Trajectory evolve_meanfield(const StateVector& initial, const JJParams& params, double horizon, double dt,
                            const MeanFieldOptions& options = {});

/// Exact Bose-Hubbard evolution sampled every dt. energy_like is <H>.
Trajectory evolve_exact(const StateVector& initial, const JJParams& params, double horizon, double dt,
                        bool track_fidelity = true);

struct PendulumOptions {
  /// Error-controlled Runge-Kutta-Fehlberg 7(8) between output times; when
  /// false, one fixed 8th-order step per dt.
  bool adaptive = true;
  double tolerance = 1e-14;
  /// Reported phi = phase_offset + theta.
  double phase_offset = 0.0;
  /// When set, n1 = n_eq - theta' / number_stiffness; otherwise NaN.
  std::optional<MeanFieldReduction> charge;
};

/// theta'' = -omega^2 sin(theta). energy_like = theta'^2 / 2 + omega^2 (1 - cos(theta)), zero at rest.
Trajectory pendulum_trajectory(double phi0, double phidot0, double omega, double horizon, double dt,
                               const PendulumOptions& options = {});

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

/// Least-squares line through (log x, log y). Throws FitError for fewer than
/// three points or non-positive data.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Smallest delta > 0 with |<n, phi|n, phi + delta>| = 1/2, computed from the
/// amplitudes of `state` (a fixed-sector state).
double phase_half_width(const StateVector& state);

struct FluctuationReport {
  std::vector<double> n_bar1_values;
  std::vector<int> n_total_values;
  std::vector<double> number_variance;
  std::vector<double> phase_width;
  PowerLawFit number_fit;
  PowerLawFit phase_fit;
};

/// For each parameter set builds |nbar_1, phi> and records Var(n_1) and the
/// phase half-width, then fits both against nbar_1.
FluctuationReport fluctuation_scan(std::span<const JJParams> params_list, double phi, unsigned threads = 1);

struct ModelComparison {
  MeanFieldReduction reduction;
  Trajectory exact;
  Trajectory mean_field;
  Trajectory pendulum;
  std::vector<double> n1_divergence;   // |n1_exact - n1_mf|
  std::vector<double> phi_divergence;  // |phi_exact - phi_mf|
  double max_n1_divergence = 0.0;
  double max_phi_divergence = 0.0;
};

/// Runs all three models from |n0, phi0> (the pendulum from the matching
/// (theta, theta')) and reports per-time divergences. Requires N <= 2000.
ModelComparison model_compare(const JJParams& params, double n0, double phi0, double horizon, double dt);

/// Continuous phase from wrapped samples; NaNs are skipped and kept.
std::vector<double> unwrap_phase(std::span<const double> wrapped);

}  // namespace bosonlab
