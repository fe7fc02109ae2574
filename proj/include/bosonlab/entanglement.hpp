#pragma once

// Two-beam polarization correlations and the negativity bound.
//
// Beam a owns polarization modes (a_0, a_1), beam b owns (b_0, b_1). The 4x4
// correlation matrix
//
//     Gamma_{(mu mu'),(nu nu')} = < a_nu^dagger a_mu b_nu'^dagger b_mu' >
//
// is stored with row index 2*mu + mu' and column index 2*nu + nu', so mu is
// the beam-a polarization and the beam-b index varies fastest. Dividing by
// <n_a n_b> gives a unit-trace "two-qubit" matrix Gamma~. Its partial
// transpose over beam b has trace norm at most 1 + 4 n_a / <n_a n_b>, hence
// negativity(Gamma~) <= 2 min(n_a, n_b) / <n_a n_b>.

#include <array>
#include <cstddef>

#include <Eigen/Core>

#include "bosonlab/fock_space.hpp"
#include "bosonlab/random.hpp"

namespace bosonlab {

using Matrix4c = Eigen::Matrix4cd;

struct BeamModes {
  std::size_t first = 0;
  std::size_t second = 1;
};

struct BeamAssignment {
  BeamModes a{0, 1};
  BeamModes b{2, 3};
};

struct PhotonMoments {
  double n_a = 0.0;
  double n_b = 0.0;
  double n_a_n_b = 0.0;  // <n_a n_b>
};

struct TwoBeamCorrelation {
  Matrix4c gamma;
  PhotonMoments moments;
  Matrix4c gamma_tilde;
};

/// Builds Gamma from a pure state. Throws NormalizationUndefined when
/// <n_a n_b> vanishes and ContractViolation for repeated or missing modes.
TwoBeamCorrelation gamma_from_state(const StateVector& state, const BeamAssignment& beams = {});

/// Wraps an externally assembled Gamma (e.g. a mixture). Checks Hermiticity,
/// positivity and trace(Gamma) = <n_a n_b> to 1e-10 relative.
TwoBeamCorrelation make_two_beam_correlation(const Matrix4c& gamma, const PhotonMoments& moments);

/// Gamma of the mixture w*rho_x + (1-w)*rho_y. Gamma and all moments are
/// linear in rho, so the mixture is the weighted sum of both.
TwoBeamCorrelation mix(const TwoBeamCorrelation& x, const TwoBeamCorrelation& y, double weight_x);

/// Swaps the beam-b indices: out_{(mu mu'),(nu nu')} = in_{(mu nu'),(nu mu')}.
Matrix4c partial_transpose(const Matrix4c& m);

/// Ascending eigenvalues of partial_transpose(sigma) for Hermitian sigma.
std::array<double, 4> partial_transpose_eigenvalues(const Matrix4c& sigma);

/// (Tr|sigma^PT| - 1) / 2, clamped at zero. sigma must be Hermitian with
/// unit trace (1e-10); otherwise ContractViolation.
double negativity(const Matrix4c& sigma);

struct BoundReport {
  PhotonMoments moments;
  double negativity = 0.0;
  double bound_exact = 0.0;   // 2 min(n_a, n_b) / <n_a n_b>
  double bound_approx = 0.0;  // 2 / max(n_a, n_b); display only
  bool satisfied = false;     // negativity <= bound_exact + 1e-9
  std::array<double, 4> pt_eigenvalues{};
  double pt_trace_norm = 0.0;        // Tr|Gamma~^PT|
  double intermediate_bound = 0.0;   // 1 + 4 min(n_a, n_b) / <n_a n_b>
  bool intermediate_satisfied = false;
};

BoundReport check_bound(const TwoBeamCorrelation& corr);
BoundReport check_bound(const StateVector& state, const BeamAssignment& beams = {});

// State families used by the experiments ----------------------------------

/// Four-mode truncated space (a_0, a_1, b_0, b_1), every cutoff equal.
FockSpace two_beam_space(int cutoff);

/// (|x>_a |y>_b - |y>_a |x>_b) / sqrt(2), one photon per beam, cutoff 1.
StateVector two_beam_singlet();

/// sum_{j,l} coeffs(j, l) |j, ka - j>_a |l, kb - l>_b: exactly ka photons in
/// beam a and kb in beam b, on two_beam_space(max(ka, kb)). coeffs is
/// (ka+1) x (kb+1) and is normalized here.
StateVector beam_number_state(int photons_a, int photons_b, const Eigen::MatrixXcd& coeffs);

/// Gaussian-random coefficients for beam_number_state(k, k, .).
StateVector random_beam_number_state(int photons_per_beam, Rng& rng);

/// |psi_a> (x) |psi_b> for two-mode beam states.
StateVector product_beam_state(const StateVector& beam_a, const StateVector& beam_b);

}  // namespace bosonlab
