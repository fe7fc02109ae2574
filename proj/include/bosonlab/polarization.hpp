#pragma once

// Stokes calculus for a pair of field modes.
//
// Pauli assignment: M <-> sigma_x, C <-> sigma_y, S <-> sigma_z, so that
//
//     Omega = (I sigma_0 + M sigma_x + C sigma_y + S sigma_z) / 2.
//
// This is not the usual optics labelling (where S_1 is the H/V difference);
// here S is the difference of the two mode populations.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bosonlab/fock_space.hpp"
#include "bosonlab/linear_operator.hpp"

namespace bosonlab {

using Matrix2c = Eigen::Matrix2cd;

struct StokesVector {
  double intensity = 0.0;  // I
  double m = 0.0;          // M (sigma_x)
  double c = 0.0;          // C (sigma_y)
  double s = 0.0;          // S (sigma_z)
};

/// I >= sqrt(M^2 + C^2 + S^2) - tol.
bool satisfies_stokes_constraint(const StokesVector& v, double tol = 1e-12);

/// 2x2 correlation matrix Omega_{mu nu} = <a_nu^dagger a_mu>. Always Hermitian
/// and positive semidefinite (to 1e-12); the constructor enforces both.
class CorrelationMatrix2 {
 public:
  explicit CorrelationMatrix2(const Matrix2c& m);

  const Matrix2c& matrix() const noexcept { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }
  double trace() const { return m_.trace().real(); }
  /// Ascending eigenvalues.
  std::pair<double, double> eigenvalues() const;

 private:
  Matrix2c m_;
};

/// Smallest eigenvalue of the Hermitian part of a 2x2 matrix.
double min_eigenvalue(const Matrix2c& m);

const Matrix2c& pauli_x();
const Matrix2c& pauli_y();
const Matrix2c& pauli_z();

/// Throws DomainError naming the violated Stokes inequality.
CorrelationMatrix2 to_omega(const StokesVector& v);
StokesVector to_stokes(const CorrelationMatrix2& omega);

/// Omega over the ordered mode pair (first, second) of `state`. On a fixed
/// sector only the pair (0, 1) is meaningful; others throw UnsupportedOperator.
CorrelationMatrix2 omega_from_state(const StateVector& state, std::size_t first = 0, std::size_t second = 1);

/// Mean of K = sum_{mu nu} k_{mu nu} a_nu^dagger a_mu, i.e. sum k_{mu nu} Omega_{mu nu}.
cplx additive_expectation(const CorrelationMatrix2& omega, const Matrix2c& k);

/// The operator K itself, assembled on `space` over the mode pair.
LinearOperator additive_operator(const FockSpace& space, const Matrix2c& k, std::size_t first = 0,
                                 std::size_t second = 1);

/// Linear optical element in operator-sum form, Omega -> sum_i K_i Omega K_i^dagger.
/// Construction checks sum_i K_i^dagger K_i <= 1 (trace non-increasing).
class DeviceMap {
 public:
  explicit DeviceMap(std::vector<Matrix2c> kraus);
  static DeviceMap identity();

  const std::vector<Matrix2c>& kraus() const noexcept { return kraus_; }

 private:
  std::vector<Matrix2c> kraus_;
};

CorrelationMatrix2 apply_device_map(const CorrelationMatrix2& omega, const DeviceMap& map);

/// Real 4x4 action of `map` on (I, M, C, S) column vectors.
Eigen::Matrix4d mueller_matrix(const DeviceMap& map);

struct TomographyResult {
  StokesVector estimate;
  StokesVector standard_errors;
};

/// Simulated polarization tomography: total intensity plus the two outcome
/// intensities in each Pauli basis, each perturbed by Gaussian noise of
/// variance (true intensity)/shots_per_basis. With noise disabled the exact
/// Stokes vector comes back. Draws come from mt19937_64(mix64(seed)).
TomographyResult tomography_simulate(const CorrelationMatrix2& omega_true, std::size_t shots_per_basis,
                                     std::uint64_t seed, bool noise = true);

}  // namespace bosonlab
