#pragma once

// Unitary propagation exp(-i H t)|psi> with hbar = 1.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "bosonlab/fock_space.hpp"
#include "bosonlab/linear_operator.hpp"

namespace bosonlab {

enum class EvolutionMethod { automatic, eigendecomposition, krylov };

/// Largest dimension for which `automatic` diagonalizes H.
inline constexpr std::size_t kDenseEvolutionLimit = 2000;

/// Returns exp(-i H t)|state>. H must be Hermitian (ContractViolation
/// otherwise) and tol > 0. `automatic` diagonalizes for dimension <= 2000 and
/// runs restarted Lanczos above that.
StateVector evolve_unitary(const StateVector& state, const LinearOperator& hamiltonian, double t,
                           double tol = 1e-12, EvolutionMethod method = EvolutionMethod::automatic);

/// Eigendecomposition of a Hermitian operator, reusable for many times.
/// Tridiagonal operators are gauged to a real symmetric band first.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const LinearOperator& hamiltonian);

  Amplitudes propagate(const Amplitudes& psi0, double t) const;
  const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

/// Short-iterate Lanczos propagator. Holds scratch space only, so one
/// instance per thread.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(std::size_t max_subspace = 30);

  /// psi <- exp(-i H t) psi. The estimated error is kept below
  /// tol * ||psi|| over the whole interval. Returns the number of substeps.
  std::size_t advance(const LinearOperator& hamiltonian, Amplitudes& psi, double t, double tol);

 private:
  std::size_t max_subspace_;
  std::vector<Amplitudes> basis_;
  Amplitudes work_;
};

}  // namespace bosonlab
