#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "bosonlab/fock_space.hpp"

namespace bosonlab {

/// Tridiagonal matrix: y_i = lower_{i-1} x_{i-1} + diag_i x_i + upper_i x_{i+1}.
struct Tridiagonal {
  Amplitudes lower;
  Amplitudes diag;
  Amplitudes upper;
};

/// Operator on a FockSpace, stored densely, as CSR, or as a tridiagonal band.
/// Immutable; Hermiticity is measured once at construction.
class LinearOperator {
 public:
  using Dense = Eigen::MatrixXcd;
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  static LinearOperator dense(FockSpace space, Dense m);
  static LinearOperator sparse(FockSpace space, Sparse m);
  static LinearOperator tridiagonal(FockSpace space, Tridiagonal t);
  static LinearOperator zero(const FockSpace& space);
  static LinearOperator identity(const FockSpace& space);

  const FockSpace& space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return space_.dimension(); }

  /// max |M - M^dagger| <= 1e-12.
  bool is_hermitian() const noexcept { return hermiticity_defect_ <= 1e-12; }
  double hermiticity_defect() const noexcept { return hermiticity_defect_; }

  bool is_dense() const noexcept { return std::holds_alternative<Dense>(rep_); }
  bool is_tridiagonal() const noexcept { return std::holds_alternative<Tridiagonal>(rep_); }
  const Tridiagonal* tridiagonal_form() const noexcept { return std::get_if<Tridiagonal>(&rep_); }

  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Amplitudes apply(const Amplitudes& x) const;

  Dense to_dense() const;
  Sparse to_sparse() const;
  cplx element(std::size_t row, std::size_t col) const;

  LinearOperator adjoint() const;

  /// Composition (a * b)|psi> = a(b|psi>).
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(cplx s, const LinearOperator& a);

 private:
  using Rep = std::variant<Dense, Sparse, Tridiagonal>;
  LinearOperator(FockSpace space, Rep rep);

  FockSpace space_;
  Rep rep_;
  double hermiticity_defect_ = 0.0;
};

enum class Ladder { annihilate, create, number };

/// a_m, a_m^dagger or n_m. Creation drops amplitude that would exceed the
/// cutoff. Single ladder operators on a fixed sector throw UnsupportedOperator.
LinearOperator ladder_operator(const FockSpace& space, std::size_t mode, Ladder kind);

/// a_to^dagger a_from; number-conserving, so available in both kinds of space.
LinearOperator transfer_operator(const FockSpace& space, std::size_t to, std::size_t from);

/// Total quanta sum_m n_m.
LinearOperator total_number_operator(const FockSpace& space);

/// <psi|O|psi>. Throws ContractViolation if the spaces differ.
cplx expectation(const StateVector& state, const LinearOperator& op);

/// Probability that `mode` sits at its cutoff, i.e. the population a creation
/// operator on that mode would discard.
double cutoff_population(const StateVector& state, std::size_t mode);

/// Squared norm discarded by applying a_to^dagger a_from to `state` because
/// the target occupation would pass the cutoff.
double transfer_leakage(const StateVector& state, std::size_t to, std::size_t from);

}  // namespace bosonlab
