#pragma once

// Two-electrode Josephson junction on the fixed-number sector |k, N-k>.
//
//   H = H_C + (lam/2)(a_1 a_2^dagger + a_1^dagger a_2)
//
// with the charging term either
//   bose_hubbard: E_C (n_1 - nbar_1)^2
//   mean_field:   E_C (<n_1> - nbar_1)(n_1 - nbar_1), <.> on a reference state.
//
// Mode 0 of the sector is electrode "1". hbar = 1; E_C and lam share one
// energy unit and times are in its inverse.

#include <optional>

#include "bosonlab/fock_space.hpp"
#include "bosonlab/linear_operator.hpp"

namespace bosonlab {

struct JJParams {
  double e_c = 0.0;     // charging energy E_C
  double lam = 0.0;     // tunneling amplitude
  int n_total = 0;      // N Cooper pairs
  double n_bar1 = 0.0;  // background pair number of electrode 1, 0 < nbar_1 < N

  /// Throws DomainError unless n_total >= 1 and 0 < n_bar1 < n_total.
  void validate() const;

  /// nbar_1 >> 1 and nbar_1 << N, read as nbar_1 >= 10 and nbar_1 <= N/10.
  /// Outside this range the pendulum reduction is only qualitative; callers
  /// warn rather than fail.
  bool in_charge_qubit_regime() const;
};

struct DerivedConstants {
  double e_j = 0.0;    // lam * sqrt(nbar_1 (N - nbar_1))
  double omega = 0.0;  // sqrt(2 E_C E_J)
};

DerivedConstants derived_constants(const JJParams& params);

enum class ChargingModel { bose_hubbard, mean_field };

/// Tridiagonal Hamiltonian on fixed_sector(params.n_total). `reference` is
/// required for mean_field (ContractViolation otherwise) and ignored for
/// bose_hubbard.
LinearOperator build_jj_hamiltonian(const JJParams& params, const FockSpace& space, ChargingModel model,
                                    const StateVector* reference = nullptr);

/// Mean-field Hamiltonian for a given <n_1>, without needing the state.
LinearOperator mean_field_hamiltonian(const JJParams& params, const FockSpace& space, double mean_n1);

/// Coherent product state |n, phi>: amplitude on |k, N-k> is
/// sqrt(binom(N,k) p^k (1-p)^(N-k)) e^{i k phi}, p = n/N. The |0, N> amplitude
/// is real and non-negative. n must lie in [0, N]; at the endpoints the state
/// is a Fock state and phi is irrelevant.
StateVector product_state(int n_total, double n, double phi, const FockSpace& space);
StateVector product_state(int n_total, double n, double phi);

/// <n_1> on a sector state.
double mean_n1(const StateVector& state);

/// Var(n_1), two-pass.
double number_variance(const StateVector& state);

/// <a_2^dagger a_1>. Its argument is the relative phase phi of |n, phi>.
cplx coherence(const StateVector& state);

/// Best-fit product state from the leading eigenvector of Omega.
struct ProductFit {
  double n = 0.0;
  double phi = 0.0;
  double fidelity = 0.0;  // |<n, phi|psi>|^2
};
ProductFit best_product_fit(const StateVector& state);

}  // namespace bosonlab
