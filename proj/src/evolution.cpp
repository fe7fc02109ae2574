#include "bosonlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bosonlab/errors.hpp"
#include "bosonlab/kernels.hpp"

namespace bosonlab {
namespace {

void require_hermitian(const LinearOperator& h) {
  if (!h.is_hermitian()) throw ContractViolation("generator of unitary evolution is not Hermitian");
}

}  // namespace

SpectralPropagator::SpectralPropagator(const LinearOperator& hamiltonian) {
  require_hermitian(hamiltonian);
  const auto n = static_cast<Eigen::Index>(hamiltonian.dimension());
  if (const Tridiagonal* t = hamiltonian.tridiagonal_form()) {
    // D^dagger T D is real symmetric for d_{k+1} = d_k * exp(-i arg upper_k).
    Eigen::VectorXcd gauge(n);
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
    if (n > 0) gauge[0] = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) diag[k] = t->diag[k].real();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const double mag = std::abs(t->upper[k]);
      sub[k] = mag;
      gauge[k + 1] = mag > 0.0 ? gauge[k] * std::conj(t->upper[k]) / mag : gauge[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw IntegrationFailure("tridiagonal eigensolver did not converge");
    values_ = solver.eigenvalues();
    vectors_ = gauge.asDiagonal() * solver.eigenvectors().cast<cplx>();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.to_dense());
  if (solver.info() != Eigen::Success) throw IntegrationFailure("Hermitian eigensolver did not converge");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Amplitudes SpectralPropagator::propagate(const Amplitudes& psi0, double t) const {
  Amplitudes coeffs = vectors_.adjoint() * psi0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::polar(1.0, -values_[k] * t);
  return vectors_ * coeffs;
}

KrylovPropagator::KrylovPropagator(std::size_t max_subspace) : max_subspace_(std::max<std::size_t>(max_subspace, 2)) {}

std::size_t KrylovPropagator::advance(const LinearOperator& hamiltonian, Amplitudes& psi, double t, double tol) {
  require_hermitian(hamiltonian);
  if (!(tol > 0.0)) throw DomainError("Krylov tolerance must be positive");
  const std::size_t n = hamiltonian.dimension();
  if (static_cast<std::size_t>(psi.size()) != n) throw ContractViolation("state length does not match the operator");
  if (t == 0.0 || n == 0) return 0;

  const std::size_t m_cap = std::min(max_subspace_, n);
  if (basis_.size() < m_cap + 1) basis_.resize(m_cap + 1);
  for (auto& v : basis_)
    if (static_cast<std::size_t>(v.size()) != n) v.resize(static_cast<Eigen::Index>(n));
  work_.resize(static_cast<Eigen::Index>(n));

  const double direction = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double tau = remaining;
  std::size_t substeps = 0;
  const double span_total = remaining;

  while (remaining > 0.0) {
    const double beta0 = std::sqrt(kernels::norm_sq(as_span(psi)));
    if (beta0 == 0.0) return substeps;
    basis_[0] = psi / beta0;

    // Lanczos with full reorthogonalization.
    std::vector<double> alpha;
    std::vector<double> beta;
    std::size_t m = 0;
    double beta_last = 0.0;
    for (std::size_t j = 0; j < m_cap; ++j) {
      hamiltonian.apply(as_span(basis_[j]), as_span(work_));
      const double a = kernels::dot(as_span(basis_[j]), as_span(work_)).real();
      alpha.push_back(a);
      // Three-term recurrence, then full Gram-Schmidt against the basis,
      // repeated once when a pass cancels most of the vector
      // (Daniel-Gragg-Kaufman-Stewart criterion).
      kernels::axpy(-a, as_span(basis_[j]), as_span(work_));
      if (j > 0) kernels::axpy(-beta.back(), as_span(basis_[j - 1]), as_span(work_));
      for (int pass = 0; pass < 2; ++pass) {
        const double before = std::sqrt(kernels::norm_sq(as_span(work_)));
        for (std::size_t i = 0; i <= j; ++i) {
          const cplx c = kernels::dot(as_span(basis_[i]), as_span(work_));
          kernels::axpy(-c, as_span(basis_[i]), as_span(work_));
        }
        beta_last = std::sqrt(kernels::norm_sq(as_span(work_)));
        if (beta_last > std::sqrt(0.5) * before) break;
      }
      m = j + 1;
      const double scale = std::max(std::abs(a), 1.0);
      if (beta_last <= 1e-14 * scale || m == m_cap) break;
      beta.push_back(beta_last);
      basis_[j + 1] = work_ / beta_last;
    }
    const bool invariant_subspace = beta_last <= 1e-14 * std::max(std::abs(alpha.back()), 1.0);

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(m - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
    small.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = small.eigenvectors();
    const Eigen::VectorXd& lam = small.eigenvalues();

    auto small_propagate = [&](double dt) {
      Eigen::VectorXcd c(static_cast<Eigen::Index>(m));
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = q(0, k) * std::polar(1.0, -lam[k] * dt * direction);
      return Eigen::VectorXcd(q.cast<cplx>() * c);
    };

    tau = std::min(tau, remaining);
    Eigen::VectorXcd y;
    for (;;) {
      y = small_propagate(tau);
      if (invariant_subspace) break;
      const double err = beta_last * std::abs(y[static_cast<Eigen::Index>(m - 1)]);
      // y is only known to about eps * beta_last; below that the estimate is noise.
      const double floor = 8.0 * std::numeric_limits<double>::epsilon() * beta_last;
      if (err <= std::max(tol * tau / span_total, floor)) break;
      tau *= 0.5;
      if (tau < 1e-14 * span_total)
        throw IntegrationFailure("Krylov step collapsed below 1e-14 of the interval; tolerance unreachable");
    }

    psi.setZero();
    for (std::size_t j = 0; j < m; ++j)
      kernels::axpy(beta0 * y[static_cast<Eigen::Index>(j)], as_span(basis_[j]), as_span(psi));
    remaining -= tau;
    if (remaining < 1e-15 * span_total) remaining = 0.0;
    ++substeps;
    tau *= 2.0;
  }
  return substeps;
}

StateVector evolve_unitary(const StateVector& state, const LinearOperator& hamiltonian, double t, double tol,
                           EvolutionMethod method) {
  if (!(state.space() == hamiltonian.space())) throw ContractViolation("state and Hamiltonian live on different spaces");
  require_hermitian(hamiltonian);
  if (!(tol > 0.0)) throw DomainError("evolution tolerance must be positive");
  if (method == EvolutionMethod::automatic)
    method = state.dimension() <= kDenseEvolutionLimit ? EvolutionMethod::eigendecomposition : EvolutionMethod::krylov;
  if (method == EvolutionMethod::eigendecomposition) {
    SpectralPropagator prop(hamiltonian);
    return StateVector::unchecked(state.space(), prop.propagate(state.amplitudes(), t));
  }
  Amplitudes psi = state.amplitudes();
  KrylovPropagator krylov;
  krylov.advance(hamiltonian, psi, t, tol);
  return StateVector::unchecked(state.space(), std::move(psi));
}

}  // namespace bosonlab
