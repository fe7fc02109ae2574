#include "bosonlab/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bosonlab/errors.hpp"
#include "bosonlab/kernels.hpp"
#include "bosonlab/linear_operator.hpp"

namespace bosonlab {
namespace {

double hermiticity_defect(const Matrix4c& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

void check_modes(const FockSpace& space, const BeamAssignment& beams) {
  const std::size_t modes[4] = {beams.a.first, beams.a.second, beams.b.first, beams.b.second};
  for (int i = 0; i < 4; ++i) {
    if (modes[i] >= space.mode_count()) throw ContractViolation("beam mode index out of range");
    for (int j = 0; j < i; ++j)
      if (modes[i] == modes[j]) throw ContractViolation("beam modes must be four distinct modes");
  }
  if (space.is_fixed_sector()) throw UnsupportedOperator("two-beam correlations need a truncated four-mode space");
}

}  // namespace

TwoBeamCorrelation gamma_from_state(const StateVector& state, const BeamAssignment& beams) {
  const FockSpace& space = state.space();
  check_modes(space, beams);
  const std::size_t a_modes[2] = {beams.a.first, beams.a.second};
  const std::size_t b_modes[2] = {beams.b.first, beams.b.second};

  // phi_{mu mu'} = a_mu b_mu' |psi>; Gamma is their Gram matrix.
  std::array<Amplitudes, 4> phi;
  for (int mu = 0; mu < 2; ++mu) {
    const Amplitudes a_psi = ladder_operator(space, a_modes[mu], Ladder::annihilate).apply(state.amplitudes());
    for (int mup = 0; mup < 2; ++mup)
      phi[2 * mu + mup] = ladder_operator(space, b_modes[mup], Ladder::annihilate).apply(a_psi);
  }
  Matrix4c gamma;
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) {
      const cplx v = kernels::dot(as_span(phi[c]), as_span(phi[r]));
      gamma(r, c) = v;
      gamma(c, r) = std::conj(v);
    }
  for (int r = 0; r < 4; ++r) gamma(r, r) = gamma(r, r).real();

  PhotonMoments mom;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const double p = std::norm(state[i]);
    if (p == 0.0) continue;
    const double na = space.occupation(i, a_modes[0]) + space.occupation(i, a_modes[1]);
    const double nb = space.occupation(i, b_modes[0]) + space.occupation(i, b_modes[1]);
    mom.n_a += p * na;
    mom.n_b += p * nb;
    mom.n_a_n_b += p * na * nb;
  }
  return make_two_beam_correlation(gamma, mom);
}

TwoBeamCorrelation make_two_beam_correlation(const Matrix4c& gamma, const PhotonMoments& moments) {
  if (!(moments.n_a_n_b > 1e-300))
    throw NormalizationUndefined("<n_a n_b> = 0: the two-beam correlation cannot be normalized");
  const double scale = std::max(1.0, moments.n_a_n_b);
  if (hermiticity_defect(gamma) > 1e-10 * scale) throw ContractViolation("Gamma is not Hermitian");
  const double tr = gamma.trace().real();
  if (std::abs(tr - moments.n_a_n_b) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "trace(Gamma) = " << tr << " differs from <n_a n_b> = " << moments.n_a_n_b;
    throw ContractViolation(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(gamma, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()[0] < -1e-10 * scale) throw ContractViolation("Gamma is not positive semidefinite");
  return TwoBeamCorrelation{gamma, moments, gamma / moments.n_a_n_b};
}

TwoBeamCorrelation mix(const TwoBeamCorrelation& x, const TwoBeamCorrelation& y, double weight_x) {
  if (!(weight_x >= 0.0 && weight_x <= 1.0)) throw DomainError("mixture weight must lie in [0, 1]");
  const double wy = 1.0 - weight_x;
  const PhotonMoments m{weight_x * x.moments.n_a + wy * y.moments.n_a, weight_x * x.moments.n_b + wy * y.moments.n_b,
                        weight_x * x.moments.n_a_n_b + wy * y.moments.n_a_n_b};
  return make_two_beam_correlation(weight_x * x.gamma + wy * y.gamma, m);
}

Matrix4c partial_transpose(const Matrix4c& m) {
  Matrix4c out;
  for (int mu = 0; mu < 2; ++mu)
    for (int mup = 0; mup < 2; ++mup)
      for (int nu = 0; nu < 2; ++nu)
        for (int nup = 0; nup < 2; ++nup) out(2 * mu + mup, 2 * nu + nup) = m(2 * mu + nup, 2 * nu + mup);
  return out;
}

std::array<double, 4> partial_transpose_eigenvalues(const Matrix4c& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(partial_transpose(sigma), Eigen::EigenvaluesOnly);
  const Eigen::Vector4d& v = eig.eigenvalues();
  return {v[0], v[1], v[2], v[3]};
}

double negativity(const Matrix4c& sigma) {
  if (hermiticity_defect(sigma) > 1e-10) throw ContractViolation("negativity needs a Hermitian matrix");
  if (std::abs(sigma.trace() - cplx(1.0)) > 1e-10) throw ContractViolation("negativity needs a unit-trace matrix");
  double trace_norm = 0.0;
  for (double l : partial_transpose_eigenvalues(sigma)) trace_norm += std::abs(l);
  return std::max(0.0, 0.5 * (trace_norm - 1.0));
}

BoundReport check_bound(const TwoBeamCorrelation& corr) {
  BoundReport r;
  r.moments = corr.moments;
  const auto& m = corr.moments;
  r.pt_eigenvalues = partial_transpose_eigenvalues(corr.gamma_tilde);
  for (double l : r.pt_eigenvalues) r.pt_trace_norm += std::abs(l);
  r.negativity = negativity(corr.gamma_tilde);
  r.bound_exact = 2.0 * std::min(m.n_a, m.n_b) / m.n_a_n_b;
  r.bound_approx = 2.0 / std::max(m.n_a, m.n_b);
  r.satisfied = r.negativity <= r.bound_exact + 1e-9;
  r.intermediate_bound = 1.0 + 4.0 * std::min(m.n_a, m.n_b) / m.n_a_n_b;
  r.intermediate_satisfied = r.pt_trace_norm <= r.intermediate_bound + 1e-9;
  return r;
}

BoundReport check_bound(const StateVector& state, const BeamAssignment& beams) {
  return check_bound(gamma_from_state(state, beams));
}

FockSpace two_beam_space(int cutoff) { return FockSpace::truncated({cutoff, cutoff, cutoff, cutoff}); }

StateVector two_beam_singlet() {
  const FockSpace space = two_beam_space(1);
  Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(space.dimension()));
  const int xy[4] = {1, 0, 0, 1};
  const int yx[4] = {0, 1, 1, 0};
  amps[static_cast<Eigen::Index>(space.index_of(xy))] = 1.0 / std::sqrt(2.0);
  amps[static_cast<Eigen::Index>(space.index_of(yx))] = -1.0 / std::sqrt(2.0);
  return StateVector::normalized(space, std::move(amps));
}

StateVector beam_number_state(int photons_a, int photons_b, const Eigen::MatrixXcd& coeffs) {
  if (photons_a < 0 || photons_b < 0) throw DomainError("photon numbers must be non-negative");
  if (coeffs.rows() != photons_a + 1 || coeffs.cols() != photons_b + 1)
    throw ContractViolation("coefficient matrix must be (photons_a + 1) x (photons_b + 1)");
  const FockSpace space = two_beam_space(std::max(photons_a, photons_b));
  Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(space.dimension()));
  for (int j = 0; j <= photons_a; ++j)
    for (int l = 0; l <= photons_b; ++l) {
      const int occ[4] = {j, photons_a - j, l, photons_b - l};
      amps[static_cast<Eigen::Index>(space.index_of(occ))] = coeffs(j, l);
    }
  return StateVector::normalized(space, std::move(amps));
}

StateVector random_beam_number_state(int photons_per_beam, Rng& rng) {
  const auto n = static_cast<std::size_t>(photons_per_beam + 1);
  const Amplitudes g = gaussian_amplitudes(n * n, rng);
  const Eigen::MatrixXcd coeffs = Eigen::Map<const Eigen::MatrixXcd>(g.data(), photons_per_beam + 1, photons_per_beam + 1);
  return beam_number_state(photons_per_beam, photons_per_beam, coeffs);
}

StateVector product_beam_state(const StateVector& beam_a, const StateVector& beam_b) {
  const FockSpace& sa = beam_a.space();
  const FockSpace& sb = beam_b.space();
  if (sa.is_fixed_sector() || sb.is_fixed_sector() || sa.mode_count() != 2 || sb.mode_count() != 2)
    throw ContractViolation("product_beam_state needs two-mode truncated beam states");
  const FockSpace space = FockSpace::truncated({sa.cutoff(0), sa.cutoff(1), sb.cutoff(0), sb.cutoff(1)});
  Amplitudes amps(static_cast<Eigen::Index>(space.dimension()));
  const auto db = static_cast<Eigen::Index>(sb.dimension());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(sa.dimension()); ++i)
    amps.segment(i * db, db) = beam_a.amplitudes()[i] * beam_b.amplitudes();
  return StateVector::normalized(space, std::move(amps));
}

}  // namespace bosonlab
