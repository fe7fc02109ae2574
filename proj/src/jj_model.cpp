#include "bosonlab/jj_model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/kernels.hpp"
#include "bosonlab/polarization.hpp"

namespace bosonlab {
namespace {

void require_sector(const JJParams& params, const FockSpace& space) {
  if (!space.is_fixed_sector() || space.total_quanta() != params.n_total)
    throw ContractViolation("JJ Hamiltonians act on fixed_sector(n_total)");
}

Tridiagonal hopping_band(const JJParams& params, int n_total) {
  const Eigen::Index n = n_total + 1;
  Tridiagonal t{Amplitudes(n - 1), Amplitudes::Zero(n), Amplitudes(n - 1)};
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double amp = 0.5 * params.lam * std::sqrt(double(k + 1) * double(n_total - k));
    t.lower[k] = amp;
    t.upper[k] = amp;
  }
  return t;
}

}  // namespace

void JJParams::validate() const {
  if (n_total < 1) throw DomainError("n_total must be at least 1");
  if (!(n_bar1 > 0.0 && n_bar1 < n_total)) throw DomainError("n_bar1 must lie strictly between 0 and n_total");
  if (!std::isfinite(e_c) || !std::isfinite(lam)) throw DomainError("e_c and lam must be finite");
}

bool JJParams::in_charge_qubit_regime() const { return n_bar1 >= 10.0 && n_bar1 <= 0.1 * n_total; }

DerivedConstants derived_constants(const JJParams& params) {
  params.validate();
  const double e_j = params.lam * std::sqrt(params.n_bar1 * (params.n_total - params.n_bar1));
  return {e_j, std::sqrt(std::max(0.0, 2.0 * params.e_c * e_j))};
}

LinearOperator mean_field_hamiltonian(const JJParams& params, const FockSpace& space, double mean_n1_value) {
  require_sector(params, space);
  Tridiagonal t = hopping_band(params, params.n_total);
  const double slope = params.e_c * (mean_n1_value - params.n_bar1);
  for (Eigen::Index k = 0; k < t.diag.size(); ++k) t.diag[k] = slope * (double(k) - params.n_bar1);
  return LinearOperator::tridiagonal(space, std::move(t));
}

LinearOperator build_jj_hamiltonian(const JJParams& params, const FockSpace& space, ChargingModel model,
                                    const StateVector* reference) {
  require_sector(params, space);
  if (model == ChargingModel::mean_field) {
    if (reference == nullptr) throw ContractViolation("mean-field Hamiltonian needs a reference state");
    if (!(reference->space() == space)) throw ContractViolation("reference state lives on a different space");
    return mean_field_hamiltonian(params, space, mean_n1(*reference));
  }
  Tridiagonal t = hopping_band(params, params.n_total);
  for (Eigen::Index k = 0; k < t.diag.size(); ++k) {
    const double d = double(k) - params.n_bar1;
    t.diag[k] = params.e_c * d * d;
  }
  return LinearOperator::tridiagonal(space, std::move(t));
}

StateVector product_state(int n_total, double n, double phi, const FockSpace& space) {
  if (!space.is_fixed_sector() || space.total_quanta() != n_total)
    throw ContractViolation("product_state lives on fixed_sector(n_total)");
  if (!(n >= 0.0 && n <= n_total)) throw DomainError("product_state needs 0 <= n <= N");
  const Eigen::Index dim = n_total + 1;
  Amplitudes amps = Amplitudes::Zero(dim);
  if (n == 0.0) {
    amps[0] = 1.0;
    return StateVector::normalized(space, std::move(amps));
  }
  if (n == double(n_total)) {
    amps[n_total] = 1.0;
    return StateVector::normalized(space, std::move(amps));
  }
  // Binomial weights in extended precision; lgamma(N+1) is large for big N
  // and its rounding would otherwise show up in the variance.
  using ld = long double;
  const ld big_n = n_total;
  const ld p = static_cast<ld>(n) / big_n;
  const ld log_p = std::log(p);
  const ld log_q = std::log1p(-p);
  const ld log_nf = std::lgamma(big_n + 1);
  std::vector<ld> log_w(static_cast<std::size_t>(dim));
  ld peak = -INFINITY;
  for (int k = 0; k <= n_total; ++k) {
    const ld kk = k;
    log_w[k] = log_nf - std::lgamma(kk + 1) - std::lgamma(big_n - kk + 1) + kk * log_p + (big_n - kk) * log_q;
    peak = std::max(peak, log_w[k]);
  }
  std::vector<ld> w(static_cast<std::size_t>(dim));
  ld total = 0;
  for (int k = 0; k <= n_total; ++k) {
    w[k] = std::exp(log_w[k] - peak);
    total += w[k];
  }
  const ld two_pi = 2 * std::numbers::pi_v<ld>;
  for (int k = 0; k <= n_total; ++k) {
    const ld mag = std::sqrt(w[k] / total);
    const ld angle = std::fmod(static_cast<ld>(k) * static_cast<ld>(phi), two_pi);
    amps[k] = cplx(static_cast<double>(mag * std::cos(angle)), static_cast<double>(mag * std::sin(angle)));
  }
  return StateVector::normalized(space, std::move(amps));
}

StateVector product_state(int n_total, double n, double phi) {
  return product_state(n_total, n, phi, FockSpace::fixed_sector(n_total));
}

double mean_n1(const StateVector& state) {
  const FockSpace& space = state.space();
  if (!space.is_fixed_sector()) throw ContractViolation("mean_n1 needs a fixed-sector state");
  const auto& a = state.amplitudes();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) acc += double(k) * std::norm(a[k]);
  return acc;
}

double number_variance(const StateVector& state) {
  const double mean = mean_n1(state);
  const auto& a = state.amplitudes();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double d = double(k) - mean;
    acc += d * d * std::norm(a[k]);
  }
  return acc;
}

cplx coherence(const StateVector& state) {
  const FockSpace& space = state.space();
  if (!space.is_fixed_sector()) throw ContractViolation("coherence needs a fixed-sector state");
  const int n_total = space.total_quanta();
  const auto& a = state.amplitudes();
  // a_2^dagger a_1 |k> = sqrt(k (N - k + 1)) |k - 1>
  cplx acc = 0.0;
  for (int k = 1; k <= n_total; ++k) acc += std::conj(a[k - 1]) * std::sqrt(double(k) * double(n_total - k + 1)) * a[k];
  return acc;
}

ProductFit best_product_fit(const StateVector& state) {
  const FockSpace& space = state.space();
  if (!space.is_fixed_sector()) throw ContractViolation("best_product_fit needs a fixed-sector state");
  const int n_total = space.total_quanta();
  const double n1 = mean_n1(state);
  const cplx off = coherence(state);  // Omega_{01}
  // Leading eigenvector of [[n1, off], [conj(off), N - n1]].
  const double half_gap = 0.5 * (2.0 * n1 - n_total);
  const double rad = std::hypot(half_gap, std::abs(off));
  ProductFit fit;
  if (rad == 0.0) {
    fit.n = 0.5 * n_total;
    fit.phi = 0.0;
  } else {
    // |v_0|^2 = (1 + half_gap / rad) / 2, arg v_0 - arg v_1 = arg(off).
    fit.n = std::clamp(0.5 * n_total * (1.0 + half_gap / rad), 0.0, double(n_total));
    fit.phi = std::arg(off);
  }
  const StateVector ref = product_state(n_total, fit.n, fit.phi, space);
  fit.fidelity = std::norm(ref.overlap(state));
  return fit;
}

}  // namespace bosonlab
