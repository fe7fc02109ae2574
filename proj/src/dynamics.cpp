#include "bosonlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bosonlab/errors.hpp"
#include "bosonlab/evolution.hpp"
#include "bosonlab/kernels.hpp"
#include "bosonlab/parallel.hpp"

namespace bosonlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be non-negative");
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

double wrapped_phase(cplx coh) { return std::abs(coh) < 1e-12 ? kNaN : std::arg(coh); }

}  // namespace

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double prev_raw = kNaN;
  double prev_out = kNaN;
  for (double& v : out) {
    if (std::isnan(v)) continue;
    if (!std::isnan(prev_raw)) {
      const double step = std::remainder(v - prev_raw, 2.0 * std::numbers::pi);
      prev_raw = v;
      v = prev_out + step;
    } else {
      prev_raw = v;
    }
    prev_out = v;
  }
  return out;
}

MeanFieldReduction mean_field_reduction(const JJParams& params) {
  params.validate();
  const double big_n = params.n_total;
  const double abs_lam = std::abs(params.lam);
  MeanFieldReduction r;
  r.phi_star = params.lam > 0.0 ? std::numbers::pi : 0.0;

  // dE/dn at phi* is increasing in n; bisect for its root.
  auto slope = [&](double n) {
    return params.e_c * (n - params.n_bar1) - abs_lam * (big_n - 2.0 * n) / (2.0 * std::sqrt(n * (big_n - n)));
  };
  if (abs_lam == 0.0) {
    r.n_eq = params.n_bar1;
  } else {
    double lo = 0.0;
    double hi = big_n;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    r.n_eq = 0.5 * (lo + hi);
  }
  const double prod = r.n_eq * (big_n - r.n_eq);
  r.phase_stiffness = abs_lam * std::sqrt(prod);
  r.number_stiffness = params.e_c + abs_lam * big_n * big_n / (4.0 * prod * std::sqrt(prod));
  r.omega = std::sqrt(std::max(0.0, r.phase_stiffness * r.number_stiffness));
  return r;
}

double mean_field_energy(const JJParams& params, double n, double phi) {
  const double d = n - params.n_bar1;
  return 0.5 * params.e_c * d * d + params.lam * std::sqrt(n * (params.n_total - n)) * std::cos(phi);
}

ReducedRates reduced_rates(const JJParams& params, double n, double phi) {
  const double big_n = params.n_total;
  const double root = std::sqrt(n * (big_n - n));
  ReducedRates r;
  r.n_dot = -params.lam * root * std::sin(phi);
  r.phi_dot = -params.e_c * (n - params.n_bar1) - params.lam * std::cos(phi) * (big_n - 2.0 * n) / (2.0 * root);
  return r;
}

Trajectory evolve_meanfield(const StateVector& initial, const JJParams& params, double horizon, double dt,
                            const MeanFieldOptions& options) {
  params.validate();
  const FockSpace& space = initial.space();
  if (!space.is_fixed_sector() || space.total_quanta() != params.n_total)
    throw ContractViolation("mean-field evolution needs a state in fixed_sector(n_total)");
  const std::size_t steps = step_count(horizon, dt);
  const std::size_t every = std::max<std::size_t>(options.output_every, 1);

  std::vector<double> weights(space.dimension());
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = double(k);
  auto n1_of = [&](const Amplitudes& a) {
    return kernels::weighted_norm_sq(weights, as_span(a)) / kernels::norm_sq(as_span(a));
  };

  Trajectory traj;
  std::vector<double> raw_phase;
  auto record = [&](double t, const Amplitudes& a) {
    const StateVector s = StateVector::unchecked(space, a);
    const double n1 = mean_n1(s);
    const cplx coh = coherence(s);
    traj.times.push_back(t);
    traj.n1.push_back(n1);
    raw_phase.push_back(wrapped_phase(coh));
    traj.norm_drift.push_back(std::abs(s.norm() - 1.0));
    const double d = n1 - params.n_bar1;
    traj.energy_like.push_back(0.5 * params.e_c * d * d + params.lam * coh.real());
    if (options.track_fidelity) {
      const double f = best_product_fit(s).fidelity;
      if (f < 1.0 - 1e-3)
        throw IntegrationFailure("mean-field state lost its product structure (fidelity " + std::to_string(f) +
                                 " at t = " + std::to_string(t) + "); reduce the time step");
      traj.product_fidelity.push_back(f);
    } else {
      traj.product_fidelity.push_back(kNaN);
    }
  };

  KrylovPropagator krylov;
  Amplitudes half(initial.dimension());
  auto midpoint_step = [&](Amplitudes& psi, double h) {
    const LinearOperator h_start = mean_field_hamiltonian(params, space, n1_of(psi));
    half = psi;
    krylov.advance(h_start, half, 0.5 * h, options.krylov_tol);
    const LinearOperator h_mid = mean_field_hamiltonian(params, space, n1_of(half));
    krylov.advance(h_mid, psi, h, options.krylov_tol);
  };
  auto advance = [&](Amplitudes psi, double h, std::size_t pieces) {
    for (std::size_t i = 0; i < pieces; ++i) midpoint_step(psi, h / double(pieces));
    return psi;
  };

  Amplitudes psi = initial.amplitudes();
  std::size_t pieces = 1;
  record(0.0, psi);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t_prev = double(step - 1) * dt;
    const double h = std::min(dt, horizon - t_prev);
    // Step doubling: accept the finer of two subdivisions once they agree.
    Amplitudes coarse = advance(psi, h, pieces);
    for (;;) {
      Amplitudes fine = advance(psi, h, 2 * pieces);
      coarse -= fine;
      const double err = std::sqrt(kernels::norm_sq(as_span(coarse)));
      if (err <= options.step_tol) {
        // Richardson: the midpoint rule is second order, so fine - coarse
        // estimates three times the error left in fine.
        psi = fine - coarse / 3.0;
        psi /= std::sqrt(kernels::norm_sq(as_span(psi)));
        if (err < options.step_tol / 64.0 && pieces > 1) pieces /= 2;
        break;
      }
      if (pieces >= (std::size_t{1} << 20))
        throw IntegrationFailure("mean-field step control could not reach the tolerance at t = " +
                                 std::to_string(t_prev));
      pieces *= 2;
      coarse = std::move(fine);
    }
    if (step % every == 0 || step == steps) record(t_prev + h, psi);
  }
  traj.phi = unwrap_phase(raw_phase);
  return traj;
}

Trajectory evolve_exact(const StateVector& initial, const JJParams& params, double horizon, double dt,
                        bool track_fidelity) {
  params.validate();
  const FockSpace& space = initial.space();
  if (!space.is_fixed_sector() || space.total_quanta() != params.n_total)
    throw ContractViolation("exact evolution needs a state in fixed_sector(n_total)");
  const std::size_t steps = step_count(horizon, dt);
  const LinearOperator ham = build_jj_hamiltonian(params, space, ChargingModel::bose_hubbard);

  Trajectory traj;
  std::vector<double> raw_phase;
  auto record = [&](double t, Amplitudes a) {
    const StateVector s = StateVector::unchecked(space, std::move(a));
    traj.times.push_back(t);
    traj.n1.push_back(mean_n1(s));
    raw_phase.push_back(wrapped_phase(coherence(s)));
    traj.norm_drift.push_back(std::abs(s.norm() - 1.0));
    traj.energy_like.push_back(expectation(s, ham).real());
    traj.product_fidelity.push_back(track_fidelity ? best_product_fit(s).fidelity : kNaN);
  };

  if (space.dimension() <= kDenseEvolutionLimit) {
    const SpectralPropagator prop(ham);
    for (std::size_t step = 0; step <= steps; ++step) {
      const double t = std::min(double(step) * dt, horizon);
      record(t, prop.propagate(initial.amplitudes(), t));
    }
  } else {
    KrylovPropagator krylov;
    Amplitudes psi = initial.amplitudes();
    record(0.0, psi);
    for (std::size_t step = 1; step <= steps; ++step) {
      const double t_prev = double(step - 1) * dt;
      const double h = std::min(dt, horizon - t_prev);
      krylov.advance(ham, psi, h, 1e-13);
      record(t_prev + h, psi);
    }
  }
  traj.phi = unwrap_phase(raw_phase);
  return traj;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("fit needs paired samples");
  if (x.size() < 3) throw FitError("power-law fit needs at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw FitError("power-law fit needs distinct abscissae");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  return fit;
}

double phase_half_width(const StateVector& state) {
  if (!state.space().is_fixed_sector()) throw ContractViolation("phase width needs a fixed-sector state");
  const Amplitudes& a = state.amplitudes();
  Amplitudes shifted(a.size());
  // |<psi| e^{i delta n_1} |psi>|, the overlap of |n, phi> with |n, phi + delta>.
  auto overlap = [&](double delta) {
    for (Eigen::Index k = 0; k < a.size(); ++k) shifted[k] = a[k] * std::polar(1.0, double(k) * delta);
    return std::abs(kernels::dot(as_span(a), as_span(shifted)));
  };
  // Bracket the first crossing on a grid fine enough for the widest state.
  const int grid = 64 + 4 * static_cast<int>(std::sqrt(double(a.size())));
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= grid; ++i) {
    const double d = std::numbers::pi * i / grid;
    if (overlap(d) <= 0.5) {
      hi = d;
      break;
    }
    lo = d;
  }
  if (hi < 0.0) throw DomainError("overlap never drops to 1/2; phase width undefined");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (overlap(mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FluctuationReport fluctuation_scan(std::span<const JJParams> params_list, double phi, unsigned threads) {
  if (params_list.size() < 3) throw FitError("fluctuation scan needs at least three points");
  for (const auto& p : params_list) p.validate();
  const std::size_t n = params_list.size();
  FluctuationReport rep;
  rep.n_bar1_values.resize(n);
  rep.n_total_values.resize(n);
  rep.number_variance.resize(n);
  rep.phase_width.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const JJParams& p = params_list[i];
    const StateVector s = product_state(p.n_total, p.n_bar1, phi);
    rep.n_bar1_values[i] = p.n_bar1;
    rep.n_total_values[i] = p.n_total;
    rep.number_variance[i] = number_variance(s);
    rep.phase_width[i] = phase_half_width(s);
  });
  rep.number_fit = fit_power_law(rep.n_bar1_values, rep.number_variance);
  rep.phase_fit = fit_power_law(rep.n_bar1_values, rep.phase_width);
  return rep;
}

ModelComparison model_compare(const JJParams& params, double n0, double phi0, double horizon, double dt) {
  params.validate();
  if (static_cast<std::size_t>(params.n_total) + 1 > kDenseEvolutionLimit)
    throw DomainError("model_compare needs n_total + 1 <= 2000 for the exact leg");
  const FockSpace space = FockSpace::fixed_sector(params.n_total);
  const StateVector initial = product_state(params.n_total, n0, phi0, space);

  ModelComparison cmp;
  cmp.reduction = mean_field_reduction(params);
  cmp.exact = evolve_exact(initial, params, horizon, dt, true);
  cmp.mean_field = evolve_meanfield(initial, params, horizon, dt);

  const double theta0 = std::remainder(phi0 - cmp.reduction.phi_star, 2.0 * std::numbers::pi);
  const double start_phase = cmp.mean_field.phi.empty() || std::isnan(cmp.mean_field.phi.front())
                                 ? phi0
                                 : cmp.mean_field.phi.front();
  PendulumOptions popts;
  popts.phase_offset = start_phase - theta0;
  popts.charge = cmp.reduction;
  const double theta_dot0 =
      (n0 > 0.0 && n0 < params.n_total) ? reduced_rates(params, n0, phi0).phi_dot : 0.0;
  cmp.pendulum = pendulum_trajectory(theta0, theta_dot0, cmp.reduction.omega, horizon, dt, popts);

  const std::size_t n = cmp.exact.size();
  cmp.n1_divergence.resize(n);
  cmp.phi_divergence.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cmp.n1_divergence[i] = std::abs(cmp.exact.n1[i] - cmp.mean_field.n1[i]);
    cmp.phi_divergence[i] = std::abs(cmp.exact.phi[i] - cmp.mean_field.phi[i]);
    cmp.max_n1_divergence = std::max(cmp.max_n1_divergence, cmp.n1_divergence[i]);
    if (!std::isnan(cmp.phi_divergence[i]))
      cmp.max_phi_divergence = std::max(cmp.max_phi_divergence, cmp.phi_divergence[i]);
  }
  return cmp;
}

}  // namespace bosonlab
