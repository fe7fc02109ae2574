#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "bosonlab/dynamics.hpp"
#include "bosonlab/errors.hpp"

namespace bosonlab {

Trajectory pendulum_trajectory(double phi0, double phidot0, double omega, double horizon, double dt,
                               const PendulumOptions& options) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be non-negative");
  if (!std::isfinite(omega) || omega < 0.0) throw DomainError("pendulum frequency must be finite and >= 0");

  const double w2 = omega * omega;
  auto rhs = [w2](const State& x, State& dxdt, double) {
    dxdt[0] = x[1];
    dxdt[1] = -w2 * std::sin(x[0]);
  };

  Trajectory traj;
  auto record = [&](double t, const State& x) {
    traj.times.push_back(t);
    traj.phi.push_back(options.phase_offset + x[0]);
    traj.phi_rate.push_back(x[1]);
    traj.energy_like.push_back(0.5 * x[1] * x[1] + w2 * (1.0 - std::cos(x[0])));
    traj.norm_drift.push_back(0.0);
    traj.product_fidelity.push_back(std::numeric_limits<double>::quiet_NaN());
    if (options.charge) {
      traj.n1.push_back(options.charge->n_eq - x[1] / options.charge->number_stiffness);
    } else {
      traj.n1.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  };

  const std::size_t steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  State x{phi0, phidot0};
  odeint::runge_kutta_fehlberg78<State> stepper;
  auto controlled = odeint::make_controlled(options.tolerance, options.tolerance, stepper);
  record(0.0, x);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t0 = double(step - 1) * dt;
    const double t1 = std::min(double(step) * dt, horizon);
    if (options.adaptive) {
      odeint::integrate_adaptive(controlled, rhs, x, t0, t1, (t1 - t0) / 4.0);
    } else {
      stepper.do_step(rhs, x, t0, t1 - t0);
    }
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
      throw IntegrationFailure("pendulum integration produced a non-finite state");
    record(t1, x);
  }
  return traj;
}

}  // namespace bosonlab
