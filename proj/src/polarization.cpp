#include "bosonlab/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bosonlab/errors.hpp"
#include "bosonlab/random.hpp"

namespace bosonlab {
namespace {

constexpr double kTol = 1e-12;

std::pair<double, double> hermitian_eigs(const Matrix2c& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mid = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(b));
  return {mid - rad, mid + rad};
}

}  // namespace

const Matrix2c& pauli_x() {
  static const Matrix2c m = (Matrix2c() << 0, 1, 1, 0).finished();
  return m;
}

const Matrix2c& pauli_y() {
  static const Matrix2c m = (Matrix2c() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  return m;
}

const Matrix2c& pauli_z() {
  static const Matrix2c m = (Matrix2c() << 1, 0, 0, -1).finished();
  return m;
}

bool satisfies_stokes_constraint(const StokesVector& v, double tol) {
  return v.intensity >= std::sqrt(v.m * v.m + v.c * v.c + v.s * v.s) - tol;
}

double min_eigenvalue(const Matrix2c& m) { return hermitian_eigs(m).first; }

CorrelationMatrix2::CorrelationMatrix2(const Matrix2c& m) : m_(m) {
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kTol) {
    std::ostringstream msg;
    msg << "correlation matrix is not Hermitian (max |Omega - Omega^dagger| = " << defect << ")";
    throw DomainError(msg.str());
  }
  const double lo = hermitian_eigs(m).first;
  if (lo < -kTol) {
    std::ostringstream msg;
    msg << "correlation matrix is not positive semidefinite (smallest eigenvalue " << lo << " < 0)";
    throw DomainError(msg.str());
  }
}

std::pair<double, double> CorrelationMatrix2::eigenvalues() const { return hermitian_eigs(m_); }

CorrelationMatrix2 to_omega(const StokesVector& v) {
  if (!satisfies_stokes_constraint(v, kTol)) {
    std::ostringstream msg;
    msg << "Stokes constraint I >= sqrt(M^2 + C^2 + S^2) violated: I = " << v.intensity
        << ", sqrt(M^2 + C^2 + S^2) = " << std::sqrt(v.m * v.m + v.c * v.c + v.s * v.s);
    throw DomainError(msg.str());
  }
  Matrix2c omega = v.intensity * Matrix2c::Identity() + v.m * pauli_x() + v.c * pauli_y() + v.s * pauli_z();
  omega *= 0.5;
  return CorrelationMatrix2(omega);
}

StokesVector to_stokes(const CorrelationMatrix2& omega) {
  const Matrix2c& m = omega.matrix();
  return StokesVector{
      .intensity = m.trace().real(),
      .m = (m * pauli_x()).trace().real(),
      .c = (m * pauli_y()).trace().real(),
      .s = (m * pauli_z()).trace().real(),
  };
}

CorrelationMatrix2 omega_from_state(const StateVector& state, std::size_t first, std::size_t second) {
  const FockSpace& space = state.space();
  if (first == second) throw ContractViolation("Omega needs two distinct modes");
  if (first >= space.mode_count() || second >= space.mode_count()) throw ContractViolation("mode index out of range");
  if (space.is_fixed_sector() && !(std::min(first, second) == 0 && std::max(first, second) == 1))
    throw UnsupportedOperator("fixed-sector spaces only support the sector mode pair");
  const std::size_t modes[2] = {first, second};
  Matrix2c omega;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = mu; nu < 2; ++nu) {
      // Omega_{mu nu} = <a_nu^dagger a_mu>
      const cplx v = expectation(state, transfer_operator(space, modes[nu], modes[mu]));
      omega(mu, nu) = v;
      if (mu != nu) omega(nu, mu) = std::conj(v);
    }
  omega(0, 0) = omega(0, 0).real();
  omega(1, 1) = omega(1, 1).real();
  return CorrelationMatrix2(omega);
}

cplx additive_expectation(const CorrelationMatrix2& omega, const Matrix2c& k) {
  return k.cwiseProduct(omega.matrix()).sum();
}

LinearOperator additive_operator(const FockSpace& space, const Matrix2c& k, std::size_t first, std::size_t second) {
  const std::size_t modes[2] = {first, second};
  LinearOperator total = LinearOperator::zero(space);
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu)
      if (k(mu, nu) != cplx{}) total = total + k(mu, nu) * transfer_operator(space, modes[nu], modes[mu]);
  return total;
}

DeviceMap::DeviceMap(std::vector<Matrix2c> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw DomainError("device map needs at least one Kraus element");
  Matrix2c sum = Matrix2c::Zero();
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  const double lo = min_eigenvalue(Matrix2c::Identity() - sum);
  if (lo < -kTol) {
    std::ostringstream msg;
    msg << "device map is trace increasing: sum K^dagger K exceeds identity by " << -lo;
    throw DomainError(msg.str());
  }
}

DeviceMap DeviceMap::identity() { return DeviceMap({Matrix2c::Identity()}); }

CorrelationMatrix2 apply_device_map(const CorrelationMatrix2& omega, const DeviceMap& map) {
  Matrix2c out = Matrix2c::Zero();
  for (const auto& k : map.kraus()) out += k * omega.matrix() * k.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return CorrelationMatrix2(out);
}

Eigen::Matrix4d mueller_matrix(const DeviceMap& map) {
  const Matrix2c basis[4] = {Matrix2c::Identity(), pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix4d mueller;
  for (int j = 0; j < 4; ++j) {
    Matrix2c image = Matrix2c::Zero();
    for (const auto& k : map.kraus()) image += k * basis[j] * k.adjoint();
    for (int i = 0; i < 4; ++i) mueller(i, j) = 0.5 * (basis[i] * image).trace().real();
  }
  return mueller;
}

TomographyResult tomography_simulate(const CorrelationMatrix2& omega_true, std::size_t shots_per_basis,
                                     std::uint64_t seed, bool noise) {
  if (shots_per_basis == 0) throw DomainError("shots_per_basis must be at least 1");
  const StokesVector truth = to_stokes(omega_true);
  const double shots = static_cast<double>(shots_per_basis);
  Rng rng(mix64(seed));
  std::normal_distribution<double> unit(0.0, 1.0);

  auto measure = [&](double intensity) {
    const double mean = std::max(intensity, 0.0);
    if (!noise) return mean;
    return mean + std::sqrt(mean / shots) * unit(rng);
  };
  auto se = [&](double summed) { return noise ? std::sqrt(std::max(summed, 0.0) / shots) : 0.0; };

  const double total = measure(truth.intensity);
  const double x_plus = measure(0.5 * (truth.intensity + truth.m));
  const double x_minus = measure(0.5 * (truth.intensity - truth.m));
  const double y_plus = measure(0.5 * (truth.intensity + truth.c));
  const double y_minus = measure(0.5 * (truth.intensity - truth.c));
  const double z_plus = measure(0.5 * (truth.intensity + truth.s));
  const double z_minus = measure(0.5 * (truth.intensity - truth.s));

  TomographyResult r;
  r.estimate = {total, x_plus - x_minus, y_plus - y_minus, z_plus - z_minus};
  r.standard_errors = {se(total), se(x_plus + x_minus), se(y_plus + y_minus), se(z_plus + z_minus)};
  return r;
}

}  // namespace bosonlab
