#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bosonlab/errors.hpp"
#include "bosonlab/jj_model.hpp"
#include "bosonlab/random.hpp"
#include "oracles.hpp"

using namespace bosonlab;

namespace {

JJParams params(double e_c, double lam, int n, double nbar) {
  JJParams p;
  p.e_c = e_c;
  p.lam = lam;
  p.n_total = n;
  p.n_bar1 = nbar;
  return p;
}

Eigen::VectorXd sorted_eigenvalues(const LinearOperator& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h.to_dense()).eigenvalues();
}

}  // namespace

TEST_CASE("parameter validation and regime flag") {
  CHECK_NOTHROW(params(1, 1, 10, 5).validate());
  CHECK_THROWS_AS(params(1, 1, 0, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(params(1, 1, 10, 0).validate(), DomainError);
  CHECK_THROWS_AS(params(1, 1, 10, 10).validate(), DomainError);
  CHECK_THROWS_AS(params(1, 1, 10, -1).validate(), DomainError);
  CHECK(params(1, 1, 1000, 50).in_charge_qubit_regime());
  CHECK_FALSE(params(1, 1, 200, 100).in_charge_qubit_regime());
  CHECK_FALSE(params(1, 1, 1000, 5).in_charge_qubit_regime());
}

TEST_CASE("derived constants") {
  const DerivedConstants d = derived_constants(params(0.2, 0.1, 100, 50));
  CHECK(d.e_j == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(d.omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (int n : {2, 10, 300}) {
    const DerivedConstants s = derived_constants(params(0.7, 0.3, n, n / 2.0));
    CHECK(s.e_j == doctest::Approx(0.3 * n / 2).epsilon(1e-12));
    CHECK(s.omega * s.omega == doctest::Approx(2 * 0.7 * s.e_j).epsilon(1e-12));
  }
  const DerivedConstants z = derived_constants(params(0.2, 0.0, 100, 30));
  CHECK(z.e_j == 0.0);
  CHECK(z.omega == 0.0);
}

TEST_CASE("Bose-Hubbard without tunneling is diagonal E_C (n - nbar)^2") {
  const JJParams p = params(0.3, 0.0, 12, 4.5);
  const FockSpace s = FockSpace::fixed_sector(12);
  const LinearOperator h = build_jj_hamiltonian(p, s, ChargingModel::bose_hubbard);
  CHECK(h.is_tridiagonal());
  CHECK(h.is_hermitian());
  const Eigen::MatrixXcd d = h.to_dense();
  for (int k = 0; k <= 12; ++k) CHECK(std::abs(d(k, k) - 0.3 * (k - 4.5) * (k - 4.5)) < 1e-14);
  CHECK((d - Eigen::MatrixXcd(d.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("hopping spectrum for N = 2 is {-1, 0, 1}") {
  const FockSpace s = FockSpace::fixed_sector(2);
  const JJParams p = params(0.0, 1.0, 2, 1.0);
  const StateVector ref = product_state(2, 1.0, 0.4, s);
  for (const LinearOperator& h : {build_jj_hamiltonian(p, s, ChargingModel::bose_hubbard),
                                  build_jj_hamiltonian(p, s, ChargingModel::mean_field, &ref)}) {
    const Eigen::VectorXd ev = sorted_eigenvalues(h);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(std::abs(ev[1]) < 1e-14);
    CHECK(ev[2] == doctest::Approx(1.0));
  }
}

TEST_CASE("Bose-Hubbard matrix matches the dense oracle") {
  const JJParams p = params(0.37, 0.81, 30, 11.3);
  const FockSpace s = FockSpace::fixed_sector(30);
  const Eigen::MatrixXcd h = build_jj_hamiltonian(p, s, ChargingModel::bose_hubbard).to_dense();
  const Eigen::MatrixXd ref = oracle::dimer_hamiltonian(30, 0.37, 0.81, 11.3);
  CHECK((h - ref.cast<std::complex<double>>()).norm() < 1e-12);
}

TEST_CASE("mean-field charging term") {
  const int n = 40;
  const FockSpace s = FockSpace::fixed_sector(n);
  const JJParams p = params(0.5, 0.2, n, 20.0);

  // <n_1> = nbar: pure tunneling.
  const StateVector centered = product_state(n, 20.0, 1.1, s);
  const Eigen::MatrixXcd h0 = build_jj_hamiltonian(p, s, ChargingModel::mean_field, &centered).to_dense();
  for (int k = 0; k <= n; ++k) CHECK(std::abs(h0(k, k)) < 1e-12);

  // <n_1> = nbar + delta: diagonal is linear in k with slope E_C delta.
  for (double delta : {-3.5, 0.25, 7.0}) {
    const StateVector shifted = product_state(n, 20.0 + delta, -0.3, s);
    const Eigen::MatrixXcd h = build_jj_hamiltonian(p, s, ChargingModel::mean_field, &shifted).to_dense();
    for (int k = 0; k < n; ++k) CHECK(std::abs(h(k + 1, k + 1) - h(k, k) - 0.5 * delta) < 1e-10);
    CHECK(std::abs(h(20, 20)) < 1e-10);
    const Eigen::MatrixXcd direct = mean_field_hamiltonian(p, s, 20.0 + delta).to_dense();
    CHECK((h - direct).norm() < 1e-10);
  }

  // Off-diagonal part is shared with Bose-Hubbard.
  const Eigen::MatrixXcd bh = build_jj_hamiltonian(p, s, ChargingModel::bose_hubbard).to_dense();
  for (int k = 0; k < n; ++k) CHECK(std::abs(h0(k, k + 1) - bh(k, k + 1)) < 1e-15);
}

TEST_CASE("Hamiltonian contracts") {
  const FockSpace s = FockSpace::fixed_sector(10);
  const JJParams p = params(1, 1, 10, 5);
  CHECK_THROWS_AS(build_jj_hamiltonian(p, s, ChargingModel::mean_field), ContractViolation);
  CHECK_THROWS_AS(build_jj_hamiltonian(p, FockSpace::fixed_sector(11), ChargingModel::bose_hubbard),
                  ContractViolation);
  const StateVector other = product_state(11, 5, 0);
  CHECK_THROWS_AS(build_jj_hamiltonian(p, s, ChargingModel::mean_field, &other), ContractViolation);
  CHECK_THROWS_AS(build_jj_hamiltonian(p, FockSpace::truncated({10, 10}), ChargingModel::bose_hubbard),
                  ContractViolation);
}

TEST_CASE("both Hamiltonians commute with the total number") {
  const FockSpace s = FockSpace::fixed_sector(25);
  const JJParams p = params(0.4, 0.9, 25, 10.2);
  const StateVector ref = product_state(25, 13.0, 2.0, s);
  const LinearOperator n_tot = total_number_operator(s);
  for (const LinearOperator& h : {build_jj_hamiltonian(p, s, ChargingModel::bose_hubbard),
                                  build_jj_hamiltonian(p, s, ChargingModel::mean_field, &ref)}) {
    const Eigen::MatrixXcd c = (h * n_tot - n_tot * h).to_dense();
    CHECK(c.norm() == 0.0);
  }
}

TEST_CASE("product state examples") {
  const double phi = 0.7;
  const StateVector one = product_state(1, 1.0, phi);
  // e^{i phi}|1,0> up to the global phase, which the endpoint drops.
  CHECK(std::abs(std::abs(one.amplitudes()[1]) - 1.0) < 1e-15);
  CHECK(std::abs(one.amplitudes()[0]) == 0.0);

  const StateVector two = product_state(2, 1.0, 0.0);
  CHECK(two.amplitudes()[0].real() == doctest::Approx(0.5));
  CHECK(two.amplitudes()[1].real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(two.amplitudes()[2].real() == doctest::Approx(0.5));

  // Fock endpoints.
  const StateVector empty = product_state(5, 0.0, 1.0);
  CHECK(std::abs(empty.amplitudes()[0] - 1.0) < 1e-15);
  const StateVector full = product_state(5, 5.0, 0.0);
  CHECK(std::abs(std::abs(full.amplitudes()[5]) - 1.0) < 1e-15);

  CHECK_THROWS_AS(product_state(5, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(product_state(5, 5.1, 0.0), DomainError);
  CHECK_THROWS_AS(product_state(5, 2.0, 0.0, FockSpace::fixed_sector(6)), ContractViolation);
}

TEST_CASE("product state amplitudes, moments and phase") {
  for (int n : {1, 7, 64, 200, 1500}) {
    for (double frac : {0.1, 0.5, 0.83}) {
      const double nn = frac * n;
      const double phi = -2.1 + frac;
      const StateVector psi = product_state(n, nn, phi);
      CAPTURE(n);
      CAPTURE(frac);
      CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
      CHECK(std::abs(mean_n1(psi) - nn) < 1e-10 * std::max(1.0, nn));
      CHECK(std::abs(number_variance(psi) - n * frac * (1 - frac)) < 1e-10 * std::max(1.0, nn));
      CHECK(std::abs(std::arg(coherence(psi)) - phi) < 1e-12);
      CHECK(psi.amplitudes()[0].real() >= 0.0);
      CHECK(psi.amplitudes()[0].imag() == 0.0);
      if (n <= 200) CHECK((psi.amplitudes() - oracle::binomial_state(n, nn, phi)).norm() < 1e-12);
    }
  }
}

TEST_CASE("overlap law between product states") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(u(rng) * 200);
    const double p = 0.05 + 0.9 * u(rng);
    const double a = 6 * u(rng) - 3;
    const double b = 6 * u(rng) - 3;
    const double lhs = std::abs(product_state(n, p * n, a).overlap(product_state(n, p * n, b)));
    const double rhs = std::pow(std::abs(p * std::polar(1.0, b - a) + (1 - p)), n);
    CAPTURE(n);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("best product fit recovers product states") {
  for (double phi : {-3.0, 0.0, 1.3, 3.1}) {
    const StateVector psi = product_state(60, 21.5, phi);
    const ProductFit fit = best_product_fit(psi);
    CHECK(fit.n == doctest::Approx(21.5).epsilon(1e-10));
    CHECK(std::abs(std::remainder(fit.phi - phi, 2 * std::numbers::pi)) < 1e-10);
    CHECK(fit.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
  // A NOON-like superposition is far from any product state.
  const FockSpace s = FockSpace::fixed_sector(10);
  Amplitudes a = Amplitudes::Zero(11);
  a[0] = a[10] = 1 / std::sqrt(2.0);
  const ProductFit cat = best_product_fit(StateVector(s, a));
  CHECK(cat.fidelity < 0.6);
}
