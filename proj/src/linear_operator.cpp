#include "bosonlab/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/kernels.hpp"

namespace bosonlab {
namespace {

using Dense = LinearOperator::Dense;
using Sparse = LinearOperator::Sparse;
using Triplet = Eigen::Triplet<cplx>;

double defect_of(const Dense& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double defect_of(const Sparse& m) {
  const Sparse diff = m - Sparse(m.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (Sparse::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double defect_of(const Tridiagonal& t) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.diag.size(); ++i) worst = std::max(worst, 2.0 * std::abs(t.diag[i].imag()));
  for (Eigen::Index i = 0; i < t.lower.size(); ++i)
    worst = std::max(worst, std::abs(t.lower[i] - std::conj(t.upper[i])));
  return worst;
}

Sparse tridiagonal_to_sparse(const Tridiagonal& t) {
  const Eigen::Index n = t.diag.size();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(3 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0 && t.lower[i - 1] != cplx{}) trips.emplace_back(i, i - 1, t.lower[i - 1]);
    if (t.diag[i] != cplx{}) trips.emplace_back(i, i, t.diag[i]);
    if (i + 1 < n && t.upper[i] != cplx{}) trips.emplace_back(i, i + 1, t.upper[i]);
  }
  Sparse s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Dense tridiagonal_to_dense(const Tridiagonal& t) {
  const Eigen::Index n = t.diag.size();
  Dense d = Dense::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = t.diag[i];
    if (i > 0) d(i, i - 1) = t.lower[i - 1];
    if (i + 1 < n) d(i, i + 1) = t.upper[i];
  }
  return d;
}

void require_same_space(const LinearOperator& a, const LinearOperator& b) {
  if (!(a.space() == b.space())) throw ContractViolation("operators act on different spaces");
}

Sparse diagonal_sparse(const FockSpace& space, auto&& value_of) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  std::vector<Triplet> trips;
  trips.reserve(space.dimension());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = value_of(static_cast<std::size_t>(i));
    if (v != 0.0) trips.emplace_back(i, i, v);
  }
  Sparse s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

}  // namespace

LinearOperator::LinearOperator(FockSpace space, Rep rep) : space_(std::move(space)), rep_(std::move(rep)) {
  const auto n = static_cast<Eigen::Index>(space_.dimension());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>) {
          if (m.diag.size() != n || m.lower.size() != std::max<Eigen::Index>(n - 1, 0) ||
              m.upper.size() != std::max<Eigen::Index>(n - 1, 0))
            throw ContractViolation("tridiagonal band sizes do not match the space dimension");
        } else {
          if (m.rows() != n || m.cols() != n)
            throw ContractViolation("operator matrix does not match the space dimension");
        }
        hermiticity_defect_ = defect_of(m);
      },
      rep_);
}

LinearOperator LinearOperator::dense(FockSpace space, Dense m) { return {std::move(space), std::move(m)}; }

LinearOperator LinearOperator::sparse(FockSpace space, Sparse m) {
  m.makeCompressed();
  return {std::move(space), std::move(m)};
}

LinearOperator LinearOperator::tridiagonal(FockSpace space, Tridiagonal t) {
  return {std::move(space), std::move(t)};
}

LinearOperator LinearOperator::zero(const FockSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  return sparse(space, Sparse(n, n));
}

LinearOperator LinearOperator::identity(const FockSpace& space) {
  return sparse(space, diagonal_sparse(space, [](std::size_t) { return 1.0; }));
}

void LinearOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dimension() || y.size() != dimension())
    throw ContractViolation("vector length does not match the operator dimension");
  const auto n = static_cast<Eigen::Index>(dimension());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>) {
          kernels::tridiag_matvec(as_span(m.lower), as_span(m.diag), as_span(m.upper), x, y);
        } else {
          Eigen::Map<const Amplitudes> xv(x.data(), n);
          Eigen::Map<Amplitudes> yv(y.data(), n);
          yv.noalias() = m * xv;
        }
      },
      rep_);
}

Amplitudes LinearOperator::apply(const Amplitudes& x) const {
  Amplitudes y(x.size());
  apply(as_span(x), as_span(y));
  return y;
}

Dense LinearOperator::to_dense() const {
  return std::visit(
      [](const auto& m) -> Dense {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>)
          return tridiagonal_to_dense(m);
        else
          return Dense(m);
      },
      rep_);
}

Sparse LinearOperator::to_sparse() const {
  return std::visit(
      [](const auto& m) -> Sparse {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>)
          return tridiagonal_to_sparse(m);
        else if constexpr (std::is_same_v<T, Dense>)
          return m.sparseView();
        else
          return m;
      },
      rep_);
}

cplx LinearOperator::element(std::size_t row, std::size_t col) const {
  const auto r = static_cast<Eigen::Index>(row);
  const auto c = static_cast<Eigen::Index>(col);
  return std::visit(
      [&](const auto& m) -> cplx {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>) {
          if (r == c) return m.diag[r];
          if (r == c + 1) return m.lower[c];
          if (c == r + 1) return m.upper[r];
          return {};
        } else {
          return m.coeff(r, c);
        }
      },
      rep_);
}

LinearOperator LinearOperator::adjoint() const {
  return std::visit(
      [&](const auto& m) -> LinearOperator {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>) {
          return tridiagonal(space_, Tridiagonal{m.upper.conjugate(), m.diag.conjugate(), m.lower.conjugate()});
        } else if constexpr (std::is_same_v<T, Dense>) {
          return dense(space_, m.adjoint());
        } else {
          return sparse(space_, Sparse(m.adjoint()));
        }
      },
      rep_);
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  require_same_space(a, b);
  if (a.is_dense() || b.is_dense()) return LinearOperator::dense(a.space_, a.to_dense() * b.to_dense());
  return LinearOperator::sparse(a.space_, Sparse(a.to_sparse() * b.to_sparse()));
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  require_same_space(a, b);
  if (a.is_tridiagonal() && b.is_tridiagonal()) {
    const auto& x = *a.tridiagonal_form();
    const auto& y = *b.tridiagonal_form();
    return LinearOperator::tridiagonal(a.space_, Tridiagonal{x.lower + y.lower, x.diag + y.diag, x.upper + y.upper});
  }
  if (a.is_dense() || b.is_dense()) return LinearOperator::dense(a.space_, a.to_dense() + b.to_dense());
  return LinearOperator::sparse(a.space_, a.to_sparse() + b.to_sparse());
}

LinearOperator operator*(cplx s, const LinearOperator& a) {
  return std::visit(
      [&](const auto& m) -> LinearOperator {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tridiagonal>) {
          return LinearOperator::tridiagonal(a.space_, Tridiagonal{s * m.lower, s * m.diag, s * m.upper});
        } else if constexpr (std::is_same_v<T, Dense>) {
          return LinearOperator::dense(a.space_, s * m);
        } else {
          return LinearOperator::sparse(a.space_, Sparse(s * m));
        }
      },
      a.rep_);
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) { return a + cplx(-1.0) * b; }

// Ladder operators ---------------------------------------------------------

LinearOperator ladder_operator(const FockSpace& space, std::size_t mode, Ladder kind) {
  if (mode >= space.mode_count()) throw ContractViolation("mode index out of range");
  if (space.is_fixed_sector()) {
    if (kind != Ladder::number)
      throw UnsupportedOperator("single ladder operators leave the fixed-number sector; use number or transfer operators");
    return transfer_operator(space, mode, mode);
  }
  if (kind == Ladder::number)
    return LinearOperator::sparse(
        space, diagonal_sparse(space, [&](std::size_t i) { return double(space.occupation(i, mode)); }));

  const auto n = static_cast<Eigen::Index>(space.dimension());
  const std::size_t stride = space.stride(mode);
  std::vector<Triplet> trips;
  trips.reserve(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int occ = space.occupation(i, mode);
    if (occ == 0) continue;
    // a|.., occ, ..> = sqrt(occ)|.., occ - 1, ..>
    const auto lowered = static_cast<Eigen::Index>(i - stride);
    const double amp = std::sqrt(static_cast<double>(occ));
    if (kind == Ladder::annihilate)
      trips.emplace_back(lowered, static_cast<Eigen::Index>(i), amp);
    else
      trips.emplace_back(static_cast<Eigen::Index>(i), lowered, amp);
  }
  Sparse s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return LinearOperator::sparse(space, std::move(s));
}

LinearOperator transfer_operator(const FockSpace& space, std::size_t to, std::size_t from) {
  if (to >= space.mode_count() || from >= space.mode_count()) throw ContractViolation("mode index out of range");
  if (space.is_fixed_sector()) {
    const int total = space.total_quanta();
    const auto n = static_cast<Eigen::Index>(space.dimension());
    Tridiagonal t{Amplitudes::Zero(std::max<Eigen::Index>(n - 1, 0)), Amplitudes::Zero(n),
                  Amplitudes::Zero(std::max<Eigen::Index>(n - 1, 0))};
    if (to == from) {
      for (Eigen::Index k = 0; k < n; ++k) t.diag[k] = to == 0 ? double(k) : double(total - k);
    } else {
      // a_0^dagger a_1 |k> = sqrt((k+1)(N-k)) |k+1>; the reverse hop is its adjoint.
      for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double amp = std::sqrt(double(k + 1) * double(total - k));
        if (to == 0)
          t.lower[k] = amp;
        else
          t.upper[k] = amp;
      }
    }
    return LinearOperator::tridiagonal(space, std::move(t));
  }
  if (to == from) return ladder_operator(space, to, Ladder::number);

  const auto n = static_cast<Eigen::Index>(space.dimension());
  const std::size_t s_to = space.stride(to);
  const std::size_t s_from = space.stride(from);
  const int cut_to = space.cutoff(to);
  std::vector<Triplet> trips;
  trips.reserve(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int n_from = space.occupation(i, from);
    const int n_to = space.occupation(i, to);
    if (n_from == 0 || n_to == cut_to) continue;
    const std::size_t j = i - s_from + s_to;
    trips.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i),
                       std::sqrt(double(n_from) * double(n_to + 1)));
  }
  Sparse s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return LinearOperator::sparse(space, std::move(s));
}

LinearOperator total_number_operator(const FockSpace& space) {
  if (space.is_fixed_sector()) return transfer_operator(space, 0, 0) + transfer_operator(space, 1, 1);
  return LinearOperator::sparse(space, diagonal_sparse(space, [&](std::size_t i) {
                                  double total = 0.0;
                                  for (std::size_t m = 0; m < space.mode_count(); ++m) total += space.occupation(i, m);
                                  return total;
                                }));
}

cplx expectation(const StateVector& state, const LinearOperator& op) {
  if (!(state.space() == op.space())) throw ContractViolation("state and operator live on different spaces");
  const Amplitudes y = op.apply(state.amplitudes());
  return kernels::dot(as_span(state.amplitudes()), as_span(y));
}

double cutoff_population(const StateVector& state, std::size_t mode) {
  const FockSpace& space = state.space();
  if (mode >= space.mode_count()) throw ContractViolation("mode index out of range");
  double p = 0.0;
  for (std::size_t i = 0; i < space.dimension(); ++i)
    if (space.occupation(i, mode) == space.cutoff(mode)) p += std::norm(state[i]);
  return p;
}

double transfer_leakage(const StateVector& state, std::size_t to, std::size_t from) {
  const FockSpace& space = state.space();
  if (to >= space.mode_count() || from >= space.mode_count()) throw ContractViolation("mode index out of range");
  if (space.is_fixed_sector() || to == from) return 0.0;
  double dropped = 0.0;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int n_from = space.occupation(i, from);
    const int n_to = space.occupation(i, to);
    if (n_from > 0 && n_to == space.cutoff(to)) dropped += std::norm(state[i]) * double(n_from) * double(n_to + 1);
  }
  return dropped;
}

}  // namespace bosonlab
