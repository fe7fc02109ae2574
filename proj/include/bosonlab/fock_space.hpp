#pragma once

// Bosonic Fock bases.
//
// Two kinds of basis are supported:
//
//  * truncated: every mode m carries 0..cutoff_m quanta. Basis states are
//    enumerated with mode 0 as the slowest-varying index, i.e.
//    index = sum_m n_m * stride_m with stride_{M-1} = 1.
//  * fixed sector: two modes sharing exactly N quanta. Index k holds |k, N-k>
//    (k quanta in mode 0).
//
// Both orderings are frozen; reports and tests depend on them.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace bosonlab {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultMaxDimension = 1'000'000;

class FockSpace {
 public:
  enum class Kind { truncated, fixed_sector };

  /// Throws DomainError for zero modes or negative cutoffs and ResourceError
  /// when the product of (cutoff + 1) exceeds max_dimension.
  static FockSpace truncated(std::vector<int> cutoffs,
                             std::size_t max_dimension = kDefaultMaxDimension);

  static FockSpace fixed_sector(int total_quanta,
                                std::size_t max_dimension = kDefaultMaxDimension);

  Kind kind() const noexcept { return kind_; }
  bool is_fixed_sector() const noexcept { return kind_ == Kind::fixed_sector; }
  std::size_t mode_count() const noexcept { return cutoffs_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Largest occupation of `mode` (N for both modes of a sector).
  int cutoff(std::size_t mode) const;
  const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }

  /// Total quanta of a fixed sector; -1 for truncated spaces.
  int total_quanta() const noexcept { return total_; }

  int occupation(std::size_t index, std::size_t mode) const;
  std::vector<int> occupations(std::size_t index) const;

  /// Inverse of occupations(). Throws DomainError for tuples outside the basis.
  std::size_t index_of(std::span<const int> occupation) const;

  /// Index step for one extra quantum in `mode` (truncated spaces).
  std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

  bool operator==(const FockSpace& other) const = default;

 private:
  FockSpace() = default;

  Kind kind_ = Kind::truncated;
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
  int total_ = -1;
};

/// Pure state on a Fock basis.
class StateVector {
 public:
  /// Takes amplitudes as given; throws DomainError unless | ||psi|| - 1 | <= 1e-12.
  StateVector(FockSpace space, Amplitudes amplitudes);

  /// Rescales to unit norm. Throws DomainError for the zero vector.
  static StateVector normalized(FockSpace space, Amplitudes amplitudes);

  /// Skips the norm check; used by propagators that report drift themselves.
  static StateVector unchecked(FockSpace space, Amplitudes amplitudes);

  /// Basis state |n_0, n_1, ...>.
  static StateVector basis(const FockSpace& space, std::span<const int> occupation);
  static StateVector basis(const FockSpace& space, std::initializer_list<int> occupation) {
    return basis(space, std::span<const int>(occupation.begin(), occupation.size()));
  }

  const FockSpace& space() const noexcept { return space_; }
  const Amplitudes& amplitudes() const noexcept { return amps_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const;

  /// <this|other>. Throws ContractViolation on mismatched spaces.
  cplx overlap(const StateVector& other) const;

 private:
  struct NoCheck {};
  StateVector(FockSpace space, Amplitudes amplitudes, NoCheck);

  FockSpace space_;
  Amplitudes amps_;
};

std::span<const cplx> as_span(const Amplitudes& v);
std::span<cplx> as_span(Amplitudes& v);

}  // namespace bosonlab
