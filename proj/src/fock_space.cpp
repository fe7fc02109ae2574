#include "bosonlab/fock_space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bosonlab/errors.hpp"
#include "bosonlab/kernels.hpp"

namespace bosonlab {

FockSpace FockSpace::truncated(std::vector<int> cutoffs, std::size_t max_dimension) {
  if (cutoffs.empty()) throw DomainError("Fock space needs at least one mode");
  std::size_t dim = 1;
  for (int c : cutoffs) {
    if (c < 0) throw DomainError("mode cutoffs must be non-negative");
    const auto levels = static_cast<std::size_t>(c) + 1;
    if (dim > max_dimension / levels) {
      std::ostringstream msg;
      msg << "truncated Fock space exceeds the dimension limit of " << max_dimension;
      throw ResourceError(msg.str());
    }
    dim *= levels;
  }
  if (dim > max_dimension) {
    std::ostringstream msg;
    msg << "truncated Fock space dimension " << dim << " exceeds the limit of " << max_dimension;
    throw ResourceError(msg.str());
  }
  FockSpace s;
  s.kind_ = Kind::truncated;
  s.strides_.assign(cutoffs.size(), 1);
  for (std::size_t m = cutoffs.size() - 1; m > 0; --m)
    s.strides_[m - 1] = s.strides_[m] * (static_cast<std::size_t>(cutoffs[m]) + 1);
  s.cutoffs_ = std::move(cutoffs);
  s.dimension_ = dim;
  return s;
}

FockSpace FockSpace::fixed_sector(int total_quanta, std::size_t max_dimension) {
  if (total_quanta < 0) throw DomainError("total quanta must be non-negative");
  const auto dim = static_cast<std::size_t>(total_quanta) + 1;
  if (dim > max_dimension) {
    std::ostringstream msg;
    msg << "sector dimension " << dim << " exceeds the limit of " << max_dimension;
    throw ResourceError(msg.str());
  }
  FockSpace s;
  s.kind_ = Kind::fixed_sector;
  s.cutoffs_ = {total_quanta, total_quanta};
  s.strides_ = {1, 1};
  s.dimension_ = dim;
  s.total_ = total_quanta;
  return s;
}

int FockSpace::cutoff(std::size_t mode) const { return cutoffs_.at(mode); }

int FockSpace::occupation(std::size_t index, std::size_t mode) const {
  if (kind_ == Kind::fixed_sector) {
    const int k = static_cast<int>(index);
    return mode == 0 ? k : total_ - k;
  }
  return static_cast<int>((index / strides_[mode]) % (static_cast<std::size_t>(cutoffs_[mode]) + 1));
}

std::vector<int> FockSpace::occupations(std::size_t index) const {
  if (index >= dimension_) throw DomainError("basis index out of range");
  std::vector<int> occ(mode_count());
  for (std::size_t m = 0; m < occ.size(); ++m) occ[m] = occupation(index, m);
  return occ;
}

std::size_t FockSpace::index_of(std::span<const int> occupation) const {
  if (occupation.size() != mode_count()) throw DomainError("occupation tuple has the wrong number of modes");
  if (kind_ == Kind::fixed_sector) {
    if (occupation[0] < 0 || occupation[1] < 0 || occupation[0] + occupation[1] != total_)
      throw DomainError("occupation tuple is outside the fixed-number sector");
    return static_cast<std::size_t>(occupation[0]);
  }
  std::size_t idx = 0;
  for (std::size_t m = 0; m < occupation.size(); ++m) {
    if (occupation[m] < 0 || occupation[m] > cutoffs_[m])
      throw DomainError("occupation exceeds the mode cutoff");
    idx += static_cast<std::size_t>(occupation[m]) * strides_[m];
  }
  return idx;
}

std::span<const cplx> as_span(const Amplitudes& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<cplx> as_span(Amplitudes& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

StateVector::StateVector(FockSpace space, Amplitudes amplitudes, NoCheck)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != space_.dimension())
    throw ContractViolation("amplitude vector length does not match the space dimension");
}

StateVector::StateVector(FockSpace space, Amplitudes amplitudes)
    : StateVector(std::move(space), std::move(amplitudes), NoCheck{}) {
  if (std::abs(norm() - 1.0) > 1e-12) throw DomainError("state vector is not normalized");
}

StateVector StateVector::normalized(FockSpace space, Amplitudes amplitudes) {
  const double n = std::sqrt(kernels::norm_sq(as_span(amplitudes)));
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
  amplitudes /= n;
  return StateVector(std::move(space), std::move(amplitudes), NoCheck{});
}

StateVector StateVector::unchecked(FockSpace space, Amplitudes amplitudes) {
  return StateVector(std::move(space), std::move(amplitudes), NoCheck{});
}

StateVector StateVector::basis(const FockSpace& space, std::span<const int> occupation) {
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(space.dimension()));
  a[static_cast<Eigen::Index>(space.index_of(occupation))] = 1.0;
  return StateVector(space, std::move(a), NoCheck{});
}

double StateVector::norm() const { return std::sqrt(kernels::norm_sq(as_span(amps_))); }

cplx StateVector::overlap(const StateVector& other) const {
  if (!(space_ == other.space_)) throw ContractViolation("overlap of states on different spaces");
  return kernels::dot(as_span(amps_), as_span(other.amps_));
}

}  // namespace bosonlab
