#pragma once

// Real representation of Hermiticity-preserving superoperators.
//
// The orthonormal Hermitian operator basis
//   |i><i|,  (|i><j| + |j><i|)/sqrt2,  (-i|i><j| + i|j><i|)/sqrt2   (i < j)
// turns any Hermiticity-preserving superoperator M into the real matrix
// R = U^+ M U, where the columns of the unitary U are vec(G_b). Since
// exp(t M) = U exp(t R) U^+, propagation can run entirely in real
// arithmetic with identical results up to rounding.

#include "qslab/lindblad.hpp"

#include <array>
#include <span>
#include <vector>

namespace qslab {

class HermitianBasis {
 public:
  explicit HermitianBasis(Index d);

  [[nodiscard]] Index dim() const { return d_; }
  [[nodiscard]] Index size() const { return d_ * d_; }

  [[nodiscard]] RealVector coordinates(const ComplexMatrix& rho) const;
  [[nodiscard]] ComplexMatrix to_operator(const RealVector& r) const;

  /// U^+ M U for a d^2 x d^2 superoperator M (imaginary residue discarded).
  [[nodiscard]] RealMatrix represent(const ComplexMatrix& superop) const;

  /// U R U^+, the inverse of `represent`.
  [[nodiscard]] ComplexMatrix to_superoperator(const RealMatrix& r) const;

 private:
  struct Entry {
    Index pos = 0;
    Complex coef{};
  };
  struct Element {
    std::array<Entry, 2> entries{};
    int count = 0;
  };

  Index d_;
  std::vector<Element> elements_;
};

/// Drift and per-control generators of a controlled Lindblad system in the
/// real Hermitian basis. The generator for amplitudes f is
/// drift + sum_c f_c * control_c.
class RealLiouvillian {
 public:
  RealLiouvillian(const LindbladGenerator& g, std::span<const ComplexMatrix> controls);

  [[nodiscard]] const HermitianBasis& basis() const { return basis_; }
  [[nodiscard]] const RealMatrix& drift() const { return drift_; }
  [[nodiscard]] const std::vector<RealMatrix>& controls() const { return controls_; }

  [[nodiscard]] RealMatrix generator(std::span<const double> amplitudes) const;
  [[nodiscard]] RealMatrix step(std::span<const double> amplitudes, double dt) const;

 private:
  HermitianBasis basis_;
  RealMatrix drift_;
  std::vector<RealMatrix> controls_;
};

}  // namespace qslab
