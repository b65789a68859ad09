#pragma once

// Dense complex linear algebra used throughout qslab.
//
// Matrices are Eigen column-major types. Vectorization stacks columns, so the
// entry (i, j) of a d x d operator lands at index i + j * d of vec(A), and
// vec(A B C) = kron(C^T, A) vec(B).

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qslab {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when operand shapes are incompatible.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an input violates a documented numerical precondition.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; columns of
/// `eigenvectors` are the matching orthonormal eigenvectors.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  [[nodiscard]] double min() const { return eigenvalues(0); }
  [[nodiscard]] double max() const { return eigenvalues(eigenvalues.size() - 1); }
  [[nodiscard]] double spread() const { return max() - min(); }
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, Index d);

/// Symmetrizes the input as (h + h^dagger) / 2 before solving. Throws
/// DimensionError for non-square input and PreconditionError when the input
/// departs from Hermiticity by more than 1e-12 relative to its norm.
Spectrum hermitian_eig(const ComplexMatrix& h);

/// Eigenvalues only, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

double largest_singular_value(const ComplexMatrix& m);

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of degree 3, 5, 7, 9 or 13, chosen from the 1-norm so the
/// backward error stays below double-precision unit roundoff.
RealMatrix matrix_exp(const RealMatrix& m);
ComplexMatrix matrix_exp(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);
bool all_finite(const ComplexMatrix& m);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix identity(Index d);

}  // namespace qslab
