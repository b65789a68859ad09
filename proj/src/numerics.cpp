#include "qslab/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <array>
#include <cmath>

namespace qslab {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index d) {
  if (d <= 0 || v.size() != d * d) {
    throw DimensionError("unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(d) + "x" + std::to_string(d));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw DimensionError("hermitian_eig: expected a non-empty square matrix, got " +
                         std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
  }
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-12 * scale) {
    throw PreconditionError("hermitian_eig: input is not Hermitian");
  }
  return 0.5 * (h + h.adjoint());
}

}  // namespace

Spectrum hermitian_eig(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(h));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double largest_singular_value(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

// Higham, "The scaling and squaring method for the matrix exponential revisited".
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <class Matrix>
double one_norm(const Matrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Low-degree approximant: U = A * sum b[2k+1] A^{2k}, V = sum b[2k] A^{2k}.
template <class Matrix, std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = id;
  Matrix u_inner = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t k = 0; 2 * k < N; ++k) {
    v += b[2 * k] * power;
    if (2 * k + 1 < N) u_inner += b[2 * k + 1] * power;
    if (2 * k + 2 < N) power = power * a2;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

template <class Matrix>
Matrix pade13(const Matrix& a) {
  const auto& b = kPade13;
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_high = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const Matrix u = a * (u_high + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v_high = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const Matrix v = v_high + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

template <class Matrix>
Matrix expm_impl(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix_exp: expected a square matrix");
  }
  const double norm = one_norm(m);
  if (!std::isfinite(norm) || !m.allFinite()) {
    throw PreconditionError("matrix_exp: non-finite input");
  }
  if (norm <= kTheta3) return pade_low(m, kPade3);
  if (norm <= kTheta5) return pade_low(m, kPade5);
  if (norm <= kTheta7) return pade_low(m, kPade7);
  if (norm <= kTheta9) return pade_low(m, kPade9);

  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  Matrix result = pade13(Matrix(m / std::ldexp(1.0, squarings)));
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace

RealMatrix matrix_exp(const RealMatrix& m) { return expm_impl(m); }
ComplexMatrix matrix_exp(const ComplexMatrix& m) { return expm_impl(m); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

}  // namespace qslab
