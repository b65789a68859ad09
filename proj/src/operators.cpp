#include "qslab/operators.hpp"

#include <cmath>
#include <vector>

namespace qslab::ops {

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

ComplexVector basis_ket(Index d, Index index) {
  if (index < 0 || index >= d) throw DimensionError("basis_ket: index out of range");
  ComplexVector v = ComplexVector::Zero(d);
  v(index) = 1.0;
  return v;
}

ComplexVector ket_plus() {
  ComplexVector v(2);
  v << M_SQRT1_2, M_SQRT1_2;
  return v;
}

ComplexVector ket_minus() {
  ComplexVector v(2);
  v << M_SQRT1_2, -M_SQRT1_2;
  return v;
}

ComplexMatrix projector(const ComplexVector& ket) { return ket * ket.adjoint(); }

ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra) {
  return ket * bra.adjoint();
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

ComplexVector kron_kets(std::span<const ComplexVector> kets) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& k : kets) out = kron(out, ComplexMatrix(k));
  return out.col(0);
}

ComplexMatrix on_site(const ComplexMatrix& op, int site, int n_qubits) {
  if (site < 0 || site >= n_qubits) throw DimensionError("on_site: site out of range");
  std::vector<ComplexMatrix> factors(static_cast<std::size_t>(n_qubits), identity(2));
  factors[static_cast<std::size_t>(site)] = op;
  return kron_all(factors);
}

}  // namespace qslab::ops
