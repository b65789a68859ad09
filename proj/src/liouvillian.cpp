#include "qslab/liouvillian.hpp"

#include <cmath>

namespace qslab {

HermitianBasis::HermitianBasis(Index d) : d_(d) {
  if (d < 1) throw DimensionError("HermitianBasis: dimension must be positive");
  elements_.reserve(static_cast<std::size_t>(d * d));
  auto pos = [d](Index i, Index j) { return i + j * d; };
  for (Index i = 0; i < d; ++i) {
    Element e;
    e.entries[0] = {pos(i, i), Complex(1.0, 0.0)};
    e.count = 1;
    elements_.push_back(e);
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      Element sym;
      sym.entries[0] = {pos(i, j), Complex(M_SQRT1_2, 0.0)};
      sym.entries[1] = {pos(j, i), Complex(M_SQRT1_2, 0.0)};
      sym.count = 2;
      elements_.push_back(sym);

      Element anti;
      anti.entries[0] = {pos(i, j), Complex(0.0, -M_SQRT1_2)};
      anti.entries[1] = {pos(j, i), Complex(0.0, M_SQRT1_2)};
      anti.count = 2;
      elements_.push_back(anti);
    }
  }
}

RealVector HermitianBasis::coordinates(const ComplexMatrix& rho) const {
  if (rho.rows() != d_ || rho.cols() != d_) {
    throw DimensionError("HermitianBasis::coordinates: dimension mismatch");
  }
  const Complex* v = rho.data();
  RealVector r(size());
  for (std::size_t b = 0; b < elements_.size(); ++b) {
    const auto& e = elements_[b];
    Complex acc{};
    for (int k = 0; k < e.count; ++k) acc += std::conj(e.entries[k].coef) * v[e.entries[k].pos];
    r(static_cast<Index>(b)) = acc.real();
  }
  return r;
}

ComplexMatrix HermitianBasis::to_operator(const RealVector& r) const {
  if (r.size() != size()) throw DimensionError("HermitianBasis::to_operator: length mismatch");
  ComplexMatrix rho = ComplexMatrix::Zero(d_, d_);
  Complex* v = rho.data();
  for (std::size_t b = 0; b < elements_.size(); ++b) {
    const auto& e = elements_[b];
    for (int k = 0; k < e.count; ++k) v[e.entries[k].pos] += r(static_cast<Index>(b)) * e.entries[k].coef;
  }
  return rho;
}

RealMatrix HermitianBasis::represent(const ComplexMatrix& superop) const {
  const Index n = size();
  if (superop.rows() != n || superop.cols() != n) {
    throw DimensionError("HermitianBasis::represent: expected a d^2 x d^2 superoperator");
  }
  // M U, one column per basis element.
  ComplexMatrix mu(n, n);
  for (Index b = 0; b < n; ++b) {
    const auto& e = elements_[static_cast<std::size_t>(b)];
    mu.col(b) = e.entries[0].coef * superop.col(e.entries[0].pos);
    if (e.count == 2) mu.col(b) += e.entries[1].coef * superop.col(e.entries[1].pos);
  }
  RealMatrix r(n, n);
  for (Index a = 0; a < n; ++a) {
    const auto& e = elements_[static_cast<std::size_t>(a)];
    Eigen::RowVectorXcd row = std::conj(e.entries[0].coef) * mu.row(e.entries[0].pos);
    if (e.count == 2) row += std::conj(e.entries[1].coef) * mu.row(e.entries[1].pos);
    r.row(a) = row.real();
  }
  return r;
}

ComplexMatrix HermitianBasis::to_superoperator(const RealMatrix& r) const {
  const Index n = size();
  if (r.rows() != n || r.cols() != n) {
    throw DimensionError("HermitianBasis::to_superoperator: dimension mismatch");
  }
  // U R, then (U R) U^+.
  ComplexMatrix ur = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    const auto& e = elements_[static_cast<std::size_t>(a)];
    for (int k = 0; k < e.count; ++k) {
      ur.row(e.entries[k].pos) += e.entries[k].coef * r.row(a).cast<Complex>();
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index b = 0; b < n; ++b) {
    const auto& e = elements_[static_cast<std::size_t>(b)];
    for (int k = 0; k < e.count; ++k) {
      out.col(e.entries[k].pos) += std::conj(e.entries[k].coef) * ur.col(b);
    }
  }
  return out;
}

RealLiouvillian::RealLiouvillian(const LindbladGenerator& g,
                                 std::span<const ComplexMatrix> controls)
    : basis_(g.dim()), drift_(basis_.represent(build_superoperator(g))) {
  controls_.reserve(controls.size());
  for (const auto& h : controls) {
    if (h.rows() != g.dim() || h.cols() != g.dim()) {
      throw DimensionError("RealLiouvillian: control dimension mismatch");
    }
    controls_.push_back(basis_.represent(hamiltonian_superoperator(h)));
  }
}

RealMatrix RealLiouvillian::generator(std::span<const double> amplitudes) const {
  if (amplitudes.size() != controls_.size()) {
    throw DimensionError("RealLiouvillian::generator: expected one amplitude per control");
  }
  RealMatrix out = drift_;
  for (std::size_t c = 0; c < controls_.size(); ++c) {
    if (amplitudes[c] != 0.0) out += amplitudes[c] * controls_[c];
  }
  return out;
}

RealMatrix RealLiouvillian::step(std::span<const double> amplitudes, double dt) const {
  return matrix_exp(RealMatrix(dt * generator(amplitudes)));
}

}  // namespace qslab
