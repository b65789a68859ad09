#pragma once

// Small fixed operators and helpers for building qubit models.

#include "qslab/numerics.hpp"

#include <span>

namespace qslab::ops {

ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix sigma_minus();  // |0><1|
ComplexMatrix sigma_plus();   // |1><0|

/// Computational basis ket |index> of dimension d.
ComplexVector basis_ket(Index d, Index index);
ComplexVector ket_plus();
ComplexVector ket_minus();

ComplexMatrix projector(const ComplexVector& ket);
ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);

/// Kronecker product of the given factors, first factor = most significant qubit.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
ComplexVector kron_kets(std::span<const ComplexVector> kets);

/// `op` acting on qubit `site` (0-based, most significant first) of an
/// n-qubit register, identity elsewhere.
ComplexMatrix on_site(const ComplexMatrix& op, int site, int n_qubits);

}  // namespace qslab::ops
