#include "qslab/operators.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace qslab;

TEST(Pauli, SquaresToIdentityAndAnticommute) {
  const std::vector<ComplexMatrix> p{ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_LT((p[a] * p[a] - identity(2)).norm(), 1e-15);
    for (std::size_t b = a + 1; b < 3; ++b) EXPECT_LT((p[a] * p[b] + p[b] * p[a]).norm(), 1e-15);
  }
  EXPECT_LT((ops::sigma_x() * ops::sigma_y() - kI * ops::sigma_z()).norm(), 1e-15);
}

TEST(Pauli, LadderOperators) {
  // sigma_- = |0><1| lowers |1> to |0>
  const ComplexVector lowered = ops::sigma_minus() * ops::basis_ket(2, 1);
  EXPECT_LT((lowered - ops::basis_ket(2, 0)).norm(), 1e-15);
  EXPECT_LT((ops::sigma_plus() - ops::sigma_minus().adjoint()).norm(), 1e-15);
  EXPECT_LT((ops::sigma_x() - ops::sigma_minus() - ops::sigma_plus()).norm(), 1e-15);
}

TEST(Kets, PlusMinusAreSigmaXEigenstates) {
  EXPECT_LT((ops::sigma_x() * ops::ket_plus() - ops::ket_plus()).norm(), 1e-15);
  EXPECT_LT((ops::sigma_x() * ops::ket_minus() + ops::ket_minus()).norm(), 1e-15);
  EXPECT_NEAR(std::abs(ops::ket_plus().dot(ops::ket_minus())), 0.0, 1e-15);
}

TEST(Kets, BasisKetValidatesIndex) {
  EXPECT_THROW(ops::basis_ket(2, 2), DimensionError);
  EXPECT_THROW(ops::basis_ket(2, -1), DimensionError);
}

TEST(Projector, IdempotentRankOne) {
  const ComplexMatrix p = ops::projector(ops::ket_minus());
  EXPECT_LT((p * p - p).norm(), 1e-15);
  EXPECT_NEAR(p.trace().real(), 1.0, 1e-15);
  const ComplexMatrix o = ops::outer(ops::basis_ket(2, 0), ops::basis_ket(2, 1));
  EXPECT_LT((o - ops::sigma_minus()).norm(), 1e-15);
}

TEST(OnSite, MostSignificantFirst) {
  // Z on site 0 of 2 qubits is diag(1, 1, -1, -1)
  const ComplexMatrix z0 = ops::on_site(ops::sigma_z(), 0, 2);
  const ComplexMatrix z1 = ops::on_site(ops::sigma_z(), 1, 2);
  EXPECT_EQ(z0(0, 0), Complex(1));
  EXPECT_EQ(z0(1, 1), Complex(1));
  EXPECT_EQ(z0(2, 2), Complex(-1));
  EXPECT_EQ(z1(1, 1), Complex(-1));
  EXPECT_LT((z0 - kron(ops::sigma_z(), identity(2))).norm(), 1e-15);
  EXPECT_THROW(ops::on_site(ops::sigma_z(), 2, 2), DimensionError);
}

TEST(KronAll, MatchesNestedKron) {
  const std::vector<ComplexMatrix> f{ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
  const ComplexMatrix nested = kron(kron(f[0], f[1]), f[2]);
  EXPECT_LT((ops::kron_all(f) - nested).norm(), 1e-15);
  const std::vector<ComplexVector> kets{ops::basis_ket(2, 1), ops::basis_ket(2, 0)};
  EXPECT_LT((ops::kron_kets(kets) - ops::basis_ket(4, 2)).norm(), 1e-15);
}
