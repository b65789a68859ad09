#include "qslab/lindblad.hpp"
#include "qslab/models.hpp"
#include "qslab/norms.hpp"
#include "qslab/operators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace qslab;
using namespace qslab::models;

namespace {

double residual(const ControlSystem& sys, const ComplexMatrix& rho) { return hs_norm(qslab::apply(sys.generator(), rho)); }

}  // namespace

TEST(SingleQubit, StructureAndFixedPoint) {
  const ControlSystem q = make_single_qubit(1.0, 0.5);
  EXPECT_EQ(q.dim(), 2);
  ASSERT_EQ(q.controls().size(), 1u);
  EXPECT_LT((q.controls()[0] - ops::sigma_x()).norm(), 1e-15);
  EXPECT_LE(residual(q, q.target().matrix()), 1e-10);
  EXPECT_GT(residual(q, q.initial().matrix()), 0.1);
  EXPECT_THROW(make_single_qubit(-1.0, 0.5), PreconditionError);
}

TEST(SingleQubit, LargestSingularValueClosedForm) {
  for (double omega : {0.0, 0.5, 1.0, 3.0}) {
    for (double gamma : {0.01, 0.1, 0.5, 0.7, 1.0, 5.0}) {
      const ControlSystem q = make_single_qubit(omega, gamma);
      const double expected = std::max(std::hypot(gamma, 2 * omega), 2 * std::sqrt(2.0) * gamma);
      EXPECT_NEAR(induced_22(q.generator()).value, expected, 1e-10 * std::max(1.0, expected))
          << omega << " " << gamma;
    }
  }
}

TEST(Bell, OrthogonalStatesAndFixedPoint) {
  for (double gamma : {0.1, 1.0, 10.0}) {
    const ControlSystem b = make_bell(1.0, gamma);
    EXPECT_EQ(b.dim(), 4);
    EXPECT_LE(residual(b, b.target().matrix()), 1e-10);
    EXPECT_NEAR(trace_distance(b.initial(), b.target()), 1.0, 1e-14);
  }
  EXPECT_EQ(make_bell(1.0, 1.0, BellControls::Independent).controls().size(), 3u);
}

TEST(Bell, DefaultJumpsHaveASecondFixedPointAndAConservedParity) {
  const ControlSystem b = make_bell(1.0, 0.7, BellControls::Independent);
  const ComplexMatrix p00 = ops::projector(ops::basis_ket(4, 0));
  EXPECT_LE((dissipator_superoperator(b.generator().dissipator(), 4) * vec(p00)).norm(), 1e-14);
  const ComplexMatrix parity = ops::on_site(ops::sigma_x(), 0, 2) * ops::on_site(ops::sigma_x(), 1, 2);
  EXPECT_LT(commutator(b.generator().drift(), parity).norm(), 1e-14);
  for (const auto& h : b.controls()) EXPECT_LT(commutator(h, parity).norm(), 1e-14);
}

TEST(Bell, TargetJumpsGiveAUniqueFixedPoint) {
  for (double gamma : {0.1, 1.0, 10.0}) {
    const ControlSystem b = make_bell(1.0, gamma, BellControls::Collective, BellJumps::Target);
    EXPECT_LE(residual(b, b.target().matrix()), 1e-10);
    EXPECT_GT(residual(b, ops::projector(ops::basis_ket(4, 0))), 0.1 * gamma);
    // one-dimensional kernel of the superoperator
    const Eigen::JacobiSVD<ComplexMatrix> svd(build_superoperator(b.generator()));
    const auto& sv = svd.singularValues();
    EXPECT_LT(sv(sv.size() - 1), 1e-12);
    EXPECT_GT(sv(sv.size() - 2), 1e-3 * std::min(1.0, gamma));
  }
}

TEST(Bell, BellStatesOrthonormal) {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      EXPECT_NEAR(std::abs(bell_state(a).dot(bell_state(b))), a == b ? 1.0 : 0.0, 1e-15);
    }
  }
  EXPECT_THROW(bell_state(4), PreconditionError);
}

TEST(Ising, TwoSpinSpectrum) {
  const Spectrum s = hermitian_eig(ising_drift(IsingSpec::extensive_antiferromagnet(2)));
  const std::vector<double> expected{0.0, 0.0, 0.0, 4.0};
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues(i), expected[static_cast<std::size_t>(i)], 1e-14);
}

TEST(Ising, FourSpinLevelsFromMagnetization) {
  // z-basis energies E = -m + m^2 / 4 with m the magnetization
  const ComplexMatrix h = ising_drift(IsingSpec::extensive_antiferromagnet(4));
  std::map<long, int> counts;
  for (Index a = 0; a < 16; ++a) {
    int m = 0;
    for (int bit = 0; bit < 4; ++bit) m += ((a >> bit) & 1) ? -1 : 1;
    const double e = -m + m * m / 4.0;
    EXPECT_NEAR(h(a, a).real(), e, 1e-14);
    counts[std::lround(e)] += 1;
  }
  EXPECT_EQ(counts[-1], 4);  // frustrated ground level: one spin flipped
  EXPECT_EQ(counts[0], 7);
  EXPECT_NEAR(hermitian_eig(h).spread(), 9.0, 1e-13);
  EXPECT_LT((h - ComplexMatrix(h.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(Ising, DiagonalTermsOnlyShiftEnergies) {
  IsingSpec with = IsingSpec::extensive_antiferromagnet(3);
  IsingSpec without = with;
  without.include_diagonal = false;
  const ComplexMatrix diff = ising_drift(with) - ising_drift(without);
  EXPECT_LT((diff - 3.0 / 3.0 * identity(8)).norm(), 1e-14);
}

TEST(Ising, SpecValidation) {
  IsingSpec s = IsingSpec::extensive_antiferromagnet(3);
  s.couplings[0][1] = 2.0;
  EXPECT_THROW(s.validate(), PreconditionError);
  EXPECT_THROW(IsingSpec::extensive_antiferromagnet(5).validate(), PreconditionError);
  BathSpec b;
  b.beta = 0.0;
  EXPECT_THROW(b.validate(), PreconditionError);
}

TEST(Davies, RateKmsAndLimits) {
  BathSpec bath;
  for (double beta : {0.01, 0.1, 1.0, 10.0}) {
    bath.beta = beta;
    for (double w : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double up = davies_rate(w, bath), down = davies_rate(-w, bath);
      EXPECT_GT(up, 0.0);
      EXPECT_NEAR(down, std::exp(-beta * w) * up, 1e-12 * up);
    }
    const double at_zero = davies_rate(0.0, bath);
    EXPECT_NEAR(at_zero, 2 * std::numbers::pi * bath.eta_g2 / beta, 1e-15);
    EXPECT_NEAR(davies_rate(1e-9, bath), at_zero, 1e-7 * at_zero);
  }
}

TEST(Davies, HighTemperatureRatesScaleInversely) {
  BathSpec hot, hotter;
  hot.beta = 0.02;
  hotter.beta = 0.01;
  for (double w : {-4.0, -2.0, 2.0, 4.0}) {
    EXPECT_NEAR(davies_rate(w, hotter) / davies_rate(w, hot), 2.0, 0.05);
  }
}

TEST(Davies, BohrOperatorsShiftEnergy) {
  for (int n = 1; n <= 4; ++n) {
    const IsingSpec spec = IsingSpec::extensive_antiferromagnet(n);
    const ComplexMatrix h = ising_drift(spec);
    const BohrDecomposition bohr = ising_bohr_decomposition(spec);
    std::vector<ComplexMatrix> totals(static_cast<std::size_t>(n), ComplexMatrix::Zero(h.rows(), h.cols()));
    for (const auto& j : bohr.jumps) {
      // [H, L_w] = -w L_w
      EXPECT_LT((commutator(h, j.op) + j.omega * j.op).norm(), 1e-12);
      totals[static_cast<std::size_t>(j.site)] += j.op;
      bool found = false;
      for (const auto& k : bohr.jumps) {
        if (k.site == j.site && std::abs(k.omega + j.omega) < 1e-9) {
          EXPECT_LT((k.op - j.op.adjoint()).norm(), 1e-12);
          found = true;
        }
      }
      EXPECT_TRUE(found);
    }
    for (int k = 0; k < n; ++k) {
      EXPECT_LT((totals[static_cast<std::size_t>(k)] - ops::on_site(ops::sigma_x(), k, n)).norm(), 1e-12);
    }
  }
}

TEST(Davies, GibbsStateIsFixedPoint) {
  for (int n = 2; n <= 4; ++n) {
    for (double beta : {0.01, 0.1, 1.0, 10.0}) {
      BathSpec bath;
      bath.beta = beta;
      const ControlSystem sys = make_ising_davies(IsingSpec::extensive_antiferromagnet(n), bath);
      EXPECT_LE(residual(sys, sys.target().matrix()), 1e-8) << n << " " << beta;
    }
  }
}

TEST(Davies, ModelStructure) {
  const ControlSystem sys = make_ising_davies(IsingSpec::extensive_antiferromagnet(3), BathSpec{});
  EXPECT_EQ(sys.dim(), 8);
  ASSERT_EQ(sys.controls().size(), 1u);
  const ComplexMatrix x_total = -(ops::on_site(ops::sigma_x(), 0, 3) + ops::on_site(ops::sigma_x(), 1, 3) +
                                  ops::on_site(ops::sigma_x(), 2, 3));
  EXPECT_LT((sys.controls()[0] - x_total).norm(), 1e-14);
  EXPECT_EQ(sys.generator().dissipator().convention(), DissipatorConvention::Half);
}

TEST(Gibbs, LimitsAndNormalization) {
  const ComplexMatrix h = ising_drift(IsingSpec::extensive_antiferromagnet(2));
  EXPECT_LT((gibbs_state(h, 0.0).matrix() - 0.25 * identity(4)).norm(), 1e-15);
  const DensityMatrix cold = gibbs_state(h, 200.0);
  // three-fold degenerate ground level at E = 0
  EXPECT_NEAR(cold.matrix()(3, 3).real(), 0.0, 1e-15);
  EXPECT_NEAR(cold.matrix()(0, 0).real(), 1.0 / 3.0, 1e-14);
  EXPECT_THROW(gibbs_state(h, -1.0), PreconditionError);
}
