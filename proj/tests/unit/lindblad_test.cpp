#include "qslab/lindblad.hpp"
#include "qslab/models.hpp"
#include "qslab/operators.hpp"
#include "qslab/random.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace qslab;

namespace {

// Superoperator assembled column by column from the operator-level action.
ComplexMatrix superoperator_by_columns(const LindbladGenerator& g) {
  const Index d = g.dim();
  ComplexMatrix m(d * d, d * d);
  for (Index k = 0; k < d * d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(k % d, k / d) = 1.0;
    m.col(k) = vec(qslab::apply(g, e));
  }
  return m;
}

// exp of the full superoperator per interval, via Eigen's matrix exponential.
ComplexMatrix oracle_final_state(const ControlSystem& sys, const Schedule& s) {
  ComplexVector v = vec(sys.initial().matrix());
  for (Index j = 0; j < s.intervals(); ++j) {
    const RealVector amps = s.amplitudes().row(j).transpose();
    const LindbladGenerator gj =
        sys.generator().with_drift(sys.hamiltonian(std::span<const double>(amps.data(), amps.size())));
    const ComplexMatrix m = superoperator_by_columns(gj) * s.interval_length();
    v = m.exp() * v;
  }
  return unvec(v, sys.dim());
}

}  // namespace

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(3));
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{m}, PreconditionError);  // trace 2
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{m}, PreconditionError);  // negative eigenvalue
  ComplexMatrix h = 0.5 * ComplexMatrix::Identity(2, 2);
  h(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{h}, PreconditionError);  // not Hermitian
  EXPECT_THROW(DensityMatrix{ComplexMatrix::Zero(2, 3)}, DimensionError);
  EXPECT_THROW(DensityMatrix::pure(ComplexVector::Zero(2)), PreconditionError);
}

TEST(DensityMatrix, PureNormalizes) {
  const DensityMatrix rho = DensityMatrix::pure(ComplexVector::Constant(2, 3.0));
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 1).real(), 0.5, 1e-15);
}

TEST(Dissipator, RejectsNegativeRates) {
  EXPECT_THROW(Dissipator({JumpTerm{ops::sigma_minus(), -1.0}}, DissipatorConvention::Half),
               PreconditionError);
}

TEST(Dissipator, FactorTwoNormalizesToDoubledRate) {
  const Dissipator d({JumpTerm{ops::sigma_minus(), 0.3}}, DissipatorConvention::FactorTwo);
  const auto half = d.half_normalized();
  ASSERT_EQ(half.size(), 1u);
  EXPECT_DOUBLE_EQ(half[0].rate, 0.6);
}

TEST(Generator, RejectsNonHermitianDrift) {
  EXPECT_THROW(LindbladGenerator(ops::sigma_minus(), Dissipator{}), PreconditionError);
}

TEST(Superoperator, MatchesOperatorActionOnRandomGenerators) {
  random::Engine rng(31);
  for (int i = 0; i < 30; ++i) {
    const Index d = 2 + i % 3;
    const LindbladGenerator g = random::generator(d, 1 + i % 3, rng);
    const ComplexMatrix m = build_superoperator(g);
    EXPECT_LT((m - superoperator_by_columns(g)).norm(), 1e-12 * std::max(1.0, m.norm()));
  }
}

TEST(Superoperator, TracePreservingAndHermiticityPreserving) {
  random::Engine rng(37);
  for (int i = 0; i < 30; ++i) {
    const Index d = 2 + i % 3;
    const LindbladGenerator g = random::generator(d, 2, rng);
    const ComplexMatrix rho = random::density(d, rng);
    const ComplexMatrix out = unvec(build_superoperator(g) * vec(rho), d);
    EXPECT_LT(std::abs(out.trace()), 1e-12 * std::max(1.0, out.norm()));
    EXPECT_LT((out - out.adjoint()).norm(), 1e-12 * std::max(1.0, out.norm()));
  }
}

TEST(Superoperator, ConventionIndependence) {
  random::Engine rng(41);
  for (int i = 0; i < 20; ++i) {
    const Index d = 2 + i % 3;
    const ComplexMatrix l = random::ginibre(d, rng);
    const double gamma = 0.1 + 0.1 * i;
    const ComplexMatrix a =
        dissipator_superoperator(Dissipator({JumpTerm{l, gamma}}, DissipatorConvention::FactorTwo), d);
    const ComplexMatrix b =
        dissipator_superoperator(Dissipator({JumpTerm{l, 2.0 * gamma}}, DissipatorConvention::Half), d);
    EXPECT_LT((a - b).norm(), 1e-13 * std::max(1.0, a.norm()));
  }
}

TEST(Superoperator, AmplitudeDampingByHand) {
  // gamma (2 s- rho s+ - {s+ s-, rho}) with rho = |1><1| gives 2 gamma (|0><0| - |1><1|)
  const double gamma = 0.7;
  const LindbladGenerator g(ComplexMatrix::Zero(2, 2),
                            Dissipator({JumpTerm{ops::sigma_minus(), gamma}}, DissipatorConvention::FactorTwo));
  const ComplexMatrix out = qslab::apply(g, ops::projector(ops::basis_ket(2, 1)));
  EXPECT_NEAR(out(0, 0).real(), 2 * gamma, 1e-15);
  EXPECT_NEAR(out(1, 1).real(), -2 * gamma, 1e-15);
}

TEST(ControlSystem, RequiresCommutingInitialState) {
  const LindbladGenerator g(ops::sigma_z(), Dissipator{});
  EXPECT_THROW(ControlSystem(g, {ops::sigma_z()}, DensityMatrix::pure(ops::ket_minus()),
                             DensityMatrix::pure(ops::basis_ket(2, 0))),
               PreconditionError);
  EXPECT_NO_THROW(ControlSystem(g, {ops::sigma_x()}, DensityMatrix::pure(ops::ket_minus()),
                                DensityMatrix::pure(ops::basis_ket(2, 0))));
}

TEST(Propagate, DampedQubitClosedForm) {
  const double omega = 1.3, gamma = 0.4, total = 2.5;
  const ControlSystem sys = models::make_single_qubit(omega, gamma);
  const Index samples = 10;
  const auto states = propagate(sys, Schedule::zero(total, 20, 1, 20.0), samples);
  ASSERT_EQ(states.size(), static_cast<std::size_t>(samples + 1));
  for (Index k = 0; k <= samples; ++k) {
    const double t = total * static_cast<double>(k) / static_cast<double>(samples);
    const ComplexMatrix& rho = states[static_cast<std::size_t>(k)].matrix();
    EXPECT_NEAR(rho(1, 1).real(), 0.5 * std::exp(-2 * gamma * t), 1e-12);
    const Complex coherence = -0.5 * std::exp(Complex(-gamma, 2 * omega) * t);
    EXPECT_LT(std::abs(rho(0, 1) - coherence), 1e-12);
  }
  EXPECT_LT((states.front().matrix() - sys.initial().matrix()).norm(), 1e-15);
}

TEST(Propagate, MatchesFullSuperoperatorExponential) {
  random::Engine rng(43);
  std::uniform_real_distribution<double> amp(-4.0, 4.0);
  for (int i = 0; i < 6; ++i) {
    const ControlSystem sys = i % 2 == 0 ? models::make_single_qubit(1.0, 0.3)
                                         : models::make_bell(0.7, 0.5, models::BellControls::Independent);
    RealMatrix a(7, static_cast<Index>(sys.controls().size()));
    for (Index j = 0; j < a.size(); ++j) a(j) = amp(rng);
    const Schedule s(1.7, a, 4.0);
    const auto states = propagate(sys, s, 1);
    EXPECT_LT((states.back().matrix() - oracle_final_state(sys, s)).norm(), 1e-11);
    const ComplexMatrix via_channel = unvec(propagator(sys, s) * vec(sys.initial().matrix()), sys.dim());
    EXPECT_LT((states.back().matrix() - via_channel).norm(), 1e-11);
  }
}

TEST(Propagate, CompositionOfTimeSplits) {
  const ControlSystem sys = models::make_single_qubit(1.0, 0.5);
  RealVector f(1);
  f << 2.0;
  const Schedule whole = Schedule::constant(3.0, 6, f, 5.0);
  const auto direct = propagate(sys, whole, 1).back();
  const auto first = propagate(sys, whole.slice(0, 2), 1).back();
  const auto second = propagate(sys.generator(), sys.controls(), first.matrix(), whole.slice(2, 4), 1).back();
  EXPECT_LT((direct.matrix() - second).norm(), 1e-12);
}

TEST(Propagate, SampleCountAndControlMismatch) {
  const ControlSystem sys = models::make_single_qubit(1.0, 0.5);
  EXPECT_THROW(propagate(sys, Schedule::zero(1.0, 4, 2, 1.0), 1), ScheduleError);
  EXPECT_THROW(propagate(sys, Schedule::zero(1.0, 4, 1, 1.0), 0), ScheduleError);
  const auto states = propagate(sys, Schedule::zero(1.0, 4, 1, 1.0), 7);
  EXPECT_EQ(states.size(), 8u);
}

TEST(Propagate, ZeroDurationIsIdentity) {
  const ControlSystem sys = models::make_single_qubit(1.0, 0.5);
  const auto states = propagate(sys, Schedule::zero(0.0, 4, 1, 1.0), 3);
  for (const auto& s : states) EXPECT_LT((s.matrix() - sys.initial().matrix()).norm(), 1e-15);
}

TEST(Channel, RandomSchedulesAreCptp) {
  random::Engine rng(47);
  std::uniform_real_distribution<double> amp(-10.0, 10.0);
  for (int i = 0; i < 10; ++i) {
    const ControlSystem sys = i % 2 == 0 ? models::make_single_qubit(1.0, 2.0)
                                         : models::make_bell(1.0, 0.2, models::BellControls::Independent);
    RealMatrix a(5, static_cast<Index>(sys.controls().size()));
    for (Index j = 0; j < a.size(); ++j) a(j) = amp(rng);
    const CptpReport rep = is_cptp(sys, Schedule(0.9, a, 10.0));
    EXPECT_TRUE(rep.ok()) << rep.min_choi_eigenvalue << " " << rep.trace_residual;
  }
}

TEST(Channel, TransposeIsNotCompletelyPositive) {
  // vec(rho^T) as a channel: trace preserving, positive, but its Choi matrix is the swap.
  ComplexMatrix t = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) t(j + 2 * i, i + 2 * j) = 1.0;
  const CptpReport rep = channel_report(t);
  EXPECT_LT(rep.min_choi_eigenvalue, -0.5);
  EXPECT_LT(rep.trace_residual, 1e-15);
  EXPECT_FALSE(rep.ok());
}
