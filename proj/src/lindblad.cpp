#include "qslab/lindblad.hpp"

#include "qslab/liouvillian.hpp"

#include <algorithm>
#include <cmath>

namespace qslab {

namespace {

constexpr double kDensityHermitianTol = 1e-10;
constexpr double kDensityTraceTol = 1e-10;
constexpr double kDensityEigenTol = 1e-8;
constexpr double kDriftHermitianTol = 1e-12;
constexpr double kCommuteTol = 1e-10;

void require_square(const ComplexMatrix& m, Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(d) + "x" +
                         std::to_string(d) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw DimensionError("DensityMatrix: expected a non-empty square matrix");
  }
  if (!rho_.allFinite()) throw PreconditionError("DensityMatrix: non-finite entries");
  if (!is_hermitian(rho_, kDensityHermitianTol)) {
    throw PreconditionError("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > kDensityTraceTol) {
    throw PreconditionError("DensityMatrix: trace differs from 1");
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint());
  if (hermitian_eigenvalues(rho_)(0) < -kDensityEigenTol) {
    throw PreconditionError("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& ket) {
  const double n = ket.norm();
  if (!(n > 0.0)) throw PreconditionError("DensityMatrix::pure: zero vector");
  const ComplexVector unit = ket / n;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

Dissipator::Dissipator(std::vector<JumpTerm> terms, DissipatorConvention convention)
    : terms_(std::move(terms)), convention_(convention) {
  for (const auto& t : terms_) {
    if (!(t.rate >= 0.0) || !std::isfinite(t.rate)) {
      throw PreconditionError("Dissipator: rates must be finite and non-negative");
    }
    if (t.op.rows() != t.op.cols()) throw DimensionError("Dissipator: jump operator not square");
    if (!t.op.allFinite()) throw PreconditionError("Dissipator: non-finite jump operator");
  }
}

std::vector<JumpTerm> Dissipator::half_normalized() const {
  std::vector<JumpTerm> out = terms_;
  if (convention_ == DissipatorConvention::FactorTwo) {
    for (auto& t : out) t.rate *= 2.0;
  }
  return out;
}

LindbladGenerator::LindbladGenerator(ComplexMatrix drift, Dissipator dissipator)
    : drift_(std::move(drift)), dissipator_(std::move(dissipator)) {
  if (drift_.rows() != drift_.cols() || drift_.rows() == 0) {
    throw DimensionError("LindbladGenerator: drift must be a non-empty square matrix");
  }
  if (!drift_.allFinite()) throw PreconditionError("LindbladGenerator: non-finite drift");
  const double scale = std::max(1.0, drift_.cwiseAbs().maxCoeff());
  if (!is_hermitian(drift_, kDriftHermitianTol * scale)) {
    throw PreconditionError("LindbladGenerator: drift is not Hermitian");
  }
  for (const auto& t : dissipator_.terms()) require_square(t.op, dim(), "LindbladGenerator jump");
}

LindbladGenerator LindbladGenerator::with_drift(ComplexMatrix drift) const {
  return LindbladGenerator(std::move(drift), dissipator_);
}

ControlSystem::ControlSystem(LindbladGenerator generator, std::vector<ComplexMatrix> controls,
                             DensityMatrix initial, DensityMatrix target)
    : generator_(std::move(generator)),
      controls_(std::move(controls)),
      initial_(std::move(initial)),
      target_(std::move(target)) {
  const Index d = generator_.dim();
  require_square(initial_.matrix(), d, "ControlSystem initial");
  require_square(target_.matrix(), d, "ControlSystem target");
  for (const auto& h : controls_) {
    require_square(h, d, "ControlSystem control");
    if (!is_hermitian(h, kDriftHermitianTol * std::max(1.0, h.cwiseAbs().maxCoeff()))) {
      throw PreconditionError("ControlSystem: control Hamiltonian is not Hermitian");
    }
    if (commutator(h, initial_.matrix()).cwiseAbs().maxCoeff() > kCommuteTol) {
      throw PreconditionError("ControlSystem: initial state does not commute with a control");
    }
  }
}

ComplexMatrix ControlSystem::hamiltonian(std::span<const double> amplitudes) const {
  if (amplitudes.size() != controls_.size()) {
    throw DimensionError("ControlSystem::hamiltonian: expected one amplitude per control");
  }
  ComplexMatrix h = generator_.drift();
  for (std::size_t c = 0; c < controls_.size(); ++c) h += amplitudes[c] * controls_[c];
  return h;
}

ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h) {
  const Index d = h.rows();
  const ComplexMatrix id = identity(d);
  return -kI * (kron(id, h) - kron(h.transpose(), id));
}

ComplexMatrix dissipator_superoperator(const Dissipator& dissipator, Index d) {
  const ComplexMatrix id = identity(d);
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& t : dissipator.half_normalized()) {
    require_square(t.op, d, "dissipator_superoperator");
    if (t.rate == 0.0) continue;
    const ComplexMatrix ldl = t.op.adjoint() * t.op;
    m += t.rate * (kron(t.op.conjugate(), t.op) - 0.5 * kron(id, ldl) -
                   0.5 * kron(ldl.transpose(), id));
  }
  return m;
}

ComplexMatrix build_superoperator(const LindbladGenerator& g) {
  return hamiltonian_superoperator(g.drift()) + dissipator_superoperator(g.dissipator(), g.dim());
}

ComplexMatrix apply(const LindbladGenerator& g, const ComplexMatrix& rho) {
  require_square(rho, g.dim(), "apply");
  ComplexMatrix out = -kI * commutator(g.drift(), rho);
  for (const auto& t : g.dissipator().half_normalized()) {
    if (t.rate == 0.0) continue;
    const ComplexMatrix ldl = t.op.adjoint() * t.op;
    out += t.rate * (t.op * rho * t.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

std::vector<ComplexMatrix> propagate(const LindbladGenerator& g,
                                     std::span<const ComplexMatrix> controls,
                                     const ComplexMatrix& rho0, const Schedule& schedule,
                                     Index samples) {
  require_square(rho0, g.dim(), "propagate");
  if (samples < 1) throw ScheduleError("propagate: at least one sample is required");
  if (schedule.controls() != static_cast<Index>(controls.size())) {
    throw ScheduleError("propagate: schedule has " + std::to_string(schedule.controls()) +
                        " control columns, system has " + std::to_string(controls.size()));
  }

  const RealLiouvillian liouvillian(g, controls);
  const HermitianBasis& basis = liouvillian.basis();
  const double total = schedule.total_time();
  const Index n = schedule.intervals();
  const double dt = schedule.interval_length();
  const double eps = 1e-12 * std::max(1.0, total);

  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(samples + 1));
  out.push_back(rho0);

  RealVector r = basis.coordinates(rho0);
  double t_now = 0.0;
  Index next_sample = 1;
  auto sample_time = [&](Index k) { return total * static_cast<double>(k) / static_cast<double>(samples); };

  for (Index j = 0; j < n && next_sample <= samples; ++j) {
    const double t_end = (j + 1 == n) ? total : dt * static_cast<double>(j + 1);
    const RealVector amps = schedule.amplitudes().row(j).transpose();
    const RealMatrix gen = liouvillian.generator(std::span<const double>(amps.data(), amps.size()));
    while (next_sample <= samples && sample_time(next_sample) <= t_end + eps) {
      const double ts = std::min(sample_time(next_sample), t_end);
      if (ts > t_now) {
        r = matrix_exp(RealMatrix((ts - t_now) * gen)) * r;
        t_now = ts;
      }
      out.push_back(basis.to_operator(r));
      ++next_sample;
    }
    if (t_end > t_now && next_sample <= samples) {
      r = matrix_exp(RealMatrix((t_end - t_now) * gen)) * r;
      t_now = t_end;
    }
  }
  // T = 0: every sample is the initial state.
  while (static_cast<Index>(out.size()) < samples + 1) out.push_back(basis.to_operator(r));
  return out;
}

std::vector<DensityMatrix> propagate(const ControlSystem& sys, const Schedule& schedule,
                                     Index samples) {
  const auto states = propagate(sys.generator(), sys.controls(), sys.initial().matrix(), schedule,
                                samples);
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  for (const auto& s : states) out.emplace_back(s);
  return out;
}

ComplexMatrix propagator(const ControlSystem& sys, const Schedule& schedule) {
  if (schedule.controls() != static_cast<Index>(sys.controls().size())) {
    throw ScheduleError("propagator: schedule/control count mismatch");
  }
  const Index d = sys.dim();
  const ComplexMatrix dissipative = dissipator_superoperator(sys.generator().dissipator(), d);
  ComplexMatrix total = ComplexMatrix::Identity(d * d, d * d);
  const double dt = schedule.interval_length();
  for (Index j = 0; j < schedule.intervals(); ++j) {
    const RealVector amps = schedule.amplitudes().row(j).transpose();
    const ComplexMatrix h = sys.hamiltonian(std::span<const double>(amps.data(), amps.size()));
    const ComplexMatrix m = hamiltonian_superoperator(h) + dissipative;
    total = matrix_exp(ComplexMatrix(dt * m)) * total;
  }
  return total;
}

CptpReport channel_report(const ComplexMatrix& channel) {
  const Index n = channel.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (channel.cols() != n || d * d != n) {
    throw DimensionError("channel_report: expected a d^2 x d^2 matrix");
  }
  // Choi matrix: block (i, j) is the image of |i><j|.
  ComplexMatrix choi(n, n);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      choi.block(i * d, j * d, d, d) = unvec(channel.col(i + j * d), d);
    }
  }
  choi = 0.5 * (choi + choi.adjoint());

  const ComplexVector vec_id = vec(identity(d));
  const ComplexVector residual = channel.adjoint() * vec_id - vec_id;

  CptpReport report;
  report.min_choi_eigenvalue = hermitian_eigenvalues(choi)(0);
  report.trace_residual = residual.cwiseAbs().maxCoeff();
  return report;
}

CptpReport is_cptp(const ControlSystem& sys, const Schedule& schedule) {
  return channel_report(propagator(sys, schedule));
}

}  // namespace qslab
