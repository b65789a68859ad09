#include "qslab/bounds.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace qslab {

namespace {

constexpr double kFixedPointTol = 1e-10;

double numerator_of(const ControlSystem& sys) {
  return trace_norm(sys.target().matrix() - sys.initial().matrix());
}

BoundReport make_report(double numerator, double denominator, NormKind kind, std::string notes) {
  if (!(denominator > 0.0)) {
    throw UnreachableError(
        "bound denominator is zero: the target is unreachable under drift and dissipation alone");
  }
  BoundReport r;
  r.numerator = numerator;
  r.denominator = denominator;
  r.bound = numerator / denominator;
  r.norm_kind = kind;
  r.notes = std::move(notes);
  return r;
}

std::string kind_note(NormKind kind) {
  if (kind == NormKind::Induced11Estimate) {
    return "denominator is a rank-one probe lower bound on ||L||_{1->1}; the resulting time is an "
           "estimate of the 1->1 bound, not a certified lower bound";
  }
  return "denominator sqrt(d) ||L||_{2->2} upper-bounds ||L||_{1->1}; certified lower bound";
}

bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Induced11Estimate: return "induced11_estimate";
    case NormKind::SqrtDInduced22: return "sqrt_d_induced22";
  }
  return "unknown";
}

double bound_norm(const ComplexMatrix& superop, Index d, NormKind kind, const BoundOptions& options) {
  if (kind == NormKind::Induced11Estimate) return induced_11_estimate(superop, d, options.induced11).value;
  return std::sqrt(static_cast<double>(d)) * induced_22(superop).value;
}

BoundReport bound_schedule_independent(const ControlSystem& sys, NormKind kind,
                                       const BoundOptions& options) {
  const ComplexMatrix superop = build_superoperator(sys.generator());
  const double denominator = bound_norm(superop, sys.dim(), kind, options);
  return make_report(numerator_of(sys), denominator, kind, kind_note(kind));
}

ReferenceGenerator ReferenceGenerator::following_controls(const ControlSystem& sys) {
  return ReferenceGenerator{sys.controls(), std::nullopt};
}

ReferenceGenerator ReferenceGenerator::none() { return ReferenceGenerator{{}, std::nullopt}; }

BoundReport bound_general(const ControlSystem& sys, const ReferenceGenerator& ref,
                          const Schedule& schedule, NormKind kind, const BoundOptions& options) {
  const Index n = schedule.intervals();
  const auto n_ref = static_cast<Index>(ref.hamiltonians.size());
  if (schedule.controls() != static_cast<Index>(sys.controls().size())) {
    throw ScheduleError("bound_general: schedule/control count mismatch");
  }
  if (ref.amplitudes) {
    if (ref.amplitudes->rows() != n || ref.amplitudes->cols() != n_ref) {
      throw DimensionError("bound_general: reference amplitudes must be intervals x hamiltonians");
    }
  } else if (n_ref != 0 && n_ref != schedule.controls()) {
    throw DimensionError("bound_general: reference follows the schedule but has a different control count");
  }
  for (const auto& h : ref.hamiltonians) {
    if (h.rows() != sys.dim() || h.cols() != sys.dim()) {
      throw DimensionError("bound_general: reference Hamiltonian dimension mismatch");
    }
    if (commutator(h, sys.initial().matrix()).cwiseAbs().maxCoeff() > kFixedPointTol) {
      throw PreconditionError("bound_general: initial state is not a fixed point of the reference flow");
    }
  }

  const ComplexMatrix dissipative = dissipator_superoperator(sys.generator().dissipator(), sys.dim());
  double denominator = 0.0;
  for (Index j = 0; j < n; ++j) {
    // Collect coefficient * matrix terms and merge identical matrices so that
    // a reference equal to the controls cancels them exactly.
    std::vector<std::pair<const ComplexMatrix*, double>> terms;
    auto add = [&terms](const ComplexMatrix& m, double c) {
      for (auto& t : terms) {
        if (same_matrix(*t.first, m)) {
          t.second += c;
          return;
        }
      }
      terms.emplace_back(&m, c);
    };
    for (Index c = 0; c < schedule.controls(); ++c) {
      add(sys.controls()[static_cast<std::size_t>(c)], schedule.amplitude(j, c));
    }
    for (Index c = 0; c < n_ref; ++c) {
      const double g = ref.amplitudes ? (*ref.amplitudes)(j, c) : schedule.amplitude(j, c);
      add(ref.hamiltonians[static_cast<std::size_t>(c)], -g);
    }
    ComplexMatrix h = sys.generator().drift();
    for (const auto& [m, c] : terms) {
      if (c != 0.0) h += c * *m;
    }
    const ComplexMatrix superop = hamiltonian_superoperator(h) + dissipative;
    denominator = std::max(denominator, bound_norm(superop, sys.dim(), kind, options));
  }
  return make_report(numerator_of(sys), denominator, kind,
                     kind_note(kind) + "; maximum over " + std::to_string(n) + " intervals");
}

BoundReport bound_trajectory_avg(const ControlSystem& sys, const Schedule& schedule) {
  if (schedule.controls() != static_cast<Index>(sys.controls().size())) {
    throw ScheduleError("bound_trajectory_avg: schedule/control count mismatch");
  }
  const ComplexMatrix dissipative = dissipator_superoperator(sys.generator().dissipator(), sys.dim());
  const double sqrt_d = std::sqrt(static_cast<double>(sys.dim()));
  double total = 0.0;
  for (Index j = 0; j < schedule.intervals(); ++j) {
    const RealVector amps = schedule.amplitudes().row(j).transpose();
    const ComplexMatrix h = sys.hamiltonian(std::span<const double>(amps.data(), amps.size()));
    total += sqrt_d * induced_22(ComplexMatrix(hamiltonian_superoperator(h) + dissipative)).value;
  }
  const double average = total / static_cast<double>(schedule.intervals());
  return make_report(numerator_of(sys), average, NormKind::SqrtDInduced22,
                     "time-averaged sqrt(d) ||L_t||_{2->2} over the schedule");
}

double single_qubit_analytic_bound(double omega, double gamma, NumeratorConvention numerator) {
  if (!(omega >= 0.0) || !(gamma >= 0.0)) {
    throw PreconditionError("single_qubit_analytic_bound: omega and gamma must be non-negative");
  }
  const double modulus = std::hypot(gamma, 2.0 * omega);
  if (modulus == 0.0) {
    throw UnreachableError("single_qubit_analytic_bound: omega = gamma = 0, preparation time diverges");
  }
  const double num = numerator == NumeratorConvention::Unit ? 1.0 : std::sqrt(2.0);
  return num / (std::sqrt(2.0) * modulus);
}

SingleQubitDenominators single_qubit_denominators(double omega, double gamma) {
  SingleQubitDenominators out;
  const double coherence = std::hypot(gamma, 2.0 * omega);
  const double population = 2.0 * std::sqrt(2.0) * gamma;
  out.coherence = std::sqrt(2.0) * coherence;
  out.definitional = std::sqrt(2.0) * std::max(coherence, population);
  out.regime = population > coherence ? SingleQubitRegime::PopulationDominated
                                      : SingleQubitRegime::CoherenceDominated;
  return out;
}

ClosedSystemReport closed_system_report(const ComplexVector& psi0, const ComplexVector& psi_t,
                                        const ComplexMatrix& h0) {
  const Index d = h0.rows();
  if (psi0.size() != d || psi_t.size() != d || h0.cols() != d) {
    throw DimensionError("closed_system_report: dimension mismatch");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10 || std::abs(psi_t.norm() - 1.0) > 1e-10) {
    throw PreconditionError("closed_system_report: states must be unit vectors");
  }
  const Spectrum spectrum = hermitian_eig(h0);

  ClosedSystemReport r;
  const double overlap = std::min(1.0, std::abs(psi_t.dot(psi0)));
  r.trace_norm_distance = trace_norm(psi_t * psi_t.adjoint() - psi0 * psi0.adjoint());
  r.bures = std::sqrt(std::max(0.0, 2.0 * (1.0 - overlap)));
  const ComplexVector h_psi = h0 * psi_t;
  const double mean = psi_t.dot(h_psi).real();
  r.variance = std::max(0.0, h_psi.squaredNorm() - mean * mean);
  r.spread = spectrum.spread();

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, r.spread);
  if (r.variance <= 1e-28 * scale * scale) {
    r.reference_divergent = r.bures > 0.0;
    r.reference_bound = r.reference_divergent ? inf : 0.0;
  } else {
    r.reference_bound = r.bures / std::sqrt(r.variance);
  }
  if (r.spread > 0.0) {
    r.open_bound = r.trace_norm_distance / r.spread;
  } else {
    r.open_bound = r.trace_norm_distance > 0.0 ? inf : 0.0;
  }

  constexpr double rel = 1e-12;
  constexpr double abs_tol = 1e-12;
  r.chain_holds = r.trace_norm_distance <= 2.0 * r.bures * (1.0 + rel) + abs_tol &&
                  2.0 * r.bures <= std::sqrt(2.0) * r.trace_norm_distance * (1.0 + rel) + abs_tol;
  r.popoviciu_holds = std::sqrt(r.variance) <= 0.5 * r.spread * (1.0 + rel) + abs_tol;
  r.comparison_holds = r.open_bound <= r.reference_bound * (1.0 + rel) + abs_tol;
  return r;
}

}  // namespace qslab
