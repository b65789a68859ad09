#pragma once

// Lindblad generators, their superoperator matrices, and piecewise-constant
// propagation.
//
// Dissipators are accepted in either printed convention:
//   FactorTwo:  gamma (2 L rho L^+ - L^+ L rho - rho L^+ L)
//   Half:       gamma (L rho L^+ - 1/2 {L^+ L, rho})
// and normalized internally to Half with FactorTwo rates doubled.

#include "qslab/numerics.hpp"
#include "qslab/schedule.hpp"

#include <span>
#include <vector>

namespace qslab {

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and eigenvalues >= -1e-8.
  explicit DensityMatrix(ComplexMatrix rho);

  static DensityMatrix pure(const ComplexVector& ket);
  static DensityMatrix maximally_mixed(Index d);

  [[nodiscard]] const ComplexMatrix& matrix() const { return rho_; }
  [[nodiscard]] Index dim() const { return rho_.rows(); }

 private:
  ComplexMatrix rho_;
};

enum class DissipatorConvention { FactorTwo, Half };

struct JumpTerm {
  ComplexMatrix op;
  double rate = 0.0;
};

class Dissipator {
 public:
  Dissipator() = default;
  Dissipator(std::vector<JumpTerm> terms, DissipatorConvention convention);

  [[nodiscard]] const std::vector<JumpTerm>& terms() const { return terms_; }
  [[nodiscard]] DissipatorConvention convention() const { return convention_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  /// Terms with Half-convention rates.
  [[nodiscard]] std::vector<JumpTerm> half_normalized() const;

 private:
  std::vector<JumpTerm> terms_;
  DissipatorConvention convention_ = DissipatorConvention::Half;
};

class LindbladGenerator {
 public:
  LindbladGenerator(ComplexMatrix drift, Dissipator dissipator);

  [[nodiscard]] const ComplexMatrix& drift() const { return drift_; }
  [[nodiscard]] const Dissipator& dissipator() const { return dissipator_; }
  [[nodiscard]] Index dim() const { return drift_.rows(); }

  /// Same dissipator, different Hamiltonian.
  [[nodiscard]] LindbladGenerator with_drift(ComplexMatrix drift) const;

 private:
  ComplexMatrix drift_;
  Dissipator dissipator_;
};

/// Generator, control Hamiltonians, initial and target states. Every control
/// must commute with the initial state (within 1e-10), which makes the
/// initial state a fixed point of any reference flow built from the controls.
class ControlSystem {
 public:
  ControlSystem(LindbladGenerator generator, std::vector<ComplexMatrix> controls,
                DensityMatrix initial, DensityMatrix target);

  [[nodiscard]] const LindbladGenerator& generator() const { return generator_; }
  [[nodiscard]] const std::vector<ComplexMatrix>& controls() const { return controls_; }
  [[nodiscard]] const DensityMatrix& initial() const { return initial_; }
  [[nodiscard]] const DensityMatrix& target() const { return target_; }
  [[nodiscard]] Index dim() const { return generator_.dim(); }

  /// Drift plus sum_c amplitudes[c] * controls[c].
  [[nodiscard]] ComplexMatrix hamiltonian(std::span<const double> amplitudes) const;

 private:
  LindbladGenerator generator_;
  std::vector<ComplexMatrix> controls_;
  DensityMatrix initial_;
  DensityMatrix target_;
};

/// d^2 x d^2 matrix M with M vec(rho) = vec(-i[H, rho] + D(rho)).
ComplexMatrix build_superoperator(const LindbladGenerator& g);

/// Superoperator of -i[h, .] alone.
ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h);

/// Superoperator of the dissipator alone.
ComplexMatrix dissipator_superoperator(const Dissipator& d, Index dim);

/// d rho / dt = -i[H0, rho] + D(rho), evaluated directly on the operator.
ComplexMatrix apply(const LindbladGenerator& g, const ComplexMatrix& rho);

/// Evolves `rho0` under drift + controls + dissipator with the amplitudes of
/// `schedule`. Returns samples + 1 states at t_k = k T / samples, k = 0..samples
/// (first is rho0, last is the final state).
std::vector<ComplexMatrix> propagate(const LindbladGenerator& g,
                                     std::span<const ComplexMatrix> controls,
                                     const ComplexMatrix& rho0, const Schedule& schedule,
                                     Index samples);

std::vector<DensityMatrix> propagate(const ControlSystem& sys, const Schedule& schedule,
                                     Index samples);

/// End-to-end propagator matrix of the schedule, acting on vec(rho).
ComplexMatrix propagator(const ControlSystem& sys, const Schedule& schedule);

struct CptpReport {
  double min_choi_eigenvalue = 0.0;
  double trace_residual = 0.0;

  [[nodiscard]] bool ok(double psd_tol = 1e-8, double trace_tol = 1e-10) const {
    return min_choi_eigenvalue >= -psd_tol && trace_residual <= trace_tol;
  }
};

/// Choi-matrix positivity and trace preservation of a channel given as a
/// d^2 x d^2 matrix acting on vec(rho).
CptpReport channel_report(const ComplexMatrix& channel);
CptpReport is_cptp(const ControlSystem& sys, const Schedule& schedule);

}  // namespace qslab
