#pragma once

// Lower bounds on the time needed to steer rho0 to rho_T.
//
// For any reference Hamiltonian flow that fixes rho0,
//   T >= ||rho_T - rho0||_1 / max_t ||L_t - Lref_t||_{1->1}.
// Taking the reference to be the control part of the Hamiltonian removes the
// schedule entirely, leaving the drift + dissipator generator L in the
// denominator. ||L||_{1->1} is replaced either by a certified rank-one probe
// estimate or by the upper bound sqrt(d) ||L||_{2->2}; only the latter gives
// a provably valid time bound, since the probe estimate can undershoot.

#include "qslab/lindblad.hpp"
#include "qslab/norms.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace qslab {

/// The bound's denominator vanished: the target is unreachable from the
/// drift and dissipator alone, or the bound diverges.
class UnreachableError : public std::domain_error {
 public:
  explicit UnreachableError(const std::string& what) : std::domain_error(what) {}
};

enum class NormKind { Induced11Estimate, SqrtDInduced22 };

const char* to_string(NormKind kind);

struct BoundReport {
  double numerator = 0.0;    // ||rho_T - rho0||_1
  double denominator = 0.0;
  double bound = 0.0;        // numerator / denominator
  NormKind norm_kind = NormKind::SqrtDInduced22;
  std::string notes;
};

struct BoundOptions {
  Induced11Options induced11{};
};

/// Superoperator norm used as a bound denominator.
double bound_norm(const ComplexMatrix& superop, Index d, NormKind kind, const BoundOptions& options = {});

BoundReport bound_schedule_independent(const ControlSystem& sys, NormKind kind,
                                       const BoundOptions& options = {});

/// Reference flow -i[sum_c g_c(t) H~_c, .]. Without explicit amplitudes the
/// reference follows the schedule's own control amplitudes column by column.
struct ReferenceGenerator {
  std::vector<ComplexMatrix> hamiltonians;
  std::optional<RealMatrix> amplitudes;

  /// H~_c = H_c, g_c = f_c: cancels the controls exactly.
  static ReferenceGenerator following_controls(const ControlSystem& sys);
  /// Lref = 0.
  static ReferenceGenerator none();
};

/// Denominator is the largest interval norm of L_t - Lref_t. Throws
/// PreconditionError when a reference Hamiltonian does not commute with rho0,
/// UnreachableError when the denominator is zero.
BoundReport bound_general(const ControlSystem& sys, const ReferenceGenerator& ref,
                          const Schedule& schedule, NormKind kind = NormKind::SqrtDInduced22,
                          const BoundOptions& options = {});

/// Denominator is the time average of sqrt(d) ||L_t||_{2->2} over the
/// schedule's intervals, which upper-bounds the average induced 1-norm.
BoundReport bound_trajectory_avg(const ControlSystem& sys, const Schedule& schedule);

enum class NumeratorConvention {
  Unit,          // numerator 1, the customary normalization for the |-> to |0> transfer
  Definitional,  // ||rho_T - rho0||_1 = sqrt(2)
};

/// 1/(sqrt2 |gamma + 2 i omega|) times the chosen numerator. Throws
/// UnreachableError when omega = gamma = 0.
double single_qubit_analytic_bound(double omega, double gamma, NumeratorConvention numerator);

enum class SingleQubitRegime { CoherenceDominated, PopulationDominated };

/// Closed-form denominators for the amplitude-damped qubit: the largest
/// singular value of its generator is max(sqrt(gamma^2 + 4 omega^2), 2 sqrt2 gamma);
/// the population mode takes over once gamma > 2 omega / sqrt7.
struct SingleQubitDenominators {
  double definitional = 0.0;  // sqrt2 * max(...)
  double coherence = 0.0;     // sqrt2 * sqrt(gamma^2 + 4 omega^2)
  SingleQubitRegime regime = SingleQubitRegime::CoherenceDominated;
};

SingleQubitDenominators single_qubit_denominators(double omega, double gamma);

struct ClosedSystemReport {
  double trace_norm_distance = 0.0;  // ||rho_T - rho0||_1
  double bures = 0.0;                // sqrt(2 (1 - |<psi_T|psi0>|))
  double variance = 0.0;             // Var_{psi_T}(H0)
  double spread = 0.0;               // E_max - E_min = ||L||_{1->1} = ||L||_{2->2}
  double reference_bound = 0.0;      // D_B / sqrt(Var), +inf when divergent
  double open_bound = 0.0;           // ||rho_T - rho0||_1 / spread
  bool reference_divergent = false;
  bool chain_holds = false;          // ||.||_1 <= 2 D_B <= sqrt2 ||.||_1
  bool popoviciu_holds = false;      // sqrt(Var) <= spread / 2
  bool comparison_holds = false;     // open_bound <= reference_bound
};

/// Compares the dissipation-free bound with the Bures-distance / variance
/// bound for pure states.
ClosedSystemReport closed_system_report(const ComplexVector& psi0, const ComplexVector& psi_t,
                                        const ComplexMatrix& h0);

}  // namespace qslab
