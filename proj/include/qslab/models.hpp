#pragma once

// The three model systems: an amplitude-damped qubit, dissipative Bell-state
// preparation, and an all-to-all Ising register thermalized by a Davies
// generator with Ohmic bath rates.

#include "qslab/lindblad.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace qslab::models {

/// Drift -omega sigma_z, control sigma_x, amplitude damping sigma_- = |0><1|
/// at rate gamma (factor-two convention). Starts in |-><-|, targets |0><0|.
ControlSystem make_single_qubit(double omega, double gamma);

enum class BellControls {
  Collective,   // sigma_1^x + sigma_2^x
  Independent,  // sigma_1^x, sigma_2^x, sigma_1^x sigma_2^x
};

/// Where the three jump operators deposit population.
enum class BellJumps {
  Ground,  // |00><beta_k|; |00><00| is a second fixed point and the target is not reachable
  Target,  // |beta_3><beta_k|; the target is the unique fixed point
};

/// Bell state |beta_k>, k = 0..3.
ComplexVector bell_state(int k);

/// Drift omega (XX + ZZ), jumps |00><beta_k| (k = 0, 1, 2) at rate gamma
/// (factor-two convention). Starts in |--><--|, targets |beta_3><beta_3|.
/// Every term of the default model commutes with sigma_1^x sigma_2^x and the
/// collective one also with the qubit swap, so from |--> the target stays out
/// of reach; BellJumps::Target pumps into |beta_3> instead.
ControlSystem make_bell(double omega, double gamma, BellControls controls = BellControls::Collective,
                        BellJumps jumps = BellJumps::Ground);

struct IsingSpec {
  int n_spins = 2;
  std::vector<double> fields;          // h_i
  std::vector<std::vector<double>> couplings;  // J_ij, symmetric
  bool include_diagonal = true;        // sum over all i, j including i == j

  /// h_i = 1, J_ij = 1/N.
  static IsingSpec extensive_antiferromagnet(int n_spins);
  void validate() const;
};

struct BathSpec {
  double beta = 1.0;
  double omega_c = 8.0 * std::numbers::pi;
  double eta_g2 = 1e-3;

  void validate() const;
};

/// H0 = -sum_i h_i Z_i + sum_{i,j} J_ij Z_i Z_j.
ComplexMatrix ising_drift(const IsingSpec& spec);

/// Ohmic rate 2 pi omega exp(-|omega|/omega_c) / (1 - exp(-beta omega)) eta g^2,
/// with the limit 2 pi eta g^2 / beta at omega = 0.
double davies_rate(double omega, const BathSpec& bath);

struct BohrJump {
  double omega = 0.0;
  int site = 0;
  ComplexMatrix op;
};

/// Jump operators L_{omega,k} = sum_{e_b - e_a = omega} P_a A_k P_b, with P the
/// spectral projectors of the drift. Eigenvalues and Bohr frequencies closer
/// than `tolerance * max(1, spread)` are identified.
struct BohrDecomposition {
  std::vector<double> levels;       // distinct energies, ascending
  std::vector<double> frequencies;  // distinct Bohr frequencies, ascending
  std::vector<BohrJump> jumps;      // nonzero L_{omega,k}
};

BohrDecomposition bohr_decomposition(const ComplexMatrix& drift,
                                     const std::vector<ComplexMatrix>& site_operators,
                                     double tolerance = 1e-9);

/// Gibbs state exp(-beta H) / Z (lowest eigenvalue shifted out first).
DensityMatrix gibbs_state(const ComplexMatrix& h, double beta);

/// Ising drift, Davies dissipator (half convention) with rates davies_rate,
/// control -sum_i X_i, initial |-><-|^N, target the Gibbs state.
ControlSystem make_ising_davies(const IsingSpec& spec, const BathSpec& bath);

/// The Davies jump terms alone (useful for inspection and tests).
BohrDecomposition ising_bohr_decomposition(const IsingSpec& spec);

}  // namespace qslab::models
