#include "qslab/models.hpp"

#include "qslab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace qslab::models {

ControlSystem make_single_qubit(double omega, double gamma) {
  if (!(omega >= 0.0) || !(gamma >= 0.0)) {
    throw PreconditionError("make_single_qubit: omega and gamma must be non-negative");
  }
  LindbladGenerator g(-omega * ops::sigma_z(),
                      Dissipator({JumpTerm{ops::sigma_minus(), gamma}}, DissipatorConvention::FactorTwo));
  return ControlSystem(std::move(g), {ops::sigma_x()}, DensityMatrix::pure(ops::ket_minus()),
                       DensityMatrix::pure(ops::basis_ket(2, 0)));
}

ComplexVector bell_state(int k) {
  ComplexVector v = ComplexVector::Zero(4);
  // basis order |00>, |01>, |10>, |11>
  switch (k) {
    case 0: v(0) = 1.0; v(3) = 1.0; break;
    case 1: v(1) = 1.0; v(2) = 1.0; break;
    case 2: v(0) = 1.0; v(3) = -1.0; break;
    case 3: v(1) = 1.0; v(2) = -1.0; break;
    default: throw PreconditionError("bell_state: index must be 0..3");
  }
  return v * M_SQRT1_2;
}

ControlSystem make_bell(double omega, double gamma, BellControls controls, BellJumps jumps) {
  if (!(omega >= 0.0) || !(gamma >= 0.0)) {
    throw PreconditionError("make_bell: omega and gamma must be non-negative");
  }
  const ComplexMatrix x1 = ops::on_site(ops::sigma_x(), 0, 2);
  const ComplexMatrix x2 = ops::on_site(ops::sigma_x(), 1, 2);
  const ComplexMatrix z1 = ops::on_site(ops::sigma_z(), 0, 2);
  const ComplexMatrix z2 = ops::on_site(ops::sigma_z(), 1, 2);
  const ComplexMatrix drift = omega * (x1 * x2 + z1 * z2);

  const ComplexVector sink = jumps == BellJumps::Ground ? ops::basis_ket(4, 0) : bell_state(3);
  std::vector<JumpTerm> terms;
  for (int k = 0; k < 3; ++k) terms.push_back({ops::outer(sink, bell_state(k)), gamma});

  std::vector<ComplexMatrix> hs;
  if (controls == BellControls::Collective) {
    hs.push_back(x1 + x2);
  } else {
    hs = {x1, x2, ComplexMatrix(x1 * x2)};
  }

  const std::vector<ComplexVector> minus{ops::ket_minus(), ops::ket_minus()};
  return ControlSystem(LindbladGenerator(drift, Dissipator(std::move(terms), DissipatorConvention::FactorTwo)),
                       std::move(hs), DensityMatrix::pure(ops::kron_kets(minus)),
                       DensityMatrix::pure(bell_state(3)));
}

IsingSpec IsingSpec::extensive_antiferromagnet(int n_spins) {
  IsingSpec spec;
  spec.n_spins = n_spins;
  spec.fields.assign(static_cast<std::size_t>(std::max(n_spins, 0)), 1.0);
  spec.couplings.assign(static_cast<std::size_t>(std::max(n_spins, 0)),
                        std::vector<double>(static_cast<std::size_t>(std::max(n_spins, 0)),
                                            1.0 / static_cast<double>(n_spins)));
  spec.include_diagonal = true;
  return spec;
}

void IsingSpec::validate() const {
  if (n_spins < 1 || n_spins > 4) throw PreconditionError("IsingSpec: n_spins must be in 1..4");
  const auto n = static_cast<std::size_t>(n_spins);
  if (fields.size() != n) throw PreconditionError("IsingSpec: need one field per spin");
  if (couplings.size() != n) throw PreconditionError("IsingSpec: couplings must be N x N");
  for (std::size_t i = 0; i < n; ++i) {
    if (couplings[i].size() != n) throw PreconditionError("IsingSpec: couplings must be N x N");
    if (!std::isfinite(fields[i])) throw PreconditionError("IsingSpec: non-finite field");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(couplings[i][j])) throw PreconditionError("IsingSpec: non-finite coupling");
      if (std::abs(couplings[i][j] - couplings[j][i]) > 1e-14 * std::max(1.0, std::abs(couplings[i][j]))) {
        throw PreconditionError("IsingSpec: couplings must be symmetric");
      }
    }
  }
}

void BathSpec::validate() const {
  if (!(beta > 0.0) || !(omega_c > 0.0) || !(eta_g2 > 0.0) || !std::isfinite(beta) ||
      !std::isfinite(omega_c) || !std::isfinite(eta_g2)) {
    throw PreconditionError("BathSpec: beta, omega_c and eta_g2 must be positive and finite");
  }
}

ComplexMatrix ising_drift(const IsingSpec& spec) {
  spec.validate();
  const int n = spec.n_spins;
  const Index d = Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  std::vector<ComplexMatrix> z;
  for (int i = 0; i < n; ++i) z.push_back(ops::on_site(ops::sigma_z(), i, n));
  for (int i = 0; i < n; ++i) {
    h -= spec.fields[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (i == j && !spec.include_diagonal) continue;
      h += spec.couplings[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
           (z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)]);
    }
  }
  return h;
}

double davies_rate(double omega, const BathSpec& bath) {
  bath.validate();
  if (!std::isfinite(omega)) throw PreconditionError("davies_rate: omega must be finite");
  const double prefactor = 2.0 * std::numbers::pi * bath.eta_g2 * std::exp(-std::abs(omega) / bath.omega_c);
  const double x = bath.beta * omega;
  if (x == 0.0) return prefactor / bath.beta;
  // omega / (1 - e^{-beta omega}) with -expm1 for accuracy at small |x|.
  return prefactor * omega / -std::expm1(-x);
}

namespace {

// Groups sorted values into clusters whose consecutive gaps are <= tol.
std::vector<double> cluster(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> reps;
  std::vector<int> counts;
  for (double v : values) {
    if (!reps.empty() && std::abs(v - reps.back()) <= tol) {
      // running mean keeps the representative centred in its cluster
      counts.back() += 1;
      reps.back() += (v - reps.back()) / counts.back();
    } else {
      reps.push_back(v);
      counts.push_back(1);
    }
  }
  return reps;
}

std::size_t nearest(const std::vector<double>& reps, double v) {
  const auto it = std::lower_bound(reps.begin(), reps.end(), v);
  std::size_t best = static_cast<std::size_t>(std::distance(reps.begin(), it));
  if (best == reps.size()) --best;
  if (best > 0 && std::abs(reps[best - 1] - v) < std::abs(reps[best] - v)) --best;
  return best;
}

}  // namespace

BohrDecomposition bohr_decomposition(const ComplexMatrix& drift,
                                     const std::vector<ComplexMatrix>& site_operators,
                                     double tolerance) {
  const Spectrum spectrum = hermitian_eig(drift);
  const Index d = drift.rows();
  const double tol = tolerance * std::max(1.0, spectrum.spread());

  std::vector<double> eigs(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + d);
  BohrDecomposition out;
  out.levels = cluster(eigs, tol);
  const std::size_t n_levels = out.levels.size();

  std::vector<ComplexMatrix> projectors(n_levels, ComplexMatrix::Zero(d, d));
  for (Index a = 0; a < d; ++a) {
    const auto level = nearest(out.levels, spectrum.eigenvalues(a));
    const ComplexVector ket = spectrum.eigenvectors.col(a);
    projectors[level] += ket * ket.adjoint();
  }

  std::vector<double> diffs;
  for (std::size_t a = 0; a < n_levels; ++a) {
    for (std::size_t b = 0; b < n_levels; ++b) diffs.push_back(out.levels[b] - out.levels[a]);
  }
  out.frequencies = cluster(diffs, tol);

  for (std::size_t k = 0; k < site_operators.size(); ++k) {
    const auto& op = site_operators[k];
    if (op.rows() != d || op.cols() != d) throw DimensionError("bohr_decomposition: operator dimension");
    std::vector<ComplexMatrix> by_freq(out.frequencies.size(), ComplexMatrix::Zero(d, d));
    for (std::size_t a = 0; a < n_levels; ++a) {
      for (std::size_t b = 0; b < n_levels; ++b) {
        const auto f = nearest(out.frequencies, out.levels[b] - out.levels[a]);
        by_freq[f] += projectors[a] * op * projectors[b];
      }
    }
    for (std::size_t f = 0; f < by_freq.size(); ++f) {
      if (by_freq[f].cwiseAbs().maxCoeff() <= 1e-14) continue;
      out.jumps.push_back({out.frequencies[f], static_cast<int>(k), std::move(by_freq[f])});
    }
  }
  return out;
}

DensityMatrix gibbs_state(const ComplexMatrix& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw PreconditionError("gibbs_state: beta must be >= 0");
  const Spectrum s = hermitian_eig(h);
  RealVector w(s.eigenvalues.size());
  for (Index a = 0; a < w.size(); ++a) w(a) = std::exp(-beta * (s.eigenvalues(a) - s.min()));
  w /= w.sum();
  ComplexMatrix rho = s.eigenvectors * w.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

BohrDecomposition ising_bohr_decomposition(const IsingSpec& spec) {
  const ComplexMatrix h0 = ising_drift(spec);
  std::vector<ComplexMatrix> xs;
  for (int i = 0; i < spec.n_spins; ++i) xs.push_back(ops::on_site(ops::sigma_x(), i, spec.n_spins));
  return bohr_decomposition(h0, xs);
}

ControlSystem make_ising_davies(const IsingSpec& spec, const BathSpec& bath) {
  spec.validate();
  bath.validate();
  const int n = spec.n_spins;
  const ComplexMatrix h0 = ising_drift(spec);
  const BohrDecomposition bohr = ising_bohr_decomposition(spec);

  std::vector<JumpTerm> terms;
  terms.reserve(bohr.jumps.size());
  for (const auto& j : bohr.jumps) terms.push_back({j.op, davies_rate(j.omega, bath)});

  ComplexMatrix control = ComplexMatrix::Zero(h0.rows(), h0.cols());
  for (int i = 0; i < n; ++i) control -= ops::on_site(ops::sigma_x(), i, n);

  std::vector<ComplexVector> minus(static_cast<std::size_t>(n), ops::ket_minus());
  return ControlSystem(LindbladGenerator(h0, Dissipator(std::move(terms), DissipatorConvention::Half)),
                       {control}, DensityMatrix::pure(ops::kron_kets(minus)), gibbs_state(h0, bath.beta));
}

}  // namespace qslab::models
