#include "qslab/checks.hpp"

#include "qslab/bounds.hpp"
#include "qslab/control.hpp"
#include "qslab/liouvillian.hpp"
#include "qslab/models.hpp"
#include "qslab/norms.hpp"
#include "qslab/operators.hpp"
#include "qslab/random.hpp"
#include "qslab/seeding.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

namespace qslab::checks {

namespace {

// Accumulates the worst residual of a group of checks.
class Group {
 public:
  Group(std::string name, double tolerance) : result_{std::move(name), 0, 0.0, tolerance, true} {}

  void add(double residual) {
    ++result_.count;
    if (!(residual <= result_.tolerance)) result_.passed = false;
    if (std::isnan(residual) || residual > result_.residual) result_.residual = residual;
  }
  /// Records max(0, lhs - rhs) for an inequality lhs <= rhs.
  void add_le(double lhs, double rhs) { add(std::isnan(lhs - rhs) ? lhs - rhs : std::max(0.0, lhs - rhs)); }

  [[nodiscard]] CheckResult result() const { return result_; }

 private:
  CheckResult result_;
};

ControlSystem checked_qubit(double omega, double gamma, bool corrupt) {
  if (!corrupt) return models::make_single_qubit(omega, gamma);
  LindbladGenerator g(-omega * ops::sigma_z(),
                      Dissipator({JumpTerm{ops::sigma_minus(), gamma}}, DissipatorConvention::Half));
  return ControlSystem(std::move(g), {ops::sigma_x()}, DensityMatrix::pure(ops::ket_minus()),
                       DensityMatrix::pure(ops::basis_ket(2, 0)));
}

double fixed_point_residual(const LindbladGenerator& g, const ComplexMatrix& rho) {
  return hs_norm(qslab::apply(g, rho));
}

}  // namespace

bool CheckSummary::all_passed() const {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

int CheckSummary::total_checks() const {
  int n = 0;
  for (const auto& r : results) n += r.count;
  return n;
}

CheckSummary run_checks(const CheckOptions& options) {
  CheckSummary summary;
  random::Engine rng(derive_seed(options.seed, {0xC4EC}));
  std::uniform_int_distribution<int> dim_pick(2, 4);

  {
    Group g("vec(ABC) = kron(C^T, A) vec(B)", 1e-12);
    for (int i = 0; i < 100; ++i) {
      const Index d = dim_pick(rng);
      const ComplexMatrix a = random::ginibre(d, rng), b = random::ginibre(d, rng), c = random::ginibre(d, rng);
      const ComplexVector lhs = vec(a * b * c);
      const ComplexVector rhs = kron(c.transpose(), a) * vec(b);
      g.add((lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("expm(A) expm(-A) = I", 1e-10);
    for (int i = 0; i < 20; ++i) {
      const Index d = dim_pick(rng);
      const ComplexMatrix a = random::ginibre(d, rng);
      g.add((matrix_exp(a) * matrix_exp(ComplexMatrix(-a)) - identity(d)).norm());
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("||A||_2 <= ||A||_1 <= sqrt(d) ||A||_2", 1e-12);
    for (int i = 0; i < 200; ++i) {
      const Index d = dim_pick(rng);
      const ComplexMatrix a = random::ginibre(d, rng);
      const double n1 = trace_norm(a), n2 = hs_norm(a);
      g.add_le(n2, n1 * (1.0 + 1e-13));
      g.add_le(n1, std::sqrt(static_cast<double>(d)) * n2 * (1.0 + 1e-13));
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("1->1 estimate <= sqrt(d) ||L||_{2->2}", 1e-9);
    Induced11Options opts;
    opts.restarts = 8;
    for (int i = 0; i < 200; ++i) {
      const Index d = 2 + i % 3;
      const LindbladGenerator gen = random::generator(d, 1 + i % 3, rng);
      const ComplexMatrix m = build_superoperator(gen);
      opts.seed = derive_seed(options.seed, {0x11, static_cast<std::uint64_t>(i)});
      const double est = induced_11_estimate(m, d, opts).value;
      g.add_le(est, std::sqrt(static_cast<double>(d)) * induced_22(m).value);
    }
    summary.induced_norm_checks = g.result().count;
    summary.results.push_back(g.result());
  }

  {
    Group g("unitary generator: ||L||_{2->2} = spread = 1->1 estimate", 1e-10);
    for (int i = 0; i < 20; ++i) {
      const Index d = dim_pick(rng);
      const ComplexMatrix h = random::hermitian(d, rng);
      const double spread = hermitian_eig(h).spread();
      const ComplexMatrix m = hamiltonian_superoperator(h);
      g.add(std::abs(induced_22(m).value - spread) / std::max(1.0, spread));
      g.add(std::abs(induced_11_estimate(m, d).value - spread) / std::max(1.0, spread));
    }
    summary.results.push_back(g.result());
  }

  {
    Group trace("generator is trace annihilating", 1e-12);
    Group herm("generator preserves Hermiticity", 1e-12);
    Group conv("factor-two rate g equals half-convention rate 2g", 1e-13);
    for (int i = 0; i < 30; ++i) {
      const Index d = dim_pick(rng);
      const LindbladGenerator gen = random::generator(d, 2, rng);
      const ComplexMatrix rho = random::density(d, rng);
      const ComplexMatrix out = qslab::apply(gen, rho);
      trace.add(std::abs(out.trace()) / std::max(1.0, out.norm()));
      herm.add((out - out.adjoint()).norm() / std::max(1.0, out.norm()));

      std::vector<JumpTerm> doubled = gen.dissipator().terms();
      std::vector<JumpTerm> halved = gen.dissipator().terms();
      for (auto& t : halved) t.rate *= 0.5;
      const ComplexMatrix a = dissipator_superoperator(Dissipator(doubled, DissipatorConvention::Half), d);
      const ComplexMatrix b = dissipator_superoperator(Dissipator(halved, DissipatorConvention::FactorTwo), d);
      conv.add((a - b).norm() / std::max(1.0, a.norm()));
    }
    summary.results.push_back(trace.result());
    summary.results.push_back(herm.result());
    summary.results.push_back(conv.result());
  }

  {
    Group cptp("piecewise propagators are CPTP", 1e-8);
    Group routes("real-basis and complex propagation agree", 1e-10);
    std::uniform_real_distribution<double> amp(-3.0, 3.0);
    for (int i = 0; i < 10; ++i) {
      const ControlSystem sys = i % 2 == 0 ? checked_qubit(1.0, 0.5, options.corrupt_convention)
                                           : models::make_bell(1.0, 0.5, models::BellControls::Independent);
      const auto n_ctrl = static_cast<Index>(sys.controls().size());
      RealMatrix a(5, n_ctrl);
      for (Index j = 0; j < a.size(); ++j) a(j) = amp(rng);
      const Schedule s(1.3, a, 3.0);
      const ComplexMatrix channel = propagator(sys, s);
      const CptpReport rep = channel_report(channel);
      cptp.add(std::max(-rep.min_choi_eigenvalue, rep.trace_residual * 1e2));
      const ComplexMatrix via_channel = unvec(channel * vec(sys.initial().matrix()), sys.dim());
      const auto states = propagate(sys, s, 1);
      routes.add((states.back().matrix() - via_channel).norm());
    }
    summary.results.push_back(cptp.result());
    summary.results.push_back(routes.result());
  }

  {
    Group g("fixed points: |0><0| of the damped qubit, |b3><b3| of the Bell model", 1e-10);
    for (double omega : {0.0, 1.0, 5.0}) {
      for (double gamma : {0.1, 1.0, 10.0}) {
        const ControlSystem q = checked_qubit(omega, gamma, options.corrupt_convention);
        g.add(fixed_point_residual(q.generator(), q.target().matrix()));
        const ControlSystem b = models::make_bell(omega, gamma);
        g.add(fixed_point_residual(b.generator(), b.target().matrix()));
      }
    }
    summary.results.push_back(g.result());
  }

  {
    Group gibbs("Davies generators fix their Gibbs states", 1e-8);
    Group kms("Davies rates obey gamma(-w) = exp(-beta w) gamma(w)", 1e-12);
    Group adjoint("L_{-w} = L_w^+", 1e-12);
    Group sums("sum_w L_{w,k} = X_k", 1e-12);
    for (int n = 2; n <= 4; ++n) {
      const auto spec = models::IsingSpec::extensive_antiferromagnet(n);
      const auto bohr = models::ising_bohr_decomposition(spec);
      for (double beta : {0.01, 0.1, 1.0, 10.0}) {
        models::BathSpec bath;
        bath.beta = beta;
        const ControlSystem sys = models::make_ising_davies(spec, bath);
        gibbs.add(fixed_point_residual(sys.generator(), sys.target().matrix()));
        for (double w : bohr.frequencies) {
          const double up = models::davies_rate(w, bath);
          const double down = models::davies_rate(-w, bath);
          kms.add(std::abs(down - std::exp(-beta * w) * up) / std::max(up, down));
        }
      }
      std::vector<ComplexMatrix> totals(static_cast<std::size_t>(n),
                                        ComplexMatrix::Zero(Index{1} << n, Index{1} << n));
      for (const auto& j : bohr.jumps) {
        totals[static_cast<std::size_t>(j.site)] += j.op;
        const ComplexMatrix* partner = nullptr;
        for (const auto& k : bohr.jumps) {
          if (k.site == j.site && std::abs(k.omega + j.omega) <= 1e-9) partner = &k.op;
        }
        adjoint.add(partner ? (*partner - j.op.adjoint()).norm() : 1.0);
      }
      for (int k = 0; k < n; ++k) {
        sums.add((totals[static_cast<std::size_t>(k)] - ops::on_site(ops::sigma_x(), k, n)).norm());
      }
    }
    summary.results.push_back(gibbs.result());
    summary.results.push_back(kms.result());
    summary.results.push_back(adjoint.result());
    summary.results.push_back(sums.result());
  }

  {
    Group g("damped qubit sigma_max = max(sqrt(g^2 + 4w^2), 2 sqrt2 g)", 1e-10);
    for (int i = 0; i < 20; ++i) {
      const double gamma = 0.01 * std::pow(70.0, i / 19.0) * (i % 2 == 0 ? 1.0 : 3.0);
      const ControlSystem q = checked_qubit(1.0, gamma, options.corrupt_convention);
      const double numeric = induced_22(build_superoperator(q.generator())).value;
      const double closed = std::max(std::hypot(gamma, 2.0), 2.0 * std::sqrt(2.0) * gamma);
      g.add(std::abs(numeric - closed) / closed);
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("damped qubit first passage (g = 1, delta = 0.1) matches closed form", 1e-8);
    // (1/4) x^2 + (1/4) x = 0.01 with x = exp(-2t)
    const double x = 0.5 * (-1.0 + std::sqrt(1.0 + 0.16));
    const double t_exact = -0.5 * std::log(x);
    for (double omega : {0.0, 1.0, 5.0}) {
      const ControlSystem q = checked_qubit(omega, 1.0, options.corrupt_convention);
      g.add(std::abs(uncontrolled_first_passage(q, 0.1) - t_exact));
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("reference flow along the controls reproduces the schedule-free bound", 0.0);
    std::uniform_real_distribution<double> amp(-20.0, 20.0);
    for (int i = 0; i < 6; ++i) {
      const ControlSystem sys = i % 2 == 0 ? checked_qubit(1.0, 0.3, options.corrupt_convention)
                                           : models::make_bell(1.0, 0.3, models::BellControls::Independent);
      RealMatrix a(4, static_cast<Index>(sys.controls().size()));
      for (Index j = 0; j < a.size(); ++j) a(j) = amp(rng);
      const Schedule s(2.0, a, 20.0);
      const double general =
          bound_general(sys, ReferenceGenerator::following_controls(sys), s, NormKind::SqrtDInduced22).bound;
      g.add(std::abs(general - bound_schedule_independent(sys, NormKind::SqrtDInduced22).bound));
    }
    summary.results.push_back(g.result());
  }

  {
    Group g("closed-system chain, Popoviciu and comparison inequalities", 0.0);
    for (Index d : {2, 4, 8}) {
      for (int i = 0; i < 100; ++i) {
        const ComplexVector psi0 = random::ket(d, rng);
        const ComplexVector psi_t = random::ket(d, rng);
        const ClosedSystemReport r = closed_system_report(psi0, psi_t, random::hermitian(d, rng));
        g.add(r.chain_holds && r.popoviciu_holds && r.comparison_holds ? 0.0 : 1.0);
      }
    }
    summary.results.push_back(g.result());
  }

  return summary;
}

void print_summary(const CheckSummary& summary, std::ostream& out) {
  char line[256];
  for (const auto& r : summary.results) {
    std::snprintf(line, sizeof line, "%s  %-66s n=%-4d residual=%.3e tol=%.1e\n", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.count, r.residual, r.tolerance);
    out << line;
  }
  int failed = 0;
  for (const auto& r : summary.results) failed += r.passed ? 0 : 1;
  out << summary.total_checks() << " checks in " << summary.results.size() << " groups, "
      << summary.induced_norm_checks << " induced-norm comparisons; " << failed << " group(s) failed\n";
}

}  // namespace qslab::checks
