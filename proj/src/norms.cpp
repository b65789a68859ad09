#include "qslab/norms.hpp"

#include "qslab/seeding.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace qslab {

double trace_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(rho - sigma);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

NormReport induced_22(const ComplexMatrix& superop) {
  if (superop.rows() != superop.cols()) throw DimensionError("induced_22: superoperator not square");
  return NormReport{largest_singular_value(superop), NormMethod::Exact, 0, std::nullopt};
}

NormReport induced_22(const LindbladGenerator& g) { return induced_22(build_superoperator(g)); }

namespace {

ComplexVector random_unit(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

ComplexMatrix image(const ComplexMatrix& superop, const ComplexVector& u, const ComplexVector& v,
                    Index d) {
  return unvec(superop * vec(u * v.adjoint()), d);
}

}  // namespace

NormReport induced_11_estimate(const ComplexMatrix& superop, Index d,
                               const Induced11Options& options) {
  if (superop.rows() != d * d || superop.cols() != d * d) {
    throw DimensionError("induced_11_estimate: expected a d^2 x d^2 superoperator");
  }
  if (options.restarts < 1) throw PreconditionError("induced_11_estimate: restarts must be >= 1");

  const ComplexMatrix adjoint = superop.adjoint();
  double best = 0.0;
  for (int k = 0; k < options.restarts; ++k) {
    std::mt19937_64 rng(derive_seed(options.seed, {static_cast<std::uint64_t>(k)}));
    ComplexVector u = random_unit(d, rng);
    ComplexVector v = random_unit(d, rng);
    double value = trace_norm(image(superop, u, v, d));
    best = std::max(best, value);

    for (int it = 0; it < options.max_iterations; ++it) {
      const ComplexMatrix x = image(superop, u, v, d);
      Eigen::JacobiSVD<ComplexMatrix> polar(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const ComplexMatrix w = polar.matrixU() * polar.matrixV().adjoint();
      // Tr(W^+ L(u v^+)) = v^+ K u with K = (L^+(W))^+.
      const ComplexMatrix k_mat = unvec(adjoint * vec(w), d).adjoint();
      Eigen::JacobiSVD<ComplexMatrix> top(k_mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const ComplexVector u_next = top.matrixV().col(0);
      const ComplexVector v_next = top.matrixU().col(0);
      const double next = trace_norm(image(superop, u_next, v_next, d));
      best = std::max(best, next);
      if (next <= value * (1.0 + 1e-13)) break;
      u = u_next;
      v = v_next;
      value = next;
    }
  }

  NormReport report;
  report.value = best;
  report.method = NormMethod::Estimated;
  report.probes = options.restarts;
  report.upper_bound = std::sqrt(static_cast<double>(d)) * largest_singular_value(superop);
  return report;
}

NormReport induced_11_estimate(const LindbladGenerator& g, const Induced11Options& options) {
  return induced_11_estimate(build_superoperator(g), g.dim(), options);
}

}  // namespace qslab
