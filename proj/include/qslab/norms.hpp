#pragma once

// Schatten norms of operators and induced norms of superoperators.

#include "qslab/lindblad.hpp"

#include <cstdint>
#include <optional>

namespace qslab {

enum class NormMethod { Exact, Estimated };

struct NormReport {
  double value = 0.0;
  NormMethod method = NormMethod::Exact;
  int probes = 0;
  /// For estimates: sqrt(d) * ||.||_{2->2}, an upper bound on the true norm.
  std::optional<double> upper_bound;
};

/// Sum of singular values.
double trace_norm(const ComplexMatrix& a);

/// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const ComplexMatrix& a);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Induced 2->2 norm: the largest singular value of the superoperator matrix.
NormReport induced_22(const ComplexMatrix& superop);
NormReport induced_22(const LindbladGenerator& g);

struct Induced11Options {
  int restarts = 32;
  int max_iterations = 200;
  std::uint64_t seed = 0x51ED5EEDULL;
};

/// Certified lower bound on the induced 1->1 norm of a superoperator acting
/// on d x d operators. The trace-norm ball's extreme points are rank one, so
/// the search runs over probes |u><v| with unit u, v; each restart performs
/// alternating maximization (polar factor of the image, then the top singular
/// pair of the adjoint image). The reported value is attained by a concrete
/// probe. Restart k's start depends only on (seed, k), so the value is
/// nondecreasing in the number of restarts.
NormReport induced_11_estimate(const ComplexMatrix& superop, Index d,
                               const Induced11Options& options = {});
NormReport induced_11_estimate(const LindbladGenerator& g, const Induced11Options& options = {});

}  // namespace qslab
