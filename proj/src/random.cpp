#include "qslab/random.hpp"

namespace qslab::random {

ComplexMatrix ginibre(Index d, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

ComplexVector ket(Index d, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

ComplexMatrix hermitian(Index d, Engine& rng) {
  const ComplexMatrix g = ginibre(d, rng);
  return 0.5 * (g + g.adjoint());
}

LindbladGenerator generator(Index d, int jumps, Engine& rng) {
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  std::vector<JumpTerm> terms;
  for (int k = 0; k < jumps; ++k) terms.push_back({ginibre(d, rng), 1.0 - rate(rng)});
  return LindbladGenerator(hermitian(d, rng), Dissipator(std::move(terms), DissipatorConvention::Half));
}

ComplexMatrix density(Index d, Engine& rng) {
  const ComplexMatrix g = ginibre(d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qslab::random
