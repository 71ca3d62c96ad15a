/** @file
 * Seeded randomness: a splitmix-derived generator with hand-rolled
 * Gaussian sampling (so streams are identical across standard library
 * implementations), Haar-random unitaries, states and density matrices.
 *
 * Parallel drivers derive one child seed per trial or restart from the
 * master seed; results are then independent of scheduling.
 */

#ifndef QCOMMIT_RANDOM_HPP
#define QCOMMIT_RANDOM_HPP

#include <cstdint>

#include "qcommit/linalg.hpp"

namespace qcommit {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64();
  double uniform();              // (0, 1]
  double gauss();                // standard normal, Box-Muller
  cplx gauss_c();                // complex standard normal

  // Child generator for trial `index`; streams do not overlap in practice.
  Rng child(std::uint64_t index) const;
};

// Haar-random d x d unitary via Gaussian QR with phase-fixed diagonal.
Mat haar_unitary(std::size_t d, Rng& rng);

PureState random_pure(std::size_t dim, Rng& rng);

// Random density matrix of the given rank (Ginibre G G^dag, normalized).
DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);

// Random Hermitian with entries of order 1.
Mat random_hermitian(std::size_t dim, Rng& rng);

}  // namespace qcommit

#endif
