#include "qcommit/random.hpp"

#include <cmath>

namespace qcommit {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state); }

double Rng::uniform() {
  // 53 random bits in (0, 1]; never returns 0 so logs are safe.
  return (double)((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gauss() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

cplx Rng::gauss_c() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));
  return cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
}

Rng Rng::child(std::uint64_t index) const {
  std::uint64_t s = state ^ (0xd1b54a32d192ed03ull * (index + 1));
  splitmix64(s);
  return Rng(s);
}

Mat haar_unitary(std::size_t d, Rng& rng) {
  Mat g(d, d);
  for (auto& z : g.a) z = rng.gauss_c();
  // Modified Gram-Schmidt with a re-orthogonalization pass.  The R factor
  // then has a real positive diagonal, which is exactly the convention
  // under which the Q of a Ginibre matrix is Haar distributed.
  Mat q(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<cplx> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = g(i, c);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < c; ++k) {
        cplx ov(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) ov += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= ov * q(i, k);
      }
    }
    double nn = 0.0;
    for (const auto& z : v) nn += std::norm(z);
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < d; ++i) q(i, c) = v[i] / nn;
  }
  return q;
}

PureState random_pure(std::size_t dim, Rng& rng) {
  PureState s{std::vector<cplx>(dim)};
  for (auto& z : s.amp) z = rng.gauss_c();
  s.normalize();
  return s;
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  Mat g(dim, rank);
  for (auto& z : g.a) z = rng.gauss_c();
  Mat rho = g * g.dagger();
  const double tr = rho.trace().real();
  rho *= cplx(1.0 / tr, 0.0);
  // Clean up roundoff asymmetry.
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      const cplx m = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = m;
      rho(j, i) = std::conj(m);
    }
  return DensityMatrix::unchecked(std::move(rho));
}

Mat random_hermitian(std::size_t dim, Rng& rng) {
  Mat h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = cplx(rng.gauss(), 0.0);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx z = rng.gauss_c();
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

}  // namespace qcommit
