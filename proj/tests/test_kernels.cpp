#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcommit/kernels.hpp"
#include "qcommit/random.hpp"

using namespace qcommit;

namespace {

std::vector<cplx> random_block(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = rng.gauss_c();
  return v;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  Rng rng(7);

  SUBCASE("matmul") {
    for (std::size_t n : {3, 17, 64}) {
      const auto a = random_block(n * n, rng);
      const auto b = random_block(n * n, rng);
      std::vector<cplx> cs(n * n), cp(n * n);
      kernels::serial::matmul(a.data(), b.data(), cs.data(), n, n, n);
      kernels::par::matmul(a.data(), b.data(), cp.data(), n, n, n);
      CHECK(cs == cp);
    }
  }

  SUBCASE("kron") {
    const auto a = random_block(6 * 5, rng);
    const auto b = random_block(7 * 4, rng);
    std::vector<cplx> cs(42 * 20), cp(42 * 20);
    kernels::serial::kron(a.data(), 6, 5, b.data(), 7, 4, cs.data());
    kernels::par::kron(a.data(), 6, 5, b.data(), 7, 4, cp.data());
    CHECK(cs == cp);
  }

  SUBCASE("partial trace") {
    const std::vector<std::size_t> factors = {2, 3, 2, 2};
    const std::size_t dim = kernels::product(factors);
    const auto rho = random_block(dim * dim, rng);
    std::vector<cplx> os(36), op(36);
    kernels::serial::partial_trace(rho.data(), factors, {1, 3}, os.data());
    kernels::par::partial_trace(rho.data(), factors, {1, 3}, op.data());
    CHECK(std::vector<cplx>(os.begin(), os.begin() + 36) ==
          std::vector<cplx>(op.begin(), op.begin() + 36));
  }

  SUBCASE("permute and gate application") {
    const std::vector<std::size_t> factors = {2, 3, 4};
    const std::size_t dim = 24;
    const auto v = random_block(dim, rng);
    std::vector<cplx> outs(dim), outp(dim);
    kernels::serial::permute_vec(v.data(), factors, {2, 0, 1}, outs.data());
    kernels::par::permute_vec(v.data(), factors, {2, 0, 1}, outp.data());
    CHECK(outs == outp);

    const auto m = random_block(dim * dim, rng);
    std::vector<cplx> ms(dim * dim), mp(dim * dim);
    kernels::serial::permute_mat(m.data(), factors, {1, 2, 0}, ms.data());
    kernels::par::permute_mat(m.data(), factors, {1, 2, 0}, mp.data());
    CHECK(ms == mp);

    const auto gate = random_block(8 * 8, rng);
    std::vector<cplx> gs(dim), gp(dim);
    kernels::serial::apply_factor_op_vec(gate.data(), {0, 2}, v.data(), factors, gs.data());
    kernels::par::apply_factor_op_vec(gate.data(), {0, 2}, v.data(), factors, gp.data());
    CHECK(gs == gp);
  }
}

TEST_CASE("permutations compose and invert") {
  Rng rng(13);
  const std::vector<std::size_t> factors = {2, 3, 2};
  const auto v = random_block(12, rng);
  std::vector<cplx> fwd(12), back(12);
  const std::vector<std::size_t> perm = {2, 0, 1};
  // new factor i = old factor perm[i]; invert accordingly
  std::vector<std::size_t> inv(3);
  for (std::size_t i = 0; i < 3; ++i) inv[perm[i]] = i;
  kernels::permute_vec(v.data(), factors, perm, fwd.data());
  const std::vector<std::size_t> permuted_factors = {factors[2], factors[0], factors[1]};
  kernels::permute_vec(fwd.data(), permuted_factors, inv, back.data());
  CHECK(back == v);
}

TEST_CASE("matmul against a hand-rolled triple loop") {
  Rng rng(23);
  const std::size_t n = 4, k = 3, m = 5;
  const auto a = random_block(n * k, rng);
  const auto b = random_block(k * m, rng);
  std::vector<cplx> got(n * m);
  kernels::matmul(a.data(), b.data(), got.data(), n, k, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx want(0.0, 0.0);
      for (std::size_t l = 0; l < k; ++l) want += a[i * k + l] * b[l * m + j];
      CHECK(std::abs(got[i * m + j] - want) < 1e-12);
    }
}
