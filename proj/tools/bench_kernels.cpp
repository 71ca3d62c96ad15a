// Timing comparison of the serial reference kernels against the OpenMP
// variants.  Build with OpenMP and vary OMP_NUM_THREADS to see scaling.

#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "qcommit/kernels.hpp"
#include "qcommit/random.hpp"

using namespace qcommit;

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    f();
    const double t1 = now();
    if (t1 - t0 < best) best = t1 - t0;
  }
  return best;
}

std::vector<cplx> random_block(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = rng.gauss_c();
  return v;
}

}  // namespace

int main() {
  Rng rng(12345);
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; par variants fall back to serial\n");
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

  for (std::size_t n : {128, 256, 512}) {
    const auto a = random_block(n * n, rng);
    const auto b = random_block(n * n, rng);
    std::vector<cplx> c(n * n);
    const double ts = time_best_of(3, [&] {
      kernels::serial::matmul(a.data(), b.data(), c.data(), n, n, n);
    });
    const double tp = time_best_of(3, [&] {
      kernels::par::matmul(a.data(), b.data(), c.data(), n, n, n);
    });
    std::printf("matmul %4zu x %-14zu %12.4f %12.4f %8.2fx\n", n, n, ts, tp, ts / tp);
  }

  {
    const std::size_t n = 48;
    const auto a = random_block(n * n, rng);
    const auto b = random_block(n * n, rng);
    std::vector<cplx> c(n * n * n * n);
    const double ts = time_best_of(3, [&] {
      kernels::serial::kron(a.data(), n, n, b.data(), n, n, c.data());
    });
    const double tp = time_best_of(3, [&] {
      kernels::par::kron(a.data(), n, n, b.data(), n, n, c.data());
    });
    std::printf("kron %4zu (x) %-16zu %12.4f %12.4f %8.2fx\n", n, n, ts, tp, ts / tp);
  }

  {
    const std::vector<std::size_t> factors = {4, 4, 4, 4, 4, 4};  // dim 4096
    const std::size_t dim = kernels::product(factors);
    const auto rho = random_block(dim * dim, rng);
    std::vector<cplx> out(1024 * 1024);
    const double ts = time_best_of(3, [&] {
      kernels::serial::partial_trace(rho.data(), factors, {0, 1, 2, 3, 4}, out.data());
    });
    const double tp = time_best_of(3, [&] {
      kernels::par::partial_trace(rho.data(), factors, {0, 1, 2, 3, 4}, out.data());
    });
    std::printf("partial_trace dim %-10zu %12.4f %12.4f %8.2fx\n", dim, ts, tp, ts / tp);
  }

  {
    const std::vector<std::size_t> factors(14, 2);  // 14 qubits
    const std::size_t dim = 1u << 14;
    const auto in = random_block(dim, rng);
    const auto gate = random_block(16, rng);
    std::vector<cplx> out(dim);
    const double ts = time_best_of(5, [&] {
      for (int r = 0; r < 100; ++r)
        kernels::serial::apply_factor_op_vec(gate.data(), {3, 7}, in.data(), factors,
                                             out.data());
    });
    const double tp = time_best_of(5, [&] {
      for (int r = 0; r < 100; ++r)
        kernels::par::apply_factor_op_vec(gate.data(), {3, 7}, in.data(), factors,
                                          out.data());
    });
    std::printf("gate apply 14 qubits x100    %12.4f %12.4f %8.2fx\n", ts, tp, ts / tp);
  }
  return 0;
}
