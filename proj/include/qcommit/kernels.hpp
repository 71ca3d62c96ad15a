/** @file
 * Dense complex kernels used by the whole toolkit: matrix product,
 * Kronecker product, partial trace, subsystem permutation and gate
 * application on state vectors.
 *
 * Every kernel exists twice: a plain serial reference under
 * kernels::serial and an OpenMP variant under kernels::par.  Both
 * compute each output element with the same inner summation order, so
 * their results are bit-identical and the test suite asserts exact
 * equality.  The unprefixed entry points dispatch on problem size.
 */

#ifndef QCOMMIT_KERNELS_HPP
#define QCOMMIT_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qcommit {

using cplx = std::complex<double>;

namespace kernels {

// Work sizes below this many scalar ops stay on the serial path.
inline constexpr std::size_t parallel_grain = 1u << 15;

namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m);

void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out);

// Reduced matrix over the kept factors (ascending original order) of a
// square matrix on the full factor list.
void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out);

// perm[i] = index of the input factor that becomes output factor i.
void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);
void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);

// out = (op on `targets`, identity elsewhere) * in, for a state vector on
// the given factor list.  `targets` orders the row-major index of `op`.
void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out);

}  // namespace serial

namespace par {

void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m);
void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out);
void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out);
void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);
void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);
void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out);

}  // namespace par

// Size-dispatching entry points.
void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m);
void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out);
void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out);
void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);
void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out);
void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out);

std::size_t product(const std::vector<std::size_t>& factors);

// Index map of a factor permutation: out[o] = flat input index feeding
// output index o (permute_vec is precisely out[o] = in[map[o]]).
std::vector<std::size_t> permute_index_map(const std::vector<std::size_t>& factors,
                                           const std::vector<std::size_t>& perm);

}  // namespace kernels
}  // namespace qcommit

#endif
