/** @file
 * Exact dense complex linear algebra over tensor-product spaces.
 *
 * Conventions used throughout the toolkit:
 *   - matrices are row-major; kron(a, b) makes the left factor the most
 *     significant index block,
 *   - a Shape lists factor dimensions most-significant first,
 *   - purifications order the space as system (x) reference.
 */

#ifndef QCOMMIT_LINALG_HPP
#define QCOMMIT_LINALG_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qcommit/kernels.hpp"

namespace qcommit {

namespace tol {
// Algebraic comparisons (norm checks, invariant validation).
inline constexpr double alg = 1e-9;
// Eigen-decomposition residual and unitarity target.
inline constexpr double eig = 1e-10;
// Eigenvalues above this count towards the rank of a density matrix.
inline constexpr double rank = 1e-12;
}  // namespace tol

struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> a;  // row-major

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0.0, 0.0)) {}
  Mat(std::size_t r, std::size_t c, std::vector<cplx> v);

  static Mat identity(std::size_t n);
  static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }
  static Mat diag(const std::vector<double>& d);

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  Mat dagger() const;
  Mat transpose() const;
  Mat conj() const;
  cplx trace() const;
  double fro_norm() const;
  double max_abs() const;

  bool is_square() const { return rows == cols; }
  bool is_hermitian(double eps) const;
  bool is_unitary(double eps) const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(cplx s);
};

Mat operator+(Mat x, const Mat& y);
Mat operator-(Mat x, const Mat& y);
Mat operator*(const Mat& x, const Mat& y);
Mat operator*(cplx s, Mat x);

struct SubsystemShape {
  std::vector<std::size_t> factors;

  SubsystemShape() = default;
  explicit SubsystemShape(std::vector<std::size_t> f) : factors(std::move(f)) {}
  static SubsystemShape qubits(std::size_t n) {
    return SubsystemShape(std::vector<std::size_t>(n, 2));
  }
  std::size_t dim() const { return kernels::product(factors); }
  std::size_t size() const { return factors.size(); }
};

struct PureState {
  std::vector<cplx> amp;

  PureState() = default;
  explicit PureState(std::vector<cplx> v) : amp(std::move(v)) {}
  static PureState basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
  void normalize();
  Mat projector() const;  // |psi><psi|
};

cplx inner(const PureState& x, const PureState& y);  // <x|y>
PureState tensor(const PureState& x, const PureState& y);

struct DensityMatrix {
  Mat op;
  double tolerance = tol::alg;

  DensityMatrix() = default;
  // Validates Hermiticity, positivity down to -tolerance and unit trace.
  explicit DensityMatrix(Mat m, double tolerance_ = tol::alg);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix unchecked(Mat m, double tolerance_ = tol::alg);

  std::size_t dim() const { return op.rows; }
};

// Kronecker product, left factor most significant.
Mat tensor(const Mat& a, const Mat& b);

// Reduced operator on the kept factors (ascending original order).
Mat partial_trace(const Mat& rho, const SubsystemShape& shape,
                  const std::vector<std::size_t>& keep);

// Output factor i of the result is input factor perm[i].
Mat permute_factors(const Mat& x, const SubsystemShape& shape,
                    const std::vector<std::size_t>& perm);
PureState permute_factors(const PureState& x, const SubsystemShape& shape,
                          const std::vector<std::size_t>& perm);

// The unitary P with P|x> = permute_factors(|x>, shape, perm); conjugation
// by P equals permute_factors on matrices.
Mat permutation_matrix(const SubsystemShape& shape, const std::vector<std::size_t>& perm);

// Full-space matrix acting as `op` on `targets` and identity elsewhere.
Mat embed(const Mat& op, const SubsystemShape& shape,
          const std::vector<std::size_t>& targets);

struct EigResult {
  std::vector<double> values;  // descending
  Mat vectors;                 // orthonormal columns, vectors(:,i) <-> values[i]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.  Residual
// |H v - lambda v| <= tol::eig * |H| and the eigenvector matrix is unitary
// to the same tolerance.  Throws on non-Hermitian input.
EigResult herm_eig(const Mat& h);

// PSD square root; eigenvalues in [-eps, 0) are clamped to zero and
// anything below -eps is an error.
Mat psd_sqrt(const Mat& a, double eps = tol::alg);

// Purification of rho on system (x) reference with reference dimension
// max(rank(rho), min_ref_dim).
PureState purify(const DensityMatrix& rho, std::size_t min_ref_dim = 0);

// A purification of sigma over the same system/reference split as psi_rho
// whose overlap with psi_rho is F(rho, sigma), real and non-negative.
// Throws if psi_rho does not purify rho or the reference is too small to
// carry sigma.
PureState uhlmann_purification(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const PureState& psi_rho);

// Unitary polar factor of g, maximizing Re tr(W^dag g) over unitaries.
Mat polar_unitary(const Mat& g);

}  // namespace qcommit

#endif
