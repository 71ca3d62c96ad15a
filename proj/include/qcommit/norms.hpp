/** @file
 * Distance and overlap functionals on states and channels: trace norm,
 * fidelity with the Fuchs-van de Graaf bracket, the sum-fidelity
 * optimizer, swap-test acceptance, distinguisher advantage and the
 * multistart lower bound for the diamond norm of a channel difference.
 */

#ifndef QCOMMIT_NORMS_HPP
#define QCOMMIT_NORMS_HPP

#include <cstdint>
#include <string>

#include "qcommit/channel.hpp"
#include "qcommit/linalg.hpp"

namespace qcommit::norms {

// Sum of singular values.  Hermitian inputs go through the eigenvalues
// directly; general inputs through the Hermitian dilation
// [[0, X], [X^dag, 0]], which avoids the accuracy loss of sqrt(X^dag X).
double trace_norm(const Mat& x);

// F(rho, sigma) = tr sqrt(sqrt(sigma) rho sqrt(sigma)), in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct FvdgBounds {
  double lower;  // 1 - F
  double mid;    // (1/2) |rho - sigma|_tr
  double upper;  // sqrt(1 - F^2)
};

// Throws if the ordering lower <= mid <= upper is violated beyond 1e-9;
// that signals a numerical defect upstream, not an input error.
FvdgBounds fvdg_bounds(const DensityMatrix& rho, const DensityMatrix& sigma);

struct FidelitySumResult {
  double value = 0.0;          // F(rho,xi)^2 + F(xi,sigma)^2 at the optimizer
  DensityMatrix optimizer_state;
  bool converged = false;
  int iterations = 0;
};

// Maximizes F(rho,xi)^2 + F(xi,sigma)^2 by aligning purifications; the
// analytic optimum 1 + F(rho,sigma) serves as the convergence
// certificate.  Non-convergence within the restart budget is reported
// through `converged` with the best value found.
FidelitySumResult fidelity_sum_opt(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   int restarts = 4, std::uint64_t seed = 0);

// (1/2) + (1/2) tr(rho sigma).
double swap_test_accept(const DensityMatrix& rho, const DensityMatrix& sigma);

struct DiamondEstimate {
  double lower_bound = 0.0;  // in [0, 2]
  PureState maximizer;       // on reference (x) input, reference dim = input dim
  int restarts = 0;
  bool converged = false;
};

// Multistart alternating ascent over pure inputs on reference (x) input:
// returns the best trace norm of (id (x) (Phi0 - Phi1))(|phi><phi|), a
// certified lower bound on the diamond norm of the difference.
DiamondEstimate diamond_lower(const Channel& phi0, const Channel& phi1,
                              int restarts = 32, std::uint64_t seed = 0);

// dim(input) times a multistart estimate of the induced trace norm over
// pure unentangled inputs.  Asserts diamond_lower <= bound + 1e-6.
double diamond_dim_bound(const Channel& phi0, const Channel& phi1,
                         int restarts = 32, std::uint64_t seed = 0);

// |Pr[d(rho0 (x) advice) = 1] - Pr[d(rho1 (x) advice) = 1]| for a
// measurement channel d.  Pass a 0x0 advice matrix for no advice.
double advantage(const Channel& d, const Mat& advice,
                 const DensityMatrix& rho0, const DensityMatrix& rho1);

// Projector onto the non-negative eigenspace of rho0 - rho1 (eigenvalues
// within 1e-12 of zero count as positive).
Mat helstrom_projector(const DensityMatrix& rho0, const DensityMatrix& rho1);

}  // namespace qcommit::norms

#endif
