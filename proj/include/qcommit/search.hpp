/** @file
 * Multistart ascent for cheating-sender searches.
 *
 * All binding constraints in the toolkit have the same shape: two tests
 * with acceptance operators E_0, E_1 on A (x) B, maximized over state
 * pairs rho_0, rho_1 whose reduced states on A are equal.  The search
 * runs over a shared purified state omega on A (x) B (x) R with
 * bit-dependent unitary attacks on B (x) R, which enforces the equal
 * A-marginal constraint by construction (steering).  Values found are
 * exact for the returned adversary, hence valid lower bounds.
 */

#ifndef QCOMMIT_SEARCH_HPP
#define QCOMMIT_SEARCH_HPP

#include <cstdint>
#include <functional>

#include "qcommit/linalg.hpp"

namespace qcommit {

struct CheatProblem {
  std::size_t dim_a = 1, dim_b = 1, dim_r = 1;
  Mat e0, e1;  // acceptance operators on [A, B], Hermitian, 0 <= E <= I
};

struct CheatAdversary {
  PureState omega;      // on [A, B, R]
  Mat attack0, attack1; // unitaries on [B, R]
};

struct CheatSearchResult {
  double value = 0.0;       // (p0 + p1) / 2 at the best adversary
  double p0 = 0.0, p1 = 0.0;
  CheatAdversary adversary;
  int restarts = 0;
};

CheatSearchResult search_constrained_cheat(const CheatProblem& prob,
                                           int restarts, std::uint64_t seed);

// Induced states rho_b = tr_R[(I_A (x) V_b) omega (...)^dag] on [A, B].
Mat induced_state(const CheatProblem& prob, const CheatAdversary& adv, int bit);

// Power iteration for the top eigenpair of a Hermitian PSD operator given
// through its action; deterministic for a fixed start vector.
double power_top_eig(const std::function<void(const cplx*, cplx*)>& apply_h,
                     std::size_t dim, PureState& vec, int max_iter = 5000,
                     double rel_tol = 1e-13);

}  // namespace qcommit

#endif
