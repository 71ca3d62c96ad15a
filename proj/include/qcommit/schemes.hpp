/** @file
 * The three commitment schemes: the state-distinguishability scheme
 * (commit with a circuit's reduced output), the swap-test scheme over a
 * channel pair with shared advice, and the witness-state scheme.  Also
 * the cheating-sender searches, the parallel-repetition experiment and
 * the orthogonalization procedure for nearly orthogonal reduced states.
 */

#ifndef QCOMMIT_SCHEMES_HPP
#define QCOMMIT_SCHEMES_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "qcommit/channels.hpp"
#include "qcommit/search.hpp"

namespace qcommit::schemes {

enum class SchemeType { qsd, qcd_swap, pi };

struct CommitTranscript {
  SchemeType scheme = SchemeType::qsd;
  int committed_bit = 0;
  DensityMatrix commit_state;
  DensityMatrix reveal_state;
  bool accepted = false;
  double accept_probability = 0.0;
};

struct CheatReport {
  double p_reveal_0 = 0.0;
  double p_reveal_1 = 0.0;
  double average = 0.0;
  double analytic_bound = 1.0;
  std::string strategy_note;
};

// ---- QSD scheme -----------------------------------------------------------

// Full circuit output (sender keeps it) and the commit message tr_G.
std::pair<PureState, DensityMatrix> qsd_commit(const QSDInstance& inst, int b);

// Acceptance probability <phi_b| xi |phi_b> of the reveal test on the
// receiver's full state xi.
double qsd_verify(const QSDInstance& inst, int b, const DensityMatrix& full_state);

// Optimal cheating sender: commit the sum-fidelity optimizer and reveal
// via aligned purifications; average reaches (1 + F)/2.  Also runs the
// constrained adversary search as a cross-check, which may never exceed
// the constructed optimum.
CheatReport qsd_optimal_cheat(const QSDInstance& inst, int restarts = 16,
                              std::uint64_t seed = 0);

// ---- QCD swap-test scheme --------------------------------------------------

// Advice state for the instance: the diamond-norm maximizer.  Throws if
// the achieved trace norm stays below 2 - mu - 1e-4.
PureState qcd_advice(const QCDInstance& inst, int restarts = 32, std::uint64_t seed = 0);

// One round of the swap-test scheme.  reveal_bit = -1 reveals honestly.
CommitTranscript qcd_round(const QCDInstance& inst, int b, const PureState& advice,
                           int reveal_bit = -1);

CheatReport qcd_single_round_cheat(const QCDInstance& inst, const PureState& advice,
                                   int restarts = 32, std::uint64_t seed = 0);

// Probability that all k swap tests accept, for rho on (A (x) B)^k and a
// fresh copy of phi per block; block lists {dim_A, dim_B}.
double test_pass_prob(const DensityMatrix& rho, const PureState& phi, int k,
                      const SubsystemShape& block);

CheatReport repetition_cheat(const QCDInstance& inst, int k, const PureState& advice,
                             int restarts = 32, std::uint64_t seed = 0);

// The searched adversary of the k-fold repetition on [A^k, B^k, R].
struct RepetitionAdversary {
  CheatProblem problem;
  CheatAdversary adversary;
};
RepetitionAdversary repetition_adversary(const QCDInstance& inst, int k,
                                         const PureState& advice, int restarts,
                                         std::uint64_t seed);

// ---- Orthogonalization -----------------------------------------------------

struct OrthogonalizeResult {
  PureState phi0p, phi1p;
  double epsilon;  // 2 - |tr_B phi0 - tr_B phi1|_tr, computed
};

// Projects the reduced states onto the positive/negative eigenspaces of
// their difference, renormalizes and re-purifies; the outputs have exactly
// orthogonal reduced states and overlap >= 1 - epsilon with the inputs.
// Throws when epsilon >= 1 (nothing to orthogonalize against).
OrthogonalizeResult orthogonalize(const PureState& phi0, const PureState& phi1,
                                  const SubsystemShape& split);

// ---- Witness-state scheme ---------------------------------------------------

// Commit message tr_X rho^b (and the sender's X part).
std::pair<DensityMatrix, DensityMatrix> pi_commit(const PiInstance& inst, int b);

double pi_verify(const PiInstance& inst, int b, const DensityMatrix& joint);

struct WitnessEval {
  double avg_accept = 0.0;
  bool constraint_ok = false;
};

// Evaluates the witnessability conditions for explicit (sigma, psi):
// tr_W sigma = rho0 and rho1 = (psi (x) id_Y)(sigma), plus the average
// acceptance of the pair.
WitnessEval witnessable_eval(const Channel& q0, const Channel& q1,
                             const DensityMatrix& rho0, const DensityMatrix& sigma,
                             const Channel& psi, const SubsystemShape& wxy);

// Adversary search over equal-Y-marginal input pairs.
CheatReport pi_cheat_search(const PiInstance& inst, int restarts = 64,
                            std::uint64_t seed = 0);

// Acceptance effect of a measurement channel: adjoint image of |1><1|.
Mat acceptance_effect(const Channel& ch);

}  // namespace qcommit::schemes

#endif
