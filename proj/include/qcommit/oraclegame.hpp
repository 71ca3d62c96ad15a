/** @file
 * Monte Carlo and exact machinery for the oracle-separation experiments:
 * Haar and conditioned (p-uniform) sampling over unitaries, the two
 * oracle types acting on a control qubit, the entanglement-recovery
 * protocol, the expected-norm bound and the per-query
 * distinguishability gap.
 */

#ifndef QCOMMIT_ORACLEGAME_HPP
#define QCOMMIT_ORACLEGAME_HPP

#include <cstdint>
#include <vector>

#include "qcommit/channel.hpp"
#include "qcommit/linalg.hpp"
#include "qcommit/random.hpp"

namespace qcommit::oracle {

// Conditioning event { U : Re <r|U|r> >= threshold }, calibrated so its
// Haar mass is about 2^-m.
struct PUniformSpec {
  std::size_t d = 2;
  std::size_t m = 0;
  PureState reference;
  double threshold = -2.0;          // m = 0 accepts everything
  double event_probability = 1.0;   // measured at calibration
  std::size_t calibration_samples = 0;
  std::uint64_t seed = 0;
};

// Builds and calibrates a spec; throws if the measured event mass falls
// outside [2^-m / 2, 2 * 2^-m].
PUniformSpec make_p_uniform(std::size_t d, std::size_t m, std::uint64_t seed,
                            std::size_t calibration_samples = 40000);

// Rejection sampling against the conditioning event; aborts when the
// acceptance rate drops below 1e-6.
std::vector<Mat> p_uniform_sample(const PUniformSpec& spec, std::size_t n,
                                  std::uint64_t seed);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Trace norm of the sample-mean unitary.  The statistic is biased upward,
// so std_error is the bootstrap RMS deviation from the point estimate
// (bias included), which is the honest scale for comparisons against 0.
McEstimate expected_norm_core(const std::vector<Mat>& samples, std::uint64_t seed,
                              int bootstrap_replicates = 200);
McEstimate expected_norm(const PUniformSpec& spec, std::size_t n, std::uint64_t seed);

struct OracleInput {
  cplx alpha, beta;
  OracleInput(cplx a, cplx b);  // validates |a|^2 + |b|^2 = 1 within 1e-12
};

// Exact mixed output on A (x) H (x) K.  kind 1 keeps the control
// coherence through the hidden unitary; kind 2 destroys it.
Mat oracle_apply(int kind, const Mat* hidden, const OracleInput& input, std::size_t d);

// Acceptance probability of the protocol: maximally entangled control,
// one oracle call, prover channel on A (x) H, then projection back onto
// the entangled state.
double protocol_accept(int kind, const Mat* hidden, const Channel& prover, std::size_t d);

// Controlled-U^dag on A (x) H.
Channel honest_prover(const Mat& hidden);

// Channel that discards the control qubit and prepares |0>.
Channel replace_control_prover(std::size_t d);

// Best kind-2 acceptance found over a multistart family of unitary
// provers on A (x) H (soundness cap is 1/2).
double searched_prover_accept(std::size_t d, int restarts, std::uint64_t seed);

// Trace-norm gap between the averaged kind-1 oracle and the kind-2 oracle
// on the given input, estimated directly on sampled outputs and
// cross-checked against the closed form (2|alpha||beta| / d)|mean U|_tr
// over the same samples.
McEstimate per_query_gap(const PUniformSpec& spec, const OracleInput& input,
                         std::size_t n, std::uint64_t seed);

// Statistical check that left multiplication by u preserves the p-uniform
// density cap, on the unitary statistic |<r|U|r>|^2 or (on_states) on the
// pushforward states U|r>.
bool p_uniform_invariance_check(const PUniformSpec& spec, const Mat& u, std::size_t n,
                                std::uint64_t seed, bool on_states = false);

}  // namespace qcommit::oracle

#endif
