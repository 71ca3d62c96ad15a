/** @file
 * Circuits over small tensor-factored wire sets, conversion to channels,
 * and generators for the three families of promise-problem instances.
 *
 * A circuit lists all of its wires; the last `ancilla_count` wires start
 * in |0>.  Discarded wires are traced out at the very end and the
 * surviving wires are partitioned into an output part and a garbage
 * part.  Generated instances re-verify their Y/N tag with an independent
 * computation before they are returned.
 */

#ifndef QCOMMIT_CHANNELS_HPP
#define QCOMMIT_CHANNELS_HPP

#include <cstdint>
#include <optional>

#include "qcommit/channel.hpp"
#include "qcommit/linalg.hpp"

namespace qcommit {

struct Gate {
  Mat matrix;
  std::vector<std::size_t> targets;  // 1 or 2 wires
};

struct Circuit {
  SubsystemShape wires;
  std::size_t ancilla_count = 0;
  std::vector<Gate> gates;
  std::vector<std::size_t> discards;
  std::vector<std::size_t> split_o;  // output wires among survivors
  std::vector<std::size_t> split_g;  // garbage wires among survivors

  void validate() const;
  std::size_t input_dim() const;
  std::size_t total_dim() const { return wires.dim(); }
};

// Gate-by-gate statevector run of a discard-free circuit; the input
// covers the non-ancilla wires and the result is the full output state.
PureState run_unitary(const Circuit& c, const PureState& input);

// Product of the expanded gate matrices, wire order unchanged.
Mat expanded_unitary(const Circuit& c);

// Stinespring channel of the circuit (output reordered to
// [survivors..., discards...]).
Channel to_channel(const Circuit& c);

// The circuit's unitary with outputs reordered to [O wires, G wires,
// discarded wires]; the commitment schemes treat discarded wires as part
// of the garbage the sender holds.
struct SchemeSpaces {
  Mat unitary;
  std::size_t dim_in = 1;   // non-ancilla input dimension
  std::size_t dim_anc = 1;
  std::size_t dim_o = 1;
  std::size_t dim_g = 1;    // split_g wires and discarded wires
};
SchemeSpaces scheme_spaces(const Circuit& c);

enum class Kind { yes, no, raw };

struct QSDInstance {
  Circuit c0, c1;
  double mu = 1e-6;
  Kind kind = Kind::raw;
};

struct QCDInstance {
  Circuit c0, c1;
  Channel q0, q1;
  double mu = 1e-6;
  Kind kind = Kind::raw;
};

struct PiInstance {
  std::size_t dim_x = 2, dim_y = 2;
  Channel q0, q1;  // measurements on X (x) Y
  std::optional<DensityMatrix> rho0, rho1;  // witness states, Y instances
  std::optional<Mat> witness_map;  // unitary on X with rho1 = (u (x) I) rho0 (...)^dag
  double mu = 1e-6;
  Kind kind = Kind::raw;
  // Recorded by the generator: best cheat value found when certifying an
  // N instance (a sound but not exhaustive check).
  double n_certificate = 0.0;
};

// Reduced circuit outputs tr_G(C|0><0|C^dag) on the O part.
DensityMatrix qsd_output(const Circuit& c);

// Construction with tag verification: Y needs trace distance >= 2 - mu,
// N needs <= mu.  kind == raw skips the check.
QSDInstance make_qsd_instance(Circuit c0, Circuit c1, double mu, Kind kind);

QSDInstance gen_qsd(Kind kind, std::size_t qubits, bool entangle_garbage,
                    std::uint64_t seed);
QCDInstance gen_qcd(Kind kind, std::size_t qubits, std::uint64_t seed);
PiInstance gen_pi(Kind kind, std::size_t dim_x, std::size_t dim_y, std::uint64_t seed);

// The ideal orthogonal QCD instance: identity against conjugation by Z.
QCDInstance qcd_ideal_instance();

}  // namespace qcommit

#endif
