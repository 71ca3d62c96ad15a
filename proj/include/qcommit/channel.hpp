/** @file
 * Completely positive trace-preserving maps in Kraus form, with optional
 * Stinespring data (expanded unitary, ancilla, discarded factors) kept
 * alongside when the channel came from a circuit.
 */

#ifndef QCOMMIT_CHANNEL_HPP
#define QCOMMIT_CHANNEL_HPP

#include <optional>
#include <vector>

#include "qcommit/linalg.hpp"

namespace qcommit {

// channel(rho) = tr_discard[ U (rho (x) |0><0|_anc) U^dag ] where the
// output of U is ordered [kept..., discarded...].
struct Stinespring {
  Mat unitary;
  std::size_t ancilla_dim = 1;
  std::size_t discard_dim = 1;
};

struct Channel {
  std::size_t dim_in = 0, dim_out = 0;
  std::vector<Mat> kraus;
  std::optional<Stinespring> stinespring;

  Channel() = default;
  // Validates Kraus completeness sum K^dag K = I within 1e-9.
  Channel(std::size_t din, std::size_t dout, std::vector<Mat> ks);

  static Channel from_unitary(const Mat& u);
  static Channel from_stinespring(Stinespring s);
  // Two-outcome measurement with acceptance operator m (0 <= m <= I),
  // mapping the input to a classical bit: tr(m rho)|1><1| + ... |0><0|.
  static Channel measurement(const Mat& m);
  static Channel identity(std::size_t dim);
  // Discards the input and prepares `state`.
  static Channel replacement(const DensityMatrix& state, std::size_t dim_in);

  Mat apply(const Mat& x) const;
  // (id_ref (x) channel)(x) for x on reference (x) input.
  Mat apply_right(const Mat& x, std::size_t ref_dim) const;
  // Adjoint map applied to an observable: sum K^dag m K.
  Mat adjoint_apply(const Mat& m) const;
  Mat adjoint_apply_right(const Mat& m, std::size_t ref_dim) const;

  // For measurement channels (dim_out == 2): probability of outcome 1.
  double accept_probability(const Mat& rho) const;
};

// Choi matrix sum_{ij} |i><j| (x) ch(|i><j|); input index first.
Mat choi(const Channel& ch);

}  // namespace qcommit

#endif
