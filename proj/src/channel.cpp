#include "qcommit/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qcommit {

Channel::Channel(std::size_t din, std::size_t dout, std::vector<Mat> ks)
    : dim_in(din), dim_out(dout), kraus(std::move(ks)) {
  if (kraus.empty()) throw std::invalid_argument("Channel: no Kraus operators");
  Mat sum(dim_in, dim_in);
  for (const auto& k : kraus) {
    if (k.rows != dim_out || k.cols != dim_in)
      throw std::invalid_argument("Channel: Kraus shape mismatch");
    sum += k.dagger() * k;
  }
  for (std::size_t i = 0; i < dim_in; ++i)
    for (std::size_t j = 0; j < dim_in; ++j) {
      const cplx want = i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      if (std::abs(sum(i, j) - want) > 1e-9)
        throw std::invalid_argument("Channel: Kraus completeness violated");
    }
}

Channel Channel::from_unitary(const Mat& u) {
  if (!u.is_unitary(tol::eig)) throw std::invalid_argument("Channel: matrix not unitary");
  return Channel(u.cols, u.rows, {u});
}

Channel Channel::from_stinespring(Stinespring s) {
  const std::size_t total = s.unitary.rows;
  if (!s.unitary.is_unitary(tol::eig))
    throw std::invalid_argument("Channel: Stinespring map not unitary");
  if (total % s.ancilla_dim != 0 || total % s.discard_dim != 0)
    throw std::invalid_argument("Channel: Stinespring dimensions inconsistent");
  const std::size_t din = total / s.ancilla_dim;
  const std::size_t dout = total / s.discard_dim;
  std::vector<Mat> ks;
  ks.reserve(s.discard_dim);
  for (std::size_t j = 0; j < s.discard_dim; ++j) {
    Mat k(dout, din);
    for (std::size_t o = 0; o < dout; ++o)
      for (std::size_t i = 0; i < din; ++i)
        k(o, i) = s.unitary(o * s.discard_dim + j, i * s.ancilla_dim);
    ks.push_back(std::move(k));
  }
  Channel ch(din, dout, std::move(ks));
  ch.stinespring = std::move(s);
  return ch;
}

Channel Channel::measurement(const Mat& m) {
  if (!m.is_square()) throw std::invalid_argument("measurement: not square");
  const auto e = herm_eig(m);
  const std::size_t d = m.rows;
  std::vector<Mat> ks;
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = std::min(std::max(e.values[k], 0.0), 1.0);
    if (e.values[k] < -1e-9 || e.values[k] > 1.0 + 1e-9)
      throw std::invalid_argument("measurement: effect not in [0, I]");
    Mat k1(2, d), k0(2, d);
    for (std::size_t i = 0; i < d; ++i) {
      k1(1, i) = std::sqrt(lam) * std::conj(e.vectors(i, k));
      k0(0, i) = std::sqrt(1.0 - lam) * std::conj(e.vectors(i, k));
    }
    ks.push_back(std::move(k1));
    ks.push_back(std::move(k0));
  }
  return Channel(d, 2, std::move(ks));
}

Channel Channel::identity(std::size_t dim) { return from_unitary(Mat::identity(dim)); }

Channel Channel::replacement(const DensityMatrix& state, std::size_t dim_in) {
  const auto e = herm_eig(state.op);
  std::vector<Mat> ks;
  for (std::size_t k = 0; k < state.dim(); ++k) {
    const double lam = std::max(e.values[k], 0.0);
    if (lam <= tol::rank) continue;
    for (std::size_t j = 0; j < dim_in; ++j) {
      Mat m(state.dim(), dim_in);
      for (std::size_t i = 0; i < state.dim(); ++i)
        m(i, j) = std::sqrt(lam) * e.vectors(i, k);
      ks.push_back(std::move(m));
    }
  }
  return Channel(dim_in, state.dim(), std::move(ks));
}

Mat Channel::apply(const Mat& x) const {
  if (x.rows != dim_in || x.cols != dim_in)
    throw std::invalid_argument("Channel::apply: dimension mismatch");
  Mat out(dim_out, dim_out);
  for (const auto& k : kraus) out += k * x * k.dagger();
  return out;
}

Mat Channel::apply_right(const Mat& x, std::size_t ref_dim) const {
  if (ref_dim == 1) return apply(x);
  if (x.rows != ref_dim * dim_in)
    throw std::invalid_argument("Channel::apply_right: dimension mismatch");
  const Mat iref = Mat::identity(ref_dim);
  Mat out(ref_dim * dim_out, ref_dim * dim_out);
  for (const auto& k : kraus) {
    const Mat kk = tensor(iref, k);
    out += kk * x * kk.dagger();
  }
  return out;
}

Mat Channel::adjoint_apply(const Mat& m) const {
  if (m.rows != dim_out || m.cols != dim_out)
    throw std::invalid_argument("Channel::adjoint_apply: dimension mismatch");
  Mat out(dim_in, dim_in);
  for (const auto& k : kraus) out += k.dagger() * m * k;
  return out;
}

Mat Channel::adjoint_apply_right(const Mat& m, std::size_t ref_dim) const {
  if (ref_dim == 1) return adjoint_apply(m);
  if (m.rows != ref_dim * dim_out)
    throw std::invalid_argument("Channel::adjoint_apply_right: dimension mismatch");
  const Mat iref = Mat::identity(ref_dim);
  Mat out(ref_dim * dim_in, ref_dim * dim_in);
  for (const auto& k : kraus) {
    const Mat kk = tensor(iref, k);
    out += kk.dagger() * m * kk;
  }
  return out;
}

double Channel::accept_probability(const Mat& rho) const {
  if (dim_out != 2)
    throw std::invalid_argument("accept_probability: channel is not a measurement");
  return apply(rho)(1, 1).real();
}

Mat choi(const Channel& ch) {
  const std::size_t din = ch.dim_in, dout = ch.dim_out;
  Mat c(din * dout, din * dout);
  for (const auto& k : ch.kraus) {
    std::vector<cplx> w(din * dout);
    for (std::size_t i = 0; i < din; ++i)
      for (std::size_t o = 0; o < dout; ++o) w[i * dout + o] = k(o, i);
    for (std::size_t x = 0; x < w.size(); ++x)
      for (std::size_t y = 0; y < w.size(); ++y) c(x, y) += w[x] * std::conj(w[y]);
  }
  return c;
}

}  // namespace qcommit
