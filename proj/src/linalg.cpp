#include "qcommit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qcommit {

Mat::Mat(std::size_t r, std::size_t c, std::vector<cplx> v) : rows(r), cols(c), a(std::move(v)) {
  if (a.size() != rows * cols) throw std::invalid_argument("Mat: entry count mismatch");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
  return m;
}

Mat Mat::diag(const std::vector<double>& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = cplx(d[i], 0.0);
  return m;
}

Mat Mat::dagger() const {
  Mat m(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Mat Mat::transpose() const {
  Mat m(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Mat Mat::conj() const {
  Mat m = *this;
  for (auto& z : m.a) z = std::conj(z);
  return m;
}

cplx Mat::trace() const {
  cplx t(0.0, 0.0);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
  return t;
}

double Mat::fro_norm() const {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

bool Mat::is_hermitian(double eps) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < cols; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > eps) return false;
  return true;
}

bool Mat::is_unitary(double eps) const {
  if (!is_square()) return false;
  const Mat p = dagger() * (*this);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const cplx want = i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      if (std::abs(p(i, j) - want) > eps) return false;
    }
  return true;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Mat: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Mat: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
  return *this;
}

Mat& Mat::operator*=(cplx s) {
  for (auto& z : a) z *= s;
  return *this;
}

Mat operator+(Mat x, const Mat& y) { x += y; return x; }
Mat operator-(Mat x, const Mat& y) { x -= y; return x; }
Mat operator*(cplx s, Mat x) { x *= s; return x; }

Mat operator*(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("Mat: product size mismatch");
  Mat c(x.rows, y.cols);
  kernels::matmul(x.a.data(), y.a.data(), c.a.data(), x.rows, x.cols, y.cols);
  return c;
}

PureState PureState::basis(std::size_t dim, std::size_t k) {
  PureState s{std::vector<cplx>(dim, cplx(0.0, 0.0))};
  s.amp[k] = cplx(1.0, 0.0);
  return s;
}

double PureState::norm() const {
  double s = 0.0;
  for (const auto& z : amp) s += std::norm(z);
  return std::sqrt(s);
}

void PureState::normalize() {
  const double n = norm();
  if (n <= 0.0) throw std::runtime_error("PureState: cannot normalize zero vector");
  for (auto& z : amp) z /= n;
}

Mat PureState::projector() const {
  Mat p(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) p(i, j) = amp[i] * std::conj(amp[j]);
  return p;
}

cplx inner(const PureState& x, const PureState& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("inner: dimension mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x.amp[i]) * y.amp[i];
  return s;
}

PureState tensor(const PureState& x, const PureState& y) {
  PureState out{std::vector<cplx>(x.dim() * y.dim())};
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) out.amp[i * y.dim() + j] = x.amp[i] * y.amp[j];
  return out;
}

DensityMatrix::DensityMatrix(Mat m, double tolerance_) : op(std::move(m)), tolerance(tolerance_) {
  if (!op.is_square()) throw std::invalid_argument("DensityMatrix: not square");
  if (!op.is_hermitian(tolerance)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(op.trace() - cplx(1.0, 0.0)) > tolerance)
    throw std::invalid_argument("DensityMatrix: trace not 1");
  const auto eig = herm_eig(op);
  if (!eig.values.empty() && eig.values.back() < -tolerance)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix::unchecked(psi.projector());
}

DensityMatrix DensityMatrix::unchecked(Mat m, double tolerance_) {
  DensityMatrix d;
  d.op = std::move(m);
  d.tolerance = tolerance_;
  return d;
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows * b.rows, a.cols * b.cols);
  kernels::kron(a.a.data(), a.rows, a.cols, b.a.data(), b.rows, b.cols, out.a.data());
  return out;
}

Mat partial_trace(const Mat& rho, const SubsystemShape& shape,
                  const std::vector<std::size_t>& keep) {
  if (!rho.is_square() || rho.rows != shape.dim())
    throw std::invalid_argument("partial_trace: shape mismatch");
  std::vector<std::size_t> k = keep;
  std::sort(k.begin(), k.end());
  std::size_t dim_keep = 1;
  for (std::size_t i : k) dim_keep *= shape.factors.at(i);
  Mat out(dim_keep, dim_keep);
  kernels::partial_trace(rho.a.data(), shape.factors, k, out.a.data());
  return out;
}

Mat permute_factors(const Mat& x, const SubsystemShape& shape,
                    const std::vector<std::size_t>& perm) {
  if (!x.is_square() || x.rows != shape.dim())
    throw std::invalid_argument("permute_factors: shape mismatch");
  Mat out(x.rows, x.cols);
  kernels::permute_mat(x.a.data(), shape.factors, perm, out.a.data());
  return out;
}

PureState permute_factors(const PureState& x, const SubsystemShape& shape,
                          const std::vector<std::size_t>& perm) {
  if (x.dim() != shape.dim()) throw std::invalid_argument("permute_factors: shape mismatch");
  PureState out{std::vector<cplx>(x.dim())};
  kernels::permute_vec(x.amp.data(), shape.factors, perm, out.amp.data());
  return out;
}

Mat permutation_matrix(const SubsystemShape& shape, const std::vector<std::size_t>& perm) {
  const std::size_t dim = shape.dim();
  Mat p(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    PureState e = PureState::basis(dim, col);
    PureState pe = permute_factors(e, shape, perm);
    for (std::size_t row = 0; row < dim; ++row) p(row, col) = pe.amp[row];
  }
  return p;
}

Mat embed(const Mat& op, const SubsystemShape& shape,
          const std::vector<std::size_t>& targets) {
  std::size_t t_dim = 1;
  for (std::size_t t : targets) t_dim *= shape.factors.at(t);
  if (op.rows != t_dim || op.cols != t_dim)
    throw std::invalid_argument("embed: operator does not match target dims");
  // op (x) identity on [targets..., rest...], then permute back into place.
  std::vector<std::size_t> rest;
  std::vector<bool> is_t(shape.size(), false);
  for (std::size_t t : targets) is_t[t] = true;
  for (std::size_t i = 0; i < shape.size(); ++i)
    if (!is_t[i]) rest.push_back(i);
  std::vector<std::size_t> reordered = targets;
  reordered.insert(reordered.end(), rest.begin(), rest.end());
  std::size_t rest_dim = shape.dim() / t_dim;
  Mat big = tensor(op, Mat::identity(rest_dim));
  // permute from [targets, rest] ordering back to the original ordering:
  // output factor i must be input factor pos_in_reordered(i).
  std::vector<std::size_t> inv(shape.size());
  for (std::size_t i = 0; i < reordered.size(); ++i) inv[reordered[i]] = i;
  SubsystemShape reordered_shape;
  for (std::size_t i : reordered) reordered_shape.factors.push_back(shape.factors[i]);
  return permute_factors(big, reordered_shape, inv);
}

EigResult herm_eig(const Mat& h) {
  if (!h.is_square()) throw std::invalid_argument("herm_eig: not square");
  const std::size_t n = h.rows;
  const double scale = std::max(h.max_abs(), 1e-300);
  if (!h.is_hermitian(1e-8 * std::max(1.0, scale)))
    throw std::invalid_argument("herm_eig: input not Hermitian");

  // Work on the Hermitian average to kill roundoff asymmetry.
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
  Mat v = Mat::identity(n);

  const int max_sweeps = 60;
  const double stop = 1e-15 * scale * n;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) {
          a(p, q) = a(q, p) = cplx(0.0, 0.0);
          continue;
        }
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx se = s * phase;

        // Columns p and q of A <- A R with R = [[c, se], [-conj(se), c]].
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - std::conj(se) * aiq;
          a(i, q) = se * aip + c * aiq;
        }
        // Rows p and q of A <- R^dag A.
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - se * aqj;
          a(q, j) = std::conj(se) * apj + c * aqj;
        }
        a(p, q) = a(q, p) = cplx(0.0, 0.0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - std::conj(se) * viq;
          v(i, q) = se * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

  EigResult r;
  r.values.resize(n);
  r.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

Mat psd_sqrt(const Mat& a, double eps) {
  const auto e = herm_eig(a);
  const std::size_t n = a.rows;
  for (double lam : e.values)
    if (lam < -eps) throw std::invalid_argument("psd_sqrt: eigenvalue below -tolerance");
  // Eigenvalues at roundoff scale are exact zeros of the input; clamping
  // them keeps sqrt from amplifying O(eps) noise into O(sqrt(eps)).
  const double top = e.values.empty() ? 0.0 : std::max(e.values.front(), 0.0);
  const double cut = 1e-12 * top;
  Mat s(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = e.values[k] > cut ? e.values[k] : 0.0;
    const double root = std::sqrt(lam);
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        s(i, j) += root * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return s;
}

PureState purify(const DensityMatrix& rho, std::size_t min_ref_dim) {
  const auto e = herm_eig(rho.op);
  const std::size_t n = rho.dim();
  std::size_t rank = 0;
  for (double lam : e.values)
    if (lam > tol::rank) ++rank;
  const std::size_t ref = std::max<std::size_t>(std::max<std::size_t>(rank, min_ref_dim), 1);
  PureState psi{std::vector<cplx>(n * ref, cplx(0.0, 0.0))};
  for (std::size_t k = 0; k < rank; ++k) {
    const double w = std::sqrt(e.values[k]);
    for (std::size_t i = 0; i < n; ++i) psi.amp[i * ref + k] = w * e.vectors(i, k);
  }
  return psi;
}

namespace {

// Gram-Schmidt completion: extend the orthonormal columns 0..filled-1 of m
// to a full unitary using canonical basis candidates.
void complete_orthonormal(Mat& m, std::size_t filled) {
  const std::size_t n = m.rows;
  std::size_t next = filled;
  for (std::size_t cand = 0; cand < n && next < n; ++cand) {
    std::vector<cplx> v(n, cplx(0.0, 0.0));
    v[cand] = cplx(1.0, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < next; ++c) {
        cplx ov(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) ov += std::conj(m(i, c)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= ov * m(i, c);
      }
    }
    double nn = 0.0;
    for (const auto& z : v) nn += std::norm(z);
    nn = std::sqrt(nn);
    if (nn < 1e-8) continue;
    for (std::size_t i = 0; i < n; ++i) m(i, next) = v[i] / nn;
    ++next;
  }
  if (next != n) throw std::runtime_error("orthonormal completion failed");
}

}  // namespace

Mat polar_unitary(const Mat& g) {
  if (!g.is_square()) throw std::invalid_argument("polar_unitary: not square");
  const std::size_t n = g.rows;
  const auto e = herm_eig(g.dagger() * g);
  const double scale = std::max(e.values.empty() ? 0.0 : e.values.front(), 1e-300);
  // g = W P with P = (g^dag g)^{1/2}; W = g V diag(1/s) V^dag on the
  // non-null part, completed arbitrarily on the null space.  Columns with
  // small singular values come out of gv/s far from orthogonal, so the
  // whole set is re-orthonormalized in descending-σ order.
  Mat gv = g * e.vectors;
  Mat w(n, n);
  auto orthogonalize_against_prior = [&](std::vector<cplx>& v, std::size_t k) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t c = 0; c < k; ++c) {
        cplx ov(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) ov += std::conj(w(i, c)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= ov * w(i, c);
      }
    double nn = 0.0;
    for (const auto& z : v) nn += std::norm(z);
    return std::sqrt(nn);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(e.values[k], 0.0));
    std::vector<cplx> v(n, cplx(0.0, 0.0));
    double nn = 0.0;
    if (s > 1e-10 * std::sqrt(scale)) {
      for (std::size_t i = 0; i < n; ++i) v[i] = gv(i, k) / s;
      nn = orthogonalize_against_prior(v, k);
    }
    if (nn < 0.1) {
      // null or degenerate direction: fall back to a canonical candidate
      for (std::size_t cand = 0; cand < n; ++cand) {
        std::fill(v.begin(), v.end(), cplx(0.0, 0.0));
        v[cand] = cplx(1.0, 0.0);
        nn = orthogonalize_against_prior(v, k);
        if (nn >= 0.1) break;
      }
      if (nn < 0.1) throw std::runtime_error("polar_unitary: completion failed");
    }
    for (std::size_t i = 0; i < n; ++i) w(i, k) = v[i] / nn;
  }
  return w * e.vectors.dagger();
}

PureState uhlmann_purification(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const PureState& psi_rho) {
  const std::size_t ds = rho.dim();
  if (sigma.dim() != ds) throw std::invalid_argument("uhlmann: dimension mismatch");
  if (psi_rho.dim() % ds != 0) throw std::invalid_argument("uhlmann: purification dimension");
  const std::size_t dr = psi_rho.dim() / ds;

  // Amplitude matrix A with psi = sum_{s,r} A[s,r] |s>|r>; A A^dag must be rho.
  Mat amp(ds, dr);
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t r = 0; r < dr; ++r) amp(s, r) = psi_rho.amp[s * dr + r];
  const Mat check = amp * amp.dagger();
  double dev = 0.0;
  for (std::size_t i = 0; i < ds * ds; ++i) dev = std::max(dev, std::abs(check.a[i] - rho.op.a[i]));
  if (dev > 1e-7) throw std::invalid_argument("uhlmann: psi_rho does not purify rho");

  const auto es = herm_eig(sigma.op);
  std::size_t rank = 0;
  for (double lam : es.values)
    if (lam > tol::rank) ++rank;
  if (rank > dr) throw std::invalid_argument("uhlmann: reference too small for sigma");
  if (rank == 0) throw std::invalid_argument("uhlmann: sigma has no support");

  // c = D^{1/2} Us^dag A  (rank x dr); maximize Re tr(c w) over isometries
  // w = q p^dag built from the singular triplets of c.
  Mat us(ds, rank);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < ds; ++i) us(i, k) = es.vectors(i, k);
  Mat c(rank, dr);
  {
    Mat ua = us.dagger() * amp;
    for (std::size_t k = 0; k < rank; ++k) {
      const double w = std::sqrt(es.values[k]);
      for (std::size_t r = 0; r < dr; ++r) c(k, r) = w * ua(k, r);
    }
  }
  const auto ec = herm_eig(c.dagger() * c);  // dr x dr, values descending
  Mat q(dr, rank);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < dr; ++i) q(i, k) = ec.vectors(i, k);
  Mat cq = c * q;  // rank x rank, columns = sigma_k * p_k
  Mat p(rank, rank);
  std::size_t filled = 0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = std::sqrt(std::max(ec.values[k], 0.0));
    if (s <= 1e-13) break;
    for (std::size_t i = 0; i < rank; ++i) p(i, k) = cq(i, k) / s;
    ++filled;
  }
  complete_orthonormal(p, filled);

  // B = Us D^{1/2} p q^dag is a purification of sigma with tr(B^dag A) = sum_k s_k.
  Mat dp(rank, rank);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t j = 0; j < rank; ++j) dp(k, j) = std::sqrt(es.values[k]) * p(k, j);
  Mat b = us * (dp * q.dagger());
  PureState out{std::vector<cplx>(ds * dr)};
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t r = 0; r < dr; ++r) out.amp[s * dr + r] = b(s, r);
  return out;
}

}  // namespace qcommit
