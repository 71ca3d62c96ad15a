#include "qcommit/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "qcommit/random.hpp"

namespace qcommit::norms {

double trace_norm(const Mat& x) {
  if (!x.is_square()) throw std::invalid_argument("trace_norm: not square");
  const std::size_t n = x.rows;
  const double scale = x.max_abs();
  if (scale == 0.0) return 0.0;
  if (x.is_hermitian(1e-13 * scale)) {
    Mat h = x;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const cplx m = 0.5 * (h(i, j) + std::conj(h(j, i)));
        h(i, j) = m;
        h(j, i) = std::conj(m);
      }
    const auto e = herm_eig(h);
    double s = 0.0;
    for (double lam : e.values) s += std::abs(lam);
    return s;
  }
  // Hermitian dilation: eigenvalues come in +/- singular value pairs.
  Mat dil(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dil(i, n + j) = x(i, j);
      dil(n + i, j) = std::conj(x(j, i));
    }
  const auto e = herm_eig(dil);
  double s = 0.0;
  for (double lam : e.values) s += std::abs(lam);
  return 0.5 * s;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  // tr sqrt(sqrt(sigma) rho sqrt(sigma)) = |sqrt(rho) sqrt(sigma)|_tr; the
  // product form goes through the dilation eigensolve without squaring
  // small singular values, and is symmetric to machine precision.
  const Mat sr = psd_sqrt(rho.op, rho.tolerance);
  const Mat ss = psd_sqrt(sigma.op, sigma.tolerance);
  const double f = trace_norm(sr * ss);
  return std::min(f, 1.0);
}

FvdgBounds fvdg_bounds(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = fidelity(rho, sigma);
  FvdgBounds b;
  b.lower = 1.0 - f;
  b.mid = 0.5 * trace_norm(rho.op - sigma.op);
  b.upper = std::sqrt(std::max(0.0, 1.0 - f * f));
  if (b.lower > b.mid + 1e-9 || b.mid > b.upper + 1e-9)
    throw std::runtime_error("fvdg_bounds: ordering violated (numerical defect)");
  return b;
}

namespace {

// Purification pair of rho and sigma with overlap F(rho, sigma), both on
// system (x) reference with reference dimension = system dimension.
struct AlignedPair {
  PureState p, q;
};

AlignedPair aligned_purifications(const DensityMatrix& rho, const DensityMatrix& sigma) {
  AlignedPair out;
  out.p = purify(rho, rho.dim());
  out.q = uhlmann_purification(rho, sigma, out.p);
  return out;
}

double fidelity_sum_value(const DensityMatrix& rho, const DensityMatrix& sigma,
                          const DensityMatrix& xi) {
  const double fr = fidelity(rho, xi);
  const double fs = fidelity(xi, sigma);
  return fr * fr + fs * fs;
}

}  // namespace

FidelitySumResult fidelity_sum_opt(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   int restarts, std::uint64_t seed) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("fidelity_sum_opt: dimension mismatch");
  const std::size_t d = rho.dim();
  const double target = 1.0 + fidelity(rho, sigma);
  const double cert_tol = 1e-7;

  FidelitySumResult best;
  best.value = -1.0;

  Rng rng(seed);
  for (int r = 0; r <= restarts; ++r) {
    // Start 0 is the analytic construction: the midpoint of an aligned
    // purification pair attains the optimum exactly.
    DensityMatrix xi;
    if (r == 0) {
      const auto pair = aligned_purifications(rho, sigma);
      PureState m = pair.p;
      const cplx ov = inner(pair.p, pair.q);
      const cplx phase = std::abs(ov) > 1e-15 ? ov / std::abs(ov) : cplx(1.0, 0.0);
      for (std::size_t i = 0; i < m.dim(); ++i) m.amp[i] += pair.q.amp[i] / phase;
      m.normalize();
      xi = DensityMatrix::unchecked(
          partial_trace(m.projector(), SubsystemShape({d, d}), {0}));
    } else {
      Rng child = rng.child((std::uint64_t)r);
      xi = random_density(d, d, child);
    }

    double value = fidelity_sum_value(rho, sigma, xi);
    int it = 0;
    for (; it < 200; ++it) {
      if (std::abs(value - target) <= cert_tol) break;
      // Align purifications of rho and sigma to the current xi, then the
      // best next midpoint is the top eigenvector of pp^dag + qq^dag.
      PureState m = purify(xi, d);
      PureState p = uhlmann_purification(xi, rho, m);
      PureState q = uhlmann_purification(xi, sigma, m);
      const cplx pq = inner(p, q);
      const cplx phase = std::abs(pq) > 1e-15 ? pq / std::abs(pq) : cplx(1.0, 0.0);
      PureState next = p;
      for (std::size_t i = 0; i < next.dim(); ++i) next.amp[i] += q.amp[i] / phase;
      const double nn = next.norm();
      if (nn < 1e-12) break;
      next.normalize();
      xi = DensityMatrix::unchecked(
          partial_trace(next.projector(), SubsystemShape({d, d}), {0}));
      const double nv = fidelity_sum_value(rho, sigma, xi);
      if (nv <= value + 1e-14) { value = nv; break; }
      value = nv;
    }
    if (value > best.value) {
      best.value = value;
      best.optimizer_state = xi;
      best.iterations = it;
      best.converged = std::abs(value - target) <= 1e-6;
    }
    if (best.converged) break;
  }
  return best;
}

double swap_test_accept(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("swap_test_accept: dimension mismatch");
  return 0.5 + 0.5 * (rho.op * sigma.op).trace().real();
}

namespace {

// Sign observable of a Hermitian matrix (zero eigenvalues to +1).
Mat sign_observable(const Mat& h) {
  const auto e = herm_eig(h);
  const std::size_t n = h.rows;
  Mat m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = e.values[k] >= -1e-12 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return m;
}

PureState top_eigvec(const Mat& h) {
  const auto e = herm_eig(h);
  PureState v{std::vector<cplx>(h.rows)};
  for (std::size_t i = 0; i < h.rows; ++i) v.amp[i] = e.vectors(i, 0);
  return v;
}

struct AscentResult {
  double value = 0.0;
  PureState input;
  bool converged = false;
};

// Alternating ascent for |(id_ref (x) (phi0 - phi1))(|phi><phi|)|_tr over
// pure inputs.  Fixing the sign observable M the objective is a quadratic
// form <phi| W |phi| with W = (id (x) Phi)^dag(M); both partial updates
// are exact eigenproblems, so the value is monotone.
AscentResult ascend_difference_norm(const Channel& c0, const Channel& c1,
                                    std::size_t ref_dim, PureState phi, int max_iter) {
  AscentResult r;
  r.input = std::move(phi);
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Mat x = c0.apply_right(r.input.projector(), ref_dim) -
                  c1.apply_right(r.input.projector(), ref_dim);
    r.value = trace_norm(x);
    if (r.value <= prev + 1e-12) { r.converged = true; break; }
    prev = r.value;
    const Mat m = sign_observable(x);
    const Mat w = c0.adjoint_apply_right(m, ref_dim) - c1.adjoint_apply_right(m, ref_dim);
    r.input = top_eigvec(w);
  }
  return r;
}

// Deterministic starts worth trying before random ones: unentangled basis
// states and a uniform superposition.
std::vector<PureState> canonical_starts(std::size_t dim) {
  std::vector<PureState> v;
  for (std::size_t k = 0; k < std::min<std::size_t>(dim, 4); ++k)
    v.push_back(PureState::basis(dim, k));
  PureState plus{std::vector<cplx>(dim, cplx(1.0 / std::sqrt((double)dim), 0.0))};
  v.push_back(plus);
  return v;
}

}  // namespace

DiamondEstimate diamond_lower(const Channel& phi0, const Channel& phi1,
                              int restarts, std::uint64_t seed) {
  if (phi0.dim_in != phi1.dim_in || phi0.dim_out != phi1.dim_out)
    throw std::invalid_argument("diamond_lower: channel dimension mismatch");
  const std::size_t din = phi0.dim_in;
  const std::size_t ref = din;
  const std::size_t dim = ref * din;

  DiamondEstimate est;
  est.restarts = restarts;
  Rng rng(seed);

  std::vector<PureState> starts = canonical_starts(dim);
  for (int r = 0; r < restarts; ++r) {
    Rng child = rng.child((std::uint64_t)r + 1000);
    starts.push_back(random_pure(dim, child));
  }
  bool first = true;
  for (const auto& s : starts) {
    const auto a = ascend_difference_norm(phi0, phi1, ref, s, 300);
    if (first || a.value > est.lower_bound) {
      est.lower_bound = a.value;
      est.maximizer = a.input;
      est.converged = a.converged;
      first = false;
    }
  }
  return est;
}

double diamond_dim_bound(const Channel& phi0, const Channel& phi1,
                         int restarts, std::uint64_t seed) {
  if (phi0.dim_in != phi1.dim_in || phi0.dim_out != phi1.dim_out)
    throw std::invalid_argument("diamond_dim_bound: channel dimension mismatch");
  const std::size_t din = phi0.dim_in;

  const auto lower = diamond_lower(phi0, phi1, restarts, seed);

  double induced = 0.0;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<PureState> starts = canonical_starts(din);
  // The reduced diamond maximizer is a strong deterministic start.
  {
    const Mat red = partial_trace(lower.maximizer.projector(),
                                  SubsystemShape({din, din}), {1});
    starts.push_back(top_eigvec(red));
  }
  for (int r = 0; r < restarts; ++r) {
    Rng child = rng.child((std::uint64_t)r + 2000);
    starts.push_back(random_pure(din, child));
  }
  for (const auto& s : starts) {
    const auto a = ascend_difference_norm(phi0, phi1, 1, s, 300);
    induced = std::max(induced, a.value);
  }
  const double bound = (double)din * induced;
  if (lower.lower_bound > bound + 1e-6)
    throw std::runtime_error("diamond_dim_bound: bound below diamond lower bound");
  return bound;
}

double advantage(const Channel& d, const Mat& advice,
                 const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw std::invalid_argument("advantage: dimension mismatch");
  const bool with_advice = advice.rows > 0;
  const Mat in0 = with_advice ? tensor(rho0.op, advice) : rho0.op;
  const Mat in1 = with_advice ? tensor(rho1.op, advice) : rho1.op;
  if (in0.rows != d.dim_in) throw std::invalid_argument("advantage: distinguisher input mismatch");
  return std::abs(d.accept_probability(in0) - d.accept_probability(in1));
}

Mat helstrom_projector(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  const auto e = herm_eig(rho0.op - rho1.op);
  const std::size_t n = rho0.dim();
  Mat p(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] < -1e-12) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p(i, j) += e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return p;
}

}  // namespace qcommit::norms
