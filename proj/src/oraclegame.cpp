#include "qcommit/oraclegame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcommit/norms.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcommit::oracle {

namespace {

double statistic(const PUniformSpec& spec, const Mat& u) {
  // Re <r|U|r>
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < spec.d; ++i)
    for (std::size_t j = 0; j < spec.d; ++j)
      s += std::conj(spec.reference.amp[i]) * u(i, j) * spec.reference.amp[j];
  return s.real();
}

}  // namespace

PUniformSpec make_p_uniform(std::size_t d, std::size_t m, std::uint64_t seed,
                            std::size_t calibration_samples) {
  if (d < 1 || d > 32) throw std::invalid_argument("make_p_uniform: d in 1..32");
  if (m > 8) throw std::invalid_argument("make_p_uniform: m in 0..8");
  PUniformSpec spec;
  spec.d = d;
  spec.m = m;
  spec.reference = PureState::basis(d, 0);
  spec.seed = seed;
  spec.calibration_samples = calibration_samples;
  if (m == 0) return spec;  // plain Haar

  const double target = std::pow(2.0, -(double)m);
  const Rng master(seed ^ 0xabcdef1234567890ull);
  std::vector<double> stats(calibration_samples);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)calibration_samples; ++i) {
    Rng c = master.child((std::uint64_t)i);
    stats[i] = statistic(spec, haar_unitary(d, c));
  }
  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t idx = (std::size_t)((1.0 - target) * (double)(calibration_samples - 1));
  spec.threshold = sorted[idx];

  // Fresh batch for the measured event probability.
  std::vector<unsigned char> hits(calibration_samples, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)calibration_samples; ++i) {
    Rng c = master.child(0x100000000ull + (std::uint64_t)i);
    hits[i] = statistic(spec, haar_unitary(d, c)) >= spec.threshold ? 1 : 0;
  }
  std::size_t hit = 0;
  for (unsigned char h : hits) hit += h;
  spec.event_probability = (double)hit / (double)calibration_samples;
  if (spec.event_probability < 0.5 * target || spec.event_probability > 2.0 * target)
    throw std::runtime_error("make_p_uniform: calibrated event mass out of range");
  return spec;
}

std::vector<Mat> p_uniform_sample(const PUniformSpec& spec, std::size_t n,
                                  std::uint64_t seed) {
  // One independent rejection stream per sample index: deterministic under
  // any thread schedule, and trivially parallel.
  std::vector<Mat> out(n);
  const Rng master(seed);
  bool aborted = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (long long i = 0; i < (long long)n; ++i) {
    if (aborted) continue;
    Rng c = master.child((std::uint64_t)i);
    for (std::size_t attempt = 0;; ++attempt) {
      Mat u = haar_unitary(spec.d, c);
      if (spec.threshold <= -1.0 || statistic(spec, u) >= spec.threshold) {
        out[i] = std::move(u);
        break;
      }
      if (attempt >= 1000000) {
        aborted = true;
        break;
      }
    }
  }
  if (aborted) throw std::runtime_error("p_uniform_sample: acceptance rate below 1e-6");
  return out;
}

McEstimate expected_norm_core(const std::vector<Mat>& samples, std::uint64_t seed,
                              int bootstrap_replicates) {
  if (samples.empty()) throw std::invalid_argument("expected_norm_core: no samples");
  const std::size_t d = samples.front().rows;
  const std::size_t n = samples.size();
  Mat mean(d, d);
  for (const auto& u : samples) mean += u;
  mean *= cplx(1.0 / (double)n, 0.0);

  McEstimate est;
  est.samples = n;
  est.mean = norms::trace_norm(mean);

  // Bootstrap RMS deviation about the point estimate (bias included).
  const Rng master(seed ^ 0x5bd1e995u);
  std::vector<double> dev(bootstrap_replicates);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int b = 0; b < bootstrap_replicates; ++b) {
    Rng c = master.child((std::uint64_t)b);
    Mat bm(d, d);
    for (std::size_t i = 0; i < n; ++i) bm += samples[c.next_u64() % n];
    bm *= cplx(1.0 / (double)n, 0.0);
    const double t = norms::trace_norm(bm);
    dev[b] = (t - est.mean) * (t - est.mean);
  }
  double acc = 0.0;
  for (double v : dev) acc += v;
  est.std_error = std::sqrt(acc / (double)bootstrap_replicates);
  return est;
}

McEstimate expected_norm(const PUniformSpec& spec, std::size_t n, std::uint64_t seed) {
  const auto samples = p_uniform_sample(spec, n, seed);
  return expected_norm_core(samples, seed);
}

OracleInput::OracleInput(cplx a, cplx b) : alpha(a), beta(b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
    throw std::invalid_argument("OracleInput: control qubit not normalized");
}

Mat oracle_apply(int kind, const Mat* hidden, const OracleInput& input, std::size_t d) {
  if (kind != 1 && kind != 2) throw std::invalid_argument("oracle_apply: kind is 1 or 2");
  if (kind == 1 && (hidden == nullptr || hidden->rows != d))
    throw std::invalid_argument("oracle_apply: kind 1 needs a hidden d x d unitary");
  const std::size_t dhk = d * d;
  Mat out(2 * dhk, 2 * dhk);
  const double w = 1.0 / (double)dhk;
  for (std::size_t x = 0; x < dhk; ++x) {
    out(x, x) = std::norm(input.alpha) * w;
    out(dhk + x, dhk + x) = std::norm(input.beta) * w;
  }
  if (kind == 1) {
    const cplx c01 = input.alpha * std::conj(input.beta) * w;
    const cplx c10 = std::conj(input.alpha) * input.beta * w;
    for (std::size_t h1 = 0; h1 < d; ++h1)
      for (std::size_t h2 = 0; h2 < d; ++h2) {
        const cplx udag = std::conj((*hidden)(h2, h1));  // U^dag entries
        const cplx u = (*hidden)(h1, h2);
        for (std::size_t kk = 0; kk < d; ++kk) {
          out(h1 * d + kk, dhk + h2 * d + kk) = c01 * udag;
          out(dhk + h1 * d + kk, h2 * d + kk) = c10 * u;
        }
      }
  }
  return out;
}

namespace {

// tr(a b) without forming the product.
double trace_of_product(const Mat& a, const Mat& b) {
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * b(j, i);
  return s.real();
}

// (id_B (x) O)(|phi+><phi+|) on [B, A, H, K]; dim 4 d^2.
Mat oracle_on_entangled(int kind, const Mat* hidden, std::size_t d) {
  const std::size_t dhk = d * d;
  const std::size_t dim = 4 * dhk;
  Mat out(dim, dim);
  const double w = 0.5 / (double)dhk;
  // Block (b_i a_i, b_j a_j) of |phi+><phi+| is 1/2 for b_i = a_i, b_j = a_j.
  // O(|0><0|) and O(|1><1|) contribute identity on HK; O(|0><1|), O(|1><0|)
  // carry the hidden unitary for kind 1.
  auto block_base = [&](std::size_t b, std::size_t a) { return (b * 2 + a) * dhk; };
  for (std::size_t x = 0; x < dhk; ++x) {
    out(block_base(0, 0) + x, block_base(0, 0) + x) += w;
    out(block_base(1, 1) + x, block_base(1, 1) + x) += w;
  }
  if (kind == 1) {
    for (std::size_t h1 = 0; h1 < d; ++h1)
      for (std::size_t h2 = 0; h2 < d; ++h2) {
        const cplx udag = std::conj((*hidden)(h2, h1));
        const cplx u = (*hidden)(h1, h2);
        for (std::size_t kk = 0; kk < d; ++kk) {
          out(block_base(0, 0) + h1 * d + kk, block_base(1, 1) + h2 * d + kk) = w * udag;
          out(block_base(1, 1) + h1 * d + kk, block_base(0, 0) + h2 * d + kk) = w * u;
        }
      }
  }
  return out;
}

}  // namespace

Channel honest_prover(const Mat& hidden) {
  const std::size_t d = hidden.rows;
  Mat c(2 * d, 2 * d);
  const Mat ud = hidden.dagger();
  for (std::size_t i = 0; i < d; ++i) {
    c(i, i) = cplx(1.0, 0.0);
    for (std::size_t j = 0; j < d; ++j) c(d + i, d + j) = ud(i, j);
  }
  return Channel::from_unitary(c);
}

Channel replace_control_prover(std::size_t d) {
  // Trace out A, prepare |0>, keep H: Kraus |0a><ba| over b, a.
  std::vector<Mat> ks;
  for (std::size_t b = 0; b < 2; ++b) {
    Mat k(2 * d, 2 * d);
    for (std::size_t a = 0; a < d; ++a) k(a, b * d + a) = cplx(1.0, 0.0);
    ks.push_back(std::move(k));
  }
  return Channel(2 * d, 2 * d, std::move(ks));
}

double protocol_accept(int kind, const Mat* hidden, const Channel& prover, std::size_t d) {
  if (prover.dim_in != 2 * d || prover.dim_out != 2 * d)
    throw std::invalid_argument("protocol_accept: prover must act on A (x) H");
  const Mat state0 = oracle_on_entangled(kind, hidden, d);
  // Prover on (A, H), identity on B and K.
  const std::size_t dim = 4 * d * d;
  Mat state(dim, dim);
  const Mat idk = Mat::identity(d);
  const Mat idb = Mat::identity(2);
  for (const auto& k : prover.kraus) {
    const Mat kk = tensor(idb, tensor(k, idk));
    state += kk * state0 * kk.dagger();
  }
  // Project onto |phi+> on (B, A).
  PureState bell(std::vector<cplx>{cplx(1.0 / std::sqrt(2.0), 0.0), cplx(0.0, 0.0),
                                   cplx(0.0, 0.0), cplx(1.0 / std::sqrt(2.0), 0.0)});
  const Mat meas = tensor(bell.projector(), Mat::identity(d * d));
  return trace_of_product(meas, state);
}

double searched_prover_accept(std::size_t d, int restarts, std::uint64_t seed) {
  const Mat state0 = oracle_on_entangled(2, nullptr, d);
  PureState bell(std::vector<cplx>{cplx(1.0 / std::sqrt(2.0), 0.0), cplx(0.0, 0.0),
                                   cplx(0.0, 0.0), cplx(1.0 / std::sqrt(2.0), 0.0)});
  const Mat meas = tensor(bell.projector(), Mat::identity(d * d));
  const Mat idk = Mat::identity(d);
  const Mat idb = Mat::identity(2);
  const SubsystemShape bahk({2, 2 * d, d});

  auto accept_of = [&](const Mat& v) {
    const Mat vv = tensor(idb, tensor(v, idk));
    return trace_of_product(meas, vv * state0 * vv.dagger());
  };

  double best = protocol_accept(2, nullptr, Channel::identity(2 * d), d);
  {
    const double r = protocol_accept(2, nullptr, replace_control_prover(d), d);
    best = std::max(best, r);
  }
  Rng rng(seed);
  for (int r = 0; r < restarts; ++r) {
    Rng child = rng.child((std::uint64_t)r);
    Mat v = haar_unitary(2 * d, child);
    double val = accept_of(v);
    for (int it = 0; it < 30; ++it) {
      const Mat vv = tensor(idb, tensor(v, idk));
      const Mat gfull = meas * vv * state0;
      // Contract the identity factors of the gradient back onto A (x) H.
      const Mat g = partial_trace(gfull, bahk, {1});
      if (g.max_abs() < 1e-14) break;
      v = polar_unitary(g);
      const double nv = accept_of(v);
      if (nv <= val + 1e-12) { val = std::max(val, nv); break; }
      val = nv;
    }
    best = std::max(best, val);
  }
  return best;
}

McEstimate per_query_gap(const PUniformSpec& spec, const OracleInput& input,
                         std::size_t n, std::uint64_t seed) {
  const auto samples = p_uniform_sample(spec, n, seed);
  const std::size_t d = spec.d;

  // Direct route: averaged kind-1 output minus the kind-2 output.
  Mat avg(2 * d * d, 2 * d * d);
  for (const auto& u : samples) avg += oracle_apply(1, &u, input, d);
  avg *= cplx(1.0 / (double)n, 0.0);
  const Mat o2 = oracle_apply(2, nullptr, input, d);
  const double direct = norms::trace_norm(avg - o2);

  // Closed form on the same samples.
  const double pref = 2.0 * std::abs(input.alpha) * std::abs(input.beta) / (double)d;
  const auto mean_est = expected_norm_core(samples, seed);
  const double formula = pref * mean_est.mean;

  McEstimate est;
  est.samples = n;
  est.mean = direct;
  est.std_error = pref * mean_est.std_error;
  const double combined = est.std_error + 1e-9;
  if (std::abs(direct - formula) > combined)
    throw std::runtime_error("per_query_gap: direct and closed-form estimates disagree");
  return est;
}

bool p_uniform_invariance_check(const PUniformSpec& spec, const Mat& u, std::size_t n,
                                std::uint64_t seed, bool on_states) {
  if (!u.is_unitary(tol::eig))
    throw std::invalid_argument("p_uniform_invariance_check: u not unitary");
  const auto samples = p_uniform_sample(spec, n, seed);
  const std::size_t d = spec.d;
  const double p = spec.event_probability;

  // Unitary statistic |<r|V|r>|^2, or |<r|psi>|^2 for the pushforward
  // state psi = V|d-1>; both are Beta(1, d-1) under Haar, so the
  // reference bin masses are exact.
  const int bins = 8;
  std::vector<double> qhat(bins, 0.0);
  std::vector<cplx> probe(d, cplx(0.0, 0.0));
  if (on_states) probe[d - 1] = cplx(1.0, 0.0);
  else probe = spec.reference.amp;
  for (const auto& s : samples) {
    const Mat v = u * s;
    cplx amp(0.0, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        amp += std::conj(spec.reference.amp[i]) * v(i, j) * probe[j];
    const double t = std::min(std::norm(amp), 1.0 - 1e-15);
    qhat[(int)(t * bins)] += 1.0;
  }
  for (auto& q : qhat) q /= (double)n;

  for (int k = 0; k < bins; ++k) {
    const double a = (double)k / bins, b = (double)(k + 1) / bins;
    const double mu = std::pow(1.0 - a, (double)d - 1.0) - std::pow(1.0 - b, (double)d - 1.0);
    const double se_q = std::sqrt(std::max(qhat[k] * (1.0 - qhat[k]), 1.0 / (double)n) / (double)n);
    const double se_p = spec.calibration_samples > 0
                            ? (mu / p) * std::sqrt((1.0 - p) / (p * (double)spec.calibration_samples))
                            : 0.0;
    if (qhat[k] > mu / p + 3.0 * (se_q + se_p) + 1e-3) return false;
  }
  return true;
}

}  // namespace qcommit::oracle
