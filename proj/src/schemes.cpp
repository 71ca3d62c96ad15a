#include "qcommit/schemes.hpp"

#include <cmath>
#include <stdexcept>

#include "qcommit/norms.hpp"

namespace qcommit::schemes {

namespace {

// Full output |phi_b> = U_scheme |0...0> on [O, G] for a discard-free circuit.
PureState qsd_full_output(const Circuit& c) {
  const auto s = scheme_spaces(c);
  PureState in = PureState::basis(s.dim_in * s.dim_anc, 0);
  PureState out{std::vector<cplx>(in.dim())};
  kernels::matmul(s.unitary.a.data(), in.amp.data(), out.amp.data(), in.dim(), in.dim(), 1);
  return out;
}

}  // namespace

std::pair<PureState, DensityMatrix> qsd_commit(const QSDInstance& inst, int b) {
  const Circuit& c = b == 0 ? inst.c0 : inst.c1;
  const auto s = scheme_spaces(c);
  PureState phi = qsd_full_output(c);
  DensityMatrix msg = DensityMatrix::unchecked(
      partial_trace(phi.projector(), SubsystemShape({s.dim_o, s.dim_g}), {0}));
  return {std::move(phi), std::move(msg)};
}

double qsd_verify(const QSDInstance& inst, int b, const DensityMatrix& full_state) {
  const Circuit& c = b == 0 ? inst.c0 : inst.c1;
  const PureState phi = qsd_full_output(c);
  if (full_state.dim() != phi.dim())
    throw std::invalid_argument("qsd_verify: dimension mismatch");
  cplx p(0.0, 0.0);
  for (std::size_t i = 0; i < phi.dim(); ++i)
    for (std::size_t j = 0; j < phi.dim(); ++j)
      p += std::conj(phi.amp[i]) * full_state.op(i, j) * phi.amp[j];
  return p.real();
}

CheatReport qsd_optimal_cheat(const QSDInstance& inst, int restarts, std::uint64_t seed) {
  const auto s0 = scheme_spaces(inst.c0);
  const auto s1 = scheme_spaces(inst.c1);
  if (s0.dim_o != s1.dim_o || s0.dim_g != s1.dim_g)
    throw std::invalid_argument("qsd_optimal_cheat: mismatched output spaces");
  const std::size_t dim_o = s0.dim_o, dim_g = s0.dim_g;

  const DensityMatrix rho0 = qsd_output(inst.c0);
  const DensityMatrix rho1 = qsd_output(inst.c1);
  const double f = norms::fidelity(rho0, rho1);
  const auto opt = norms::fidelity_sum_opt(rho0, rho1, restarts, seed);
  const DensityMatrix& gamma = opt.optimizer_state;

  // Reveal states: extend the commit state gamma on O to O (x) G so that
  // the overlap with |phi_b> reaches F(rho_b, gamma)^2.  An auxiliary
  // space P of size rank(gamma) makes the Uhlmann purification fit into
  // the G (x) P reference, after which P is traced away.
  std::size_t rank = 0;
  {
    const auto e = herm_eig(gamma.op);
    for (double lam : e.values)
      if (lam > tol::rank) ++rank;
  }
  const std::size_t dim_p = std::max<std::size_t>(rank, 1);

  CheatReport rep;
  const PureState phi[2] = {qsd_full_output(inst.c0), qsd_full_output(inst.c1)};
  const DensityMatrix* rho[2] = {&rho0, &rho1};
  double p[2];
  for (int b = 0; b < 2; ++b) {
    PureState phi_ext = tensor(phi[b], PureState::basis(dim_p, 0));
    PureState u = uhlmann_purification(*rho[b], gamma, phi_ext);
    Mat xi_full = u.projector();
    Mat xi = partial_trace(xi_full, SubsystemShape({dim_o, dim_g, dim_p}), {0, 1});
    p[b] = qsd_verify(inst, b, DensityMatrix::unchecked(xi));
  }
  rep.p_reveal_0 = p[0];
  rep.p_reveal_1 = p[1];
  rep.average = 0.5 * (p[0] + p[1]);

  const double optimum = 0.5 * (1.0 + f);
  if (!opt.converged)
    rep.strategy_note = "sum-fidelity optimizer did not certify; best value reported; ";
  if (std::abs(rep.average - optimum) > 1e-6)
    throw std::runtime_error("qsd_optimal_cheat: constructed strategy missed (1 + F)/2");

  rep.analytic_bound = inst.kind == Kind::yes ? 0.5 + std::sqrt(inst.mu) / 2.0 : optimum;
  if (rep.average > rep.analytic_bound + 1e-6)
    throw std::runtime_error("qsd_optimal_cheat: average above analytic bound");

  // Independent adversary search; it must stay at or below the optimum.
  // A handful of restarts suffices for a cross-check.
  CheatProblem prob;
  prob.dim_a = dim_o;
  prob.dim_b = dim_g;
  prob.dim_r = std::min<std::size_t>(dim_o * dim_g, 8);
  prob.e0 = phi[0].projector();
  prob.e1 = phi[1].projector();
  const auto found = search_constrained_cheat(prob, std::min(restarts, 6), seed + 1);
  if (found.value > optimum + 1e-6)
    throw std::runtime_error("qsd_optimal_cheat: search exceeded the analytic optimum");
  rep.strategy_note += "commit sum-fidelity optimizer, reveal aligned purifications; searched adversary reached " +
                       std::to_string(found.value);
  return rep;
}

namespace {

struct SwapSchemeData {
  // |phi_b> = (I_F (x) U_b)(|phi*> (x) |0>) on [F, O, G]; A = F (x) O, B = G.
  PureState phi0, phi1;
  std::size_t dim_f = 1, dim_o = 1, dim_g = 1;
  std::size_t dim_a = 1;
};

SwapSchemeData swap_scheme_data(const QCDInstance& inst, const PureState& advice) {
  const auto s0 = scheme_spaces(inst.c0);
  const auto s1 = scheme_spaces(inst.c1);
  if (s0.dim_o != s1.dim_o || s0.dim_g != s1.dim_g || s0.dim_in != s1.dim_in)
    throw std::invalid_argument("swap scheme: mismatched circuit spaces");
  SwapSchemeData d;
  d.dim_f = s0.dim_in;  // reference copies the input space
  d.dim_o = s0.dim_o;
  d.dim_g = s0.dim_g;
  d.dim_a = d.dim_f * d.dim_o;
  if (advice.dim() != d.dim_f * s0.dim_in)
    throw std::invalid_argument("swap scheme: advice dimension mismatch");
  const PureState in = tensor(advice, PureState::basis(s0.dim_anc, 0));
  const std::vector<std::size_t> factors = {d.dim_f, s0.dim_in * s0.dim_anc};
  PureState out0{std::vector<cplx>(in.dim())}, out1{std::vector<cplx>(in.dim())};
  kernels::apply_factor_op_vec(s0.unitary.a.data(), {1}, in.amp.data(), factors, out0.amp.data());
  kernels::apply_factor_op_vec(s1.unitary.a.data(), {1}, in.amp.data(), factors, out1.amp.data());
  d.phi0 = std::move(out0);
  d.phi1 = std::move(out1);
  return d;
}

Mat swap_effect(const PureState& phi) {
  Mat e = phi.projector();
  const Mat id = Mat::identity(phi.dim());
  for (std::size_t i = 0; i < e.a.size(); ++i) e.a[i] = 0.5 * (e.a[i] + id.a[i]);
  return e;
}

}  // namespace

PureState qcd_advice(const QCDInstance& inst, int restarts, std::uint64_t seed) {
  const auto est = norms::diamond_lower(inst.q0, inst.q1, restarts, seed);
  if (est.lower_bound < 2.0 - inst.mu - 1e-4)
    throw std::runtime_error("qcd_advice: instance failed Y verification");
  return est.maximizer;
}

CommitTranscript qcd_round(const QCDInstance& inst, int b, const PureState& advice,
                           int reveal_bit) {
  if (reveal_bit < 0) reveal_bit = b;
  const auto d = swap_scheme_data(inst, advice);
  const PureState& sent = b == 0 ? d.phi0 : d.phi1;
  const PureState& ref = reveal_bit == 0 ? d.phi0 : d.phi1;

  CommitTranscript t;
  t.scheme = SchemeType::qcd_swap;
  t.committed_bit = b;
  const SubsystemShape ab({d.dim_a, d.dim_g});
  t.commit_state = DensityMatrix::unchecked(partial_trace(sent.projector(), ab, {0}));
  t.reveal_state = DensityMatrix::from_pure(sent);
  // The verifier undoes U_reveal and swap-tests against its advice copy;
  // equivalently a swap test between the sent state and |phi_reveal>.
  const double overlap = std::norm(inner(ref, sent));
  t.accept_probability = 0.5 + 0.5 * overlap;
  t.accepted = t.accept_probability >= 1.0 - 1e-9;
  return t;
}

namespace {

CheatProblem repetition_problem(const QCDInstance& inst, int k, const PureState& advice) {
  const auto d = swap_scheme_data(inst, advice);
  CheatProblem prob;
  prob.dim_a = 1;
  prob.dim_b = 1;
  for (int i = 0; i < k; ++i) {
    prob.dim_a *= d.dim_a;
    prob.dim_b *= d.dim_g;
  }
  prob.dim_r = prob.dim_b > 1 ? std::min<std::size_t>(prob.dim_b * prob.dim_b, 16) : 1;

  const Mat e_block[2] = {swap_effect(d.phi0), swap_effect(d.phi1)};
  for (int b = 0; b < 2; ++b) {
    Mat e = e_block[b];
    for (int i = 1; i < k; ++i) e = tensor(e, e_block[b]);
    if (k > 1 && d.dim_g > 1) {
      // Reorder [(A1 B1) ... (Ak Bk)] -> [A1..Ak, B1..Bk].
      std::vector<std::size_t> factors, perm;
      for (int i = 0; i < k; ++i) {
        factors.push_back(d.dim_a);
        factors.push_back(d.dim_g);
      }
      for (int i = 0; i < k; ++i) perm.push_back(2 * (std::size_t)i);
      for (int i = 0; i < k; ++i) perm.push_back(2 * (std::size_t)i + 1);
      e = permute_factors(e, SubsystemShape(factors), perm);
    }
    (b == 0 ? prob.e0 : prob.e1) = std::move(e);
  }
  return prob;
}

}  // namespace

double test_pass_prob(const DensityMatrix& rho, const PureState& phi, int k,
                      const SubsystemShape& block) {
  if (k < 1) throw std::invalid_argument("test_pass_prob: k >= 1");
  if (phi.dim() != block.dim()) throw std::invalid_argument("test_pass_prob: phi/block mismatch");
  std::size_t dim = 1;
  for (int i = 0; i < k; ++i) dim *= block.dim();
  if (rho.dim() != dim) throw std::invalid_argument("test_pass_prob: rho dimension");
  // Each of the k commuting swap-test projectors contracts with its fresh
  // copy of phi to the effect (I + |phi><phi|)/2 on its block.
  Mat e = swap_effect(phi);
  Mat full = e;
  for (int i = 1; i < k; ++i) full = tensor(full, e);
  return (rho.op * full).trace().real();
}

RepetitionAdversary repetition_adversary(const QCDInstance& inst, int k,
                                         const PureState& advice, int restarts,
                                         std::uint64_t seed) {
  RepetitionAdversary out;
  out.problem = repetition_problem(inst, k, advice);
  out.adversary = search_constrained_cheat(out.problem, restarts, seed).adversary;
  return out;
}

CheatReport qcd_single_round_cheat(const QCDInstance& inst, const PureState& advice,
                                   int restarts, std::uint64_t seed) {
  const auto d = swap_scheme_data(inst, advice);
  const auto prob = repetition_problem(inst, 1, advice);
  const auto found = search_constrained_cheat(prob, restarts, seed);

  CheatReport rep;
  rep.p_reveal_0 = found.p0;
  rep.p_reveal_1 = found.p1;
  rep.average = found.value;
  rep.analytic_bound = 0.75 + std::sqrt(std::max(inst.mu, 0.0)) / 4.0;
  rep.strategy_note = "steered shared state with attacks on garbage and reference";
  if (rep.average > rep.analytic_bound + 1e-6)
    throw std::runtime_error("qcd_single_round_cheat: searched value above bound");
  if (std::abs(inner(d.phi0, d.phi1)) <= 1e-9 && rep.average < 0.75 - 1e-3)
    throw std::runtime_error("qcd_single_round_cheat: search missed the ideal optimum");
  return rep;
}

CheatReport repetition_cheat(const QCDInstance& inst, int k, const PureState& advice,
                             int restarts, std::uint64_t seed) {
  if (k < 1 || k > 3) throw std::invalid_argument("repetition_cheat: k in 1..3");
  const auto prob = repetition_problem(inst, k, advice);
  const auto found = search_constrained_cheat(prob, restarts, seed);

  CheatReport rep;
  rep.p_reveal_0 = found.p0;
  rep.p_reveal_1 = found.p1;
  rep.average = found.value;
  rep.analytic_bound = 0.5 + std::pow(2.0, -(double)(k + 1)) +
                       2.0 * std::sqrt(2.0 * (double)k * std::max(inst.mu, 0.0));
  rep.strategy_note = "k-fold repetition, steered shared state";
  if (rep.average > rep.analytic_bound + 1e-6)
    throw std::runtime_error("repetition_cheat: searched value above bound");
  return rep;
}

OrthogonalizeResult orthogonalize(const PureState& phi0, const PureState& phi1,
                                  const SubsystemShape& split) {
  if (split.size() != 2) throw std::invalid_argument("orthogonalize: split must be A,B");
  if (phi0.dim() != split.dim() || phi1.dim() != split.dim())
    throw std::invalid_argument("orthogonalize: state/split mismatch");
  const std::size_t da = split.factors[0];

  const Mat r0 = partial_trace(phi0.projector(), split, {0});
  const Mat r1 = partial_trace(phi1.projector(), split, {0});
  const double dist = norms::trace_norm(r0 - r1);
  const double eps = 2.0 - dist;
  if (eps >= 1.0)
    throw std::invalid_argument("orthogonalize: reduced states too close (eps >= 1)");

  const auto e = herm_eig(r0 - r1);
  Mat proj_plus(da, da);
  for (std::size_t kk = 0; kk < da; ++kk) {
    if (e.values[kk] < -1e-12) continue;
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        proj_plus(i, j) += e.vectors(i, kk) * std::conj(e.vectors(j, kk));
  }
  const Mat proj_minus = Mat::identity(da) - proj_plus;

  auto project = [&](const Mat& rho, const Mat& p) {
    Mat out = p * rho * p;
    const double tr = out.trace().real();
    if (tr <= 1e-15) throw std::runtime_error("orthogonalize: projected state vanished");
    out *= cplx(1.0 / tr, 0.0);
    return DensityMatrix::unchecked(out);
  };
  const DensityMatrix r0p = project(r0, proj_plus);
  const DensityMatrix r1p = project(r1, proj_minus);

  OrthogonalizeResult res;
  res.epsilon = eps;
  res.phi0p = uhlmann_purification(DensityMatrix::unchecked(r0), r0p, phi0);
  res.phi1p = uhlmann_purification(DensityMatrix::unchecked(r1), r1p, phi1);
  return res;
}

std::pair<DensityMatrix, DensityMatrix> pi_commit(const PiInstance& inst, int b) {
  if (!inst.rho0 || !inst.rho1)
    throw std::invalid_argument("pi_commit: instance carries no witness states");
  const DensityMatrix& rho = b == 0 ? *inst.rho0 : *inst.rho1;
  const SubsystemShape xy({inst.dim_x, inst.dim_y});
  auto keep_x = DensityMatrix::unchecked(partial_trace(rho.op, xy, {0}));
  auto keep_y = DensityMatrix::unchecked(partial_trace(rho.op, xy, {1}));
  return {std::move(keep_x), std::move(keep_y)};
}

double pi_verify(const PiInstance& inst, int b, const DensityMatrix& joint) {
  const Channel& q = b == 0 ? inst.q0 : inst.q1;
  if (joint.dim() != q.dim_in) throw std::invalid_argument("pi_verify: dimension mismatch");
  return q.accept_probability(joint.op);
}

Mat acceptance_effect(const Channel& ch) {
  Mat one(2, 2);
  one(1, 1) = cplx(1.0, 0.0);
  return ch.adjoint_apply(one);
}

WitnessEval witnessable_eval(const Channel& q0, const Channel& q1,
                             const DensityMatrix& rho0, const DensityMatrix& sigma,
                             const Channel& psi, const SubsystemShape& wxy) {
  if (wxy.size() != 3) throw std::invalid_argument("witnessable_eval: need W,X,Y dims");
  const std::size_t dw = wxy.factors[0], dx = wxy.factors[1], dy = wxy.factors[2];
  if (sigma.dim() != dw * dx * dy)
    throw std::invalid_argument("witnessable_eval: sigma dimension mismatch");
  if (psi.dim_in != dw * dx || psi.dim_out != dx)
    throw std::invalid_argument("witnessable_eval: psi must map W(x)X to X");

  WitnessEval ev;
  const Mat red = partial_trace(sigma.op, wxy, {1, 2});
  bool ok = (red - rho0.op).max_abs() <= 1e-9;

  // rho1 = (psi (x) id_Y)(sigma): Kraus operators act on the leading W(x)X block.
  Mat rho1(dx * dy, dx * dy);
  const Mat idy = Mat::identity(dy);
  for (const auto& k : psi.kraus) {
    const Mat kk = tensor(k, idy);
    rho1 += kk * sigma.op * kk.dagger();
  }
  ev.constraint_ok = ok;
  ev.avg_accept = 0.5 * (q0.accept_probability(rho0.op) + q1.accept_probability(rho1));
  return ev;
}

CheatReport pi_cheat_search(const PiInstance& inst, int restarts, std::uint64_t seed) {
  const SubsystemShape xy({inst.dim_x, inst.dim_y});
  CheatProblem prob;
  prob.dim_a = inst.dim_y;  // equal marginals on Y
  prob.dim_b = inst.dim_x;
  prob.dim_r = std::min<std::size_t>(inst.dim_x * inst.dim_y, 16);
  prob.e0 = permute_factors(acceptance_effect(inst.q0), xy, {1, 0});
  prob.e1 = permute_factors(acceptance_effect(inst.q1), xy, {1, 0});
  const auto found = search_constrained_cheat(prob, restarts, seed);

  // Turn the steered adversary into explicit witness data (sigma, psi)
  // and score it through witnessable_eval: W is the search reference,
  // sigma the attacked shared state, psi the unitary connecting the two
  // attacks followed by discarding W.
  const std::size_t dx = inst.dim_x, dy = inst.dim_y, dr = prob.dim_r;
  const SubsystemShape yxr({dy, dx, dr});
  const Mat u0 = tensor(Mat::identity(dy), found.adversary.attack0);
  const Mat state0 = u0 * found.adversary.omega.projector() * u0.dagger();
  const Mat sigma_rxy = permute_factors(state0, yxr, {2, 1, 0});  // [R, X, Y]
  const Mat rho0_xy = partial_trace(sigma_rxy, SubsystemShape({dr, dx, dy}), {1, 2});

  // psi: input on [R, X] -> reorder to [X, R], apply V1 V0^dag, trace R.
  const Mat swap_rx = permutation_matrix(SubsystemShape({dr, dx}), {1, 0});
  const Mat connect = (found.adversary.attack1 * found.adversary.attack0.dagger()) * swap_rx;
  std::vector<Mat> psi_kraus;
  for (std::size_t j = 0; j < dr; ++j) {
    Mat k(dx, dx * dr);
    for (std::size_t x = 0; x < dx; ++x)
      for (std::size_t col = 0; col < dx * dr; ++col) k(x, col) = connect(x * dr + j, col);
    psi_kraus.push_back(std::move(k));
  }
  const Channel psi(dx * dr, dx, std::move(psi_kraus));
  const auto ev = witnessable_eval(inst.q0, inst.q1,
                                   DensityMatrix::unchecked(rho0_xy),
                                   DensityMatrix::unchecked(sigma_rxy), psi,
                                   SubsystemShape({dr, dx, dy}));
  if (!ev.constraint_ok)
    throw std::runtime_error("pi_cheat_search: witness data fails the marginal constraint");
  if (std::abs(ev.avg_accept - found.value) > 1e-8)
    throw std::runtime_error("pi_cheat_search: witness evaluation disagrees with the search");

  CheatReport rep;
  rep.p_reveal_0 = found.p0;
  rep.p_reveal_1 = found.p1;
  rep.average = ev.avg_accept;
  rep.analytic_bound = inst.kind == Kind::no ? 0.5 + inst.mu + 1e-3 : 1.0;
  rep.strategy_note = "steered input pair with equal Y marginals, scored as witness data";
  if (rep.average > rep.analytic_bound + 1e-6)
    throw std::runtime_error("pi_cheat_search: searched value above bound");
  return rep;
}

}  // namespace qcommit::schemes
