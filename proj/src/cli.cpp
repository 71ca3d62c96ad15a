#include "qcommit/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcommit/json_io.hpp"
#include "qcommit/norms.hpp"
#include "qcommit/oraclegame.hpp"
#include "qcommit/random.hpp"
#include "qcommit/schemes.hpp"

namespace qcommit::cli {

using nlohmann::json;

namespace {

struct Assertion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct Report {
  json results = json::array();
  std::vector<Assertion> assertions;

  void check(const std::string& name, double value, double bound, bool pass) {
    assertions.push_back({name, pass, value, bound});
  }
  void check_le(const std::string& name, double value, double bound) {
    check(name, value, bound, value <= bound);
  }
  void check_close(const std::string& name, double value, double target, double eps) {
    check(name, value, target, std::abs(value - target) <= eps);
  }
  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

json config_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["qubits"] = c.qubits;
  j["d"] = c.d;
  j["m"] = c.m;
  j["k"] = c.k;
  j["restarts"] = c.restarts;
  j["samples"] = c.samples;
  j["mu"] = c.mu;
  j["format"] = c.format;
  return j;
}

// ---- norms-suite -----------------------------------------------------------

Report run_norms_suite(const RunConfig& cfg) {
  Report rep;
  Rng rng(cfg.seed);

  {  // Fuchs-van de Graaf ordering on 1000 random pairs, dims 2..8.
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Rng c = rng.child(10000 + (std::uint64_t)i);
      const std::size_t dim = 2 + (std::size_t)(c.next_u64() % 7);
      const auto rho = random_density(dim, 1 + (std::size_t)(c.next_u64() % dim), c);
      const auto sig = random_density(dim, 1 + (std::size_t)(c.next_u64() % dim), c);
      const auto b = norms::fvdg_bounds(rho, sig);
      worst = std::max({worst, b.lower - b.mid, b.mid - b.upper});
    }
    rep.check_le("fvdg_ordering_violation_1000_pairs", worst, 1e-9);
    rep.results.push_back({{"name", "fvdg_worst_violation"}, {"value", worst}});
  }

  {  // Sum-fidelity optimizer reaches 1 + F on 200 pairs.
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      Rng c = rng.child(20000 + (std::uint64_t)i);
      const std::size_t dim = 2 + (std::size_t)(c.next_u64() % 7);
      const auto rho = random_density(dim, dim, c);
      const auto sig = random_density(dim, 1 + (std::size_t)(c.next_u64() % dim), c);
      const double target = 1.0 + norms::fidelity(rho, sig);
      const auto r = norms::fidelity_sum_opt(rho, sig, 4, c.next_u64());
      worst = std::max(worst, std::abs(r.value - target));
    }
    rep.check_le("fidelity_sum_opt_gap_200_pairs", worst, 1e-6);
  }

  {  // Trace-norm unitary invariance and the off-diagonal dilation identity.
    double worst_inv = 0.0, worst_dil = 0.0;
    for (int i = 0; i < 50; ++i) {
      Rng c = rng.child(30000 + (std::uint64_t)i);
      const std::size_t dim = 2 + (std::size_t)(c.next_u64() % 7);
      Mat x(dim, dim);
      for (auto& z : x.a) z = c.gauss_c();
      const Mat u = haar_unitary(dim, c);
      const Mat v = haar_unitary(dim, c);
      worst_inv = std::max(worst_inv, std::abs(norms::trace_norm(u * x * v) -
                                               norms::trace_norm(x)));
      Mat e01(2, 2), e10(2, 2);
      e01(0, 1) = cplx(1.0, 0.0);
      e10(1, 0) = cplx(1.0, 0.0);
      const Mat dil = tensor(e01, x.dagger()) + tensor(e10, x);
      worst_dil = std::max(worst_dil,
                           std::abs(norms::trace_norm(dil) - 2.0 * norms::trace_norm(x)));
    }
    rep.check_le("trace_norm_unitary_invariance", worst_inv, 1e-9);
    rep.check_le("offdiag_dilation_identity", worst_dil, 1e-9);
  }

  {  // Fidelity monotonicity under partial trace, 500 two-qubit pairs.
    double worst = 0.0;
    const SubsystemShape two_qubits({2, 2});
    for (int i = 0; i < 500; ++i) {
      Rng c = rng.child(40000 + (std::uint64_t)i);
      const auto rho = random_density(4, 1 + (std::size_t)(c.next_u64() % 4), c);
      const auto sig = random_density(4, 1 + (std::size_t)(c.next_u64() % 4), c);
      const double f_full = norms::fidelity(rho, sig);
      const auto r_red = DensityMatrix::unchecked(partial_trace(rho.op, two_qubits, {0}));
      const auto s_red = DensityMatrix::unchecked(partial_trace(sig.op, two_qubits, {0}));
      worst = std::max(worst, f_full - norms::fidelity(r_red, s_red));
    }
    rep.check_le("fidelity_monotonicity_500_pairs", worst, 1e-9);
  }

  {  // Diamond lower bound: forced instance and the dimension bound sweep.
    const auto ideal = qcd_ideal_instance();
    const auto est = norms::diamond_lower(ideal.q0, ideal.q1, 8, cfg.seed);
    rep.check_close("diamond_identity_vs_z", est.lower_bound, 2.0, 1e-6);

    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      Rng c = rng.child(50000 + (std::uint64_t)i);
      const auto a = gen_qcd(i % 2 == 0 ? Kind::yes : Kind::no, 1, c.next_u64());
      const auto lo = norms::diamond_lower(a.q0, a.q1, 8, c.next_u64());
      const double hi = norms::diamond_dim_bound(a.q0, a.q1, 8, c.next_u64());
      worst = std::max(worst, lo.lower_bound - hi);
      worst = std::max(worst, lo.lower_bound - 2.0);
    }
    rep.check_le("diamond_lower_within_dim_bound_200", worst, 1e-6);
  }
  return rep;
}

// ---- qsd-scheme ------------------------------------------------------------

Circuit rotation_circuit(double theta) {
  Circuit c;
  c.wires = SubsystemShape::qubits(1);
  c.split_o.push_back(0);
  Mat r(2, 2);
  r(0, 0) = cplx(std::cos(theta), 0.0);
  r(0, 1) = cplx(-std::sin(theta), 0.0);
  r(1, 0) = cplx(std::sin(theta), 0.0);
  r(1, 1) = cplx(std::cos(theta), 0.0);
  c.gates.push_back({std::move(r), {0}});
  return c;
}

Report run_qsd_scheme(const RunConfig& cfg) {
  Report rep;
  std::vector<std::pair<std::size_t, bool>> cases = {
      {1, false}, {1, true}, {2, false}, {2, true}, {3, false}};
  cases.emplace_back(cfg.qubits, cfg.qubits <= 3);

  double worst_honest = 0.0, worst_gap = 0.0, worst_bound = -1.0;
  int idx = 0;
  for (const auto& [case_qubits, case_garbage] : cases) {
    const struct { std::size_t qubits; bool garbage; } cs{case_qubits, case_garbage};
    const auto inst = gen_qsd(Kind::yes, cs.qubits, cs.garbage, cfg.seed + (std::uint64_t)idx);
    for (int b = 0; b < 2; ++b) {
      const auto [keep, msg] = schemes::qsd_commit(inst, b);
      const double acc = schemes::qsd_verify(inst, b, DensityMatrix::from_pure(keep));
      worst_honest = std::max(worst_honest, std::abs(acc - 1.0));
    }
    const auto rho0 = qsd_output(inst.c0);
    const auto rho1 = qsd_output(inst.c1);
    const double f = norms::fidelity(rho0, rho1);
    const auto cheat = schemes::qsd_optimal_cheat(inst, cfg.restarts, cfg.seed + (std::uint64_t)idx);
    worst_gap = std::max(worst_gap, std::abs(cheat.average - 0.5 * (1.0 + f)));
    worst_bound = std::max(worst_bound, cheat.average - (0.5 + std::sqrt(inst.mu) / 2.0));
    rep.results.push_back({{"name", "qsd_y_instance"},
                           {"qubits", cs.qubits},
                           {"garbage", cs.garbage},
                           {"cheat_average", cheat.average},
                           {"fidelity", f}});
    ++idx;
  }
  rep.check_le("qsd_honest_acceptance_dev", worst_honest, 1e-9);
  rep.check_le("qsd_cheat_vs_half_one_plus_f", worst_gap, 1e-6);
  rep.check_le("qsd_cheat_vs_mu_bound", worst_bound, 1e-6);

  {  // Statistical hiding on an N instance.
    const auto inst = gen_qsd(Kind::no, 2, true, cfg.seed + 97);
    const auto m0 = schemes::qsd_commit(inst, 0).second;
    const auto m1 = schemes::qsd_commit(inst, 1).second;
    rep.check_le("qsd_n_instance_hiding", norms::trace_norm(m0.op - m1.op), inst.mu);
  }

  {  // Pure outputs |0> and cos(pi/3)|0> + sin(pi/3)|1>: optimum 0.75.
    QSDInstance inst;
    inst.c0 = rotation_circuit(0.0);
    inst.c1 = rotation_circuit(M_PI / 3.0);
    inst.kind = Kind::raw;
    inst.mu = 1e-6;
    const auto cheat = schemes::qsd_optimal_cheat(inst, cfg.restarts, cfg.seed);
    rep.check_close("qsd_pi_over_3_average", cheat.average, 0.75, 1e-6);
    // Embed the instance in the wire format and prove it round-trips.
    const json jinst = to_json(inst);
    const auto back = qsd_from_json(jinst);
    rep.check("qsd_instance_roundtrip", 0.0, 0.0,
              (qsd_output(back.c1).op - qsd_output(inst.c1).op).max_abs() < 1e-12);
    rep.results.push_back({{"name", "qsd_pi_over_3"},
                           {"p_reveal_0", cheat.p_reveal_0},
                           {"p_reveal_1", cheat.p_reveal_1},
                           {"average", cheat.average},
                           {"instance", jinst}});
  }
  return rep;
}

// ---- qcd-scheme ------------------------------------------------------------

Report run_qcd_scheme(const RunConfig& cfg) {
  Report rep;
  {
    const auto inst = qcd_ideal_instance();
    const auto advice = schemes::qcd_advice(inst, cfg.restarts, cfg.seed);
    double worst_honest = 0.0;
    for (int b = 0; b < 2; ++b) {
      const auto t = schemes::qcd_round(inst, b, advice);
      worst_honest = std::max(worst_honest, std::abs(t.accept_probability - 1.0));
    }
    rep.check_le("qcd_ideal_honest_acceptance_dev", worst_honest, 1e-9);
    const auto wrong = schemes::qcd_round(inst, 0, advice, 1);
    rep.check_close("qcd_ideal_wrong_bit_acceptance", wrong.accept_probability, 0.5, 1e-9);

    const auto cheat = schemes::qcd_single_round_cheat(inst, advice, cfg.restarts, cfg.seed);
    rep.check(
        "qcd_ideal_single_round_cheat", cheat.average, 0.75,
        cheat.average >= 0.75 - 1e-3 && cheat.average <= 0.75 + 1e-6);
    rep.results.push_back({{"name", "qcd_ideal_single_round"},
                           {"searched", cheat.average},
                           {"bound", cheat.analytic_bound}});
  }
  {
    const auto inst = gen_qcd(Kind::yes, 1, cfg.seed + 11);
    const auto advice = schemes::qcd_advice(inst, cfg.restarts, cfg.seed + 11);
    const auto honest = schemes::qcd_round(inst, 0, advice);
    rep.check_close("qcd_generated_honest_acceptance", honest.accept_probability, 1.0, 1e-9);
    const auto cheat = schemes::qcd_single_round_cheat(inst, advice, cfg.restarts, cfg.seed + 11);
    rep.check_le("qcd_generated_cheat_vs_bound", cheat.average,
                 0.75 + std::sqrt(inst.mu) / 4.0 + 1e-6);
    rep.results.push_back({{"name", "qcd_generated_single_round"},
                           {"searched", cheat.average},
                           {"bound", cheat.analytic_bound}});
  }
  return rep;
}

// ---- repetition ------------------------------------------------------------

Report run_repetition(const RunConfig& cfg) {
  Report rep;
  const auto inst = qcd_ideal_instance();
  const auto advice = schemes::qcd_advice(inst, cfg.restarts, cfg.seed);

  for (int kk = 1; kk <= cfg.k; ++kk) {
    const auto cheat = schemes::repetition_cheat(inst, kk, advice, cfg.restarts, cfg.seed);
    const double ideal_bound = 0.5 + std::pow(2.0, -(double)(kk + 1));
    const double mu_bound = ideal_bound + 2.0 * std::sqrt(2.0 * (double)kk * cfg.mu);
    rep.check_le("repetition_k" + std::to_string(kk) + "_searched_vs_ideal_bound",
                 cheat.average, ideal_bound + 1e-6);
    rep.check_le("repetition_k" + std::to_string(kk) + "_searched_vs_mu_bound",
                 cheat.average, mu_bound + 1e-6);
    rep.results.push_back({{"name", "repetition"},
                           {"k", kk},
                           {"searched", cheat.average},
                           {"ideal_bound", ideal_bound},
                           {"mu_bound", mu_bound}});
  }

  {  // Honest sender passes all k tests with certainty.
    const auto d0 = schemes::qcd_round(inst, 0, advice);
    Mat prod = d0.reveal_state.op;
    const std::size_t block = d0.reveal_state.dim();
    for (int i = 1; i < cfg.k; ++i) prod = tensor(prod, d0.reveal_state.op);
    PureState phi{std::vector<cplx>(block)};
    // reveal_state of the honest round is pure; recover its vector
    const auto e = herm_eig(d0.reveal_state.op);
    for (std::size_t i = 0; i < block; ++i) phi.amp[i] = e.vectors(i, 0);
    const double pass = schemes::test_pass_prob(DensityMatrix::unchecked(prod), phi, cfg.k,
                                                SubsystemShape({block, 1}));
    rep.check_close("repetition_honest_all_pass", pass, 1.0, 1e-9);
  }
  return rep;
}

// ---- pi-scheme -------------------------------------------------------------

Report run_pi_scheme(const RunConfig& cfg) {
  Report rep;
  const std::pair<std::size_t, std::size_t> ydims[] = {{2, 2}, {3, 3}, {4, 2}};
  double worst_hiding = 0.0, worst_honest = 0.0;
  int idx = 0;
  for (const auto& [dx, dy] : ydims) {
    const auto inst = gen_pi(Kind::yes, dx, dy, cfg.seed + (std::uint64_t)idx);
    const auto msg0 = schemes::pi_commit(inst, 0).second;
    const auto msg1 = schemes::pi_commit(inst, 1).second;
    worst_hiding = std::max(worst_hiding, (msg0.op - msg1.op).max_abs());
    for (int b = 0; b < 2; ++b) {
      const auto& rho = b == 0 ? *inst.rho0 : *inst.rho1;
      worst_honest = std::max(worst_honest,
                              std::abs(schemes::pi_verify(inst, b, rho) - 1.0));
    }
    // Honest witnessability data: W trivial, sigma = rho0, psi = the
    // connecting unitary on X.
    const auto ev = schemes::witnessable_eval(
        inst.q0, inst.q1, *inst.rho0, *inst.rho0,
        Channel::from_unitary(*inst.witness_map), SubsystemShape({1, dx, dy}));
    rep.check("pi_y_witnessable_honest_" + std::to_string(idx), ev.avg_accept, 1.0,
              ev.constraint_ok && std::abs(ev.avg_accept - 1.0) <= 1e-9);
    ++idx;
  }
  rep.check_le("pi_perfect_hiding_dev", worst_hiding, 1e-10);
  rep.check_le("pi_honest_acceptance_dev", worst_honest, 1e-9);

  idx = 0;
  for (const auto& [dx, dy] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}}) {
    const auto inst = gen_pi(Kind::no, dx, dy, cfg.seed + 31 + (std::uint64_t)idx);
    const auto cheat = schemes::pi_cheat_search(inst, cfg.restarts, cfg.seed + (std::uint64_t)idx);
    rep.check_le("pi_n_instance_cheat_" + std::to_string(idx), cheat.average,
                 0.5 + inst.mu + 1e-3);
    rep.results.push_back({{"name", "pi_n_instance"},
                           {"dx", dx},
                           {"dy", dy},
                           {"searched", cheat.average}});
    ++idx;
  }
  return rep;
}

// ---- orthogonalize ---------------------------------------------------------

Report run_orthogonalize(const RunConfig& cfg) {
  Report rep;
  Rng rng(cfg.seed);
  double worst_orth = 0.0, worst_overlap = -1.0;
  for (int i = 0; i < 200; ++i) {
    Rng c = rng.child((std::uint64_t)i);
    const std::size_t da = 2 + (std::size_t)(c.next_u64() % 3);
    // Nearly orthogonal pair: states supported on orthogonal subspaces,
    // mixed with a small slice of a common full-rank state.
    const Mat basis = haar_unitary(da, c);
    const std::size_t half = da / 2;
    Mat p0(da, da), p1(da, da);
    for (std::size_t kk = 0; kk < da; ++kk)
      for (std::size_t i2 = 0; i2 < da; ++i2)
        for (std::size_t j2 = 0; j2 < da; ++j2) {
          const cplx term = basis(i2, kk) * std::conj(basis(j2, kk));
          if (kk < half) p0(i2, j2) += term;
          else p1(i2, j2) += term;
        }
    auto clean0 = random_density(da, half, c).op;
    auto clean1 = random_density(da, da - half, c).op;
    clean0 = p0 * clean0 * p0;
    clean1 = p1 * clean1 * p1;
    clean0 *= cplx(1.0 / clean0.trace().real(), 0.0);
    clean1 *= cplx(1.0 / clean1.trace().real(), 0.0);
    const double delta = 0.001 + 0.08 * c.uniform();
    const auto noise = random_density(da, da, c);
    Mat r0 = clean0, r1 = clean1;
    for (std::size_t t = 0; t < r0.a.size(); ++t) {
      r0.a[t] = (1.0 - delta) * r0.a[t] + delta * noise.op.a[t];
      r1.a[t] = (1.0 - delta) * r1.a[t] + delta * noise.op.a[t];
    }
    const PureState phi0 = purify(DensityMatrix::unchecked(r0), da);
    const PureState phi1 = purify(DensityMatrix::unchecked(r1), da);
    const SubsystemShape split({da, da});
    const auto res = schemes::orthogonalize(phi0, phi1, split);
    const auto q0 = DensityMatrix::unchecked(partial_trace(res.phi0p.projector(), split, {0}));
    const auto q1 = DensityMatrix::unchecked(partial_trace(res.phi1p.projector(), split, {0}));
    worst_orth = std::max(worst_orth, norms::fidelity(q0, q1));
    worst_overlap = std::max(worst_overlap,
                             (1.0 - res.epsilon - 1e-8) - std::abs(inner(res.phi0p, phi0)));
    worst_overlap = std::max(worst_overlap,
                             (1.0 - res.epsilon - 1e-8) - std::abs(inner(res.phi1p, phi1)));
  }
  rep.check_le("orthogonalize_output_fidelity_200", worst_orth, 1e-9);
  rep.check_le("orthogonalize_overlap_defect_200", worst_overlap, 0.0);

  {  // diag(0.99, 0.01) against diag(0.01, 0.99).
    const auto r0 = DensityMatrix(Mat::diag({0.99, 0.01}));
    const auto r1 = DensityMatrix(Mat::diag({0.01, 0.99}));
    const PureState phi0 = purify(r0, 2);
    const PureState phi1 = purify(r1, 2);
    const auto res = schemes::orthogonalize(phi0, phi1, SubsystemShape({2, 2}));
    rep.check_close("orthogonalize_diag_epsilon", res.epsilon, 0.04, 1e-9);
    rep.check_close("orthogonalize_diag_overlap", std::abs(inner(res.phi0p, phi0)),
                    std::sqrt(0.99), 1e-9);
  }
  return rep;
}

// ---- oracle-protocol -------------------------------------------------------

Report run_oracle_protocol(const RunConfig& cfg) {
  Report rep;
  Rng rng(cfg.seed);

  {  // Honest prover recovers the entangled state for 50 hidden unitaries.
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      Rng c = rng.child((std::uint64_t)i);
      const Mat u = haar_unitary(cfg.d, c);
      const double acc = oracle::protocol_accept(1, &u, oracle::honest_prover(u), cfg.d);
      worst = std::max(worst, std::abs(acc - 1.0));
    }
    rep.check_le("oracle_honest_acceptance_dev_50", worst, 1e-9);
  }
  {
    const double acc = oracle::protocol_accept(2, nullptr,
                                               Channel::identity(2 * cfg.d), cfg.d);
    rep.check_close("oracle_kind2_identity_prover", acc, 0.5, 1e-9);
    const double rep_acc = oracle::protocol_accept(2, nullptr,
                                                   oracle::replace_control_prover(cfg.d), cfg.d);
    rep.check_close("oracle_kind2_replace_control", rep_acc, 0.25, 1e-9);
    const double searched = oracle::searched_prover_accept(cfg.d, cfg.restarts, cfg.seed);
    rep.check_le("oracle_kind2_searched_provers", searched, 0.5 + 1e-9);
    rep.results.push_back({{"name", "kind2_provers"},
                           {"identity", acc},
                           {"replace_control", rep_acc},
                           {"searched", searched}});
  }
  {  // Point-mass gap identity at d in {2, 4, 8}.
    double worst = 0.0;
    for (std::size_t d : {2, 4, 8}) {
      Rng c = rng.child(900 + d);
      const Mat u = haar_unitary(d, c);
      const oracle::OracleInput in(cplx(1.0 / std::sqrt(2.0), 0.0),
                                   cplx(0.0, 1.0 / std::sqrt(2.0)));
      const Mat diff = oracle::oracle_apply(1, &u, in, d) - oracle::oracle_apply(2, nullptr, in, d);
      worst = std::max(worst, std::abs(norms::trace_norm(diff) -
                                       2.0 * std::abs(in.alpha) * std::abs(in.beta)));
    }
    rep.check_le("oracle_point_mass_gap_identity", worst, 1e-9);
  }
  {  // Monte Carlo direct-vs-formula agreement (asserted inside the call).
    for (std::size_t m = 1; m <= cfg.m; ++m) {
      const auto spec = oracle::make_p_uniform(2, m, cfg.seed + m);
      const oracle::OracleInput in(cplx(std::sqrt(0.5), 0.0), cplx(std::sqrt(0.5), 0.0));
      const auto est = oracle::per_query_gap(spec, in, cfg.samples, cfg.seed + 77 + m);
      rep.check("oracle_gap_two_route_agreement_m" + std::to_string(m), est.mean,
                est.mean, true);
      rep.results.push_back({{"name", "per_query_gap"},
                             {"m", m},
                             {"estimate", est.mean},
                             {"std_error", est.std_error}});
    }
  }
  return rep;
}

// ---- oracle-scaling --------------------------------------------------------

struct ScalingRow {
  std::size_t d, m, n;
  double estimate, std_error, envelope;
};

Report run_oracle_scaling(const RunConfig& cfg, std::vector<ScalingRow>& rows) {
  Report rep;
  for (std::size_t d : {2, 4, 8}) {
    double prev_est = -1.0, prev_se = 0.0;
    for (std::size_t m = 0; m <= cfg.m; ++m) {
      const auto spec = oracle::make_p_uniform(d, m, cfg.seed + 13 * d + m);
      const auto est = oracle::expected_norm(spec, cfg.samples, cfg.seed + 7 * d + m);
      const double envelope = 4.0 * std::sqrt((double)d * (1.0 + (double)m * std::log(2.0)));
      rows.push_back({d, m, cfg.samples, est.mean, est.std_error, envelope});
      rep.check_le("envelope_d" + std::to_string(d) + "_m" + std::to_string(m),
                   est.mean, envelope);
      if (m == 0)
        rep.check_le("uniform_mean_small_d" + std::to_string(d), est.mean,
                     3.0 * est.std_error);
      else
        rep.check_le("monotone_d" + std::to_string(d) + "_m" + std::to_string(m),
                     prev_est - est.mean, 3.0 * (prev_se + est.std_error));
      prev_est = est.mean;
      prev_se = est.std_error;
    }
  }
  for (const auto& r : rows)
    rep.results.push_back({{"d", r.d},
                           {"m", r.m},
                           {"n", r.n},
                           {"estimate", r.estimate},
                           {"std_error", r.std_error},
                           {"envelope", r.envelope}});
  return rep;
}

// ---- plumbing ---------------------------------------------------------------

int write_output(const RunConfig& cfg, const Report& rep,
                 const std::vector<ScalingRow>& rows) {
  std::string payload;
  if (cfg.format == "csv") {
    std::string s = "d,m,n,estimate,std_error,envelope\n";
    char line[256];
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.17g,%.17g,%.17g\n", r.d, r.m, r.n,
                    r.estimate, r.std_error, r.envelope);
      s += line;
    }
    payload = std::move(s);
  } else {
    json j;
    j["version"] = version;
    j["config"] = config_json(cfg);
    j["results"] = rep.results;
    json asserts = json::array();
    for (const auto& a : rep.assertions)
      asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"value", a.value},
                         {"bound", a.bound}});
    j["assertions"] = std::move(asserts);
    payload = j.dump(2);
    payload += "\n";
  }

  if (cfg.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write output file: " << cfg.out << "\n";
      return 2;
    }
    f << payload;
  }
  return rep.all_pass() ? 0 : 1;
}

int validate(const RunConfig& cfg) {
  if (cfg.qubits < 1 || cfg.qubits > 5) return 2;
  if (!(cfg.d == 2 || cfg.d == 4 || cfg.d == 8 || cfg.d == 16 || cfg.d == 32)) return 2;
  if (cfg.m > 6) return 2;
  if (cfg.k < 1 || cfg.k > 3) return 2;
  if (cfg.restarts < 1 || cfg.restarts > 4096) return 2;
  if (cfg.samples < 1 || cfg.samples > 10000000) return 2;
  if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) return 2;
  if (cfg.format != "json" && cfg.format != "csv") return 2;
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  if (int rc = validate(cfg); rc != 0) {
    std::cerr << "parameter out of range\n";
    return rc;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  std::vector<ScalingRow> rows;
  try {
    if (cfg.subcommand == "norms-suite") rep = run_norms_suite(cfg);
    else if (cfg.subcommand == "qsd-scheme") rep = run_qsd_scheme(cfg);
    else if (cfg.subcommand == "qcd-scheme") rep = run_qcd_scheme(cfg);
    else if (cfg.subcommand == "repetition") rep = run_repetition(cfg);
    else if (cfg.subcommand == "pi-scheme") rep = run_pi_scheme(cfg);
    else if (cfg.subcommand == "orthogonalize") rep = run_orthogonalize(cfg);
    else if (cfg.subcommand == "oracle-protocol") rep = run_oracle_protocol(cfg);
    else if (cfg.subcommand == "oracle-scaling") rep = run_oracle_scaling(cfg, rows);
    else {
      std::cerr << "unknown subcommand: " << cfg.subcommand << "\n";
      return 2;
    }
  } catch (const std::exception& e) {
    // Embedded assertions escalate as exceptions; report them as failures.
    rep.check(std::string("exception: ") + e.what(), 0.0, 0.0, false);
  }
  const int rc = write_output(cfg, rep, rows);
  const auto t1 = std::chrono::steady_clock::now();
  std::cerr << "runtime_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
            << "\n";
  return rc;
}

int main_entry(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;

  // A config file mirrors the flags; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "cannot read config file: " << config_path << "\n";
      return 2;
    }
    try {
      json j;
      f >> j;
      if (j.contains("subcommand")) cfg.subcommand = j["subcommand"].get<std::string>();
      if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("qubits")) cfg.qubits = j["qubits"].get<std::size_t>();
      if (j.contains("d")) cfg.d = j["d"].get<std::size_t>();
      if (j.contains("m")) cfg.m = j["m"].get<std::size_t>();
      if (j.contains("k")) cfg.k = j["k"].get<int>();
      if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
      if (j.contains("samples")) cfg.samples = j["samples"].get<std::size_t>();
      if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
      if (j.contains("out")) cfg.out = j["out"].get<std::string>();
      if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    } catch (const std::exception& e) {
      std::cerr << "bad config file: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"quantum commitment scheme verification toolkit"};
  app.add_option("subcommand", cfg.subcommand,
                 "norms-suite | qsd-scheme | qcd-scheme | repetition | pi-scheme | "
                 "orthogonalize | oracle-protocol | oracle-scaling");
  app.add_option("--seed", cfg.seed);
  app.add_option("--qubits", cfg.qubits);
  app.add_option("--d", cfg.d);
  app.add_option("--m", cfg.m);
  app.add_option("--k", cfg.k);
  app.add_option("--restarts", cfg.restarts);
  app.add_option("--samples", cfg.samples);
  app.add_option("--mu", cfg.mu);
  app.add_option("--out", cfg.out);
  app.add_option("--format", cfg.format);
  std::string ignored;
  app.add_option("--config", ignored, "JSON config file mirroring the flags");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (cfg.subcommand.empty()) {
    std::cerr << app.help();
    return 2;
  }
  return run(cfg);
}

}  // namespace qcommit::cli
