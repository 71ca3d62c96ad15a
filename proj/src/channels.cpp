#include "qcommit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcommit/norms.hpp"
#include "qcommit/random.hpp"
#include "qcommit/search.hpp"

namespace qcommit {

void Circuit::validate() const {
  const std::size_t n = wires.size();
  if (ancilla_count > n) throw std::invalid_argument("Circuit: too many ancillas");
  for (const auto& g : gates) {
    if (g.targets.empty() || g.targets.size() > 2)
      throw std::invalid_argument("Circuit: gates act on 1 or 2 wires");
    std::size_t gd = 1;
    for (std::size_t t : g.targets) {
      if (t >= n) throw std::invalid_argument("Circuit: gate target out of range");
      gd *= wires.factors[t];
    }
    if (g.targets.size() == 2 && g.targets[0] == g.targets[1])
      throw std::invalid_argument("Circuit: duplicate gate target");
    if (g.matrix.rows != gd || !g.matrix.is_unitary(tol::eig))
      throw std::invalid_argument("Circuit: gate matrix not unitary on its wires");
  }
  std::vector<bool> discarded(n, false);
  for (std::size_t d : discards) {
    if (d >= n || discarded[d]) throw std::invalid_argument("Circuit: bad discard set");
    discarded[d] = true;
  }
  std::vector<bool> seen(n, false);
  for (std::size_t w : split_o) {
    if (w >= n || discarded[w] || seen[w]) throw std::invalid_argument("Circuit: bad O split");
    seen[w] = true;
  }
  for (std::size_t w : split_g) {
    if (w >= n || discarded[w] || seen[w]) throw std::invalid_argument("Circuit: bad G split");
    seen[w] = true;
  }
  for (std::size_t w = 0; w < n; ++w)
    if (!discarded[w] && !seen[w])
      throw std::invalid_argument("Circuit: split does not cover all surviving wires");
}

std::size_t Circuit::input_dim() const {
  std::size_t d = 1;
  for (std::size_t w = 0; w + ancilla_count < wires.size(); ++w) d *= wires.factors[w];
  return d;
}

PureState run_unitary(const Circuit& c, const PureState& input) {
  c.validate();
  if (!c.discards.empty()) throw std::invalid_argument("run_unitary: circuit has discards");
  if (input.dim() != c.input_dim()) throw std::invalid_argument("run_unitary: input dimension");
  std::size_t anc_dim = c.total_dim() / c.input_dim();
  PureState state = tensor(input, PureState::basis(anc_dim, 0));
  std::vector<cplx> next(state.dim());
  for (const auto& g : c.gates) {
    kernels::apply_factor_op_vec(g.matrix.a.data(), g.targets, state.amp.data(),
                                 c.wires.factors, next.data());
    state.amp.swap(next);
  }
  return state;
}

Mat expanded_unitary(const Circuit& c) {
  c.validate();
  const std::size_t dim = c.total_dim();
  // Build U^T: row r holds U e_r, so each gate acts row-wise through the
  // factor-op kernel instead of a full matrix product per gate.
  Mat ut = Mat::identity(dim);
  for (const auto& g : c.gates) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (dim >= 256)
#endif
    for (long long r = 0; r < (long long)dim; ++r) {
      std::vector<cplx> tmp(dim);
      kernels::serial::apply_factor_op_vec(g.matrix.a.data(), g.targets,
                                           ut.a.data() + (std::size_t)r * dim,
                                           c.wires.factors, tmp.data());
      std::copy(tmp.begin(), tmp.end(), ut.a.begin() + (std::size_t)r * dim);
    }
  }
  return ut.transpose();
}

namespace {

// P * u for the factor permutation P with new factor i = old factor
// new_order[i]; a row gather, no matrix product needed.
Mat permute_rows(const Mat& u, const SubsystemShape& wires,
                 const std::vector<std::size_t>& new_order) {
  const auto map = kernels::permute_index_map(wires.factors, new_order);
  Mat out(u.rows, u.cols);
  for (std::size_t o = 0; o < u.rows; ++o)
    std::copy(u.a.begin() + map[o] * u.cols, u.a.begin() + (map[o] + 1) * u.cols,
              out.a.begin() + o * u.cols);
  return out;
}

std::vector<std::size_t> sorted_survivors_then_discards(const Circuit& c) {
  std::vector<bool> discarded(c.wires.size(), false);
  for (std::size_t d : c.discards) discarded[d] = true;
  std::vector<std::size_t> order;
  for (std::size_t w = 0; w < c.wires.size(); ++w)
    if (!discarded[w]) order.push_back(w);
  std::vector<std::size_t> ds = c.discards;
  std::sort(ds.begin(), ds.end());
  order.insert(order.end(), ds.begin(), ds.end());
  return order;
}

}  // namespace

Channel to_channel(const Circuit& c) {
  c.validate();
  const Mat u = expanded_unitary(c);
  const auto order = sorted_survivors_then_discards(c);
  std::size_t discard_dim = 1;
  for (std::size_t d : c.discards) discard_dim *= c.wires.factors[d];
  std::size_t anc_dim = c.total_dim() / c.input_dim();
  Stinespring s;
  s.unitary = permute_rows(u, c.wires, order);
  s.ancilla_dim = anc_dim;
  s.discard_dim = discard_dim;
  return Channel::from_stinespring(std::move(s));
}

SchemeSpaces scheme_spaces(const Circuit& c) {
  c.validate();
  const Mat u = expanded_unitary(c);
  std::vector<std::size_t> order = c.split_o;
  order.insert(order.end(), c.split_g.begin(), c.split_g.end());
  std::vector<std::size_t> ds = c.discards;
  std::sort(ds.begin(), ds.end());
  order.insert(order.end(), ds.begin(), ds.end());
  SchemeSpaces s;
  s.unitary = permute_rows(u, c.wires, order);
  s.dim_in = c.input_dim();
  s.dim_anc = c.total_dim() / s.dim_in;
  s.dim_o = 1;
  for (std::size_t w : c.split_o) s.dim_o *= c.wires.factors[w];
  s.dim_g = c.total_dim() / s.dim_o;
  return s;
}

DensityMatrix qsd_output(const Circuit& c) {
  if (!c.discards.empty()) throw std::invalid_argument("qsd_output: circuit must be unitary");
  const auto s = scheme_spaces(c);
  PureState in = PureState::basis(s.dim_in * s.dim_anc, 0);
  std::vector<cplx> out(in.dim());
  kernels::matmul(s.unitary.a.data(), in.amp.data(), out.data(), in.dim(), in.dim(), 1);
  PureState phi(std::move(out));
  return DensityMatrix::unchecked(
      partial_trace(phi.projector(), SubsystemShape({s.dim_o, s.dim_g}), {0}));
}

QSDInstance make_qsd_instance(Circuit c0, Circuit c1, double mu, Kind kind) {
  QSDInstance inst;
  inst.c0 = std::move(c0);
  inst.c1 = std::move(c1);
  inst.mu = mu;
  inst.kind = kind;
  if (kind != Kind::raw) {
    const auto r0 = qsd_output(inst.c0);
    const auto r1 = qsd_output(inst.c1);
    const double dist = norms::trace_norm(r0.op - r1.op);
    if (kind == Kind::yes && dist < 2.0 - mu)
      throw std::runtime_error("make_qsd_instance: Y tag failed verification");
    if (kind == Kind::no && dist > mu)
      throw std::runtime_error("make_qsd_instance: N tag failed verification");
  }
  return inst;
}

namespace {

Mat pauli_x() {
  Mat m(2, 2);
  m(0, 1) = m(1, 0) = cplx(1.0, 0.0);
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m(0, 0) = cplx(1.0, 0.0);
  m(1, 1) = cplx(-1.0, 0.0);
  return m;
}

Mat hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat m(2, 2);
  m(0, 0) = m(0, 1) = m(1, 0) = cplx(s, 0.0);
  m(1, 1) = cplx(-s, 0.0);
  return m;
}

Mat cnot() {
  Mat m(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = cplx(1.0, 0.0);
  return m;
}

// Random tail that never touches wire 0, shared between both circuits so
// a Y pair differs only in the bit-flip on wire 0.
std::vector<Gate> random_tail(const SubsystemShape& wires, bool entangle_with_garbage,
                              std::size_t first_garbage, Rng& rng) {
  std::vector<Gate> gates;
  for (std::size_t w = 1; w < wires.size(); ++w)
    gates.push_back({haar_unitary(wires.factors[w], rng), {w}});
  if (entangle_with_garbage && wires.size() >= 3) {
    // H on an O wire, then a CNOT into garbage entangles O with G.
    gates.push_back({hadamard(), {1}});
    gates.push_back({cnot(), {1, first_garbage}});
    gates.push_back({haar_unitary(4, rng), {first_garbage, 1}});
  }
  return gates;
}

}  // namespace

QSDInstance gen_qsd(Kind kind, std::size_t qubits, bool entangle_garbage,
                    std::uint64_t seed) {
  if (kind == Kind::raw) throw std::invalid_argument("gen_qsd: kind must be Y or N");
  if (qubits == 0 || qubits > 5) throw std::invalid_argument("gen_qsd: qubits in 1..5");
  Rng rng(seed);
  const std::size_t n_g = entangle_garbage ? std::max<std::size_t>(qubits, 1) : 0;
  Circuit base;
  base.wires = SubsystemShape::qubits(qubits + n_g);
  for (std::size_t w = 0; w < qubits; ++w) base.split_o.push_back(w);
  for (std::size_t w = qubits; w < qubits + n_g; ++w) base.split_g.push_back(w);
  const auto tail = random_tail(base.wires, entangle_garbage, qubits, rng);

  Circuit c0 = base, c1 = base;
  if (kind == Kind::yes) c1.gates.push_back({pauli_x(), {0}});
  for (const auto& g : tail) {
    c0.gates.push_back(g);
    c1.gates.push_back(g);
  }
  return make_qsd_instance(std::move(c0), std::move(c1), 1e-6, kind);
}

QCDInstance gen_qcd(Kind kind, std::size_t qubits, std::uint64_t seed) {
  if (kind == Kind::raw) throw std::invalid_argument("gen_qcd: kind must be Y or N");
  if (qubits == 0 || qubits > 3) throw std::invalid_argument("gen_qcd: qubits in 1..3");
  Rng rng(seed);

  // Input wires [0, qubits), one ancilla wire, one discarded wire when
  // there is room for it.
  const std::size_t n_anc = 1;
  const std::size_t n = qubits + n_anc;
  Circuit base;
  base.wires = SubsystemShape::qubits(n);
  base.ancilla_count = n_anc;
  const bool with_discard = n >= 3 || (rng.next_u64() & 1);
  if (with_discard) base.discards.push_back(n - 1);
  base.split_o.push_back(0);
  for (std::size_t w = 1; w < n; ++w)
    if (!with_discard || w != n - 1) base.split_g.push_back(w);
  const auto tail = random_tail(base.wires, false, 0, rng);

  Circuit c0 = base, c1 = base;
  if (kind == Kind::yes) c1.gates.push_back({pauli_x(), {0}});
  for (const auto& g : tail) {
    c0.gates.push_back(g);
    c1.gates.push_back(g);
  }

  QCDInstance inst;
  inst.q0 = to_channel(c0);
  inst.q1 = to_channel(c1);
  inst.c0 = std::move(c0);
  inst.c1 = std::move(c1);
  inst.mu = 1e-6;
  inst.kind = kind;

  if (kind == Kind::yes) {
    const auto est = norms::diamond_lower(inst.q0, inst.q1, 8, seed);
    if (est.lower_bound < 2.0 - inst.mu)
      throw std::runtime_error("gen_qcd: Y tag failed diamond verification");
  } else {
    const double bound = norms::diamond_dim_bound(inst.q0, inst.q1, 8, seed);
    if (bound > inst.mu)
      throw std::runtime_error("gen_qcd: N tag failed diamond verification");
  }
  return inst;
}

QCDInstance qcd_ideal_instance() {
  Circuit c0, c1;
  c0.wires = SubsystemShape::qubits(1);
  c0.split_o.push_back(0);
  c1 = c0;
  c1.gates.push_back({pauli_z(), {0}});
  QCDInstance inst;
  inst.q0 = to_channel(c0);
  inst.q1 = to_channel(c1);
  inst.c0 = std::move(c0);
  inst.c1 = std::move(c1);
  inst.mu = 0.0;
  inst.kind = Kind::yes;
  return inst;
}

PiInstance gen_pi(Kind kind, std::size_t dim_x, std::size_t dim_y, std::uint64_t seed) {
  if (kind == Kind::raw) throw std::invalid_argument("gen_pi: kind must be Y or N");
  if (dim_x < 2 || dim_x > 4 || dim_y < 2 || dim_y > 4)
    throw std::invalid_argument("gen_pi: dims in 2..4");
  Rng rng(seed);
  PiInstance inst;
  inst.dim_x = dim_x;
  inst.dim_y = dim_y;
  inst.mu = 1e-6;
  inst.kind = kind;

  if (kind == Kind::yes) {
    // Two purifications of a common Y-marginal, related by a unitary on X.
    const std::size_t r = std::min(dim_x, dim_y);
    DensityMatrix tau = random_density(dim_y, 1 + (std::size_t)(rng.next_u64() % r), rng);
    PureState psi_yx = purify(tau, dim_x);  // on [Y, X_ref], ref dim = dim_x
    PureState psi0 = permute_factors(psi_yx, SubsystemShape({dim_y, dim_x}), {1, 0});
    const Mat ux = haar_unitary(dim_x, rng);
    PureState psi1{std::vector<cplx>(psi0.dim())};
    kernels::apply_factor_op_vec(ux.a.data(), {0}, psi0.amp.data(),
                                 {dim_x, dim_y}, psi1.amp.data());
    inst.rho0 = DensityMatrix::from_pure(psi0);
    inst.rho1 = DensityMatrix::from_pure(psi1);
    inst.witness_map = ux;
    inst.q0 = Channel::measurement(psi0.projector());
    inst.q1 = Channel::measurement(psi1.projector());

    const Mat m0 = partial_trace(inst.rho0->op, SubsystemShape({dim_x, dim_y}), {1});
    const Mat m1 = partial_trace(inst.rho1->op, SubsystemShape({dim_x, dim_y}), {1});
    if ((m0 - m1).max_abs() > 1e-10)
      throw std::runtime_error("gen_pi: Y marginals differ");
    const double acc = 0.5 * (inst.q0.accept_probability(inst.rho0->op) +
                              inst.q1.accept_probability(inst.rho1->op));
    if (std::abs(acc - 1.0) > 1e-9)
      throw std::runtime_error("gen_pi: Y honest acceptance not 1");
  } else {
    // q0 accepts only a fixed product state u (x) v0; q1 tests the Y part
    // against a state orthogonal to v0.  Equal Y-marginals then force the
    // two acceptance probabilities to trade off, capping the average at 1/2.
    PureState u = random_pure(dim_x, rng);
    Mat basis = haar_unitary(dim_y, rng);
    PureState v0{std::vector<cplx>(dim_y)}, v1{std::vector<cplx>(dim_y)};
    for (std::size_t i = 0; i < dim_y; ++i) {
      v0.amp[i] = basis(i, 0);
      v1.amp[i] = basis(i, 1);
    }
    inst.q0 = Channel::measurement(tensor(u, v0).projector());
    inst.q1 = Channel::measurement(tensor(Mat::identity(dim_x), v1.projector()));
    // Certify with the adversary search (sound, not exhaustive).
    CheatProblem prob;
    prob.dim_a = dim_y;  // the preserved marginal
    prob.dim_b = dim_x;
    prob.dim_r = std::min<std::size_t>(dim_x * dim_y, 16);
    const SubsystemShape xy({dim_x, dim_y});
    // Effects re-ordered to [Y, X] so the preserved marginal comes first.
    prob.e0 = permute_factors(tensor(u, v0).projector(), xy, {1, 0});
    prob.e1 = permute_factors(tensor(Mat::identity(dim_x), v1.projector()), xy, {1, 0});
    const auto found = search_constrained_cheat(prob, 64, seed);
    inst.n_certificate = found.value;
    if (found.value > 0.5 + inst.mu + 1e-3)
      throw std::runtime_error("gen_pi: N tag failed adversary certification");
  }
  return inst;
}

}  // namespace qcommit
