#include "qcommit/search.hpp"

#include <cmath>
#include <stdexcept>

#include "qcommit/random.hpp"

namespace qcommit {

double power_top_eig(const std::function<void(const cplx*, cplx*)>& apply_h,
                     std::size_t dim, PureState& vec, int max_iter, double rel_tol) {
  if (vec.dim() != dim) throw std::invalid_argument("power_top_eig: start vector size");
  vec.normalize();
  std::vector<cplx> w(dim);
  double lam = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    apply_h(vec.amp.data(), w.data());
    cplx ray(0.0, 0.0);
    double nn = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      ray += std::conj(vec.amp[i]) * w[i];
      nn += std::norm(w[i]);
    }
    lam = ray.real();
    nn = std::sqrt(nn);
    if (nn < 1e-300) return 0.0;
    for (std::size_t i = 0; i < dim; ++i) vec.amp[i] = w[i] / nn;
    if (std::abs(lam - prev) <= rel_tol * std::max(1.0, std::abs(lam))) break;
    prev = lam;
  }
  return lam;
}

namespace {

struct Workspace {
  const CheatProblem* prob;
  std::size_t dim;      // total = dimA * dimB * dimR
  std::size_t dim_br;   // dimB * dimR
  std::vector<std::size_t> factors;  // {dimA, dimB*dimR}

  explicit Workspace(const CheatProblem& p) : prob(&p) {
    dim_br = p.dim_b * p.dim_r;
    dim = p.dim_a * dim_br;
    factors = {p.dim_a, p.dim_b, p.dim_r};
  }
};

// u = (I_A (x) V) omega
void apply_attack(const Workspace& ws, const Mat& v, const cplx* in, cplx* out) {
  kernels::apply_factor_op_vec(v.a.data(), {1, 2}, in, ws.factors, out);
}

// w = (E (x) I_R) u
void apply_effect(const Workspace& ws, const Mat& e, const cplx* in, cplx* out) {
  kernels::apply_factor_op_vec(e.a.data(), {0, 1}, in, ws.factors, out);
}

double test_value(const Workspace& ws, const Mat& e, const Mat& v, const PureState& omega,
                  std::vector<cplx>& u, std::vector<cplx>& w) {
  apply_attack(ws, v, omega.amp.data(), u.data());
  apply_effect(ws, e, u.data(), w.data());
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < ws.dim; ++i) s += std::conj(u[i]) * w[i];
  return s.real();
}

// Gradient of <omega|(I (x) V)^dag (E (x) I_R)(I (x) V)|omega> with respect
// to conj(V): G[j, i] = sum_a conj(omega[a, i]) z[a, j] with z = (E (x) I) u.
Mat attack_gradient(const Workspace& ws, const Mat& e, const Mat& v, const PureState& omega,
                    std::vector<cplx>& u, std::vector<cplx>& w) {
  apply_attack(ws, v, omega.amp.data(), u.data());
  apply_effect(ws, e, u.data(), w.data());
  Mat g(ws.dim_br, ws.dim_br);
  for (std::size_t a = 0; a < ws.prob->dim_a; ++a) {
    const cplx* om = omega.amp.data() + a * ws.dim_br;
    const cplx* z = w.data() + a * ws.dim_br;
    for (std::size_t j = 0; j < ws.dim_br; ++j)
      for (std::size_t i = 0; i < ws.dim_br; ++i) g(j, i) += z[j] * std::conj(om[i]);
  }
  return g;
}

}  // namespace

Mat induced_state(const CheatProblem& prob, const CheatAdversary& adv, int bit) {
  Workspace ws(prob);
  std::vector<cplx> u(ws.dim);
  apply_attack(ws, bit == 0 ? adv.attack0 : adv.attack1, adv.omega.amp.data(), u.data());
  Mat full(ws.dim, ws.dim);
  for (std::size_t i = 0; i < ws.dim; ++i)
    for (std::size_t j = 0; j < ws.dim; ++j) full(i, j) = u[i] * std::conj(u[j]);
  return partial_trace(full, SubsystemShape({prob.dim_a, prob.dim_b, prob.dim_r}), {0, 1});
}

CheatSearchResult search_constrained_cheat(const CheatProblem& prob,
                                           int restarts, std::uint64_t seed) {
  if (prob.e0.rows != prob.dim_a * prob.dim_b || prob.e1.rows != prob.e0.rows)
    throw std::invalid_argument("search_constrained_cheat: effect dimension mismatch");
  Workspace ws(prob);
  Rng rng(seed);

  CheatSearchResult best;
  best.restarts = restarts;

  std::vector<cplx> u(ws.dim), w(ws.dim);

  // With trivial B and R the constraint forces rho_0 = rho_1 and the
  // optimum is exactly the top eigenvalue of (E0 + E1) / 2.
  const bool attacks_matter = ws.dim_br > 1;

  std::vector<cplx> t1(ws.dim), t2(ws.dim), t3(ws.dim);
  auto omega_step = [&](CheatAdversary& adv, int max_iter) {
    // Exact step: top eigenvector of the averaged pullback effect.
    const Mat vd[2] = {adv.attack0.dagger(), adv.attack1.dagger()};
    auto apply_h = [&](const cplx* x, cplx* y) {
      for (std::size_t i = 0; i < ws.dim; ++i) y[i] = cplx(0.0, 0.0);
      for (int b = 0; b < 2; ++b) {
        const Mat& v = b == 0 ? adv.attack0 : adv.attack1;
        const Mat& e = b == 0 ? prob.e0 : prob.e1;
        apply_attack(ws, v, x, t1.data());
        apply_effect(ws, e, t1.data(), t2.data());
        apply_attack(ws, vd[b], t2.data(), t3.data());
        for (std::size_t i = 0; i < ws.dim; ++i) y[i] += 0.5 * t3[i];
      }
    };
    power_top_eig(apply_h, ws.dim, adv.omega, max_iter);
  };

  auto consider = [&](const CheatAdversary& adv) {
    const double p0 = test_value(ws, prob.e0, adv.attack0, adv.omega, u, w);
    const double p1 = test_value(ws, prob.e1, adv.attack1, adv.omega, u, w);
    const double v = 0.5 * (p0 + p1);
    if (v > best.value) {
      best.value = v;
      best.p0 = p0;
      best.p1 = p1;
      best.adversary = adv;
    }
    return v;
  };

  for (int r = 0; r <= restarts; ++r) {
    CheatAdversary adv;
    adv.attack0 = Mat::identity(ws.dim_br);
    adv.attack1 = Mat::identity(ws.dim_br);
    Rng child = rng.child((std::uint64_t)r);
    if (r > 0 && attacks_matter) {
      adv.attack0 = haar_unitary(ws.dim_br, child);
      adv.attack1 = haar_unitary(ws.dim_br, child);
    }
    adv.omega = random_pure(ws.dim, child);

    if (r == 0 || !attacks_matter) {
      // Identity-attack restart: one exact omega step.
      omega_step(adv, 5000);
      consider(adv);
      if (!attacks_matter && r >= 1) break;
      continue;
    }

    double prev = -1.0;
    for (int round = 0; round < 10; ++round) {
      omega_step(adv, 300);
      for (int b = 0; b < 2; ++b) {
        Mat& v = b == 0 ? adv.attack0 : adv.attack1;
        const Mat& e = b == 0 ? prob.e0 : prob.e1;
        for (int inner = 0; inner < 2; ++inner) {
          const Mat g = attack_gradient(ws, e, v, adv.omega, u, w);
          if (g.max_abs() < 1e-14) break;
          v = polar_unitary(g);
        }
      }
      const double nv = consider(adv);
      if (nv <= prev + 1e-9) break;
      prev = nv;
    }
  }
  return best;
}

}  // namespace qcommit
