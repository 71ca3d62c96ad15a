#include "qcommit/kernels.hpp"

#include <cassert>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcommit::kernels {

std::size_t product(const std::vector<std::size_t>& factors) {
  std::size_t d = 1;
  for (std::size_t f : factors) d *= f;
  return d;
}

namespace {

// Strides of each factor in the flat row-major index (factor 0 is the
// most significant digit).
std::vector<std::size_t> strides(const std::vector<std::size_t>& factors) {
  std::vector<std::size_t> s(factors.size(), 1);
  for (std::size_t i = factors.size(); i-- > 1;)
    s[i - 1] = s[i] * factors[i];
  return s;
}

struct TraceIndexPlan {
  std::size_t dim_keep = 1, dim_drop = 1;
  std::vector<std::size_t> keep_off;  // flat offset of each kept sub-index
  std::vector<std::size_t> drop_off;  // flat offset of each traced sub-index
};

TraceIndexPlan trace_plan(const std::vector<std::size_t>& factors,
                          const std::vector<std::size_t>& keep) {
  TraceIndexPlan p;
  std::vector<bool> kept(factors.size(), false);
  for (std::size_t k : keep) {
    if (k >= factors.size()) throw std::invalid_argument("partial_trace: factor index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate keep index");
    kept[k] = true;
  }
  const auto st = strides(factors);
  std::vector<std::size_t> keep_dims, keep_strides, drop_dims, drop_strides;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (kept[i]) { keep_dims.push_back(factors[i]); keep_strides.push_back(st[i]); }
    else         { drop_dims.push_back(factors[i]); drop_strides.push_back(st[i]); }
  }
  p.dim_keep = product(keep_dims);
  p.dim_drop = product(drop_dims);
  p.keep_off.assign(p.dim_keep, 0);
  p.drop_off.assign(p.dim_drop, 0);
  for (std::size_t x = 0; x < p.dim_keep; ++x) {
    std::size_t r = x, off = 0;
    for (std::size_t i = keep_dims.size(); i-- > 0;) {
      off += (r % keep_dims[i]) * keep_strides[i];
      r /= keep_dims[i];
    }
    p.keep_off[x] = off;
  }
  for (std::size_t x = 0; x < p.dim_drop; ++x) {
    std::size_t r = x, off = 0;
    for (std::size_t i = drop_dims.size(); i-- > 0;) {
      off += (r % drop_dims[i]) * drop_strides[i];
      r /= drop_dims[i];
    }
    p.drop_off[x] = off;
  }
  return p;
}

// Map from output flat index to input flat index for a factor permutation.
std::vector<std::size_t> permute_map(const std::vector<std::size_t>& factors,
                                     const std::vector<std::size_t>& perm) {
  if (perm.size() != factors.size())
    throw std::invalid_argument("permute: permutation size mismatch");
  std::vector<bool> seen(factors.size(), false);
  for (std::size_t p : perm) {
    if (p >= factors.size() || seen[p]) throw std::invalid_argument("permute: invalid permutation");
    seen[p] = true;
  }
  const auto in_st = strides(factors);
  std::vector<std::size_t> out_factors(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out_factors[i] = factors[perm[i]];
  const std::size_t dim = product(factors);
  std::vector<std::size_t> map(dim);
  for (std::size_t o = 0; o < dim; ++o) {
    std::size_t r = o, in_idx = 0;
    for (std::size_t i = perm.size(); i-- > 0;) {
      in_idx += (r % out_factors[i]) * in_st[perm[i]];
      r /= out_factors[i];
    }
    map[o] = in_idx;
  }
  return map;
}

struct FactorOpPlan {
  std::size_t dim = 1;        // full space dimension
  std::size_t op_dim = 1;     // dimension the operator acts on
  std::size_t n_outer = 1;    // dim / op_dim
  std::vector<std::size_t> outer_off;   // base offset per outer block
  std::vector<std::size_t> target_off;  // offset of each operator sub-index
};

FactorOpPlan factor_op_plan(const std::vector<std::size_t>& targets,
                            const std::vector<std::size_t>& factors) {
  FactorOpPlan p;
  std::vector<bool> is_t(factors.size(), false);
  for (std::size_t t : targets) {
    if (t >= factors.size() || is_t[t])
      throw std::invalid_argument("apply_factor_op: bad target list");
    is_t[t] = true;
  }
  const auto st = strides(factors);
  p.dim = product(factors);
  std::vector<std::size_t> t_dims, t_strides, o_dims, o_strides;
  for (std::size_t t : targets) { t_dims.push_back(factors[t]); t_strides.push_back(st[t]); }
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (!is_t[i]) { o_dims.push_back(factors[i]); o_strides.push_back(st[i]); }
  p.op_dim = product(t_dims);
  p.n_outer = product(o_dims);
  p.target_off.assign(p.op_dim, 0);
  for (std::size_t x = 0; x < p.op_dim; ++x) {
    std::size_t r = x, off = 0;
    for (std::size_t i = t_dims.size(); i-- > 0;) {
      off += (r % t_dims[i]) * t_strides[i];
      r /= t_dims[i];
    }
    p.target_off[x] = off;
  }
  p.outer_off.assign(p.n_outer, 0);
  for (std::size_t x = 0; x < p.n_outer; ++x) {
    std::size_t r = x, off = 0;
    for (std::size_t i = o_dims.size(); i-- > 0;) {
      off += (r % o_dims[i]) * o_strides[i];
      r /= o_dims[i];
    }
    p.outer_off[x] = off;
  }
  return p;
}

}  // namespace

std::vector<std::size_t> permute_index_map(const std::vector<std::size_t>& factors,
                                           const std::vector<std::size_t>& perm) {
  return permute_map(factors, perm);
}

namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* ci = c + i * m;
    for (std::size_t j = 0; j < m; ++j) ci[j] = cplx(0.0, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
      const cplx ail = a[i * k + l];
      const cplx* bl = b + l * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
    }
  }
}

void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out) {
  const std::size_t cols = ac * bc;
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t p = 0; p < br; ++p) {
      cplx* row = out + (i * br + p) * cols;
      for (std::size_t j = 0; j < ac; ++j) {
        const cplx aij = a[i * ac + j];
        const cplx* bp = b + p * bc;
        for (std::size_t q = 0; q < bc; ++q) row[j * bc + q] = aij * bp[q];
      }
    }
}

void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out) {
  const auto p = trace_plan(factors, keep);
  const std::size_t dim = p.dim_keep * p.dim_drop;
  for (std::size_t i = 0; i < p.dim_keep; ++i)
    for (std::size_t j = 0; j < p.dim_keep; ++j) {
      cplx s(0.0, 0.0);
      for (std::size_t t = 0; t < p.dim_drop; ++t)
        s += rho[(p.keep_off[i] + p.drop_off[t]) * dim + p.keep_off[j] + p.drop_off[t]];
      out[i * p.dim_keep + j] = s;
    }
}

void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
  const auto map = permute_map(factors, perm);
  for (std::size_t o = 0; o < map.size(); ++o) out[o] = in[map[o]];
}

void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
  const auto map = permute_map(factors, perm);
  const std::size_t dim = map.size();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out[i * dim + j] = in[map[i] * dim + map[j]];
}

void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out) {
  const auto p = factor_op_plan(targets, factors);
  for (std::size_t o = 0; o < p.n_outer; ++o) {
    const std::size_t base = p.outer_off[o];
    for (std::size_t r = 0; r < p.op_dim; ++r) {
      cplx s(0.0, 0.0);
      const cplx* oprow = op + r * p.op_dim;
      for (std::size_t c = 0; c < p.op_dim; ++c) s += oprow[c] * in[base + p.target_off[c]];
      out[base + p.target_off[r]] = s;
    }
  }
}

}  // namespace serial

namespace par {

void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < (long long)n; ++ii) {
    const std::size_t i = (std::size_t)ii;
    cplx* ci = c + i * m;
    for (std::size_t j = 0; j < m; ++j) ci[j] = cplx(0.0, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
      const cplx ail = a[i * k + l];
      const cplx* bl = b + l * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
    }
  }
#else
  serial::matmul(a, b, c, n, k, m);
#endif
}

void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out) {
#ifdef _OPENMP
  const std::size_t cols = ac * bc;
#pragma omp parallel for collapse(2) schedule(static)
  for (long long i = 0; i < (long long)ar; ++i)
    for (long long p = 0; p < (long long)br; ++p) {
      cplx* row = out + ((std::size_t)i * br + (std::size_t)p) * cols;
      for (std::size_t j = 0; j < ac; ++j) {
        const cplx aij = a[(std::size_t)i * ac + j];
        const cplx* bp = b + (std::size_t)p * bc;
        for (std::size_t q = 0; q < bc; ++q) row[j * bc + q] = aij * bp[q];
      }
    }
#else
  serial::kron(a, ar, ac, b, br, bc, out);
#endif
}

void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out) {
#ifdef _OPENMP
  const auto p = trace_plan(factors, keep);
  const std::size_t dim = p.dim_keep * p.dim_drop;
#pragma omp parallel for collapse(2) schedule(static)
  for (long long i = 0; i < (long long)p.dim_keep; ++i)
    for (long long j = 0; j < (long long)p.dim_keep; ++j) {
      cplx s(0.0, 0.0);
      for (std::size_t t = 0; t < p.dim_drop; ++t)
        s += rho[(p.keep_off[i] + p.drop_off[t]) * dim + p.keep_off[j] + p.drop_off[t]];
      out[(std::size_t)i * p.dim_keep + (std::size_t)j] = s;
    }
#else
  serial::partial_trace(rho, factors, keep, out);
#endif
}

void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
#ifdef _OPENMP
  const auto map = permute_map(factors, perm);
#pragma omp parallel for schedule(static)
  for (long long o = 0; o < (long long)map.size(); ++o) out[o] = in[map[o]];
#else
  serial::permute_vec(in, factors, perm, out);
#endif
}

void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
#ifdef _OPENMP
  const auto map = permute_map(factors, perm);
  const std::size_t dim = map.size();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out[(std::size_t)i * dim + j] = in[map[i] * dim + map[j]];
#else
  serial::permute_mat(in, factors, perm, out);
#endif
}

void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out) {
#ifdef _OPENMP
  const auto p = factor_op_plan(targets, factors);
#pragma omp parallel for schedule(static)
  for (long long o = 0; o < (long long)p.n_outer; ++o) {
    const std::size_t base = p.outer_off[o];
    for (std::size_t r = 0; r < p.op_dim; ++r) {
      cplx s(0.0, 0.0);
      const cplx* oprow = op + r * p.op_dim;
      for (std::size_t c = 0; c < p.op_dim; ++c) s += oprow[c] * in[base + p.target_off[c]];
      out[base + p.target_off[r]] = s;
    }
  }
#else
  serial::apply_factor_op_vec(op, targets, in, factors, out);
#endif
}

}  // namespace par

void matmul(const cplx* a, const cplx* b, cplx* c,
            std::size_t n, std::size_t k, std::size_t m) {
  if (n * k * m >= parallel_grain) par::matmul(a, b, c, n, k, m);
  else serial::matmul(a, b, c, n, k, m);
}

void kron(const cplx* a, std::size_t ar, std::size_t ac,
          const cplx* b, std::size_t br, std::size_t bc, cplx* out) {
  if (ar * ac * br * bc >= parallel_grain) par::kron(a, ar, ac, b, br, bc, out);
  else serial::kron(a, ar, ac, b, br, bc, out);
}

void partial_trace(const cplx* rho, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& keep, cplx* out) {
  const std::size_t dim = product(factors);
  if (dim * dim >= parallel_grain) par::partial_trace(rho, factors, keep, out);
  else serial::partial_trace(rho, factors, keep, out);
}

void permute_vec(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
  if (product(factors) >= parallel_grain) par::permute_vec(in, factors, perm, out);
  else serial::permute_vec(in, factors, perm, out);
}

void permute_mat(const cplx* in, const std::vector<std::size_t>& factors,
                 const std::vector<std::size_t>& perm, cplx* out) {
  const std::size_t dim = product(factors);
  if (dim * dim >= parallel_grain) par::permute_mat(in, factors, perm, out);
  else serial::permute_mat(in, factors, perm, out);
}

void apply_factor_op_vec(const cplx* op, const std::vector<std::size_t>& targets,
                         const cplx* in, const std::vector<std::size_t>& factors,
                         cplx* out) {
  if (product(factors) >= parallel_grain) par::apply_factor_op_vec(op, targets, in, factors, out);
  else serial::apply_factor_op_vec(op, targets, in, factors, out);
}

}  // namespace qcommit::kernels
