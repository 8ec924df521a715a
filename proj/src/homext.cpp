#include "hkrep/homext.hpp"

#include <algorithm>

#include "hkrep/error.hpp"
#include "hkrep/parallel.hpp"
#include "hkrep/random.hpp"

namespace hkrep {

namespace {

// Unknowns of the fast path: f_i(eps^s x_b) = eps^s sum_a c_{i,a,b}(eps) y_a,
// one coefficient per (vertex, a, b, degree).
struct PolyUnknowns {
  std::vector<std::size_t> offset;
  std::vector<int> order, rows, cols;

  std::size_t index(int i, int a, int b, int deg) const {
    return offset[i] + (static_cast<std::size_t>(a) * cols[i] + b) * order[i] + deg;
  }
};

HomSpace hom_space_standard(const HModule& m, const HModule& n) {
  const auto& datum = m.datum();
  const std::uint32_t p = m.p();
  const int k = m.k();
  const int nv = m.n();
  PolyUnknowns u;
  u.offset.assign(nv + 1, 0);
  for (int i = 0; i < nv; ++i) {
    u.order.push_back(datum.loop_order(i, k));
    u.rows.push_back(n.dim(i) / u.order[i]);
    u.cols.push_back(m.dim(i) / u.order[i]);
    u.offset[i + 1] = u.offset[i] + static_cast<std::size_t>(u.order[i]) * u.rows[i] * u.cols[i];
  }
  const std::size_t unknowns = u.offset[nv];

  // Arrow squares only need checking on eps_j^t x_b with t < f_ij: both sides
  // are compatible with alpha eps_j^{f_ij} = eps_i^{f_ji} alpha.
  std::size_t eq_count = 0;
  for (const auto& spec : datum.arrows()) {
    eq_count += static_cast<std::size_t>(u.cols[spec.tail]) * datum.f(spec.head, spec.tail) * n.dim(spec.head);
  }
  FpMatrix eqs(p, eq_count, unknowns);
  std::size_t row = 0;
  for (std::size_t ai = 0; ai < datum.arrows().size(); ++ai) {
    const auto& spec = datum.arrows()[ai];
    const int i = spec.head, j = spec.tail;
    const int ni = u.order[i], nj = u.order[j];
    const FpMatrix& am = m.arrows()[ai];
    const FpMatrix& an = n.arrows()[ai];
    for (int b = 0; b < u.cols[j]; ++b) {
      for (int t = 0; t < datum.f(i, j); ++t) {
        const int col = b * nj + t;
        for (int r = 0; r < n.dim(i); ++r, ++row) {
          std::uint32_t* e = eqs.row_ptr(row);
          const int a = r / ni, s_out = r % ni;
          // (f_i A^M)(r, col)
          for (int x = 0; x < m.dim(i); ++x) {
            const std::uint32_t v = am(x, col);
            if (v == 0) continue;
            const int bx = x / ni, sx = x % ni;
            if (s_out < sx) continue;
            const std::size_t idx = u.index(i, a, bx, s_out - sx);
            e[idx] = add_mod(e[idx], v, p);
          }
          // (A^N f_j)(r, col)
          for (int y = 0; y < n.dim(j); ++y) {
            const std::uint32_t w = an(r, y);
            if (w == 0) continue;
            const int ay = y / nj, sy = y % nj;
            if (sy < t) continue;
            const std::size_t idx = u.index(j, ay, b, sy - t);
            e[idx] = sub_mod(e[idx], w, p);
          }
        }
      }
    }
  }
  Subspace ker = kernel_basis(eqs);
  HomSpace out;
  const LinearRep xm = m.to_rep();
  const LinearRep yn = n.to_rep();
  for (std::size_t t = 0; t < ker.dim(); ++t) {
    Vec v = ker.basis_vector(t);
    Hom f;
    for (int i = 0; i < nv; ++i) {
      FpMatrix fi(p, n.dim(i), m.dim(i));
      for (int a = 0; a < u.rows[i]; ++a)
        for (int b = 0; b < u.cols[i]; ++b)
          for (int deg = 0; deg < u.order[i]; ++deg) {
            const std::uint32_t c = v[u.index(i, a, b, deg)];
            if (c == 0) continue;
            for (int s = 0; s + deg < u.order[i]; ++s) fi(a * u.order[i] + s + deg, b * u.order[i] + s) = c;
          }
      f.push_back(std::move(fi));
    }
    if (!is_hom(xm, yn, f)) throw Error(Errc::NotAHomomorphism, "internal: fast hom basis fails substitution");
    out.basis.push_back(std::move(f));
  }
  return out;
}

}  // namespace

HomSpace hom_space_generic(const HModule& m, const HModule& n) {
  require_compatible(m, n);
  return {hom_basis(m.to_rep(), n.to_rep())};
}

HomSpace hom_space(const HModule& m, const HModule& n) {
  require_compatible(m, n);
  if (m.is_standard_form() && n.is_standard_form()) return hom_space_standard(m, n);
  return hom_space_generic(m, n);
}

std::size_t hom_dim(const HModule& m, const HModule& n) { return hom_space(m, n).dim(); }

long long ext1_dim(const HModule& m, const HModule& n) {
  require_compatible(m, n);
  const RankVector rm = rank_vector(m);
  const RankVector rn = rank_vector(n);
  const long long e = static_cast<long long>(hom_dim(m, n)) - euler_form(m.datum(), m.k(), rm, rn);
  if (e < 0) throw Error(Errc::DimensionMismatch, "internal: negative Ext dimension");
  return e;
}

bool is_rigid(const HModule& m) { return ext1_dim(m, m) == 0; }

IsoResult are_isomorphic(const HModule& m, const HModule& n, const IsoOptions& options) {
  require_compatible(m, n);
  IsoResult no{false, true, std::nullopt};
  if (m.dims() != n.dims()) return no;
  HomSpace h = hom_space(m, n);
  if (m.total_dim() == 0) return {true, true, h.basis.empty() ? Hom(m.n()) : h.basis.front()};
  // If M ~ N then Hom(M,N), End(M), End(N) and Hom(N,M) all have the same dimension.
  const std::size_t e = hom_dim(m, m);
  if (h.dim() != e || hom_dim(n, n) != e || hom_dim(n, m) != e || h.dim() == 0) return no;

  const std::uint32_t p = m.p();
  for (const auto& f : h.basis)
    if (is_invertible(f)) return {true, true, f};
  std::optional<std::uint64_t> space;
  try {
    space = checked_pow(p, h.dim());
  } catch (const Error&) {
  }
  if (space && *space <= options.exhaustive_budget) {
    Vec coeffs(h.dim(), 0);
    for (std::uint64_t idx = 1; idx < *space; ++idx) {
      std::uint64_t rest = idx;
      for (auto& c : coeffs) {
        c = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      Hom f = linear_combination(h.basis, coeffs, p);
      if (is_invertible(f)) return {true, true, f};
    }
    return no;
  }
  FieldSampler sample(p, options.seed);
  Vec coeffs(h.dim(), 0);
  for (int t = 0; t < options.trials; ++t) {
    for (auto& c : coeffs) c = sample();
    Hom f = linear_combination(h.basis, coeffs, p);
    if (is_invertible(f)) return {true, true, f};
  }
  return {false, false, std::nullopt};
}

std::optional<std::uint64_t> structure_space_size(const CartanDatum& datum, int k, std::uint32_t p,
                                                  const RankVector& r) {
  try {
    return checked_pow(p, structure_parameter_count(datum, k, r));
  } catch (const Error&) {
    return std::nullopt;
  }
}

RigidSearch find_rigid(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t trials,
                       std::uint64_t seed, std::uint64_t exhaustive_budget) {
  RigidSearch out;
  std::vector<char> rigid(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    rigid[t] = is_rigid(random_locally_free(datum, k, p, r, derive_seed(seed, t)));
  });
  out.trials_used = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (!rigid[t]) continue;
    ++out.hits;
    if (!out.module) out.module = random_locally_free(datum, k, p, r, derive_seed(seed, t));
  }
  if (out.module) return out;
  auto space = structure_space_size(*datum, k, p, r);
  if (!space || *space > exhaustive_budget) return out;
  out.exhaustive = true;
  for (std::uint64_t idx = 0; idx < *space; ++idx) {
    HModule m = from_structure_matrices(structure_from_index(datum, k, p, r, idx), p);
    if (is_rigid(m)) {
      out.module = m;
      ++out.hits;
      return out;
    }
  }
  out.none_exists_certain = true;
  return out;
}

RigidLiftSearch find_rigid_lift(const DatumPtr& datum, int k, const RankVector& r,
                                const std::vector<std::uint32_t>& primes, std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t exhaustive_budget) {
  if (primes.empty()) throw Error(Errc::NotEnoughPrimes, "at least one prime required");
  RigidLiftSearch out;
  const std::uint64_t params = structure_parameter_count(*datum, k, r);
  out.exhaustive = params < 63 && (1ULL << params) <= exhaustive_budget;
  const std::uint64_t count = out.exhaustive ? 1ULL << params : trials;
  auto candidate = [&](std::uint64_t t) {
    if (out.exhaustive) return structure_from_index(datum, k, 2, r, t);
    StructureMatrices s = zero_structure(datum, k, r);
    FieldSampler bit(2, derive_seed(seed, t));
    for (auto& block : s.blocks)
      for (auto& c : block.coeffs) c = bit();
    return s;
  };
  for (std::uint64_t t = 0; t < count; ++t) {
    StructureMatrices s = candidate(t);
    ++out.tried;
    bool rigid = true;
    for (auto q : primes) rigid = rigid && is_rigid(from_structure_matrices(s, q));
    if (rigid) {
      out.structure = std::move(s);
      return out;
    }
  }
  return out;
}

ParameterEstimate parameter_estimate(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                                     std::uint64_t samples, std::uint64_t seed, std::uint64_t exhaustive_budget) {
  if (samples == 0) throw Error(Errc::InvalidInput, "at least one sample required");
  ParameterEstimate out;
  out.q_value = euler_form(*datum, k, r, r);
  auto space = structure_space_size(*datum, k, p, r);
  out.exhaustive = space && *space <= exhaustive_budget;
  out.samples = out.exhaustive ? *space : samples;
  std::vector<std::size_t> end_dims(out.samples);
  parallel_for(out.samples, [&](std::size_t t) {
    HModule m = out.exhaustive ? from_structure_matrices(structure_from_index(datum, k, p, r, t), p)
                               : random_locally_free(datum, k, p, r, derive_seed(seed, t));
    end_dims[t] = hom_dim(m, m);
  });
  out.min_end_dim = *std::min_element(end_dims.begin(), end_dims.end());
  out.mu_hat = static_cast<long long>(out.min_end_dim) - out.q_value;
  return out;
}

}  // namespace hkrep
