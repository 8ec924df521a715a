#include "hkrep/reduction.hpp"

#include "hkrep/error.hpp"
#include "hkrep/random.hpp"

namespace hkrep {

namespace {

IntMatrix select(const IntMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  IntMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

Vec flatten(const Hom& f) {
  Vec v;
  for (const auto& m : f)
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto* row = m.row_ptr(r);
      v.insert(v.end(), row, row + m.cols());
    }
  return v;
}

}  // namespace

ReducedModule reduce(const HModule& m) {
  if (m.k() < 2) throw Error(Errc::KTooSmall, "reduction needs k >= 2");
  const auto& datum = m.datum();
  ReducedModule out{zero_module(m.datum_ptr(), m.k() - 1, m.p()), {}, {}};
  std::vector<std::vector<std::size_t>> keep;
  for (int i = 0; i < m.n(); ++i) {
    Subspace w = image(m.loop(i).power(static_cast<std::uint64_t>(m.k() - 1) * datum.sym(i)));
    out.projection.push_back(w.quotient_map());
    out.section.push_back(w.section());
    keep.push_back(w.complement_coordinates());
  }
  LinearRep rep = m.to_rep();
  LinearRep q;
  q.p = rep.p;
  for (int i = 0; i < m.n(); ++i) q.dims.push_back(static_cast<int>(keep[i].size()));
  for (const auto& x : rep.maps) {
    q.maps.push_back({x.src, x.tgt, out.projection[x.tgt] * x.matrix * out.section[x.src]});
  }
  HModule reduced = HModule::from_rep(m.datum_ptr(), m.k() - 1, q);
  if (m.lift() && m.is_standard_form()) {
    // The image of eps^{k-1} is a coordinate subspace here, so the quotient is
    // a coordinate selection and the integer lift restricts the same way.
    IntegerLift lift;
    for (int i = 0; i < m.n(); ++i) lift.loops.push_back(select(m.lift()->loops[i], keep[i], keep[i]));
    for (std::size_t a = 0; a < datum.arrows().size(); ++a) {
      const auto& spec = datum.arrows()[a];
      lift.arrows.push_back(select(m.lift()->arrows[a], keep[spec.head], keep[spec.tail]));
    }
    reduced = HModule(reduced.datum_ptr(), reduced.k(), reduced.p(), reduced.dims(), reduced.loops(),
                      reduced.arrows(), std::move(lift));
  }
  require_valid(reduced);
  out.module = std::move(reduced);
  return out;
}

StructureMatrices lift_structure(const StructureMatrices& s) {
  StructureMatrices out = zero_structure(s.datum, s.k + 1, s.rank);
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    const PolyMatrix& src = s.blocks[b];
    PolyMatrix& dst = out.blocks[b];
    for (int r = 0; r < src.rows; ++r)
      for (int c = 0; c < src.cols; ++c)
        for (int d = 0; d < src.length && d < dst.length; ++d) dst(r, c, d) = src(r, c, d);
  }
  return out;
}

HModule lift(const StructureMatrices& s, std::uint32_t p) { return from_structure_matrices(lift_structure(s), p); }

LiftedChain lift_chain(const std::vector<StructureMatrices>& chain, std::uint32_t p) {
  if (chain.empty()) throw Error(Errc::NotNested, "empty chain");
  const auto& datum = *chain.front().datum;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    const auto& small = chain[j];
    const auto& big = chain[j + 1];
    if (!(*small.datum == *big.datum) || small.k != big.k || !small.rank.fits_in(big.rank)) {
      throw Error(Errc::NotNested, "chain members do not fit into each other");
    }
    for (std::size_t t = 0; t < datum.omega().size(); ++t) {
      auto [i, jj] = datum.omega()[t];
      const int width = -datum.c(i, jj);
      const PolyMatrix& u = small.blocks[t];
      const PolyMatrix& v = big.blocks[t];
      for (int c = 0; c < width * small.rank[jj]; ++c) {
        for (int r = 0; r < big.rank[i]; ++r) {
          for (int d = 0; d < v.length; ++d) {
            const std::int64_t expect = r < small.rank[i] && d < u.length ? u(r, c, d) : 0;
            if (mod_reduce(v(r, c, d) - expect, p) != 0) {
              throw Error(Errc::NotNested, "presentation " + std::to_string(j + 1) + " is not a leading block of the next");
            }
          }
        }
      }
    }
  }
  LiftedChain out;
  for (const auto& s : chain) {
    out.structures.push_back(lift_structure(s));
    out.modules.push_back(from_structure_matrices(out.structures.back(), p));
  }
  const HModule& top = out.modules.back();
  for (const auto& s : out.structures) {
    std::vector<Subspace> u;
    for (int i = 0; i < top.n(); ++i) {
      const int order = datum.loop_order(i, top.k());
      std::vector<Vec> vectors;
      for (int b = 0; b < s.rank[i]; ++b)
        for (int d = 0; d < order; ++d) {
          Vec v(top.dim(i), 0);
          v[b * order + d] = 1;
          vectors.push_back(std::move(v));
        }
      u.push_back(Subspace::span(p, top.dim(i), vectors));
    }
    if (!is_invariant(top.to_rep(), u)) throw Error(Errc::NotNested, "lifted chain member is not a submodule");
    out.submodules.push_back(std::move(u));
  }
  return out;
}

Hom reduce_hom(const HModule& m, const HModule& n, const Hom& f) {
  require_compatible(m, n);
  if (!is_hom(m.to_rep(), n.to_rep(), f)) throw Error(Errc::NotAHomomorphism, "map is not H-linear");
  ReducedModule rm = reduce(m);
  ReducedModule rn = reduce(n);
  Hom out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(rn.projection[i] * f[i] * rm.section[i]);
  return out;
}

HomReduction hom_reduction(const HModule& m, const HModule& n) {
  HomReduction out;
  HomSpace h = hom_space(m, n);
  out.dim_hom = h.dim();
  ReducedModule rm = reduce(m);
  ReducedModule rn = reduce(n);
  out.dim_hom_reduced = hom_dim(rm.module, rn.module);
  std::vector<Vec> images;
  for (const auto& f : h.basis) {
    Hom g;
    for (std::size_t i = 0; i < f.size(); ++i) g.push_back(rn.projection[i] * f[i] * rm.section[i]);
    images.push_back(flatten(g));
  }
  std::size_t len = 0;
  for (int i = 0; i < m.n(); ++i) len += static_cast<std::size_t>(rn.module.dim(i)) * rm.module.dim(i);
  out.rank_induced = Subspace::span(m.p(), len, images).dim();
  return out;
}

RigidTransferReport rigid_transfer_check(const DatumPtr& datum, std::uint32_t p, const RankVector& r, int k_max,
                                         std::uint64_t trials, std::uint64_t seed, std::uint64_t exhaustive_budget) {
  if (k_max < 1) throw Error(Errc::KTooSmall, "k_max must be positive");
  RigidTransferReport report;
  for (int k = 1; k <= k_max; ++k) {
    RigidSearch s = find_rigid(datum, k, p, r, trials, derive_seed(seed, k), exhaustive_budget);
    RigidTransferLevel level;
    level.k = k;
    level.found = s.module.has_value();
    level.none_certain = s.none_exists_certain;
    level.exhaustive = s.exhaustive;
    level.rigid = s.module;
    report.levels.push_back(std::move(level));
  }
  for (std::size_t t = 1; t < report.levels.size(); ++t) {
    if (report.levels[t].found != report.levels[0].found) report.pattern_constant = false;
  }
  if (!report.pattern_constant) {
    report.ok = false;
    report.problems.push_back("rigid existence differs between values of k");
  }
  for (std::size_t t = 1; t < report.levels.size(); ++t) {
    auto& level = report.levels[t];
    if (!level.rigid) continue;
    HModule reduced = reduce(*level.rigid).module;
    level.reduction_rigid = is_rigid(reduced);
    if (!*level.reduction_rigid) {
      report.ok = false;
      report.problems.push_back("reduction of the rigid module at k=" + std::to_string(level.k) + " is not rigid");
    }
    const auto& below = report.levels[t - 1];
    if (below.rigid) {
      level.reduction_matches = are_isomorphic(reduced, *below.rigid).isomorphic;
      if (!*level.reduction_matches) {
        report.ok = false;
        report.problems.push_back("reduction at k=" + std::to_string(level.k) + " differs from the rigid module below");
      }
    }
  }
  return report;
}

FiltrationReport epsilon_filtration_check(const HModule& m) {
  if (!is_locally_free(m)) throw Error(Errc::NotLocallyFree, "filtration check needs a locally free module");
  FiltrationReport out;
  const int k = m.k();
  const auto eps = m.central_action();
  // layers[j][i] = eps^j M_i for j = 0..k.
  std::vector<std::vector<Subspace>> powers(k + 1);
  for (int i = 0; i < m.n(); ++i) {
    FpMatrix e = FpMatrix::identity(m.p(), m.dim(i));
    for (int j = 0; j <= k; ++j) {
      powers[j].push_back(image(e));
      e = eps[i] * e;
    }
  }
  for (int j = 0; j < k; ++j) {
    std::vector<int> dims;
    for (int i = 0; i < m.n(); ++i) dims.push_back(static_cast<int>(powers[j][i].dim() - powers[j + 1][i].dim()));
    if (j > 0 && dims != out.layer_dims.front()) out.equal_layers = false;
    out.layer_dims.push_back(std::move(dims));
  }
  for (int j = 1; j < k; ++j) {
    std::size_t total_rank = 0, source_dim = 0, target_dim = 0;
    for (int i = 0; i < m.n(); ++i) {
      Subspace pushed = subspace_sum(powers[j - 1][i].image_under(eps[i]), powers[j + 1][i]);
      total_rank += pushed.dim() - powers[j + 1][i].dim();
      source_dim += out.layer_dims[j - 1][i];
      target_dim += out.layer_dims[j][i];
    }
    out.map_ranks.push_back(total_rank);
    if (total_rank != source_dim || total_rank != target_dim) out.bijective = false;
  }
  return out;
}

}  // namespace hkrep
