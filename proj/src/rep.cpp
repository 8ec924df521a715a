#include "hkrep/rep.hpp"

#include <numeric>

#include "hkrep/error.hpp"

namespace hkrep {

int LinearRep::total_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }

bool same_shape(const LinearRep& x, const LinearRep& y) {
  if (x.p != y.p || x.dims.size() != y.dims.size() || x.maps.size() != y.maps.size()) return false;
  for (std::size_t m = 0; m < x.maps.size(); ++m) {
    if (x.maps[m].src != y.maps[m].src || x.maps[m].tgt != y.maps[m].tgt) return false;
  }
  return true;
}

bool is_hom(const LinearRep& x, const LinearRep& y, const BlockMap& f) {
  if (!same_shape(x, y) || f.size() != x.dims.size()) return false;
  for (std::size_t b = 0; b < f.size(); ++b) {
    if (f[b].rows() != static_cast<std::size_t>(y.dims[b]) || f[b].cols() != static_cast<std::size_t>(x.dims[b])) {
      return false;
    }
  }
  for (std::size_t m = 0; m < x.maps.size(); ++m) {
    const auto& xm = x.maps[m];
    const auto& ym = y.maps[m];
    if (!(f[xm.tgt] * xm.matrix == ym.matrix * f[xm.src])) return false;
  }
  return true;
}

std::vector<BlockMap> hom_basis(const LinearRep& x, const LinearRep& y) {
  if (!same_shape(x, y)) throw Error(Errc::ShapeMismatch, "representations have different presentations");
  const std::uint32_t p = x.p;
  const std::size_t nb = x.dims.size();
  std::vector<std::size_t> offset(nb + 1, 0);
  for (std::size_t b = 0; b < nb; ++b) offset[b + 1] = offset[b] + static_cast<std::size_t>(y.dims[b]) * x.dims[b];
  const std::size_t unknowns = offset[nb];

  std::size_t eq_count = 0;
  for (const auto& m : x.maps) eq_count += static_cast<std::size_t>(y.dims[m.tgt]) * x.dims[m.src];
  FpMatrix eqs(p, eq_count, unknowns);
  std::size_t row = 0;
  for (std::size_t mi = 0; mi < x.maps.size(); ++mi) {
    const auto& xm = x.maps[mi];
    const auto& ym = y.maps[mi];
    const std::size_t s = xm.src, t = xm.tgt;
    const std::size_t dxs = x.dims[s], dxt = x.dims[t], dys = y.dims[s], dyt = y.dims[t];
    // (f_t X)[r,c] - (Y f_s)[r,c] = 0
    for (std::size_t r = 0; r < dyt; ++r) {
      for (std::size_t c = 0; c < dxs; ++c, ++row) {
        std::uint32_t* e = eqs.row_ptr(row);
        for (std::size_t u = 0; u < dxt; ++u) {
          std::uint32_t v = xm.matrix(u, c);
          if (v != 0) e[offset[t] + r * dxt + u] = add_mod(e[offset[t] + r * dxt + u], v, p);
        }
        for (std::size_t v = 0; v < dys; ++v) {
          std::uint32_t w = ym.matrix(r, v);
          if (w != 0) e[offset[s] + v * dxs + c] = sub_mod(e[offset[s] + v * dxs + c], w, p);
        }
      }
    }
  }
  Subspace ker = kernel_basis(eqs);
  std::vector<BlockMap> basis;
  basis.reserve(ker.dim());
  for (std::size_t t = 0; t < ker.dim(); ++t) {
    Vec v = ker.basis_vector(t);
    BlockMap f(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      f[b] = FpMatrix(p, y.dims[b], x.dims[b]);
      for (int r = 0; r < y.dims[b]; ++r)
        for (int c = 0; c < x.dims[b]; ++c) f[b](r, c) = v[offset[b] + r * x.dims[b] + c];
    }
    if (!is_hom(x, y, f)) throw Error(Errc::NotAHomomorphism, "internal: kernel element fails substitution");
    basis.push_back(std::move(f));
  }
  return basis;
}

BlockMap compose(const BlockMap& g, const BlockMap& f) {
  if (g.size() != f.size()) throw Error(Errc::ShapeMismatch, "block map sizes differ");
  BlockMap h(f.size());
  for (std::size_t b = 0; b < f.size(); ++b) h[b] = g[b] * f[b];
  return h;
}

BlockMap identity_map(const LinearRep& x) {
  BlockMap f;
  for (int d : x.dims) f.push_back(FpMatrix::identity(x.p, d));
  return f;
}

BlockMap linear_combination(const std::vector<BlockMap>& basis, const Vec& coeffs, std::uint32_t p) {
  if (basis.empty()) throw Error(Errc::DimensionMismatch, "empty basis");
  BlockMap out;
  for (const auto& m : basis.front()) out.emplace_back(p, m.rows(), m.cols());
  for (std::size_t t = 0; t < basis.size(); ++t) {
    if (coeffs[t] == 0) continue;
    for (std::size_t b = 0; b < out.size(); ++b) {
      FpMatrix& o = out[b];
      const FpMatrix& m = basis[t][b];
      for (std::size_t r = 0; r < o.rows(); ++r)
        for (std::size_t c = 0; c < o.cols(); ++c)
          if (m(r, c) != 0) o(r, c) = add_mod(o(r, c), mul_mod(coeffs[t], m(r, c), p), p);
    }
  }
  return out;
}

bool is_invertible(const BlockMap& f) {
  for (const auto& m : f) {
    if (m.rows() != m.cols()) return false;
    if (rank(m) != m.rows()) return false;
  }
  return true;
}

bool is_invariant(const LinearRep& x, const std::vector<Subspace>& blocks) {
  if (blocks.size() != x.dims.size()) throw Error(Errc::ShapeMismatch, "one subspace per block required");
  for (const auto& m : x.maps) {
    const Subspace& src = blocks[m.src];
    const Subspace& tgt = blocks[m.tgt];
    for (std::size_t t = 0; t < src.dim(); ++t) {
      if (!tgt.contains(m.matrix.apply(src.basis_vector(t)))) return false;
    }
  }
  return true;
}

SubQuotientRep sub_quotient(const LinearRep& x, const std::vector<Subspace>& blocks) {
  if (!is_invariant(x, blocks)) throw Error(Errc::NotInvariant, "subspaces are not closed under the action");
  SubQuotientRep out;
  out.sub.p = out.quotient.p = x.p;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    out.sub.dims.push_back(static_cast<int>(blocks[b].dim()));
    out.quotient.dims.push_back(x.dims[b] - static_cast<int>(blocks[b].dim()));
    out.inclusion.push_back(blocks[b].basis_columns());
    out.projection.push_back(blocks[b].quotient_map());
    out.section.push_back(blocks[b].section());
  }
  for (const auto& m : x.maps) {
    const Subspace& src = blocks[m.src];
    const Subspace& tgt = blocks[m.tgt];
    // Restriction: coordinates of X u in the RREF basis are its pivot entries.
    FpMatrix restricted(x.p, tgt.dim(), src.dim());
    for (std::size_t c = 0; c < src.dim(); ++c) {
      Vec img = m.matrix.apply(src.basis_vector(c));
      Vec coords = tgt.coordinates(img);
      for (std::size_t r = 0; r < coords.size(); ++r) restricted(r, c) = coords[r];
    }
    out.sub.maps.push_back({m.src, m.tgt, std::move(restricted)});
    out.quotient.maps.push_back({m.src, m.tgt, out.projection[m.tgt] * m.matrix * out.section[m.src]});
  }
  return out;
}

LinearRep direct_sum(const LinearRep& x, const LinearRep& y) {
  if (!same_shape(x, y)) throw Error(Errc::ShapeMismatch, "direct sum of differently shaped representations");
  LinearRep out;
  out.p = x.p;
  for (std::size_t b = 0; b < x.dims.size(); ++b) out.dims.push_back(x.dims[b] + y.dims[b]);
  for (std::size_t m = 0; m < x.maps.size(); ++m) {
    out.maps.push_back({x.maps[m].src, x.maps[m].tgt, block_diagonal(x.maps[m].matrix, y.maps[m].matrix)});
  }
  return out;
}

LinearRep change_basis(const LinearRep& x, const std::vector<FpMatrix>& basis,
                       const std::vector<FpMatrix>& inverse) {
  LinearRep out;
  out.p = x.p;
  out.dims = x.dims;
  for (const auto& m : x.maps) {
    out.maps.push_back({m.src, m.tgt, inverse[m.tgt] * m.matrix * basis[m.src]});
  }
  return out;
}

std::vector<Subspace> image_blocks(const BlockMap& f, const std::vector<Subspace>& blocks) {
  std::vector<Subspace> out;
  for (std::size_t b = 0; b < f.size(); ++b) out.push_back(blocks[b].image_under(f[b]));
  return out;
}

std::vector<Subspace> image_blocks(const BlockMap& f) {
  std::vector<Subspace> out;
  for (const auto& m : f) out.push_back(image(m));
  return out;
}

std::vector<Subspace> kernel_blocks(const BlockMap& f) {
  std::vector<Subspace> out;
  for (const auto& m : f) out.push_back(kernel_basis(m));
  return out;
}

}  // namespace hkrep
