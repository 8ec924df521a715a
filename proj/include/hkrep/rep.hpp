#pragma once

// Finite-dimensional representations presented as vector spaces ("blocks")
// with a list of linear generator maps between them. H(k)-modules and
// H(k,l)-modules both lower to this form; Hom spaces, submodules and
// quotients are computed here once for both.

#include <cstdint>
#include <vector>

#include "hkrep/linalg.hpp"

namespace hkrep {

struct RepMap {
  int src;
  int tgt;
  FpMatrix matrix;  // dims[tgt] x dims[src]
};

struct LinearRep {
  std::uint32_t p = 2;
  std::vector<int> dims;
  std::vector<RepMap> maps;

  int total_dim() const;
};

/// One linear map per block.
using BlockMap = std::vector<FpMatrix>;

/// True when both presentations have the same blocks count and the same
/// (src, tgt) pattern of generator maps.
bool same_shape(const LinearRep& x, const LinearRep& y);

bool is_hom(const LinearRep& x, const LinearRep& y, const BlockMap& f);

/// Basis of Hom(x, y): block maps f with f_tgt X = Y f_src for every generator.
/// Every returned element is checked by substitution.
std::vector<BlockMap> hom_basis(const LinearRep& x, const LinearRep& y);

BlockMap compose(const BlockMap& g, const BlockMap& f);
BlockMap identity_map(const LinearRep& x);
BlockMap linear_combination(const std::vector<BlockMap>& basis, const Vec& coeffs, std::uint32_t p);
bool is_invertible(const BlockMap& f);

bool is_invariant(const LinearRep& x, const std::vector<Subspace>& blocks);

struct SubQuotientRep {
  LinearRep sub;
  LinearRep quotient;
  std::vector<FpMatrix> inclusion;   // dims[b] x sub.dims[b]
  std::vector<FpMatrix> projection;  // quotient.dims[b] x dims[b]
  std::vector<FpMatrix> section;     // dims[b] x quotient.dims[b], projection * section = I
};

/// Throws NotInvariant when the subspaces are not closed under every generator.
SubQuotientRep sub_quotient(const LinearRep& x, const std::vector<Subspace>& blocks);

LinearRep direct_sum(const LinearRep& x, const LinearRep& y);

/// Rewrites x in new bases: block b gets basis columns basis[b] (invertible);
/// each map becomes inverse[tgt] * X * basis[src].
LinearRep change_basis(const LinearRep& x, const std::vector<FpMatrix>& basis,
                       const std::vector<FpMatrix>& inverse);

/// Per-block images f_b(U_b).
std::vector<Subspace> image_blocks(const BlockMap& f, const std::vector<Subspace>& blocks);
std::vector<Subspace> image_blocks(const BlockMap& f);
std::vector<Subspace> kernel_blocks(const BlockMap& f);

}  // namespace hkrep
