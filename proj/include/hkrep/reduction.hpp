#pragma once

// The reduction functor M -> M / eps^{k-1} M from H(k)- to H(k-1)-modules,
// lifts of structure-matrix presentations, and the induced maps on Hom.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkrep/homext.hpp"
#include "hkrep/hmodule.hpp"

namespace hkrep {

struct ReducedModule {
  HModule module;                    // over H(k-1)
  std::vector<FpMatrix> projection;  // M_i -> Mbar_i
  std::vector<FpMatrix> section;     // Mbar_i -> M_i, projection * section = I
};

/// Quotient by the image of eps^{k-1}. The quotient basis consists of the
/// coordinates outside that image, so a module in standard form reduces to
/// the module given by the same structure matrices truncated one step
/// earlier. Errors: KTooSmall.
ReducedModule reduce(const HModule& m);

/// Reinterprets presentation data over H(k-1) as data over H(k).
StructureMatrices lift_structure(const StructureMatrices& s);
HModule lift(const StructureMatrices& s, std::uint32_t p);

struct LiftedChain {
  std::vector<StructureMatrices> structures;  // over H(k)
  std::vector<HModule> modules;
  /// Y_j as a submodule of the top module Y_l.
  std::vector<std::vector<Subspace>> submodules;
};

/// Chain U_1 <= ... <= U_l of presentations in which each U_j is generated by
/// the first generators of U_{j+1}. Errors: NotNested.
LiftedChain lift_chain(const std::vector<StructureMatrices>& chain, std::uint32_t p);

/// The induced map Mbar -> Nbar. Errors: NotAHomomorphism.
Hom reduce_hom(const HModule& m, const HModule& n, const Hom& f);

struct HomReduction {
  std::size_t dim_hom = 0;          // over H(k)
  std::size_t dim_hom_reduced = 0;  // over H(k-1)
  std::size_t rank_induced = 0;
  bool surjective() const { return rank_induced == dim_hom_reduced; }
};

/// Rank of Hom_{H(k)}(M,N) -> Hom_{H(k-1)}(Mbar,Nbar).
HomReduction hom_reduction(const HModule& m, const HModule& n);

struct RigidTransferLevel {
  int k = 0;
  bool found = false;
  bool none_certain = false;
  bool exhaustive = false;
  std::optional<HModule> rigid;
  /// Filled for k >= 2 when a rigid module was found at k.
  std::optional<bool> reduction_rigid;
  std::optional<bool> reduction_matches;
};

struct RigidTransferReport {
  std::vector<RigidTransferLevel> levels;  // k = 1..k_max
  bool pattern_constant = true;
  bool ok = true;
  std::vector<std::string> problems;
};

RigidTransferReport rigid_transfer_check(const DatumPtr& datum, std::uint32_t p, const RankVector& r, int k_max,
                                         std::uint64_t trials, std::uint64_t seed,
                                         std::uint64_t exhaustive_budget = 1ULL << 22);

struct FiltrationReport {
  /// layer_dims[j][i] = dim (eps^j M / eps^{j+1} M)_i for j = 0..k-1.
  std::vector<std::vector<int>> layer_dims;
  /// Rank of multiplication by eps from layer j-1 to layer j, j = 1..k-1.
  std::vector<std::size_t> map_ranks;
  bool equal_layers = true;
  bool bijective = true;
  bool ok() const { return equal_layers && bijective; }
};

/// Errors: NotLocallyFree.
FiltrationReport epsilon_filtration_check(const HModule& m);

}  // namespace hkrep
