#pragma once

// Hom spaces by exact linear solve, Ext^1 through the Euler identity for
// locally free modules, rigidity, isomorphism testing and rigid-module search.

#include <cstdint>
#include <optional>
#include <vector>

#include "hkrep/hmodule.hpp"

namespace hkrep {

struct HomSpace {
  std::vector<Hom> basis;
  std::size_t dim() const { return basis.size(); }
};

/// Basis of Hom_{H(k)}(M, N); every element is checked by substitution.
/// Errors: DatumMismatch.
HomSpace hom_space(const HModule& m, const HModule& n);
std::size_t hom_dim(const HModule& m, const HModule& n);

/// Same result through the dense intertwiner system on all basis vectors;
/// the reference the fast path is tested against.
HomSpace hom_space_generic(const HModule& m, const HModule& n);

/// dim Hom(M,N) - <rk M, rk N>_{H(k)}. Errors: NotLocallyFree.
long long ext1_dim(const HModule& m, const HModule& n);
bool is_rigid(const HModule& m);

struct IsoOptions {
  int trials = 32;
  std::uint64_t exhaustive_budget = 1ULL << 20;
  std::uint64_t seed = 0x5eed;
};

struct IsoResult {
  bool isomorphic = false;
  /// False only for a negative answer that rests on random trials.
  bool certain = true;
  std::optional<Hom> witness;
};

IsoResult are_isomorphic(const HModule& m, const HModule& n, const IsoOptions& options = {});

/// Number of points of the structure-matrix space, or nullopt beyond 2^63.
std::optional<std::uint64_t> structure_space_size(const CartanDatum& datum, int k, std::uint32_t p,
                                                  const RankVector& r);

struct RigidSearch {
  std::optional<HModule> module;
  std::uint64_t trials_used = 0;
  std::uint64_t hits = 0;
  bool exhaustive = false;
  /// Set only after a complete scan of the structure-matrix space found nothing.
  bool none_exists_certain = false;
};

/// Random structure matrices first; when nothing is found and the space has at
/// most exhaustive_budget points it is scanned completely.
RigidSearch find_rigid(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t trials,
                       std::uint64_t seed, std::uint64_t exhaustive_budget = 1ULL << 22);

struct RigidLiftSearch {
  std::optional<StructureMatrices> structure;
  std::uint64_t tried = 0;
  bool exhaustive = false;
};

/// Structure matrices with 0/1 coefficients whose module is rigid over every
/// given prime, so one integer module serves all of them. All 0/1 points are
/// scanned when there are at most exhaustive_budget of them, otherwise
/// `trials` random ones.
RigidLiftSearch find_rigid_lift(const DatumPtr& datum, int k, const RankVector& r,
                                const std::vector<std::uint32_t>& primes, std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t exhaustive_budget = 1ULL << 16);

struct ParameterEstimate {
  long long mu_hat = 0;
  std::size_t min_end_dim = 0;
  long long q_value = 0;
  std::uint64_t samples = 0;
  bool exhaustive = false;
  bool experimental = true;
};

/// mu_hat = min dim End over the samples - q_{H(k)}(r). An upper bound for
/// the number of parameters; exhaustive when the space has at most
/// exhaustive_budget points.
ParameterEstimate parameter_estimate(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                                     std::uint64_t samples, std::uint64_t seed,
                                     std::uint64_t exhaustive_budget = 1ULL << 16);

}  // namespace hkrep
