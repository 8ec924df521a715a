#pragma once

// Krull-Schmidt decomposition through Fitting splittings, and the sampled
// canonical decomposition of rank vectors with its two-criterion check.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hkrep/homext.hpp"
#include "hkrep/hmodule.hpp"

namespace hkrep {

struct KsOptions {
  int trials = 64;
  /// Exhaustive idempotent scan when p^{dim End} is at most this.
  std::uint64_t exhaustive_budget = 1ULL << 12;
  std::uint64_t seed = 0xf177;
};

struct KsPart {
  HModule module;
  Hom inclusion;  // part -> M
  bool certain = false;
};

struct KsResult {
  std::vector<KsPart> parts;
  /// Every part was certified indecomposable by an exhaustive scan.
  bool certain = true;
  /// The inclusions assemble to an isomorphism from the direct sum onto M.
  bool verified = false;

  std::vector<RankVector> rank_vectors() const;  // sorted
};

/// Splits M along kernel and image of phi^{dim M} for endomorphisms phi whose
/// power is neither zero nor invertible, until no such phi is found.
KsResult krull_schmidt(const HModule& m, const KsOptions& options = {});

/// Indecomposability test alone.
struct IndecomposableCheck {
  bool indecomposable = false;
  bool certain = false;
};
IndecomposableCheck check_indecomposable(const HModule& m, const KsOptions& options = {});

struct SamplingOptions {
  std::uint64_t samples = 200;
  std::uint64_t seed = 1;
  double threshold = 0.5;
  /// Structure spaces with at most this many points are scanned completely.
  std::uint64_t exhaustive_limit = 1ULL << 22;
  KsOptions ks;
};

/// Minimum of ext1_dim over sampled pairs (M, N) of rank r and s.
struct ExtEstimate {
  long long value = 0;
  std::uint64_t pairs = 0;
  bool exhaustive = false;
};
ExtEstimate ext_generic(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r, const RankVector& s,
                        const SamplingOptions& options = {});

struct SchurEstimate {
  bool schur = false;
  /// Fraction of all samples certified indecomposable.
  double rate = 0;
  /// Same fraction among the samples of minimal dim End (the generic locus).
  double generic_rate = 0;
  std::uint64_t samples = 0;
  std::uint64_t generic_samples = 0;
  bool exhaustive = false;
};
SchurEstimate is_schur_root(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                            const SamplingOptions& options = {});

struct DecompositionReport {
  int k = 1;
  std::uint32_t p = 2;
  RankVector rank;
  std::vector<RankVector> parts;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::size_t min_end_dim = 0;
  std::uint64_t generic_samples = 0;
  std::uint64_t majority_count = 0;
  /// decomposition type -> number of generic samples of that type
  std::map<std::string, std::uint64_t> type_counts;
  std::vector<SchurEstimate> schur;           // one per part
  std::vector<std::vector<long long>> ext;    // ext[a][b], a != b
  bool criterion_schur = true;
  bool criterion_ext = true;
  bool criteria_hold() const { return criterion_schur && criterion_ext; }
};

/// Majority decomposition type among the samples of minimal dim End, checked
/// against (i) every part is a Schur root and (ii) ext vanishes between parts.
DecompositionReport canonical_decomposition(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                                            const SamplingOptions& options = {});

struct KIndependenceReport {
  std::vector<DecompositionReport> per_k;  // k = 1..k_max
  bool agree = true;
};
KIndependenceReport k_independence_check(const DatumPtr& datum, std::uint32_t p, const RankVector& r, int k_max,
                                         const SamplingOptions& options = {});

std::string decomposition_type(std::vector<RankVector> parts);
nlohmann::json to_json(const DecompositionReport& report);
nlohmann::json to_json(const KIndependenceReport& report);

}  // namespace hkrep
