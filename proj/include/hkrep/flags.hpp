#pragma once

// Flags of locally free submodules: enumeration and point counts over F_p,
// tensor modules over H(k,l) = H(k) (x) A_l, tangent spaces, the reduction
// map on flags and its fibers, and counting polynomials.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hkrep/hmodule.hpp"
#include "hkrep/linalg.hpp"
#include "hkrep/reduction.hpp"

namespace hkrep {

/// U_1 <= ... <= U_{l-1} <= M given per vertex; brseq = (r_1, ..., r_l) with
/// r_j the rank of U_j / U_{j-1} (U_0 = 0, U_l = M).
struct FlagOfSubmodules {
  std::vector<RankVector> brseq;
  std::vector<std::vector<Subspace>> layers;

  friend bool operator==(const FlagOfSubmodules&, const FlagOfSubmodules&) = default;
};

struct EnumerationOptions {
  /// Refuse vertices with more candidate submodules than this unless overridden.
  std::uint64_t candidate_limit = 10'000'000;
  bool override_limit = false;
};

/// Free H_i-submodules of rank e in H_i^m, H_i = F_q[eps]/(eps^order):
/// [m choose e]_q * q^{(order-1) e (m-e)}.
std::uint64_t free_submodule_count(int order, int m, int e, std::uint32_t q);

/// The free rank-e submodules of H^m in standard coordinates (b*order + s),
/// addressed by a dense index.
class FreeSubmoduleEnumerator {
 public:
  FreeSubmoduleEnumerator(int order, int m, int e, std::uint32_t q);
  std::uint64_t count() const noexcept { return count_; }
  Subspace at(std::uint64_t index) const;

 private:
  int order_, m_, e_;
  std::uint32_t q_;
  SubspaceEnumerator tops_;
  std::uint64_t tails_ = 1;
  std::uint64_t count_ = 0;
};

/// Throws unless the flag is a valid point: layers nested and closed under
/// the action, layers and subquotients locally free of the declared ranks.
void validate_flag(const HModule& m, const FlagOfSubmodules& flag);
bool is_valid_flag(const HModule& m, const FlagOfSubmodules& flag);

/// All locally free submodules U of rank e with M/U locally free.
/// Errors: NotLocallyFree, RankTooLarge, BudgetExceeded.
std::vector<std::vector<Subspace>> enumerate_locally_free_submodules(const HModule& m, const RankVector& e,
                                                                    const EnumerationOptions& options = {});

/// Errors: LengthMismatch (fewer than two parts), RankTooLarge, NotLocallyFree, BudgetExceeded.
std::vector<FlagOfSubmodules> enumerate_flags(const HModule& m, const std::vector<RankVector>& brseq,
                                              const EnumerationOptions& options = {});
std::uint64_t point_count(const HModule& m, const std::vector<RankVector>& brseq,
                          const EnumerationOptions& options = {});

/// An H(k,l)-module: slots M_1..M_{l-1} with connecting homomorphisms
/// mu_s: M_s -> M_{s+1}.
struct TensorModule {
  int l = 2;
  std::vector<HModule> slots;
  std::vector<Hom> connectors;

  /// Blocks (slot s, vertex i) at index s*n + i; per slot the loops and arrows,
  /// then one connector map per vertex between consecutive slots.
  LinearRep to_rep() const;
  static TensorModule from_rep(const DatumPtr& datum, int k, int l, const LinearRep& rep);
};

/// (M, ..., M; id, ..., id) with l-1 slots.
TensorModule repetitive_module(const HModule& m, int l);
/// iota(U) and M^(l) / iota(U) for a flag.
TensorModule flag_submodule(const HModule& m, const FlagOfSubmodules& flag);
TensorModule flag_quotient(const HModule& m, const FlagOfSubmodules& flag);

/// Basis of Hom_{H(k,l)}(X, Y). Errors: ShapeMismatch, DatumMismatch.
std::vector<BlockMap> hom_tensor(const TensorModule& x, const TensorModule& y);

/// dim Hom_{H(k,l)}(iota(U), M^(l)/iota(U)).
std::size_t tangent_dimension(const HModule& m, const FlagOfSubmodules& flag);

/// U ↦ U / eps^{k-1} U, as a flag of reduce(M). Errors: KTooSmall.
FlagOfSubmodules reduce_flag(const HModule& m, const FlagOfSubmodules& flag);
FlagOfSubmodules reduce_flag(const ReducedModule& reduced, const FlagOfSubmodules& flag);

struct ReductionFiber {
  bool nonempty = false;
  std::size_t dimension = 0;
  /// Solutions as coordinates: particular + span(kernel).
  Vec particular;
  std::vector<Vec> kernel;
  /// dim Hom_{H(1,l)}(U/eps U, Q/eps Q) for the base flag, Q = Mbar^(l)/U.
  std::size_t expected_dimension = 0;
  /// The flag over M for a coefficient vector of length dimension.
  std::function<FlagOfSubmodules(const Vec&)> point;
};

/// The flags of M lying over a flag of reduce(M), as an affine space.
/// Errors: KTooSmall, FlagNotInReduction.
ReductionFiber fiber_of_reduction(const HModule& m, const FlagOfSubmodules& base);

struct BundleRow {
  std::uint32_t q = 0;
  std::uint64_t count = 0;
  std::uint64_t reduced_count = 0;
  long long d = 0;
  bool ok = false;
};

struct BundleReport {
  std::vector<RankVector> brseq;
  int k = 0;
  std::vector<BundleRow> rows;
  bool ok = true;
};

/// For each prime q: |Flf(M)(F_q)| = q^d |Flf(reduce M)(F_q)| with d = d(brseq);
/// when d < 0 both sides must vanish. M needs an integer lift and k >= 2.
BundleReport bundle_ratio_check(const HModule& m, const std::vector<RankVector>& brseq,
                                const std::vector<std::uint32_t>& primes, const EnumerationOptions& options = {});

struct PointCountTable {
  std::vector<RankVector> brseq;
  int k = 0;
  int degree_bound = 0;
  std::vector<CountPoint> counts;
  std::optional<IntPolynomial> polynomial;
  std::optional<BigInt> chi_estimate;
};

/// Counts at every prime (module reduced through its integer lift).
PointCountTable tabulate_counts(const HModule& m, const std::vector<RankVector>& brseq,
                                const std::vector<std::uint32_t>& primes, const EnumerationOptions& options = {});

/// Counts, interpolation with degree bound k*d(brseq) unless given, and
/// chi_estimate = P(1). Errors: NotEnoughPrimes, NonIntegerCoefficient (no
/// integer polynomial of that degree fits the counts).
PointCountTable counting_polynomial(const HModule& m, const std::vector<RankVector>& brseq,
                                    const std::vector<std::uint32_t>& primes, std::optional<int> degree_bound = {},
                                    const EnumerationOptions& options = {});

nlohmann::json to_json(const PointCountTable& table);
std::string to_csv(const PointCountTable& table);
nlohmann::json to_json(const FlagOfSubmodules& flag);
nlohmann::json to_json(const BundleReport& report);

}  // namespace hkrep
