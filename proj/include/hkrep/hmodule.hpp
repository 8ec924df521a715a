#pragma once

// Representations of H(k) = H(C, kD, Omega) over F_p as tuples of matrices:
// a nilpotent loop matrix per vertex and one matrix per ordinary arrow.
//
// Coordinates of a locally free module in standard form: at vertex i with
// N = k*c_i and rank r_i, basis vector b*N + s is eps_i^s x_b for the free
// H_i-generators x_0..x_{r_i-1}; the loop matrix is the sum of r_i nilpotent
// Jordan blocks of size N (eps_i e_{b*N+s} = e_{b*N+s+1}).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkrep/cartan.hpp"
#include "hkrep/error.hpp"
#include "hkrep/linalg.hpp"
#include "hkrep/rep.hpp"

namespace hkrep {

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  FpMatrix mod(std::uint32_t p) const;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Integer matrices whose reductions mod p give the module; used to move a
/// module between primes.
struct IntegerLift {
  std::vector<IntMatrix> loops;
  std::vector<IntMatrix> arrows;
};

class HModule {
 public:
  HModule(DatumPtr datum, int k, std::uint32_t p, std::vector<int> dims, std::vector<FpMatrix> loops,
          std::vector<FpMatrix> arrows, std::optional<IntegerLift> lift = std::nullopt);

  const CartanDatum& datum() const noexcept { return *datum_; }
  const DatumPtr& datum_ptr() const noexcept { return datum_; }
  int k() const noexcept { return k_; }
  std::uint32_t p() const noexcept { return p_; }
  int n() const noexcept { return datum_->n(); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int dim(int i) const { return dims_[i]; }
  int total_dim() const;
  const std::vector<FpMatrix>& loops() const noexcept { return loops_; }
  const FpMatrix& loop(int i) const { return loops_[i]; }
  /// Arrow matrices in datum().arrows() order; arrow (i,j,g) is dims[i] x dims[j].
  const std::vector<FpMatrix>& arrows() const noexcept { return arrows_; }
  const std::optional<IntegerLift>& lift() const noexcept { return lift_; }

  /// Per-vertex action of the central element eps = sum_i eps_i^{c_i}.
  std::vector<FpMatrix> central_action() const;
  /// Loops are the standard Jordan blocks (requires D-divisible dims).
  bool is_standard_form() const;

  /// Blocks = vertices; maps = loops (vertex order) then arrows (datum order).
  LinearRep to_rep() const;
  static HModule from_rep(DatumPtr datum, int k, const LinearRep& rep);

 private:
  DatumPtr datum_;
  int k_;
  std::uint32_t p_;
  std::vector<int> dims_;
  std::vector<FpMatrix> loops_;
  std::vector<FpMatrix> arrows_;
  std::optional<IntegerLift> lift_;
};

/// H(k)-linear maps M -> N, one matrix per vertex.
using Hom = BlockMap;

/// Throws DatumMismatch unless both modules live over the same datum, k and p.
void require_compatible(const HModule& m, const HModule& n);

struct Violation {
  Errc code;
  int vertex = -1;
  int arrow = -1;  // index into datum().arrows()
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks (H1) eps_i^{k c_i} = 0 and (H2) eps_i^{f_ji} A = A eps_j^{f_ij}.
ValidationReport validate(const HModule& m);
/// Throws the first violation.
void require_valid(const HModule& m);

struct VertexFreeness {
  int dim = 0;
  int loop_order = 0;
  std::size_t loop_rank = 0;
  bool free = false;
};

struct LocalFreeness {
  bool locally_free = false;
  std::vector<VertexFreeness> vertices;
};

LocalFreeness local_freeness(const HModule& m);
bool is_locally_free(const HModule& m);
/// Errors: NotLocallyFree.
RankVector rank_vector(const HModule& m);

HModule zero_module(DatumPtr datum, int k, std::uint32_t p);
/// E^r = sum_i E_i^{r_i}, in standard form.
HModule free_module(DatumPtr datum, int k, std::uint32_t p, const RankVector& r);
/// One-dimensional simple S_i (zero loop). Not locally free when k c_i > 1.
HModule simple_module(DatumPtr datum, int k, std::uint32_t p, int i);

/// r x c matrix of truncated polynomials, `length` coefficients per entry.
struct PolyMatrix {
  int rows = 0;
  int cols = 0;
  int length = 0;
  std::vector<std::int64_t> coeffs;

  PolyMatrix() = default;
  PolyMatrix(int r, int c, int len) : rows(r), cols(c), length(len), coeffs(static_cast<std::size_t>(r) * c * len, 0) {}
  std::int64_t operator()(int r, int c, int deg) const { return coeffs[(static_cast<std::size_t>(r) * cols + c) * length + deg]; }
  std::int64_t& operator()(int r, int c, int deg) { return coeffs[(static_cast<std::size_t>(r) * cols + c) * length + deg]; }
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;
};

/// Modulated-graph presentation: for each (i,j) in Omega an r_i x (|c_ij| r_j)
/// matrix over H_i = F[eps_i]/(eps_i^{k c_i}). Column b*|c_ij| + g*f_ij + t is
/// the image of alpha^{(g)} eps_j^t (x) x_b for the generator x_b of E_j^{r_j}.
struct StructureMatrices {
  DatumPtr datum;
  int k = 1;
  RankVector rank;
  std::vector<PolyMatrix> blocks;  // indexed like datum->omega()

  friend bool operator==(const StructureMatrices& a, const StructureMatrices& b) {
    return *a.datum == *b.datum && a.k == b.k && a.rank == b.rank && a.blocks == b.blocks;
  }
};

StructureMatrices zero_structure(DatumPtr datum, int k, const RankVector& r);

/// Number of free F_p-parameters: sum over Omega of k c_i |c_ij| r_i r_j.
std::uint64_t structure_parameter_count(const CartanDatum& datum, int k, const RankVector& r);

/// Expands a presentation into loop and arrow matrices using
/// alpha eps_j^{u f_ij + t} = eps_i^{u f_ji} alpha eps_j^t. The integer entries
/// become the module's integer lift. Errors: EntryDegreeOverflow, ShapeMismatch.
HModule from_structure_matrices(const StructureMatrices& s, std::uint32_t p);

/// Inverse of from_structure_matrices for locally free modules; normalizes
/// first when the loops are not in standard form. Errors: NotLocallyFree.
StructureMatrices to_structure_matrices(const HModule& m);

/// Uniform sample of all structure-matrix coefficients.
StructureMatrices random_structure(DatumPtr datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t seed);
HModule random_locally_free(DatumPtr datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t seed);

/// The index-th point of the structure-matrix space (mixed radix p), for exhaustive scans.
StructureMatrices structure_from_index(DatumPtr datum, int k, std::uint32_t p, const RankVector& r,
                                       std::uint64_t index);

struct NormalizedModule {
  HModule module;
  std::vector<FpMatrix> basis;    // columns: new basis in old coordinates
  std::vector<FpMatrix> inverse;  // old -> new coordinates
};

/// Conjugates a locally free module into standard form. Errors: NotLocallyFree.
NormalizedModule normalize(const HModule& m);

HModule direct_sum(const HModule& a, const HModule& b);

struct HSubQuotient {
  HModule sub;
  HModule quotient;
  std::vector<FpMatrix> inclusion;   // M_i <- U_i
  std::vector<FpMatrix> projection;  // M_i -> (M/U)_i
};

/// Submodule and quotient for per-vertex subspaces closed under every map.
/// Locally free results are normalized (inclusion/projection adjusted).
/// Errors: NotInvariant.
HSubQuotient sub_quotient(const HModule& m, const std::vector<Subspace>& u);

/// Reduces the integer lift modulo another prime and revalidates.
/// Errors: InvalidInput (no lift), RelationBrokenAtPrime.
HModule reduce_mod_p(const HModule& m, std::uint32_t prime);

/// Integer lift from the F_p representatives in [0, p) of every entry.
HModule with_canonical_lift(const HModule& m);

}  // namespace hkrep
