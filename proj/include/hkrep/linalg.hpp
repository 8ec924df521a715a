#pragma once

// Exact linear algebra over prime fields F_p and the subspace combinatorics
// (echelon enumeration, Gaussian binomials, integer interpolation) built on it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hkrep {

using BigInt = boost::multiprecision::cpp_int;
using Vec = std::vector<std::uint32_t>;

bool is_prime(std::uint64_t n);

/// Throws NotPrime unless 2 <= p < 2^31 is prime.
void require_prime(std::uint64_t p);

inline std::uint32_t mod_reduce(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

inline std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

/// Dense matrix over F_p, row-major. Acts on column vectors.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);

  static FpMatrix identity(std::uint32_t p, std::size_t n);
  static FpMatrix from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static FpMatrix from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vec>& columns);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int64_t v) { data_[r * cols_ + c] = mod_reduce(v, p_); }

  const std::uint32_t* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
  std::uint32_t* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;

  bool is_zero() const;
  FpMatrix transpose() const;
  FpMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const FpMatrix& b);
  FpMatrix power(std::uint64_t e) const;
  Vec apply(const Vec& v) const;

  friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
  friend FpMatrix operator+(const FpMatrix& a, const FpMatrix& b);
  friend FpMatrix operator-(const FpMatrix& a, const FpMatrix& b);
  friend bool operator==(const FpMatrix& a, const FpMatrix& b) = default;

  std::string to_string() const;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

/// Block diagonal matrix diag(a, b).
FpMatrix block_diagonal(const FpMatrix& a, const FpMatrix& b);

struct RrefResult {
  FpMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Canonical reduced row echelon form.
RrefResult rref(FpMatrix m);
std::size_t rank(const FpMatrix& m);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<FpMatrix> inverse(const FpMatrix& m);

/// Subspace of F_p^ambient, stored by its canonical RREF basis (one row per
/// basis vector). Two subspaces are equal iff their stored bases are equal.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(std::uint32_t p, std::size_t ambient);
  static Subspace full(std::uint32_t p, std::size_t ambient);
  /// Span of the rows of `vectors` (a k x ambient matrix).
  static Subspace row_span(const FpMatrix& vectors);
  static Subspace span(std::uint32_t p, std::size_t ambient, const std::vector<Vec>& vectors);

  std::uint32_t p() const noexcept { return basis_.p(); }
  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return pivots_.size(); }
  const FpMatrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  Vec basis_vector(std::size_t t) const { return basis_.row(t); }

  /// v minus its projection along the basis onto pivot coordinates; zero iff v lies in the span.
  Vec residual(Vec v) const;
  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of a member vector in the stored basis (its pivot entries).
  Vec coordinates(const Vec& v) const;

  /// Indices of the non-pivot coordinates; their unit vectors span a complement.
  std::vector<std::size_t> complement_coordinates() const;
  /// Projection F_p^ambient -> F_p^ambient / U in complement coordinates; its kernel is exactly U.
  FpMatrix quotient_map() const;
  /// ambient x (ambient - dim) embedding of the complement coordinates; quotient_map * section = I.
  FpMatrix section() const;
  /// ambient x dim matrix whose columns are the basis vectors.
  FpMatrix basis_columns() const;

  /// X(U) for a linear map X: F_p^ambient -> F_p^m.
  Subspace image_under(const FpMatrix& x) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

  std::size_t hash() const;

 private:
  std::size_t ambient_ = 0;
  FpMatrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

/// Kernel of m as a subspace of F_p^cols.
Subspace kernel_basis(const FpMatrix& m);
/// Column space of m as a subspace of F_p^rows.
Subspace image(const FpMatrix& m);

struct AffineSolution {
  Vec particular;
  Subspace kernel;
};

/// Solutions of A x = b. Every returned particular solution is verified by substitution.
std::optional<AffineSolution> solve(const FpMatrix& a, const Vec& b);

/// Enumerates the d-dimensional subspaces of F_p^n through their RREF bases.
/// Subspaces are addressed by a dense index in [0, count()), which lets
/// callers split the stream into independent ranges.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(std::size_t ambient, std::size_t d, std::uint32_t p);

  std::uint64_t count() const noexcept { return total_; }
  Subspace at(std::uint64_t index) const;
  /// Visits indices [begin, end); stops early when fn returns false.
  void for_each(std::uint64_t begin, std::uint64_t end,
                const std::function<bool(const Subspace&)>& fn) const;
  void for_each(const std::function<bool(const Subspace&)>& fn) const { for_each(0, total_, fn); }

 private:
  struct Cell {
    std::vector<std::size_t> pivots;
    std::vector<std::pair<std::size_t, std::size_t>> free_positions;
    std::uint64_t size = 0;
    std::uint64_t offset = 0;
  };

  std::size_t ambient_;
  std::size_t dim_;
  std::uint32_t p_;
  std::vector<Cell> cells_;
  std::uint64_t total_ = 0;
};

std::vector<Subspace> enumerate_subspaces(std::size_t ambient, std::size_t d, std::uint32_t p);

/// Gaussian binomial [n choose d]_q; throws BudgetExceeded when it does not fit in 64 bits.
std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t d, std::uint64_t q);

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

/// Polynomial with arbitrary-precision integer coefficients, lowest degree first.
struct IntPolynomial {
  std::vector<BigInt> coefficients;

  int degree() const;
  BigInt operator()(const BigInt& x) const;
  std::string to_string(const std::string& var = "q") const;
};

struct CountPoint {
  std::int64_t q;
  BigInt count;
};

/// The unique polynomial of degree <= degree_bound through the first
/// degree_bound + 1 points, checked against all remaining points.
/// Errors: NonIntegerCoefficient, InconsistentPoints, DimensionMismatch.
IntPolynomial lagrange_interpolate(const std::vector<CountPoint>& points, int degree_bound);

}  // namespace hkrep
