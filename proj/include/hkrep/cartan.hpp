#pragma once

// Symmetrizable Cartan data (C, D, Omega), the quiver Q(C, Omega) with loops,
// and the bilinear forms evaluated on rank vectors.
//
// Vertices are 0-indexed here; file formats and printed output are 1-indexed.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hkrep {

/// Non-negative integer vector indexed by vertices (rank vectors, and the
/// dimension vectors derived from them).
class RankVector {
 public:
  RankVector() = default;
  explicit RankVector(std::size_t n) : v_(n, 0) {}
  explicit RankVector(std::vector<int> v) : v_(std::move(v)) {}
  RankVector(std::initializer_list<int> v) : v_(v) {}

  static RankVector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return v_.size(); }
  int operator[](std::size_t i) const { return v_[i]; }
  int& operator[](std::size_t i) { return v_[i]; }
  const std::vector<int>& values() const noexcept { return v_; }

  int total() const;
  bool is_zero() const;
  bool is_nonnegative() const;
  /// Componentwise <=.
  bool fits_in(const RankVector& other) const;

  friend RankVector operator+(const RankVector& a, const RankVector& b);
  friend RankVector operator-(const RankVector& a, const RankVector& b);
  friend bool operator==(const RankVector&, const RankVector&) = default;
  friend auto operator<=>(const RankVector&, const RankVector&) = default;

  /// "(1,0,2)"
  std::string to_string() const;

 private:
  std::vector<int> v_;
};

/// One ordinary arrow alpha_{ij}^{(g)}: j -> i, i.e. head i and tail j.
struct ArrowSpec {
  int head;
  int tail;
  int g;           // 0-based parallel index, 0 <= g < g_ij
  int pair_index;  // index into CartanDatum::omega()
};

class CartanDatum {
 public:
  int n() const noexcept { return static_cast<int>(c_.size()); }
  int c(int i, int j) const { return c_[i][j]; }
  /// Base symmetrizer entry c_i (the diagonal of D).
  int sym(int i) const { return d_[i]; }
  const std::vector<std::vector<int>>& matrix() const noexcept { return c_; }
  const std::vector<int>& symmetrizer() const noexcept { return d_; }

  /// g_ij = |gcd(c_ij, c_ji)|, defined when c_ij < 0.
  int g(int i, int j) const;
  /// f_ij = |c_ij| / g_ij, defined when c_ij < 0.
  int f(int i, int j) const;

  bool has_orientation() const noexcept { return oriented_; }
  const std::vector<std::pair<int, int>>& omega() const noexcept { return omega_; }
  /// Ordinary arrows, grouped by Omega pair in Omega order, g ascending.
  const std::vector<ArrowSpec>& arrows() const noexcept { return arrows_; }
  /// Index of (i,j) in omega(), or -1.
  int pair_index(int i, int j) const;

  /// Reduction of loop-length k*c_i at vertex i.
  int loop_order(int i, int k) const { return k * d_[i]; }

  friend bool operator==(const CartanDatum& a, const CartanDatum& b) {
    return a.c_ == b.c_ && a.d_ == b.d_ && a.omega_ == b.omega_;
  }

 private:
  friend CartanDatum validate_cartan(const std::vector<std::vector<int>>&, const std::vector<int>&);
  friend CartanDatum validate_orientation(const CartanDatum&, const std::vector<std::pair<int, int>>&);

  std::vector<std::vector<int>> c_;
  std::vector<int> d_;
  std::vector<std::pair<int, int>> omega_;
  std::vector<ArrowSpec> arrows_;
  bool oriented_ = false;
};

using DatumPtr = std::shared_ptr<const CartanDatum>;

/// Checks C and D. Errors: DiagonalNotTwo, PositiveOffDiagonal,
/// SymmetrizerMismatch, NonPositiveSymmetrizer, LengthMismatch.
CartanDatum validate_cartan(const std::vector<std::vector<int>>& c, const std::vector<int>& d);

/// Attaches an orientation (0-indexed pairs). Errors: MissingPair,
/// BothDirections, CycleInOrientation.
CartanDatum validate_orientation(const CartanDatum& datum, const std::vector<std::pair<int, int>>& omega);

/// An acyclic orientation: (i,j) with i < j for every negative entry.
std::vector<std::pair<int, int>> suggest_orientation(const CartanDatum& datum);

/// Convenience: validate_cartan followed by validate_orientation, shared.
DatumPtr make_datum(const std::vector<std::vector<int>>& c, const std::vector<int>& d,
                    const std::vector<std::pair<int, int>>& omega);

struct QuiverArrow {
  int head;
  int tail;
  int g;
};

struct Quiver {
  int n = 0;
  std::vector<QuiverArrow> arrows;
  std::vector<int> loop_orders;  // nilpotency order k*c_i of epsilon_i
};

Quiver build_quiver(const CartanDatum& datum, int k);

/// <a,b>_{H(k)} = sum_i k c_i a_i b_i + sum_{(i,j) in Omega} k c_i c_ij a_j b_i.
long long euler_form(const CartanDatum& datum, int k, const RankVector& a, const RankVector& b);
/// sum_i k c_i a_i b_i.
long long symmetrizer_form(const CartanDatum& datum, int k, const RankVector& a, const RankVector& b);
/// d(r_1..r_l) = sum_{a<b} <r_a, r_b>_{H(1)}.
long long flag_dimension(const CartanDatum& datum, const std::vector<RankVector>& brseq);

/// Dimension vector k*c_i*r_i.
std::vector<int> dimension_vector(const CartanDatum& datum, int k, const RankVector& r);

}  // namespace hkrep
