#include "hkrep/cartan.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hkrep/error.hpp"

namespace hkrep {

RankVector RankVector::unit(std::size_t n, std::size_t i) {
  RankVector r(n);
  r[i] = 1;
  return r;
}

int RankVector::total() const { return std::accumulate(v_.begin(), v_.end(), 0); }

bool RankVector::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](int x) { return x == 0; });
}

bool RankVector::is_nonnegative() const {
  return std::all_of(v_.begin(), v_.end(), [](int x) { return x >= 0; });
}

bool RankVector::fits_in(const RankVector& other) const {
  if (other.size() != size()) throw Error(Errc::LengthMismatch, "rank vector lengths differ");
  for (std::size_t i = 0; i < size(); ++i)
    if (v_[i] > other.v_[i]) return false;
  return true;
}

RankVector operator+(const RankVector& a, const RankVector& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "rank vector lengths differ");
  RankVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RankVector operator-(const RankVector& a, const RankVector& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "rank vector lengths differ");
  RankVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

std::string RankVector::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v_.size(); ++i) os << (i ? "," : "") << v_[i];
  os << ")";
  return os.str();
}

int CartanDatum::g(int i, int j) const {
  if (c_[i][j] >= 0) throw Error(Errc::MissingPair, "g_ij requested for c_ij >= 0");
  return std::gcd(c_[i][j], c_[j][i]);
}

int CartanDatum::f(int i, int j) const { return -c_[i][j] / g(i, j); }

int CartanDatum::pair_index(int i, int j) const {
  for (std::size_t t = 0; t < omega_.size(); ++t)
    if (omega_[t] == std::make_pair(i, j)) return static_cast<int>(t);
  return -1;
}

CartanDatum validate_cartan(const std::vector<std::vector<int>>& c, const std::vector<int>& d) {
  const std::size_t n = c.size();
  if (d.size() != n) throw Error(Errc::LengthMismatch, "symmetrizer length differs from matrix size");
  for (const auto& row : c)
    if (row.size() != n) throw Error(Errc::LengthMismatch, "Cartan matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] <= 0) throw Error(Errc::NonPositiveSymmetrizer, "c_" + std::to_string(i + 1) + " <= 0");
    if (c[i][i] != 2) throw Error(Errc::DiagonalNotTwo, "c_" + std::to_string(i + 1) + std::to_string(i + 1) + " != 2");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (c[i][j] > 0) {
        throw Error(Errc::PositiveOffDiagonal,
                    "c_" + std::to_string(i + 1) + "," + std::to_string(j + 1) + " > 0");
      }
      if (static_cast<long long>(d[i]) * c[i][j] != static_cast<long long>(d[j]) * c[j][i]) {
        throw Error(Errc::SymmetrizerMismatch,
                    "c_i c_ij != c_j c_ji at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
  }
  CartanDatum out;
  out.c_ = c;
  out.d_ = d;
  return out;
}

CartanDatum validate_orientation(const CartanDatum& datum, const std::vector<std::pair<int, int>>& omega) {
  const int n = datum.n();
  std::vector<std::vector<int>> dir(n, std::vector<int>(n, 0));
  for (auto [i, j] : omega) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw Error(Errc::MissingPair, "orientation pair out of range");
    }
    if (datum.c(i, j) >= 0) {
      throw Error(Errc::MissingPair, "orientation pair (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") has c_ij >= 0");
    }
    if (dir[i][j]) throw Error(Errc::InvalidInput, "duplicate orientation pair");
    dir[i][j] = 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dir[i][j] && dir[j][i]) {
        throw Error(Errc::BothDirections,
                    "both (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") and reverse in Omega");
      }
      if (datum.c(i, j) < 0 && !dir[i][j] && !dir[j][i]) {
        throw Error(Errc::MissingPair,
                    "no orientation for (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
  }
  // Directed cycle search over pairs (i,j) -> (j, .), loops excluded.
  std::vector<int> state(n, 0);
  auto dfs = [&](auto&& self, int v) -> bool {
    state[v] = 1;
    for (int w = 0; w < n; ++w) {
      if (!dir[v][w]) continue;
      if (state[w] == 1) return true;
      if (state[w] == 0 && self(self, w)) return true;
    }
    state[v] = 2;
    return false;
  };
  for (int v = 0; v < n; ++v) {
    if (state[v] == 0 && dfs(dfs, v)) throw Error(Errc::CycleInOrientation, "orientation contains a cycle");
  }

  CartanDatum out = datum;
  out.omega_ = omega;
  out.arrows_.clear();
  for (std::size_t t = 0; t < omega.size(); ++t) {
    auto [i, j] = omega[t];
    for (int g = 0; g < datum.g(i, j); ++g) out.arrows_.push_back({i, j, g, static_cast<int>(t)});
  }
  out.oriented_ = true;
  return out;
}

std::vector<std::pair<int, int>> suggest_orientation(const CartanDatum& datum) {
  std::vector<std::pair<int, int>> omega;
  for (int i = 0; i < datum.n(); ++i)
    for (int j = i + 1; j < datum.n(); ++j)
      if (datum.c(i, j) < 0) omega.emplace_back(i, j);
  return omega;
}

DatumPtr make_datum(const std::vector<std::vector<int>>& c, const std::vector<int>& d,
                    const std::vector<std::pair<int, int>>& omega) {
  return std::make_shared<const CartanDatum>(validate_orientation(validate_cartan(c, d), omega));
}

Quiver build_quiver(const CartanDatum& datum, int k) {
  if (k < 1) throw Error(Errc::KTooSmall, "k must be positive");
  Quiver q;
  q.n = datum.n();
  for (const auto& a : datum.arrows()) q.arrows.push_back({a.head, a.tail, a.g});
  for (int i = 0; i < datum.n(); ++i) q.loop_orders.push_back(datum.loop_order(i, k));
  return q;
}

namespace {

void require_length(const CartanDatum& datum, const RankVector& a) {
  if (static_cast<int>(a.size()) != datum.n()) {
    throw Error(Errc::LengthMismatch, "vector length " + std::to_string(a.size()) + " != n");
  }
}

}  // namespace

long long symmetrizer_form(const CartanDatum& datum, int k, const RankVector& a, const RankVector& b) {
  require_length(datum, a);
  require_length(datum, b);
  long long s = 0;
  for (int i = 0; i < datum.n(); ++i) s += static_cast<long long>(k) * datum.sym(i) * a[i] * b[i];
  return s;
}

long long euler_form(const CartanDatum& datum, int k, const RankVector& a, const RankVector& b) {
  long long s = symmetrizer_form(datum, k, a, b);
  for (auto [i, j] : datum.omega()) {
    s += static_cast<long long>(k) * datum.sym(i) * datum.c(i, j) * a[j] * b[i];
  }
  return s;
}

long long flag_dimension(const CartanDatum& datum, const std::vector<RankVector>& brseq) {
  if (brseq.size() < 2) throw Error(Errc::LengthMismatch, "flag type needs at least two parts");
  long long d = 0;
  for (std::size_t a = 0; a < brseq.size(); ++a)
    for (std::size_t b = a + 1; b < brseq.size(); ++b) d += euler_form(datum, 1, brseq[a], brseq[b]);
  return d;
}

std::vector<int> dimension_vector(const CartanDatum& datum, int k, const RankVector& r) {
  require_length(datum, r);
  std::vector<int> d(datum.n());
  for (int i = 0; i < datum.n(); ++i) d[i] = k * datum.sym(i) * r[i];
  return d;
}

}  // namespace hkrep
