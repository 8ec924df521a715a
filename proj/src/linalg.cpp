#include "hkrep/linalg.hpp"

#include <algorithm>
#include <sstream>

#include <boost/rational.hpp>

#include "hkrep/error.hpp"

namespace hkrep {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void require_prime(std::uint64_t p) {
  if (p >= (1ULL << 31) || !is_prime(p)) {
    throw Error(Errc::NotPrime, "modulus " + std::to_string(p) + " is not a supported prime");
  }
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // Fermat: a^(p-2)
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  thread_local std::uint32_t last_checked = 0;
  if (p != last_checked) {
    require_prime(p);
    last_checked = p;
  }
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t nc = rows.empty() ? 0 : rows.front().size();
  FpMatrix m(p, rows.size(), nc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != nc) throw Error(Errc::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < nc; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

FpMatrix FpMatrix::from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vec>& columns) {
  FpMatrix m(p, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(Errc::DimensionMismatch, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Vec FpMatrix::row(std::size_t r) const { return Vec(row_ptr(r), row_ptr(r) + cols_); }

Vec FpMatrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool FpMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint32_t x) { return x == 0; });
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

FpMatrix FpMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(Errc::DimensionMismatch, "block out of range");
  FpMatrix b(p_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void FpMatrix::set_block(std::size_t r0, std::size_t c0, const FpMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error(Errc::DimensionMismatch, "block out of range");
  for (std::size_t r = 0; r < b.rows_; ++r)
    for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

FpMatrix FpMatrix::power(std::uint64_t e) const {
  if (rows_ != cols_) throw Error(Errc::DimensionMismatch, "power of non-square matrix");
  FpMatrix result = identity(p_, rows_);
  FpMatrix base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Vec FpMatrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw Error(Errc::DimensionMismatch, "vector length mismatch");
  Vec out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    const std::uint32_t* row = row_ptr(r);
    for (std::size_t c = 0; c < cols_; ++c) {
      acc += static_cast<std::uint64_t>(row[c]) * v[c];
      if ((c & 15) == 15) acc %= p_;
    }
    out[r] = static_cast<std::uint32_t>(acc % p_);
  }
  return out;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
  const std::uint32_t p = a.p_;
  FpMatrix c(p, a.rows_, b.cols_);
  std::vector<std::uint64_t> acc(b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const std::uint32_t* arow = a.row_ptr(i);
    for (std::size_t t = 0; t < a.cols_; ++t) {
      std::uint64_t x = arow[t];
      if (x == 0) continue;
      const std::uint32_t* brow = b.row_ptr(t);
      for (std::size_t j = 0; j < b.cols_; ++j) {
        acc[j] += x * brow[j];
        if (acc[j] >= (1ULL << 62)) acc[j] %= p;
      }
    }
    std::uint32_t* crow = c.row_ptr(i);
    for (std::size_t j = 0; j < b.cols_; ++j) crow[j] = static_cast<std::uint32_t>(acc[j] % p);
  }
  return c;
}

FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(Errc::DimensionMismatch, "sum shape mismatch");
  FpMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = add_mod(a.data_[i], b.data_[i], a.p_);
  return c;
}

FpMatrix operator-(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(Errc::DimensionMismatch, "difference shape mismatch");
  FpMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = sub_mod(a.data_[i], b.data_[i], a.p_);
  return c;
}

std::string FpMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

FpMatrix block_diagonal(const FpMatrix& a, const FpMatrix& b) {
  FpMatrix m(a.p(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

RrefResult rref(FpMatrix m) {
  const std::uint32_t p = m.p();
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  RrefResult out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t piv = row;
    while (piv < nr && m(piv, col) == 0) ++piv;
    if (piv == nr) continue;
    if (piv != row) {
      std::swap_ranges(m.row_ptr(piv), m.row_ptr(piv) + nc, m.row_ptr(row));
    }
    std::uint32_t* prow = m.row_ptr(row);
    std::uint32_t inv = inv_mod(prow[col], p);
    if (inv != 1) {
      for (std::size_t c = col; c < nc; ++c) prow[c] = mul_mod(prow[c], inv, p);
    }
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == row) continue;
      std::uint32_t* rr = m.row_ptr(r);
      std::uint32_t f = rr[col];
      if (f == 0) continue;
      std::uint32_t nf = p - f;
      for (std::size_t c = col; c < nc; ++c) {
        if (prow[c] != 0) rr[c] = static_cast<std::uint32_t>((rr[c] + static_cast<std::uint64_t>(nf) * prow[c]) % p);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

std::optional<FpMatrix> inverse(const FpMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  FpMatrix aug(m.p(), n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, FpMatrix::identity(m.p(), n));
  RrefResult r = rref(std::move(aug));
  if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) return std::nullopt;
  return r.reduced.block(0, n, n, n);
}

// Subspace ------------------------------------------------------------------

Subspace Subspace::zero(std::uint32_t p, std::size_t ambient) {
  Subspace s;
  s.ambient_ = ambient;
  s.basis_ = FpMatrix(p, 0, ambient);
  return s;
}

Subspace Subspace::full(std::uint32_t p, std::size_t ambient) {
  return row_span(FpMatrix::identity(p, ambient));
}

Subspace Subspace::row_span(const FpMatrix& vectors) {
  RrefResult r = rref(vectors);
  Subspace s;
  s.ambient_ = vectors.cols();
  s.basis_ = r.reduced.block(0, 0, r.rank, vectors.cols());
  s.pivots_ = std::move(r.pivots);
  return s;
}

Subspace Subspace::span(std::uint32_t p, std::size_t ambient, const std::vector<Vec>& vectors) {
  FpMatrix m(p, vectors.size(), ambient);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw Error(Errc::DimensionMismatch, "vector length mismatch");
    std::copy(vectors[i].begin(), vectors[i].end(), m.row_ptr(i));
  }
  return row_span(m);
}

Vec Subspace::residual(Vec v) const {
  if (v.size() != ambient_) throw Error(Errc::DimensionMismatch, "vector length mismatch");
  const std::uint32_t pp = p();
  for (std::size_t t = 0; t < pivots_.size(); ++t) {
    std::uint32_t f = v[pivots_[t]];
    if (f == 0) continue;
    std::uint32_t nf = pp - f;
    const std::uint32_t* row = basis_.row_ptr(t);
    for (std::size_t c = pivots_[t]; c < ambient_; ++c) {
      if (row[c] != 0) v[c] = static_cast<std::uint32_t>((v[c] + static_cast<std::uint64_t>(nf) * row[c]) % pp);
    }
  }
  return v;
}

bool Subspace::contains(const Vec& v) const {
  Vec r = residual(v);
  return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw Error(Errc::DimensionMismatch, "ambient mismatch");
  if (other.dim() > dim()) return false;
  for (std::size_t t = 0; t < other.dim(); ++t) {
    if (!contains(other.basis_vector(t))) return false;
  }
  return true;
}

Vec Subspace::coordinates(const Vec& v) const {
  Vec c(pivots_.size());
  for (std::size_t t = 0; t < pivots_.size(); ++t) c[t] = v[pivots_[t]];
  return c;
}

std::vector<std::size_t> Subspace::complement_coordinates() const {
  std::vector<std::size_t> out;
  std::size_t t = 0;
  for (std::size_t c = 0; c < ambient_; ++c) {
    if (t < pivots_.size() && pivots_[t] == c) {
      ++t;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

FpMatrix Subspace::quotient_map() const {
  const auto comp = complement_coordinates();
  std::vector<std::size_t> slot(ambient_, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < comp.size(); ++c) slot[comp[c]] = c;
  const std::uint32_t pp = p();
  FpMatrix q(pp, comp.size(), ambient_);
  for (std::size_t c = 0; c < comp.size(); ++c) q(c, comp[c]) = 1;
  for (std::size_t t = 0; t < pivots_.size(); ++t) {
    const std::uint32_t* row = basis_.row_ptr(t);
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (slot[c] != static_cast<std::size_t>(-1) && row[c] != 0) q(slot[c], pivots_[t]) = pp - row[c];
    }
  }
  return q;
}

FpMatrix Subspace::section() const {
  const auto comp = complement_coordinates();
  FpMatrix s(p(), ambient_, comp.size());
  for (std::size_t c = 0; c < comp.size(); ++c) s(comp[c], c) = 1;
  return s;
}

FpMatrix Subspace::basis_columns() const { return basis_.transpose(); }

Subspace Subspace::image_under(const FpMatrix& x) const {
  if (x.cols() != ambient_) throw Error(Errc::DimensionMismatch, "map does not act on this ambient space");
  if (dim() == 0) return zero(p(), x.rows());
  return row_span((x * basis_columns()).transpose());
}

std::size_t Subspace::hash() const {
  std::size_t h = std::hash<std::size_t>{}(ambient_) ^ (dim() * 0x9e3779b97f4a7c15ULL);
  for (std::size_t t = 0; t < dim(); ++t) {
    const std::uint32_t* row = basis_.row_ptr(t);
    for (std::size_t c = 0; c < ambient_; ++c) h = h * 1000003ULL ^ row[c];
  }
  return h;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error(Errc::DimensionMismatch, "ambient mismatch");
  FpMatrix m(a.p(), a.dim() + b.dim(), a.ambient());
  m.set_block(0, 0, a.basis());
  m.set_block(a.dim(), 0, b.basis());
  return Subspace::row_span(m);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error(Errc::DimensionMismatch, "ambient mismatch");
  // U ∩ V = ann(ann U + ann V) for the standard dot product.
  const std::uint32_t p = a.p();
  const std::size_t n = a.ambient();
  auto annihilator = [&](const Subspace& s) {
    return s.dim() == 0 ? Subspace::full(p, n) : kernel_basis(s.basis());
  };
  Subspace ann = subspace_sum(annihilator(a), annihilator(b));
  return annihilator(ann);
}

Subspace kernel_basis(const FpMatrix& m) {
  const std::uint32_t p = m.p();
  const std::size_t nc = m.cols();
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(nc, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<Vec> vectors;
  for (std::size_t f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    Vec x(nc, 0);
    x[f] = 1;
    for (std::size_t t = 0; t < r.rank; ++t) {
      std::uint32_t e = r.reduced(t, f);
      if (e != 0) x[r.pivots[t]] = p - e;
    }
    vectors.push_back(std::move(x));
  }
  return Subspace::span(p, nc, vectors);
}

Subspace image(const FpMatrix& m) { return Subspace::row_span(m.transpose()); }

std::optional<AffineSolution> solve(const FpMatrix& a, const Vec& b) {
  if (b.size() != a.rows()) throw Error(Errc::DimensionMismatch, "right-hand side length mismatch");
  const std::size_t nc = a.cols();
  FpMatrix aug(a.p(), a.rows(), nc + 1);
  aug.set_block(0, 0, a);
  for (std::size_t r = 0; r < a.rows(); ++r) aug(r, nc) = b[r];
  RrefResult r = rref(std::move(aug));
  if (!r.pivots.empty() && r.pivots.back() == nc) return std::nullopt;
  Vec x(nc, 0);
  for (std::size_t t = 0; t < r.rank; ++t) x[r.pivots[t]] = r.reduced(t, nc);
  if (a.apply(x) != b) throw Error(Errc::DimensionMismatch, "internal: solve substitution check failed");
  return AffineSolution{std::move(x), kernel_basis(a)};
}

// Enumeration ---------------------------------------------------------------

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt v = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
  if (v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw Error(Errc::BudgetExceeded, "power exceeds 64 bits");
  }
  return v.convert_to<std::uint64_t>();
}

SubspaceEnumerator::SubspaceEnumerator(std::size_t ambient, std::size_t d, std::uint32_t p)
    : ambient_(ambient), dim_(d), p_(p) {
  if (d > ambient) throw Error(Errc::DimensionMismatch, "subspace dimension exceeds ambient");
  std::vector<std::size_t> piv(d);
  for (std::size_t t = 0; t < d; ++t) piv[t] = t;
  while (true) {
    Cell cell;
    cell.pivots = piv;
    std::vector<bool> is_pivot(ambient, false);
    for (auto c : piv) is_pivot[c] = true;
    for (std::size_t t = 0; t < d; ++t)
      for (std::size_t c = piv[t] + 1; c < ambient; ++c)
        if (!is_pivot[c]) cell.free_positions.emplace_back(t, c);
    cell.size = checked_pow(p, cell.free_positions.size());
    cell.offset = total_;
    total_ += cell.size;
    cells_.push_back(std::move(cell));
    // next combination
    std::size_t t = d;
    while (t > 0 && piv[t - 1] == ambient - d + t - 1) --t;
    if (t == 0) break;
    ++piv[t - 1];
    for (std::size_t u = t; u < d; ++u) piv[u] = piv[u - 1] + 1;
  }
}

Subspace SubspaceEnumerator::at(std::uint64_t index) const {
  if (index >= total_) throw Error(Errc::DimensionMismatch, "subspace index out of range");
  auto it = std::upper_bound(cells_.begin(), cells_.end(), index,
                             [](std::uint64_t v, const Cell& c) { return v < c.offset; });
  const Cell& cell = *(it - 1);
  std::uint64_t local = index - cell.offset;
  FpMatrix b(p_, dim_, ambient_);
  for (std::size_t t = 0; t < dim_; ++t) b(t, cell.pivots[t]) = 1;
  for (const auto& [t, c] : cell.free_positions) {
    b(t, c) = static_cast<std::uint32_t>(local % p_);
    local /= p_;
  }
  // Already in RREF; row_span keeps it canonical.
  return Subspace::row_span(b);
}

void SubspaceEnumerator::for_each(std::uint64_t begin, std::uint64_t end,
                                  const std::function<bool(const Subspace&)>& fn) const {
  end = std::min(end, total_);
  for (std::uint64_t i = begin; i < end; ++i) {
    if (!fn(at(i))) return;
  }
}

std::vector<Subspace> enumerate_subspaces(std::size_t ambient, std::size_t d, std::uint32_t p) {
  SubspaceEnumerator en(ambient, d, p);
  std::vector<Subspace> out;
  out.reserve(en.count());
  en.for_each([&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t d, std::uint64_t q) {
  if (d > n) return 0;
  BigInt num = 1;
  BigInt den = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    num *= boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n - i)) - 1;
    den *= boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(i + 1)) - 1;
  }
  BigInt v = num / den;
  if (v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw Error(Errc::BudgetExceeded, "Gaussian binomial exceeds 64 bits");
  }
  return v.convert_to<std::uint64_t>();
}

// Interpolation -------------------------------------------------------------

int IntPolynomial::degree() const {
  for (int d = static_cast<int>(coefficients.size()) - 1; d >= 0; --d) {
    if (coefficients[d] != 0) return d;
  }
  return -1;
}

BigInt IntPolynomial::operator()(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string IntPolynomial::to_string(const std::string& var) const {
  if (degree() < 0) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    const BigInt& c = coefficients[d];
    if (c == 0) continue;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || d == 0) os << mag;
    if (d >= 1) os << var;
    if (d >= 2) os << "^" << d;
    first = false;
  }
  return os.str();
}

IntPolynomial lagrange_interpolate(const std::vector<CountPoint>& points, int degree_bound) {
  using Rational = boost::rational<BigInt>;
  if (degree_bound < 0) degree_bound = 0;
  const std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
  if (points.size() < need) {
    throw Error(Errc::DimensionMismatch, "need at least degree_bound + 1 points");
  }
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a].q == points[b].q) throw Error(Errc::InvalidInput, "interpolation nodes must be distinct");

  // Newton divided differences on the first `need` points.
  std::vector<Rational> coef(need);
  for (std::size_t i = 0; i < need; ++i) coef[i] = Rational(points[i].count);
  for (std::size_t level = 1; level < need; ++level) {
    for (std::size_t i = need - 1; i >= level; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / Rational(BigInt(points[i].q - points[i - level].q));
      if (i == level) break;
    }
  }
  // Expand Newton form into monomials: P = c0 + (x-x0)(c1 + (x-x1)(c2 + ...)).
  std::vector<Rational> mono(1, coef[need - 1]);
  for (std::size_t i = need - 1; i-- > 0;) {
    std::vector<Rational> next(mono.size() + 1, Rational(0));
    Rational x0(BigInt(points[i].q));
    for (std::size_t d = 0; d < mono.size(); ++d) {
      next[d + 1] += mono[d];
      next[d] -= mono[d] * x0;
    }
    next[0] += coef[i];
    mono = std::move(next);
  }
  IntPolynomial poly;
  for (const auto& c : mono) {
    if (c.denominator() != 1) {
      throw Error(Errc::NonIntegerCoefficient, "interpolated coefficient is not an integer");
    }
    poly.coefficients.push_back(c.numerator());
  }
  while (!poly.coefficients.empty() && poly.coefficients.back() == 0) poly.coefficients.pop_back();
  for (std::size_t i = need; i < points.size(); ++i) {
    if (poly(BigInt(points[i].q)) != points[i].count) {
      throw Error(Errc::InconsistentPoints, "point q=" + std::to_string(points[i].q) +
                                                " disagrees with the interpolated polynomial");
    }
  }
  return poly;
}

}  // namespace hkrep
