#include "hkrep/hmodule.hpp"

#include <numeric>

#include "hkrep/error.hpp"
#include "hkrep/random.hpp"

namespace hkrep {

namespace {

FpMatrix jordan_blocks(std::uint32_t p, int blocks, int size) {
  FpMatrix j(p, static_cast<std::size_t>(blocks) * size, static_cast<std::size_t>(blocks) * size);
  for (int b = 0; b < blocks; ++b)
    for (int s = 0; s + 1 < size; ++s) j(b * size + s + 1, b * size + s) = 1;
  return j;
}

IntMatrix to_int(const FpMatrix& m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

IntMatrix int_block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows + b.rows, a.cols + b.cols);
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows; ++r)
    for (std::size_t c = 0; c < b.cols; ++c) m(a.rows + r, a.cols + c) = b(r, c);
  return m;
}

}  // namespace

FpMatrix IntMatrix::mod(std::uint32_t p) const {
  FpMatrix m(p, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, (*this)(r, c));
  return m;
}

HModule::HModule(DatumPtr datum, int k, std::uint32_t p, std::vector<int> dims, std::vector<FpMatrix> loops,
                 std::vector<FpMatrix> arrows, std::optional<IntegerLift> lift)
    : datum_(std::move(datum)),
      k_(k),
      p_(p),
      dims_(std::move(dims)),
      loops_(std::move(loops)),
      arrows_(std::move(arrows)),
      lift_(std::move(lift)) {
  if (!datum_ || !datum_->has_orientation()) throw Error(Errc::InvalidInput, "module needs an oriented datum");
  if (k_ < 1) throw Error(Errc::KTooSmall, "k must be positive");
  require_prime(p_);
  const int n = datum_->n();
  if (static_cast<int>(dims_.size()) != n || static_cast<int>(loops_.size()) != n) {
    throw Error(Errc::ShapeMismatch, "one dimension and one loop per vertex required");
  }
  if (arrows_.size() != datum_->arrows().size()) throw Error(Errc::ShapeMismatch, "arrow count mismatch");
  for (int i = 0; i < n; ++i) {
    if (dims_[i] < 0) throw Error(Errc::ShapeMismatch, "negative dimension");
    if (loops_[i].rows() != static_cast<std::size_t>(dims_[i]) || loops_[i].cols() != static_cast<std::size_t>(dims_[i]) ||
        loops_[i].p() != p_) {
      throw Error(Errc::ShapeMismatch, "loop matrix at vertex " + std::to_string(i + 1) + " has wrong shape");
    }
  }
  for (std::size_t a = 0; a < arrows_.size(); ++a) {
    const auto& spec = datum_->arrows()[a];
    if (arrows_[a].rows() != static_cast<std::size_t>(dims_[spec.head]) ||
        arrows_[a].cols() != static_cast<std::size_t>(dims_[spec.tail]) || arrows_[a].p() != p_) {
      throw Error(Errc::ShapeMismatch, "arrow matrix " + std::to_string(a) + " has wrong shape");
    }
  }
  if (lift_) {
    if (lift_->loops.size() != loops_.size() || lift_->arrows.size() != arrows_.size()) {
      throw Error(Errc::ShapeMismatch, "integer lift shape mismatch");
    }
  }
}

int HModule::total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

std::vector<FpMatrix> HModule::central_action() const {
  std::vector<FpMatrix> out;
  for (int i = 0; i < n(); ++i) out.push_back(loops_[i].power(datum_->sym(i)));
  return out;
}

bool HModule::is_standard_form() const {
  for (int i = 0; i < n(); ++i) {
    const int order = datum_->loop_order(i, k_);
    if (dims_[i] % order != 0) return false;
    if (!(loops_[i] == jordan_blocks(p_, dims_[i] / order, order))) return false;
  }
  return true;
}

LinearRep HModule::to_rep() const {
  LinearRep rep;
  rep.p = p_;
  rep.dims = dims_;
  for (int i = 0; i < n(); ++i) rep.maps.push_back({i, i, loops_[i]});
  for (std::size_t a = 0; a < arrows_.size(); ++a) {
    const auto& spec = datum_->arrows()[a];
    rep.maps.push_back({spec.tail, spec.head, arrows_[a]});
  }
  return rep;
}

HModule HModule::from_rep(DatumPtr datum, int k, const LinearRep& rep) {
  const int n = datum->n();
  if (static_cast<int>(rep.dims.size()) != n || rep.maps.size() != n + datum->arrows().size()) {
    throw Error(Errc::ShapeMismatch, "representation does not match the quiver");
  }
  std::vector<FpMatrix> loops, arrows;
  for (int i = 0; i < n; ++i) loops.push_back(rep.maps[i].matrix);
  for (std::size_t a = 0; a < datum->arrows().size(); ++a) arrows.push_back(rep.maps[n + a].matrix);
  return HModule(std::move(datum), k, rep.p, rep.dims, std::move(loops), std::move(arrows));
}

void require_compatible(const HModule& m, const HModule& n) {
  if (!(m.datum() == n.datum()) || m.k() != n.k() || m.p() != n.p()) {
    throw Error(Errc::DatumMismatch, "modules live over different algebras or fields");
  }
}

ValidationReport validate(const HModule& m) {
  ValidationReport report;
  const auto& datum = m.datum();
  for (int i = 0; i < m.n(); ++i) {
    if (!m.loop(i).power(datum.loop_order(i, m.k())).is_zero()) {
      report.violations.push_back({Errc::RelationH1Violated, i, -1,
                                   "eps_" + std::to_string(i + 1) + "^" + std::to_string(datum.loop_order(i, m.k())) + " != 0"});
    }
  }
  for (std::size_t a = 0; a < datum.arrows().size(); ++a) {
    const auto& spec = datum.arrows()[a];
    const int i = spec.head, j = spec.tail;
    FpMatrix lhs = m.loop(i).power(datum.f(j, i)) * m.arrows()[a];
    FpMatrix rhs = m.arrows()[a] * m.loop(j).power(datum.f(i, j));
    if (!(lhs == rhs)) {
      report.violations.push_back({Errc::RelationH2Violated, i, static_cast<int>(a),
                                   "relation fails for arrow (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                       ") g=" + std::to_string(spec.g + 1)});
    }
  }
  return report;
}

void require_valid(const HModule& m) {
  ValidationReport r = validate(m);
  if (!r.ok()) throw Error(r.violations.front().code, r.violations.front().message);
}

LocalFreeness local_freeness(const HModule& m) {
  LocalFreeness out;
  out.locally_free = true;
  for (int i = 0; i < m.n(); ++i) {
    VertexFreeness v;
    v.dim = m.dim(i);
    v.loop_order = m.datum().loop_order(i, m.k());
    v.loop_rank = rank(m.loop(i));
    v.free = v.dim % v.loop_order == 0 &&
             v.loop_rank == static_cast<std::size_t>(v.dim - v.dim / v.loop_order) &&
             m.loop(i).power(v.loop_order).is_zero();
    out.locally_free = out.locally_free && v.free;
    out.vertices.push_back(v);
  }
  return out;
}

bool is_locally_free(const HModule& m) { return local_freeness(m).locally_free; }

RankVector rank_vector(const HModule& m) {
  LocalFreeness lf = local_freeness(m);
  if (!lf.locally_free) throw Error(Errc::NotLocallyFree, "module is not locally free");
  RankVector r(m.n());
  for (int i = 0; i < m.n(); ++i) r[i] = m.dim(i) / m.datum().loop_order(i, m.k());
  return r;
}

HModule zero_module(DatumPtr datum, int k, std::uint32_t p) {
  RankVector r(static_cast<std::size_t>(datum->n()));
  return free_module(std::move(datum), k, p, r);
}

HModule free_module(DatumPtr datum, int k, std::uint32_t p, const RankVector& r) {
  if (static_cast<int>(r.size()) != datum->n()) throw Error(Errc::LengthMismatch, "rank vector length mismatch");
  if (!r.is_nonnegative()) throw Error(Errc::InvalidInput, "negative rank");
  return from_structure_matrices(zero_structure(datum, k, r), p);
}

HModule simple_module(DatumPtr datum, int k, std::uint32_t p, int i) {
  const int n = datum->n();
  std::vector<int> dims(n, 0);
  dims[i] = 1;
  std::vector<FpMatrix> loops;
  for (int v = 0; v < n; ++v) loops.emplace_back(p, dims[v], dims[v]);
  std::vector<FpMatrix> arrows;
  for (const auto& a : datum->arrows()) arrows.emplace_back(p, dims[a.head], dims[a.tail]);
  IntegerLift lift;
  for (const auto& l : loops) lift.loops.push_back(to_int(l));
  for (const auto& a : arrows) lift.arrows.push_back(to_int(a));
  return HModule(std::move(datum), k, p, dims, std::move(loops), std::move(arrows), std::move(lift));
}

StructureMatrices zero_structure(DatumPtr datum, int k, const RankVector& r) {
  StructureMatrices s;
  s.k = k;
  s.rank = r;
  for (auto [i, j] : datum->omega()) {
    s.blocks.emplace_back(r[i], -datum->c(i, j) * r[j], datum->loop_order(i, k));
  }
  s.datum = std::move(datum);
  return s;
}

std::uint64_t structure_parameter_count(const CartanDatum& datum, int k, const RankVector& r) {
  std::uint64_t total = 0;
  for (auto [i, j] : datum.omega()) {
    total += static_cast<std::uint64_t>(datum.loop_order(i, k)) * static_cast<std::uint64_t>(-datum.c(i, j)) *
             static_cast<std::uint64_t>(r[i]) * static_cast<std::uint64_t>(r[j]);
  }
  return total;
}

HModule from_structure_matrices(const StructureMatrices& s, std::uint32_t p) {
  const auto& datum = *s.datum;
  const int n = datum.n();
  const int k = s.k;
  if (static_cast<int>(s.rank.size()) != n) throw Error(Errc::LengthMismatch, "rank vector length mismatch");
  if (s.blocks.size() != datum.omega().size()) throw Error(Errc::ShapeMismatch, "one block per Omega pair required");

  std::vector<int> dims = dimension_vector(datum, k, s.rank);
  IntegerLift lift;
  for (int i = 0; i < n; ++i) {
    const int order = datum.loop_order(i, k);
    IntMatrix loop(dims[i], dims[i]);
    for (int b = 0; b < s.rank[i]; ++b)
      for (int t = 0; t + 1 < order; ++t) loop(b * order + t + 1, b * order + t) = 1;
    lift.loops.push_back(std::move(loop));
  }
  for (const auto& spec : datum.arrows()) {
    const int i = spec.head, j = spec.tail;
    const PolyMatrix& u = s.blocks[spec.pair_index];
    const int ni = datum.loop_order(i, k), nj = datum.loop_order(j, k);
    const int abs_cij = -datum.c(i, j);
    const int fij = datum.f(i, j), fji = datum.f(j, i);
    if (u.rows != s.rank[i] || u.cols != abs_cij * s.rank[j]) {
      throw Error(Errc::ShapeMismatch, "structure block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                           ") has wrong shape");
    }
    for (int a = 0; a < u.rows; ++a)
      for (int c = 0; c < u.cols; ++c)
        for (int d = ni; d < u.length; ++d)
          if (u(a, c, d) != 0) throw Error(Errc::EntryDegreeOverflow, "entry degree exceeds k*c_i - 1");
    IntMatrix arrow(dims[i], dims[j]);
    for (int b = 0; b < s.rank[j]; ++b) {
      for (int src = 0; src < nj; ++src) {
        const int shift = (src / fij) * fji;
        const int col = b * abs_cij + spec.g * fij + src % fij;
        for (int a = 0; a < s.rank[i]; ++a) {
          for (int d = 0; d < std::min(ni, u.length) && d + shift < ni; ++d) {
            arrow(a * ni + d + shift, b * nj + src) += u(a, col, d);
          }
        }
      }
    }
    lift.arrows.push_back(std::move(arrow));
  }
  std::vector<FpMatrix> loops, arrows;
  for (const auto& l : lift.loops) loops.push_back(l.mod(p));
  for (const auto& a : lift.arrows) arrows.push_back(a.mod(p));
  HModule m(s.datum, k, p, dims, std::move(loops), std::move(arrows), std::move(lift));
  require_valid(m);
  return m;
}

StructureMatrices to_structure_matrices(const HModule& m_in) {
  if (!is_locally_free(m_in)) throw Error(Errc::NotLocallyFree, "structure matrices need a locally free module");
  const HModule m = m_in.is_standard_form() ? m_in : normalize(m_in).module;
  const auto& datum = m.datum();
  const int k = m.k();
  StructureMatrices s = zero_structure(m.datum_ptr(), k, rank_vector(m));
  for (std::size_t a = 0; a < datum.arrows().size(); ++a) {
    const auto& spec = datum.arrows()[a];
    const int i = spec.head, j = spec.tail;
    const int ni = datum.loop_order(i, k), nj = datum.loop_order(j, k);
    const int abs_cij = -datum.c(i, j), fij = datum.f(i, j);
    PolyMatrix& u = s.blocks[spec.pair_index];
    const FpMatrix& arrow = m.arrows()[a];
    for (int b = 0; b < s.rank[j]; ++b)
      for (int t = 0; t < fij; ++t)
        for (int row = 0; row < s.rank[i]; ++row)
          for (int d = 0; d < ni; ++d) u(row, b * abs_cij + spec.g * fij + t, d) = arrow(row * ni + d, b * nj + t);
  }
  return s;
}

StructureMatrices random_structure(DatumPtr datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t seed) {
  StructureMatrices s = zero_structure(std::move(datum), k, r);
  FieldSampler sample(p, seed);
  for (auto& block : s.blocks)
    for (auto& c : block.coeffs) c = sample();
  return s;
}

HModule random_locally_free(DatumPtr datum, int k, std::uint32_t p, const RankVector& r, std::uint64_t seed) {
  return from_structure_matrices(random_structure(std::move(datum), k, p, r, seed), p);
}

StructureMatrices structure_from_index(DatumPtr datum, int k, std::uint32_t p, const RankVector& r,
                                       std::uint64_t index) {
  StructureMatrices s = zero_structure(std::move(datum), k, r);
  for (auto& block : s.blocks) {
    for (auto& c : block.coeffs) {
      c = static_cast<std::int64_t>(index % p);
      index /= p;
    }
  }
  return s;
}

NormalizedModule normalize(const HModule& m) {
  if (!is_locally_free(m)) throw Error(Errc::NotLocallyFree, "only locally free modules have a standard form");
  const auto& datum = m.datum();
  const std::uint32_t p = m.p();
  std::vector<FpMatrix> basis, inv;
  for (int i = 0; i < m.n(); ++i) {
    const int order = datum.loop_order(i, m.k());
    const int d = m.dim(i);
    // Unit vectors off the pivots of eps_i M_i project to a basis of M_i / eps_i M_i.
    auto generators = image(m.loop(i)).complement_coordinates();
    FpMatrix b(p, d, d);
    std::vector<FpMatrix> powers(order);
    powers[0] = FpMatrix::identity(p, d);
    for (int s = 1; s < order; ++s) powers[s] = m.loop(i) * powers[s - 1];
    for (std::size_t g = 0; g < generators.size(); ++g) {
      for (int s = 0; s < order; ++s) {
        Vec col = powers[s].column(generators[g]);
        for (int r = 0; r < d; ++r) b(r, static_cast<int>(g) * order + s) = col[r];
      }
    }
    auto bi = inverse(b);
    if (!bi) throw Error(Errc::NotLocallyFree, "internal: standard basis is singular");
    basis.push_back(std::move(b));
    inv.push_back(std::move(*bi));
  }
  LinearRep rep = change_basis(m.to_rep(), basis, inv);
  HModule out = HModule::from_rep(m.datum_ptr(), m.k(), rep);
  if (!out.is_standard_form()) throw Error(Errc::NotLocallyFree, "internal: normalization failed");
  return {std::move(out), std::move(basis), std::move(inv)};
}

HModule direct_sum(const HModule& a, const HModule& b) {
  require_compatible(a, b);
  HModule out = HModule::from_rep(a.datum_ptr(), a.k(), direct_sum(a.to_rep(), b.to_rep()));
  if (a.lift() && b.lift()) {
    IntegerLift lift;
    for (std::size_t i = 0; i < a.lift()->loops.size(); ++i)
      lift.loops.push_back(int_block_diagonal(a.lift()->loops[i], b.lift()->loops[i]));
    for (std::size_t i = 0; i < a.lift()->arrows.size(); ++i)
      lift.arrows.push_back(int_block_diagonal(a.lift()->arrows[i], b.lift()->arrows[i]));
    return HModule(out.datum_ptr(), out.k(), out.p(), out.dims(), out.loops(), out.arrows(), std::move(lift));
  }
  return out;
}

HSubQuotient sub_quotient(const HModule& m, const std::vector<Subspace>& u) {
  SubQuotientRep sq = sub_quotient(m.to_rep(), u);
  HModule sub = HModule::from_rep(m.datum_ptr(), m.k(), sq.sub);
  HModule quot = HModule::from_rep(m.datum_ptr(), m.k(), sq.quotient);
  std::vector<FpMatrix> inclusion = std::move(sq.inclusion);
  std::vector<FpMatrix> projection = std::move(sq.projection);
  if (is_locally_free(sub) && !sub.is_standard_form()) {
    NormalizedModule nm = normalize(sub);
    for (std::size_t i = 0; i < inclusion.size(); ++i) inclusion[i] = inclusion[i] * nm.basis[i];
    sub = std::move(nm.module);
  }
  if (is_locally_free(quot) && !quot.is_standard_form()) {
    NormalizedModule nm = normalize(quot);
    for (std::size_t i = 0; i < projection.size(); ++i) projection[i] = nm.inverse[i] * projection[i];
    quot = std::move(nm.module);
  }
  return {std::move(sub), std::move(quot), std::move(inclusion), std::move(projection)};
}

HModule reduce_mod_p(const HModule& m, std::uint32_t prime) {
  if (!m.lift()) throw Error(Errc::InvalidInput, "module has no integer lift");
  require_prime(prime);
  std::vector<FpMatrix> loops, arrows;
  for (const auto& l : m.lift()->loops) loops.push_back(l.mod(prime));
  for (const auto& a : m.lift()->arrows) arrows.push_back(a.mod(prime));
  HModule out(m.datum_ptr(), m.k(), prime, m.dims(), std::move(loops), std::move(arrows), m.lift());
  if (!validate(out).ok()) {
    throw Error(Errc::RelationBrokenAtPrime, "relations fail after reduction mod " + std::to_string(prime));
  }
  return out;
}

HModule with_canonical_lift(const HModule& m) {
  IntegerLift lift;
  for (const auto& l : m.loops()) lift.loops.push_back(to_int(l));
  for (const auto& a : m.arrows()) lift.arrows.push_back(to_int(a));
  return HModule(m.datum_ptr(), m.k(), m.p(), m.dims(), m.loops(), m.arrows(), std::move(lift));
}

}  // namespace hkrep
