#include "hkrep/flags.hpp"

#include <algorithm>
#include <sstream>

#include "hkrep/error.hpp"
#include "hkrep/parallel.hpp"

namespace hkrep {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(Errc::BudgetExceeded, "count exceeds 64 bits");
  return out;
}

bool maps_into(const FpMatrix& a, const Subspace& src, const Subspace& dst) {
  for (std::size_t t = 0; t < src.dim(); ++t)
    if (!dst.contains(a.apply(src.basis_vector(t)))) return false;
  return true;
}

// Preimage of V under a linear map P.
Subspace preimage(const FpMatrix& p, const Subspace& v) { return kernel_basis(v.quotient_map() * p); }

std::vector<RankVector> tail(const std::vector<RankVector>& brseq) {
  return std::vector<RankVector>(brseq.begin() + 1, brseq.end());
}

void require_brseq(const HModule& m, const std::vector<RankVector>& brseq) {
  if (brseq.size() < 2) throw Error(Errc::LengthMismatch, "a flag needs at least two rank vectors");
  const RankVector r = rank_vector(m);
  RankVector sum(static_cast<std::size_t>(m.n()));
  for (const auto& part : brseq) {
    if (part.size() != sum.size()) throw Error(Errc::LengthMismatch, "rank vector length differs from vertex count");
    if (!part.is_nonnegative()) throw Error(Errc::RankTooLarge, "negative rank");
    sum = sum + part;
  }
  if (sum != r) {
    throw Error(Errc::RankTooLarge, "ranks sum to " + sum.to_string() + " but the module has rank " + r.to_string());
  }
}

// Locally free submodules of rank e of a module in standard form, by
// depth-first search over vertices with the arrow conditions checked as soon
// as both ends are fixed.
class SubmoduleSearch {
 public:
  SubmoduleSearch(const HModule& m, const RankVector& e, const EnumerationOptions& options) : m_(m) {
    const RankVector r = rank_vector(m);
    if (e.size() != r.size()) throw Error(Errc::LengthMismatch, "rank vector length differs from vertex count");
    if (!e.is_nonnegative() || !e.fits_in(r)) {
      throw Error(Errc::RankTooLarge, "rank " + e.to_string() + " does not fit into " + r.to_string());
    }
    for (int i = 0; i < m.n(); ++i) {
      const int order = m.datum().loop_order(i, m.k());
      enums_.emplace_back(order, r[i], e[i], m.p());
      const std::uint64_t count = enums_.back().count();
      if (count > options.candidate_limit && !options.override_limit) {
        throw Error(Errc::BudgetExceeded, "vertex " + std::to_string(i + 1) + " has " + std::to_string(count) +
                                              " candidate submodules (limit " +
                                              std::to_string(options.candidate_limit) + ")");
      }
      std::vector<Subspace> cache;
      if (count <= kCacheLimit) {
        cache.reserve(count);
        for (std::uint64_t idx = 0; idx < count; ++idx) cache.push_back(enums_.back().at(idx));
      }
      cache_.push_back(std::move(cache));
    }
  }

  std::uint64_t first_count() const { return m_.n() == 0 ? 1 : enums_[0].count(); }

  /// Visits all submodules whose vertex-0 part has the given index.
  void run(std::uint64_t first, const std::function<void(const std::vector<Subspace>&)>& visit) const {
    std::vector<Subspace> u(m_.n());
    if (m_.n() == 0) {
      visit(u);
      return;
    }
    u[0] = candidate(0, first);
    descend(u, 1, visit);
  }

 private:
  static constexpr std::uint64_t kCacheLimit = 1ULL << 16;

  Subspace candidate(int v, std::uint64_t idx) const {
    return cache_[v].empty() ? enums_[v].at(idx) : cache_[v][idx];
  }

  bool consistent(const std::vector<Subspace>& u, int v) const {
    const auto& arrows = m_.datum().arrows();
    for (std::size_t a = 0; a < arrows.size(); ++a) {
      const int h = arrows[a].head, t = arrows[a].tail;
      if (std::max(h, t) != v) continue;
      if (!maps_into(m_.arrows()[a], u[t], u[h])) return false;
    }
    return true;
  }

  void descend(std::vector<Subspace>& u, int v, const std::function<void(const std::vector<Subspace>&)>& visit) const {
    if (v == 0 || consistent(u, v - 1)) {
      if (v == m_.n()) {
        visit(u);
        return;
      }
    } else {
      return;
    }
    const std::uint64_t count = enums_[v].count();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      u[v] = candidate(v, idx);
      descend(u, v + 1, visit);
    }
  }

  const HModule& m_;
  std::vector<FreeSubmoduleEnumerator> enums_;
  std::vector<std::vector<Subspace>> cache_;
};

std::vector<std::vector<Subspace>> submodules_standard(const HModule& m, const RankVector& e,
                                                      const EnumerationOptions& options, bool parallel) {
  SubmoduleSearch search(m, e, options);
  std::vector<std::vector<std::vector<Subspace>>> found(search.first_count());
  auto body = [&](std::size_t idx) {
    search.run(idx, [&](const std::vector<Subspace>& u) { found[idx].push_back(u); });
  };
  if (parallel) {
    parallel_for(found.size(), body);
  } else {
    for (std::size_t idx = 0; idx < found.size(); ++idx) body(idx);
  }
  std::vector<std::vector<Subspace>> out;
  for (auto& chunk : found)
    for (auto& u : chunk) out.push_back(std::move(u));
  return out;
}

using LayerList = std::vector<std::vector<Subspace>>;

std::vector<LayerList> flags_standard(const HModule& m, const std::vector<RankVector>& brseq,
                                      const EnumerationOptions& options, bool parallel) {
  if (brseq.size() == 1) return {LayerList{}};
  const auto firsts = submodules_standard(m, brseq[0], options, false);
  std::vector<std::vector<LayerList>> found(firsts.size());
  auto body = [&](std::size_t idx) {
    const auto& u = firsts[idx];
    if (brseq.size() == 2) {
      found[idx].push_back(LayerList{u});
      return;
    }
    HSubQuotient sq = sub_quotient(m, u);
    for (auto& rest : flags_standard(sq.quotient, tail(brseq), options, false)) {
      LayerList layers{u};
      for (const auto& layer : rest) {
        std::vector<Subspace> pulled;
        for (int i = 0; i < m.n(); ++i) pulled.push_back(preimage(sq.projection[i], layer[i]));
        layers.push_back(std::move(pulled));
      }
      found[idx].push_back(std::move(layers));
    }
  };
  if (parallel) {
    parallel_for(found.size(), body);
  } else {
    for (std::size_t idx = 0; idx < found.size(); ++idx) body(idx);
  }
  std::vector<LayerList> out;
  for (auto& chunk : found)
    for (auto& f : chunk) out.push_back(std::move(f));
  return out;
}

std::uint64_t count_standard(const HModule& m, const std::vector<RankVector>& brseq, const EnumerationOptions& options,
                             bool parallel) {
  if (brseq.size() == 1) return 1;
  SubmoduleSearch search(m, brseq[0], options);
  std::vector<std::uint64_t> counts(search.first_count(), 0);
  auto body = [&](std::size_t idx) {
    search.run(idx, [&](const std::vector<Subspace>& u) {
      if (brseq.size() == 2) {
        ++counts[idx];
        return;
      }
      HSubQuotient sq = sub_quotient(m, u);
      counts[idx] += count_standard(sq.quotient, tail(brseq), options, false);
    });
  };
  if (parallel) {
    parallel_for(counts.size(), body);
  } else {
    for (std::size_t idx = 0; idx < counts.size(); ++idx) body(idx);
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

std::vector<Subspace> transport(const std::vector<FpMatrix>& basis, const std::vector<Subspace>& u) {
  std::vector<Subspace> out;
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(u[i].image_under(basis[i]));
  return out;
}

// Map index of the loop at (slot s, vertex i) in TensorModule::to_rep.
std::size_t loop_map_index(const CartanDatum& datum, int s, int i) {
  return static_cast<std::size_t>(s) * (datum.n() + datum.arrows().size()) + i;
}

std::vector<Subspace> flat_blocks(const FlagOfSubmodules& flag) {
  std::vector<Subspace> out;
  for (const auto& layer : flag.layers) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

nlohmann::json big_to_json(const BigInt& v) {
  if (v >= BigInt(std::numeric_limits<std::int64_t>::min()) && v <= BigInt(std::numeric_limits<std::int64_t>::max())) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

nlohmann::json brseq_json(const std::vector<RankVector>& brseq) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : brseq) out.push_back(r.values());
  return out;
}

}  // namespace

std::uint64_t free_submodule_count(int order, int m, int e, std::uint32_t q) {
  if (e < 0 || e > m) throw Error(Errc::RankTooLarge, "submodule rank exceeds module rank");
  const std::uint64_t tails = checked_pow(q, static_cast<std::uint64_t>(order - 1) * e * (m - e));
  return mul_checked(gaussian_binomial(m, e, q), tails);
}

FreeSubmoduleEnumerator::FreeSubmoduleEnumerator(int order, int m, int e, std::uint32_t q)
    : order_(order), m_(m), e_(e), q_(q), tops_(m, e, q) {
  tails_ = checked_pow(q, static_cast<std::uint64_t>(order - 1) * e * (m - e));
  count_ = mul_checked(tops_.count(), tails_);
}

Subspace FreeSubmoduleEnumerator::at(std::uint64_t index) const {
  // Generators u_a have the identity in the pivot columns of the top (the
  // RREF of U / eps U); the other columns carry the RREF entry in degree 0
  // and free coefficients in degrees 1..order-1.
  const Subspace top = tops_.at(index / tails_);
  std::uint64_t rest = index % tails_;
  std::vector<bool> is_pivot(m_, false);
  for (auto c : top.pivots()) is_pivot[c] = true;
  const std::size_t ambient = static_cast<std::size_t>(m_) * order_;
  std::vector<Vec> vectors;
  for (int a = 0; a < e_; ++a) {
    Vec u(ambient, 0);
    for (int c = 0; c < m_; ++c) {
      u[static_cast<std::size_t>(c) * order_] = top.basis()(a, c);
      if (is_pivot[c]) continue;
      for (int s = 1; s < order_; ++s) {
        u[static_cast<std::size_t>(c) * order_ + s] = static_cast<std::uint32_t>(rest % q_);
        rest /= q_;
      }
    }
    for (int t = 0; t < order_; ++t) {
      Vec shifted(ambient, 0);
      for (int c = 0; c < m_; ++c)
        for (int s = 0; s + t < order_; ++s)
          shifted[static_cast<std::size_t>(c) * order_ + s + t] = u[static_cast<std::size_t>(c) * order_ + s];
      vectors.push_back(std::move(shifted));
    }
  }
  return Subspace::span(q_, ambient, vectors);
}

void validate_flag(const HModule& m, const FlagOfSubmodules& flag) {
  require_brseq(m, flag.brseq);
  if (flag.layers.size() + 1 != flag.brseq.size()) {
    throw Error(Errc::LengthMismatch, "a flag of length l has l-1 layers");
  }
  const LinearRep rep = m.to_rep();
  RankVector expect(static_cast<std::size_t>(m.n()));
  for (std::size_t s = 0; s < flag.layers.size(); ++s) {
    const auto& layer = flag.layers[s];
    if (layer.size() != static_cast<std::size_t>(m.n())) throw Error(Errc::ShapeMismatch, "one subspace per vertex");
    for (int i = 0; i < m.n(); ++i) {
      if (layer[i].ambient() != static_cast<std::size_t>(m.dim(i)) || layer[i].p() != m.p()) {
        throw Error(Errc::ShapeMismatch, "layer subspace does not live in the module");
      }
      if (s > 0 && !layer[i].contains(flag.layers[s - 1][i])) {
        throw Error(Errc::NotNested, "layer " + std::to_string(s + 1) + " does not contain the previous one");
      }
    }
    if (!is_invariant(rep, layer)) throw Error(Errc::NotInvariant, "layer " + std::to_string(s + 1) + " is not a submodule");
    HSubQuotient sq = sub_quotient(m, layer);
    if (!is_locally_free(sq.sub) || !is_locally_free(sq.quotient)) {
      throw Error(Errc::NotLocallyFree, "layer " + std::to_string(s + 1) + " or its quotient is not locally free");
    }
    expect = expect + flag.brseq[s];
    if (rank_vector(sq.sub) != expect) {
      throw Error(Errc::RankTooLarge, "layer " + std::to_string(s + 1) + " has rank " + rank_vector(sq.sub).to_string() +
                                          ", expected " + expect.to_string());
    }
  }
}

bool is_valid_flag(const HModule& m, const FlagOfSubmodules& flag) {
  try {
    validate_flag(m, flag);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::vector<Subspace>> enumerate_locally_free_submodules(const HModule& m, const RankVector& e,
                                                                    const EnumerationOptions& options) {
  if (m.is_standard_form()) return submodules_standard(m, e, options, true);
  NormalizedModule nm = normalize(m);
  auto out = submodules_standard(nm.module, e, options, true);
  for (auto& u : out) u = transport(nm.basis, u);
  return out;
}

std::vector<FlagOfSubmodules> enumerate_flags(const HModule& m, const std::vector<RankVector>& brseq,
                                              const EnumerationOptions& options) {
  require_brseq(m, brseq);
  std::optional<NormalizedModule> nm;
  if (!m.is_standard_form()) nm = normalize(m);
  const HModule& std_m = nm ? nm->module : m;
  std::vector<FlagOfSubmodules> out;
  for (auto& layers : flags_standard(std_m, brseq, options, true)) {
    if (nm)
      for (auto& layer : layers) layer = transport(nm->basis, layer);
    out.push_back({brseq, std::move(layers)});
  }
  return out;
}

std::uint64_t point_count(const HModule& m, const std::vector<RankVector>& brseq, const EnumerationOptions& options) {
  require_brseq(m, brseq);
  if (m.is_standard_form()) return count_standard(m, brseq, options, true);
  return count_standard(normalize(m).module, brseq, options, true);
}

LinearRep TensorModule::to_rep() const {
  if (slots.empty()) throw Error(Errc::ShapeMismatch, "tensor module without slots");
  const auto& datum = slots.front().datum();
  const int n = datum.n();
  LinearRep rep;
  rep.p = slots.front().p();
  for (const auto& slot : slots) rep.dims.insert(rep.dims.end(), slot.dims().begin(), slot.dims().end());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const int base = static_cast<int>(s) * n;
    for (int i = 0; i < n; ++i) rep.maps.push_back({base + i, base + i, slots[s].loop(i)});
    for (std::size_t a = 0; a < datum.arrows().size(); ++a) {
      const auto& spec = datum.arrows()[a];
      rep.maps.push_back({base + spec.tail, base + spec.head, slots[s].arrows()[a]});
    }
  }
  for (std::size_t s = 0; s + 1 < slots.size(); ++s)
    for (int i = 0; i < n; ++i)
      rep.maps.push_back({static_cast<int>(s) * n + i, static_cast<int>(s + 1) * n + i, connectors[s][i]});
  return rep;
}

TensorModule TensorModule::from_rep(const DatumPtr& datum, int k, int l, const LinearRep& rep) {
  const int n = datum->n();
  const std::size_t per_slot = n + datum->arrows().size();
  const std::size_t slot_count = static_cast<std::size_t>(l - 1);
  if (rep.dims.size() != slot_count * n || rep.maps.size() != slot_count * per_slot + (slot_count - 1) * n) {
    throw Error(Errc::ShapeMismatch, "representation does not match the tensor layout");
  }
  TensorModule out;
  out.l = l;
  for (std::size_t s = 0; s < slot_count; ++s) {
    LinearRep slot;
    slot.p = rep.p;
    slot.dims.assign(rep.dims.begin() + s * n, rep.dims.begin() + (s + 1) * n);
    for (std::size_t t = 0; t < per_slot; ++t) {
      RepMap x = rep.maps[s * per_slot + t];
      x.src -= static_cast<int>(s) * n;
      x.tgt -= static_cast<int>(s) * n;
      slot.maps.push_back(std::move(x));
    }
    out.slots.push_back(HModule::from_rep(datum, k, slot));
  }
  for (std::size_t s = 0; s + 1 < slot_count; ++s) {
    Hom mu;
    for (int i = 0; i < n; ++i) mu.push_back(rep.maps[slot_count * per_slot + s * n + i].matrix);
    out.connectors.push_back(std::move(mu));
  }
  return out;
}

TensorModule repetitive_module(const HModule& m, int l) {
  if (l < 2) throw Error(Errc::LengthMismatch, "tensor modules need l >= 2");
  TensorModule out;
  out.l = l;
  out.slots.assign(static_cast<std::size_t>(l - 1), m);
  Hom id;
  for (int i = 0; i < m.n(); ++i) id.push_back(FpMatrix::identity(m.p(), m.dim(i)));
  out.connectors.assign(static_cast<std::size_t>(l - 2), id);
  return out;
}

TensorModule flag_submodule(const HModule& m, const FlagOfSubmodules& flag) {
  validate_flag(m, flag);
  const int l = static_cast<int>(flag.brseq.size());
  SubQuotientRep sq = sub_quotient(repetitive_module(m, l).to_rep(), flat_blocks(flag));
  return TensorModule::from_rep(m.datum_ptr(), m.k(), l, sq.sub);
}

TensorModule flag_quotient(const HModule& m, const FlagOfSubmodules& flag) {
  validate_flag(m, flag);
  const int l = static_cast<int>(flag.brseq.size());
  SubQuotientRep sq = sub_quotient(repetitive_module(m, l).to_rep(), flat_blocks(flag));
  return TensorModule::from_rep(m.datum_ptr(), m.k(), l, sq.quotient);
}

std::vector<BlockMap> hom_tensor(const TensorModule& x, const TensorModule& y) {
  if (x.l != y.l || x.slots.empty() || y.slots.empty()) throw Error(Errc::ShapeMismatch, "tensor modules of different length");
  require_compatible(x.slots.front(), y.slots.front());
  return hom_basis(x.to_rep(), y.to_rep());
}

std::size_t tangent_dimension(const HModule& m, const FlagOfSubmodules& flag) {
  validate_flag(m, flag);
  if (flag.brseq.size() == 2) {
    HSubQuotient sq = sub_quotient(m, flag.layers[0]);
    return hom_dim(sq.sub, sq.quotient);
  }
  return hom_tensor(flag_submodule(m, flag), flag_quotient(m, flag)).size();
}

FlagOfSubmodules reduce_flag(const ReducedModule& reduced, const FlagOfSubmodules& flag) {
  FlagOfSubmodules out{flag.brseq, {}};
  for (const auto& layer : flag.layers) out.layers.push_back(transport(reduced.projection, layer));
  validate_flag(reduced.module, out);
  return out;
}

FlagOfSubmodules reduce_flag(const HModule& m, const FlagOfSubmodules& flag) {
  if (m.k() < 2) throw Error(Errc::KTooSmall, "reduction needs k >= 2");
  validate_flag(m, flag);
  return reduce_flag(reduce(m), flag);
}

ReductionFiber fiber_of_reduction(const HModule& m, const FlagOfSubmodules& base) {
  if (m.k() < 2) throw Error(Errc::KTooSmall, "reduction needs k >= 2");
  const ReducedModule red = reduce(m);
  try {
    validate_flag(red.module, base);
  } catch (const Error& e) {
    throw Error(Errc::FlagNotInReduction, std::string("not a flag of the reduced module: ") + e.what());
  }
  const auto& datum = m.datum();
  const std::uint32_t p = m.p();
  const int n = m.n();
  const int l = static_cast<int>(base.brseq.size());
  const std::size_t blocks = static_cast<std::size_t>(l - 1) * n;
  const LinearRep v = repetitive_module(m, l).to_rep();
  const std::vector<Subspace> ubar = flat_blocks(base);

  // A lift U of Ubar meets ker P = eps^{k-1} M exactly in W = eps^{k-1} S(Ubar),
  // so U = {S u + phi(u)} + W for a linear phi: Ubar -> C, C a complement of W
  // in ker P.
  std::vector<FpMatrix> proj(blocks), sec(blocks);
  std::vector<Subspace> w(blocks);
  std::vector<std::vector<Vec>> comp(blocks), lifted(blocks);
  std::vector<std::size_t> offset(blocks + 1, 0);
  for (std::size_t b = 0; b < blocks; ++b) {
    const int i = static_cast<int>(b % n);
    proj[b] = red.projection[i];
    sec[b] = red.section[i];
    const FpMatrix top = m.loop(i).power(static_cast<std::uint64_t>(m.k() - 1) * datum.sym(i));
    std::vector<Vec> wv;
    for (std::size_t a = 0; a < ubar[b].dim(); ++a) {
      lifted[b].push_back(sec[b].apply(ubar[b].basis_vector(a)));
      wv.push_back(top.apply(lifted[b].back()));
    }
    w[b] = Subspace::span(p, m.dim(i), wv);
    const Subspace kernel = image(top);
    Subspace cur = w[b];
    for (std::size_t t = 0; t < kernel.dim(); ++t) {
      Vec c = kernel.basis_vector(t);
      if (cur.contains(c)) continue;
      comp[b].push_back(c);
      cur = subspace_sum(cur, Subspace::span(p, m.dim(i), {c}));
    }
    offset[b + 1] = offset[b] + ubar[b].dim() * comp[b].size();
  }
  const std::size_t unknowns = offset[blocks];

  std::vector<Vec> rows;
  Vec rhs;
  for (const auto& x : v.maps) {
    const std::size_t sb = x.src, tb = x.tgt;
    const FpMatrix q = w[tb].quotient_map();
    const FpMatrix xbar = proj[tb] * x.matrix * sec[sb];
    std::vector<Vec> qxc, qc;
    for (const auto& c : comp[sb]) qxc.push_back(q.apply(x.matrix.apply(c)));
    for (const auto& c : comp[tb]) qc.push_back(q.apply(c));
    for (std::size_t a = 0; a < ubar[sb].dim(); ++a) {
      const Vec image_bar = xbar.apply(ubar[sb].basis_vector(a));
      const Vec coords = ubar[tb].coordinates(image_bar);
      Vec t = x.matrix.apply(lifted[sb][a]);
      const Vec back = sec[tb].apply(image_bar);
      for (std::size_t r = 0; r < t.size(); ++r) t[r] = sub_mod(t[r], back[r], p);
      const Vec qt = q.apply(t);
      for (std::size_t r = 0; r < q.rows(); ++r) {
        Vec row(unknowns, 0);
        for (std::size_t c = 0; c < comp[sb].size(); ++c) {
          auto& e = row[offset[sb] + a * comp[sb].size() + c];
          e = add_mod(e, qxc[c][r], p);
        }
        for (std::size_t a2 = 0; a2 < coords.size(); ++a2) {
          if (coords[a2] == 0) continue;
          for (std::size_t c = 0; c < comp[tb].size(); ++c) {
            auto& e = row[offset[tb] + a2 * comp[tb].size() + c];
            e = sub_mod(e, mul_mod(coords[a2], qc[c][r], p), p);
          }
        }
        rows.push_back(std::move(row));
        rhs.push_back(sub_mod(0, qt[r], p));
      }
    }
  }

  ReductionFiber out;
  FpMatrix system(p, rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), system.row_ptr(r));
  if (auto sol = solve(system, rhs)) {
    out.nonempty = true;
    out.particular = sol->particular;
    for (std::size_t t = 0; t < sol->kernel.dim(); ++t) out.kernel.push_back(sol->kernel.basis_vector(t));
    out.dimension = out.kernel.size();
  }

  // dim Hom_{H(1,l)}(U/eps U, Q/eps Q) for the base flag.
  {
    const LinearRep vbar = repetitive_module(red.module, l).to_rep();
    SubQuotientRep sq = sub_quotient(vbar, ubar);
    auto mod_eps = [&](const LinearRep& x) {
      std::vector<Subspace> eps_image;
      for (std::size_t b = 0; b < blocks; ++b) {
        const int s = static_cast<int>(b / n), i = static_cast<int>(b % n);
        eps_image.push_back(image(x.maps[loop_map_index(datum, s, i)].matrix.power(datum.sym(i))));
      }
      return sub_quotient(x, eps_image).quotient;
    };
    out.expected_dimension = hom_basis(mod_eps(sq.sub), mod_eps(sq.quotient)).size();
  }

  if (out.nonempty) {
    auto shared = std::make_shared<ReductionFiber>(out);
    out.point = [shared, comp, lifted, w, offset, brseq = base.brseq, n, p, l, dims = v.dims](const Vec& coeffs) {
      if (coeffs.size() != shared->kernel.size()) throw Error(Errc::DimensionMismatch, "one coefficient per fiber dimension");
      Vec y = shared->particular;
      for (std::size_t t = 0; t < coeffs.size(); ++t)
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = add_mod(y[r], mul_mod(coeffs[t], shared->kernel[t][r], p), p);
      FlagOfSubmodules f{brseq, std::vector<std::vector<Subspace>>(static_cast<std::size_t>(l - 1))};
      for (std::size_t b = 0; b < comp.size(); ++b) {
        std::vector<Vec> vectors;
        for (std::size_t a = 0; a < lifted[b].size(); ++a) {
          Vec u = lifted[b][a];
          for (std::size_t c = 0; c < comp[b].size(); ++c) {
            const std::uint32_t coef = y[offset[b] + a * comp[b].size() + c];
            if (coef == 0) continue;
            for (std::size_t r = 0; r < u.size(); ++r) u[r] = add_mod(u[r], mul_mod(coef, comp[b][c][r], p), p);
          }
          vectors.push_back(std::move(u));
        }
        for (std::size_t t = 0; t < w[b].dim(); ++t) vectors.push_back(w[b].basis_vector(t));
        f.layers[b / n].push_back(Subspace::span(p, dims[b], vectors));
      }
      return f;
    };
  }
  return out;
}

BundleReport bundle_ratio_check(const HModule& m, const std::vector<RankVector>& brseq,
                                const std::vector<std::uint32_t>& primes, const EnumerationOptions& options) {
  if (m.k() < 2) throw Error(Errc::KTooSmall, "reduction needs k >= 2");
  BundleReport out;
  out.brseq = brseq;
  out.k = m.k();
  const long long d = flag_dimension(m.datum(), brseq);
  for (auto q : primes) {
    const HModule mq = q == m.p() ? m : reduce_mod_p(m, q);
    BundleRow row;
    row.q = q;
    row.d = d;
    row.count = point_count(mq, brseq, options);
    row.reduced_count = point_count(reduce(mq).module, brseq, options);
    if (d >= 0) {
      row.ok = BigInt(row.count) == BigInt(row.reduced_count) * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(d));
    } else {
      row.ok = row.count == 0 && row.reduced_count == 0;
    }
    out.ok = out.ok && row.ok;
    out.rows.push_back(row);
  }
  return out;
}

PointCountTable tabulate_counts(const HModule& m, const std::vector<RankVector>& brseq,
                                const std::vector<std::uint32_t>& primes, const EnumerationOptions& options) {
  PointCountTable out;
  out.brseq = brseq;
  out.k = m.k();
  out.degree_bound = static_cast<int>(std::max(0LL, m.k() * flag_dimension(m.datum(), brseq)));
  for (auto q : primes) {
    const HModule mq = q == m.p() ? m : reduce_mod_p(m, q);
    out.counts.push_back({static_cast<std::int64_t>(q), BigInt(point_count(mq, brseq, options))});
  }
  return out;
}

PointCountTable counting_polynomial(const HModule& m, const std::vector<RankVector>& brseq,
                                    const std::vector<std::uint32_t>& primes, std::optional<int> degree_bound,
                                    const EnumerationOptions& options) {
  const long long d = flag_dimension(m.datum(), brseq);
  const int bound = degree_bound ? *degree_bound : static_cast<int>(std::max(0LL, m.k() * d));
  if (bound < 0) throw Error(Errc::InvalidInput, "negative degree bound");
  if (primes.size() < static_cast<std::size_t>(bound) + 1) {
    throw Error(Errc::NotEnoughPrimes, "degree bound " + std::to_string(bound) + " needs " + std::to_string(bound + 1) +
                                           " primes, got " + std::to_string(primes.size()));
  }
  PointCountTable out = tabulate_counts(m, brseq, primes, options);
  out.degree_bound = bound;
  try {
    out.polynomial = lagrange_interpolate(out.counts, bound);
  } catch (const Error& e) {
    if (e.code() != Errc::NonIntegerCoefficient && e.code() != Errc::InconsistentPoints) throw;
    throw Error(Errc::NonIntegerCoefficient,
                "no integer polynomial of degree <= " + std::to_string(bound) + " fits the counts (" + e.what() + ")");
  }
  out.chi_estimate = (*out.polynomial)(BigInt(1));
  return out;
}

nlohmann::json to_json(const PointCountTable& table) {
  nlohmann::json out;
  out["brseq"] = brseq_json(table.brseq);
  out["k"] = table.k;
  out["degree_bound"] = table.degree_bound;
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& c : table.counts) counts.push_back({{"q", c.q}, {"count", big_to_json(c.count)}});
  out["counts"] = counts;
  if (table.polynomial) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : table.polynomial->coefficients) coeffs.push_back(big_to_json(c));
    out["polynomial"] = {{"coefficients", coeffs}, {"text", table.polynomial->to_string()}};
  } else {
    out["polynomial"] = nullptr;
  }
  out["chi_estimate"] = table.chi_estimate ? big_to_json(*table.chi_estimate) : nlohmann::json(nullptr);
  return out;
}

std::string to_csv(const PointCountTable& table) {
  std::ostringstream os;
  os << "q,count\n";
  for (const auto& c : table.counts) os << c.q << ',' << c.count << '\n';
  return os.str();
}

nlohmann::json to_json(const FlagOfSubmodules& flag) {
  nlohmann::json out;
  out["brseq"] = brseq_json(flag.brseq);
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : flag.layers) {
    nlohmann::json per_vertex = nlohmann::json::array();
    for (const auto& u : layer) {
      nlohmann::json basis = nlohmann::json::array();
      for (std::size_t t = 0; t < u.dim(); ++t) basis.push_back(u.basis_vector(t));
      per_vertex.push_back(basis);
    }
    layers.push_back(per_vertex);
  }
  out["layers"] = layers;
  return out;
}

nlohmann::json to_json(const BundleReport& report) {
  nlohmann::json out;
  out["brseq"] = brseq_json(report.brseq);
  out["k"] = report.k;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"q", r.q}, {"count", r.count}, {"reduced_count", r.reduced_count}, {"d", r.d}, {"ok", r.ok}});
  }
  out["rows"] = rows;
  out["ok"] = report.ok;
  return out;
}

}  // namespace hkrep
