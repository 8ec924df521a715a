#include "hkrep/decomposition.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "hkrep/error.hpp"
#include "hkrep/parallel.hpp"
#include "hkrep/random.hpp"

namespace hkrep {

namespace {

struct Splitting {
  std::vector<Subspace> kernel;
  std::vector<Subspace> image;
};

// Fitting: for phi in End(M), M = ker phi^N + im phi^N with N >= every dim M_i.
std::optional<Splitting> fitting_split(const HModule& m, const Hom& phi) {
  int n = 1;
  for (int d : m.dims()) n = std::max(n, d);
  bool zero = true, invertible = true;
  Hom power;
  for (const auto& f : phi) {
    power.push_back(f.power(static_cast<std::uint64_t>(n)));
    if (!power.back().is_zero()) zero = false;
    if (rank(power.back()) != power.back().rows()) invertible = false;
  }
  if (zero || invertible) return std::nullopt;
  return Splitting{kernel_blocks(power), image_blocks(power)};
}

struct SplitSearch {
  std::optional<Splitting> split;
  bool exhaustive = false;
};

SplitSearch find_split(const HModule& m, const KsOptions& options) {
  SplitSearch out;
  HomSpace end = hom_space(m, m);
  const std::uint32_t p = m.p();
  if (end.dim() <= 1) {
    // End is the ground field (or zero): local.
    out.exhaustive = true;
    return out;
  }
  for (const auto& f : end.basis) {
    if ((out.split = fitting_split(m, f))) return out;
  }
  FieldSampler sample(p, options.seed);
  Vec coeffs(end.dim(), 0);
  for (int t = 0; t < options.trials; ++t) {
    for (auto& c : coeffs) c = sample();
    if ((out.split = fitting_split(m, linear_combination(end.basis, coeffs, p)))) return out;
  }
  std::optional<std::uint64_t> space;
  try {
    space = checked_pow(p, end.dim());
  } catch (const Error&) {
  }
  if (!space || *space > options.exhaustive_budget) return out;
  for (std::uint64_t idx = 1; idx < *space; ++idx) {
    std::uint64_t rest = idx;
    for (auto& c : coeffs) {
      c = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    if ((out.split = fitting_split(m, linear_combination(end.basis, coeffs, p)))) return out;
  }
  out.exhaustive = true;
  return out;
}

void decompose_into(const HModule& x, const Hom& inclusion, const KsOptions& options, KsResult& out) {
  if (x.total_dim() == 0) return;
  SplitSearch s = find_split(x, options);
  if (!s.split) {
    out.parts.push_back({x, inclusion, s.exhaustive});
    out.certain = out.certain && s.exhaustive;
    return;
  }
  for (const auto* blocks : {&s.split->kernel, &s.split->image}) {
    HSubQuotient sq = sub_quotient(x, *blocks);
    Hom incl;
    for (std::size_t i = 0; i < inclusion.size(); ++i) incl.push_back(inclusion[i] * sq.inclusion[i]);
    decompose_into(sq.sub, incl, options, out);
  }
}

struct SampleSet {
  bool exhaustive = false;
  std::uint64_t count = 0;
};

SampleSet plan_samples(const CartanDatum& datum, int k, std::uint32_t p, const RankVector& r,
                       const SamplingOptions& options) {
  auto space = structure_space_size(datum, k, p, r);
  if (space && *space <= options.exhaustive_limit) return {true, *space};
  return {false, options.samples};
}

HModule sample_module(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r, const SampleSet& plan,
                      std::uint64_t seed, std::uint64_t t) {
  if (plan.exhaustive) return from_structure_matrices(structure_from_index(datum, k, p, r, t), p);
  return random_locally_free(datum, k, p, r, derive_seed(seed, t));
}

struct SampleInfo {
  std::size_t end_dim = 0;
  std::vector<RankVector> parts;
  bool indecomposable = false;
};

std::vector<SampleInfo> survey(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                               const SampleSet& plan, const SamplingOptions& options, bool want_parts) {
  std::vector<SampleInfo> info(plan.count);
  parallel_for(plan.count, [&](std::size_t t) {
    HModule m = sample_module(datum, k, p, r, plan, options.seed, t);
    info[t].end_dim = hom_dim(m, m);
    KsOptions ks = options.ks;
    ks.seed = derive_seed(options.ks.seed, t);
    if (want_parts) {
      KsResult res = krull_schmidt(m, ks);
      info[t].parts = res.rank_vectors();
      info[t].indecomposable = res.parts.size() == 1;
    } else {
      info[t].indecomposable = check_indecomposable(m, ks).indecomposable;
    }
  });
  return info;
}

}  // namespace

std::vector<RankVector> KsResult::rank_vectors() const {
  std::vector<RankVector> out;
  for (const auto& part : parts) out.push_back(rank_vector(part.module));
  std::sort(out.begin(), out.end());
  return out;
}

KsResult krull_schmidt(const HModule& m, const KsOptions& options) {
  KsResult out;
  decompose_into(m, identity_map(m.to_rep()), options, out);
  // Check: the inclusions are homomorphisms whose images fill M directly.
  bool ok = true;
  const LinearRep rep = m.to_rep();
  for (int i = 0; i < m.n() && ok; ++i) {
    std::vector<Vec> cols;
    for (const auto& part : out.parts)
      for (std::size_t c = 0; c < part.inclusion[i].cols(); ++c) cols.push_back(part.inclusion[i].column(c));
    ok = cols.size() == static_cast<std::size_t>(m.dim(i)) &&
         Subspace::span(m.p(), m.dim(i), cols).dim() == static_cast<std::size_t>(m.dim(i));
  }
  for (const auto& part : out.parts) ok = ok && is_hom(part.module.to_rep(), rep, part.inclusion);
  if (!ok) throw Error(Errc::DimensionMismatch, "internal: Krull-Schmidt parts do not rebuild the module");
  out.verified = true;
  return out;
}

IndecomposableCheck check_indecomposable(const HModule& m, const KsOptions& options) {
  if (m.total_dim() == 0) return {false, true};
  SplitSearch s = find_split(m, options);
  if (s.split) return {false, true};
  return {true, s.exhaustive};
}

ExtEstimate ext_generic(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r, const RankVector& s,
                        const SamplingOptions& options) {
  ExtEstimate out;
  if (r.is_zero() || s.is_zero()) {
    out.exhaustive = true;
    return out;
  }
  auto sr = structure_space_size(*datum, k, p, r);
  auto ss = structure_space_size(*datum, k, p, s);
  out.value = -1;
  if (sr && ss && *sr <= options.exhaustive_limit && *ss <= options.exhaustive_limit / *sr) {
    out.exhaustive = true;
    std::vector<HModule> left, right;
    for (std::uint64_t a = 0; a < *sr; ++a) left.push_back(from_structure_matrices(structure_from_index(datum, k, p, r, a), p));
    for (std::uint64_t b = 0; b < *ss; ++b) right.push_back(from_structure_matrices(structure_from_index(datum, k, p, s, b), p));
    for (const auto& x : left) {
      for (const auto& y : right) {
        ++out.pairs;
        const long long e = ext1_dim(x, y);
        if (out.value < 0 || e < out.value) out.value = e;
        if (out.value == 0) return out;
      }
    }
    return out;
  }
  for (std::uint64_t t = 0; t < options.samples; ++t) {
    ++out.pairs;
    HModule x = random_locally_free(datum, k, p, r, derive_seed(options.seed, 2 * t));
    HModule y = random_locally_free(datum, k, p, s, derive_seed(options.seed, 2 * t + 1));
    const long long e = ext1_dim(x, y);
    if (out.value < 0 || e < out.value) out.value = e;
    if (out.value == 0) break;
  }
  return out;
}

SchurEstimate is_schur_root(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                            const SamplingOptions& options) {
  SchurEstimate out;
  if (r.is_zero()) return out;
  SampleSet plan = plan_samples(*datum, k, p, r, options);
  auto info = survey(datum, k, p, r, plan, options, false);
  out.exhaustive = plan.exhaustive;
  out.samples = info.size();
  std::size_t min_end = info.front().end_dim;
  for (const auto& x : info) min_end = std::min(min_end, x.end_dim);
  std::uint64_t hits = 0, generic_hits = 0;
  for (const auto& x : info) {
    hits += x.indecomposable;
    if (x.end_dim == min_end) {
      ++out.generic_samples;
      generic_hits += x.indecomposable;
    }
  }
  out.rate = static_cast<double>(hits) / static_cast<double>(out.samples);
  out.generic_rate = static_cast<double>(generic_hits) / static_cast<double>(out.generic_samples);
  out.schur = out.generic_rate > options.threshold;
  return out;
}

std::string decomposition_type(std::vector<RankVector> parts) {
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (const auto& p : parts) s += p.to_string();
  return s.empty() ? "()" : s;
}

DecompositionReport canonical_decomposition(const DatumPtr& datum, int k, std::uint32_t p, const RankVector& r,
                                            const SamplingOptions& options) {
  DecompositionReport report;
  report.k = k;
  report.p = p;
  report.rank = r;
  report.seed = options.seed;
  if (r.is_zero()) {
    report.exhaustive = true;
    return report;
  }
  SampleSet plan = plan_samples(*datum, k, p, r, options);
  report.exhaustive = plan.exhaustive;
  report.samples = plan.count;
  auto info = survey(datum, k, p, r, plan, options, true);
  report.min_end_dim = info.front().end_dim;
  for (const auto& x : info) report.min_end_dim = std::min(report.min_end_dim, x.end_dim);
  std::map<std::string, std::vector<RankVector>> representative;
  for (const auto& x : info) {
    if (x.end_dim != report.min_end_dim) continue;
    ++report.generic_samples;
    const std::string type = decomposition_type(x.parts);
    ++report.type_counts[type];
    representative.emplace(type, x.parts);
  }
  // Majority; ties go to the lexicographically first type.
  for (const auto& [type, count] : report.type_counts) {
    if (count > report.majority_count) {
      report.majority_count = count;
      report.parts = representative[type];
    }
  }

  SamplingOptions sub = options;
  sub.seed = derive_seed(options.seed, 0x5c);
  std::map<RankVector, SchurEstimate> schur_cache;
  for (const auto& part : report.parts) {
    auto it = schur_cache.find(part);
    if (it == schur_cache.end()) it = schur_cache.emplace(part, is_schur_root(datum, k, p, part, sub)).first;
    report.schur.push_back(it->second);
    if (!it->second.schur) report.criterion_schur = false;
  }
  std::map<std::pair<RankVector, RankVector>, long long> ext_cache;
  const std::size_t np = report.parts.size();
  report.ext.assign(np, std::vector<long long>(np, 0));
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = 0; b < np; ++b) {
      if (a == b) continue;
      auto key = std::make_pair(report.parts[a], report.parts[b]);
      auto it = ext_cache.find(key);
      if (it == ext_cache.end()) {
        it = ext_cache.emplace(key, ext_generic(datum, k, p, key.first, key.second, sub).value).first;
      }
      report.ext[a][b] = it->second;
      if (it->second != 0) report.criterion_ext = false;
    }
  }
  return report;
}

KIndependenceReport k_independence_check(const DatumPtr& datum, std::uint32_t p, const RankVector& r, int k_max,
                                         const SamplingOptions& options) {
  if (k_max < 1) throw Error(Errc::KTooSmall, "k_max must be positive");
  KIndependenceReport out;
  for (int k = 1; k <= k_max; ++k) {
    out.per_k.push_back(canonical_decomposition(datum, k, p, r, options));
    if (out.per_k.back().parts != out.per_k.front().parts) out.agree = false;
  }
  return out;
}

namespace {

nlohmann::json rank_json(const RankVector& r) { return r.values(); }

}  // namespace

nlohmann::json to_json(const DecompositionReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["p"] = report.p;
  j["rank"] = rank_json(report.rank);
  j["parts"] = nlohmann::json::array();
  for (const auto& part : report.parts) j["parts"].push_back(rank_json(part));
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["exhaustive"] = report.exhaustive;
  j["min_end_dim"] = report.min_end_dim;
  j["generic_samples"] = report.generic_samples;
  j["majority_count"] = report.majority_count;
  j["type_counts"] = report.type_counts;
  j["schur"] = nlohmann::json::array();
  for (std::size_t a = 0; a < report.schur.size(); ++a) {
    const auto& s = report.schur[a];
    j["schur"].push_back({{"part", rank_json(report.parts[a])},
                          {"schur", s.schur},
                          {"rate", s.rate},
                          {"generic_rate", s.generic_rate},
                          {"samples", s.samples},
                          {"generic_samples", s.generic_samples},
                          {"exhaustive", s.exhaustive}});
  }
  j["ext"] = report.ext;
  j["criterion_schur"] = report.criterion_schur;
  j["criterion_ext"] = report.criterion_ext;
  return j;
}

nlohmann::json to_json(const KIndependenceReport& report) {
  nlohmann::json j;
  j["agree"] = report.agree;
  j["per_k"] = nlohmann::json::array();
  for (const auto& r : report.per_k) j["per_k"].push_back(to_json(r));
  return j;
}

}  // namespace hkrep
