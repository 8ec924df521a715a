#pragma once

#include <cstdint>
#include <vector>

#include "hkrep/cartan.hpp"
#include "hkrep/flags.hpp"
#include "hkrep/hmodule.hpp"

namespace fixtures {

inline hkrep::DatumPtr a2() { return hkrep::make_datum({{2, -1}, {-1, 2}}, {1, 1}, {{0, 1}}); }
inline hkrep::DatumPtr b2() { return hkrep::make_datum({{2, -1}, {-2, 2}}, {2, 1}, {{0, 1}}); }
inline hkrep::DatumPtr kronecker() { return hkrep::make_datum({{2, -2}, {-2, 2}}, {1, 1}, {{0, 1}}); }
inline hkrep::DatumPtr disconnected(std::vector<int> d) {
  std::vector<std::vector<int>> c(d.size(), std::vector<int>(d.size(), 0));
  for (std::size_t i = 0; i < d.size(); ++i) c[i][i] = 2;
  return hkrep::make_datum(c, d, {});
}

// A_2, k = 2: generators x at 1 and y at 2 with alpha(y) = eps_1 x.
inline hkrep::HModule example_m(std::uint32_t p) {
  auto s = hkrep::zero_structure(a2(), 2, {1, 1});
  s.blocks[0](0, 0, 1) = 1;
  return hkrep::from_structure_matrices(s, p);
}

// A_2, rank (2,2): alpha(y_1) = x_0, all other structure coefficients zero.
inline hkrep::HModule module_n(int k, std::uint32_t p) {
  auto s = hkrep::zero_structure(a2(), k, {2, 2});
  s.blocks[0](0, 1, 0) = 1;
  return hkrep::from_structure_matrices(s, p);
}

// A_2 rank (1,1) with alpha(y) = x: the indecomposable rigid module.
inline hkrep::HModule a2_rigid(int k, std::uint32_t p) {
  auto s = hkrep::zero_structure(a2(), k, {1, 1});
  s.blocks[0](0, 0, 0) = 1;
  return hkrep::from_structure_matrices(s, p);
}

// Free rank-one submodule of H^2 generated by first * x_0 + second * x_1,
// polynomials given by their coefficients.
inline hkrep::Subspace line(int order, std::uint32_t q, const hkrep::Vec& first, const hkrep::Vec& second) {
  std::vector<hkrep::Vec> vectors;
  for (int t = 0; t < order; ++t) {
    hkrep::Vec v(2 * order, 0);
    for (int s = 0; s + t < order; ++s) {
      if (s < static_cast<int>(first.size())) v[s + t] = first[s];
      if (s < static_cast<int>(second.size())) v[order + s + t] = second[s];
    }
    vectors.push_back(v);
  }
  return hkrep::Subspace::span(q, 2 * order, vectors);
}

inline hkrep::FlagOfSubmodules grlf_point(const hkrep::Subspace& u1, const hkrep::Subspace& u2) {
  return {{{1, 1}, {1, 1}}, {{u1, u2}}};
}

// Grlf by brute force over all pairs of subspaces of the right dimension.
inline std::uint64_t brute_force_grlf(const hkrep::HModule& m, const hkrep::RankVector& e) {
  const hkrep::LinearRep rep = m.to_rep();
  std::vector<std::vector<hkrep::Subspace>> per_vertex;
  for (int i = 0; i < m.n(); ++i) {
    std::vector<hkrep::Subspace> keep;
    for (auto& u : hkrep::enumerate_subspaces(m.dim(i), e[i] * m.datum().loop_order(i, m.k()), m.p()))
      if (u.image_under(m.loop(i)).dim() + e[i] == u.dim()) keep.push_back(u);
    per_vertex.push_back(std::move(keep));
  }
  std::uint64_t count = 0;
  for (const auto& u0 : per_vertex[0])
    for (const auto& u1 : per_vertex[1]) {
      std::vector<hkrep::Subspace> u{u0, u1};
      if (!hkrep::is_invariant(rep, u)) continue;
      hkrep::HSubQuotient sq = hkrep::sub_quotient(m, u);
      if (hkrep::is_locally_free(sq.sub) && hkrep::is_locally_free(sq.quotient)) ++count;
    }
  return count;
}

// (a, b) in (F_q[eps]/eps^k)^2 with ab = 0.
inline std::uint64_t zero_product_pairs(int k, std::uint32_t q) {
  std::uint64_t total = 1, count = 0;
  for (int t = 0; t < k; ++t) total *= q;
  auto digits = [&](std::uint64_t x) {
    std::vector<std::uint32_t> d(k);
    for (auto& c : d) {
      c = x % q;
      x /= q;
    }
    return d;
  };
  for (std::uint64_t x = 0; x < total; ++x)
    for (std::uint64_t y = 0; y < total; ++y) {
      auto a = digits(x), b = digits(y);
      bool zero = true;
      for (int deg = 0; deg < k && zero; ++deg) {
        std::uint64_t s = 0;
        for (int i = 0; i <= deg; ++i) s += static_cast<std::uint64_t>(a[i]) * b[deg - i];
        zero = s % q == 0;
      }
      if (zero) ++count;
    }
  return count;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::uint64_t q_factorial(int n, std::uint64_t q) {
  std::uint64_t r = 1;
  for (int m = 1; m <= n; ++m) {
    std::uint64_t qm = 0;
    for (int t = 0; t < m; ++t) qm += ipow(q, t);
    r *= qm;
  }
  return r;
}

// A_2 rank (2,1), alpha(y) = x_0: P_2 + E_1, rigid at every k and p.
inline hkrep::HModule rigid21(int k, std::uint32_t p) {
  auto s = hkrep::zero_structure(a2(), k, {2, 1});
  s.blocks[0](0, 0, 0) = 1;
  return hkrep::from_structure_matrices(s, p);
}

}  // namespace fixtures
