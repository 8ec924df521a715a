#include "doctest.h"

#include "fixtures.hpp"
#include "hkrep/decomposition.hpp"

using namespace hkrep;

namespace {

std::vector<RankVector> sorted(std::vector<RankVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("Krull-Schmidt on explicit modules") {
  auto a2 = fixtures::a2();
  auto e = krull_schmidt(free_module(a2, 2, 3, {2, 1}));
  CHECK(e.verified);
  CHECK(e.rank_vectors() == sorted({{1, 0}, {1, 0}, {0, 1}}));
  for (int k = 1; k <= 3; ++k) {
    auto n = krull_schmidt(fixtures::module_n(k, 2));
    CHECK(n.verified);
    CHECK(n.rank_vectors() == sorted({{1, 0}, {0, 1}, {1, 1}}));
    // Parts are pairwise non-isomorphic.
    for (std::size_t a = 0; a < n.parts.size(); ++a)
      for (std::size_t b = a + 1; b < n.parts.size(); ++b)
        if (n.parts[a].module.dims() == n.parts[b].module.dims())
          CHECK_FALSE(are_isomorphic(n.parts[a].module, n.parts[b].module).isomorphic);
  }
  auto rigid = krull_schmidt(fixtures::a2_rigid(1, 2));
  REQUIRE(rigid.parts.size() == 1);
  CHECK(rigid.certain);
  CHECK(rigid.parts[0].certain);
  CHECK(krull_schmidt(zero_module(a2, 1, 2)).parts.empty());
  // The rebuilt direct sum is isomorphic to the input.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    HModule m = random_locally_free(fixtures::b2(), 2, 3, {2, 1}, seed);
    auto res = krull_schmidt(m);
    HModule sum = res.parts.front().module;
    for (std::size_t t = 1; t < res.parts.size(); ++t) sum = direct_sum(sum, res.parts[t].module);
    CHECK(are_isomorphic(sum, m).isomorphic);
    RankVector total(2);
    for (const auto& r : res.rank_vectors()) total = total + r;
    CHECK(total == RankVector{2, 1});
  }
}

TEST_CASE("generic Ext") {
  auto a2 = fixtures::a2();
  CHECK(ext_generic(a2, 1, 3, {1, 0}, {0, 1}).value == 0);
  CHECK(ext_generic(a2, 1, 3, {0, 1}, {1, 0}).value == 1);
  CHECK(ext_generic(a2, 2, 3, {0, 1}, {1, 0}).value == 2);
  CHECK(ext_generic(a2, 1, 3, {1, 1}, {0, 0}).value == 0);
  CHECK(ext_generic(fixtures::kronecker(), 1, 2, {1, 1}, {1, 1}).value == 0);
}

TEST_CASE("Schur roots") {
  auto a2 = fixtures::a2();
  CHECK(is_schur_root(a2, 1, 3, {1, 0}).schur);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto s = is_schur_root(a2, 1, p, {1, 1});
    CHECK(s.schur);
    CHECK(s.exhaustive);
    CHECK(s.rate == doctest::Approx(static_cast<double>(p - 1) / p));
    CHECK(s.generic_rate == doctest::Approx(1.0));
  }
  CHECK_FALSE(is_schur_root(fixtures::disconnected({1, 1}), 1, 3, {1, 1}).schur);
  CHECK(is_schur_root(fixtures::kronecker(), 2, 2, {1, 1}).schur);
}

TEST_CASE("canonical decompositions") {
  auto a2 = fixtures::a2();
  for (int k = 1; k <= 3; ++k) {
    auto rep = canonical_decomposition(a2, k, 2, {1, 1});
    CHECK(rep.parts == std::vector<RankVector>{{1, 1}});
    CHECK(rep.criteria_hold());
    CHECK(rep.exhaustive);
  }
  auto empty = canonical_decomposition(fixtures::disconnected({1, 2}), 2, 3, {2, 1});
  CHECK(empty.parts == sorted({{1, 0}, {1, 0}, {0, 1}}));
  CHECK(empty.criteria_hold());
  // Kronecker (2,1): the preprojective module of that dimension is generic.
  for (int k = 1; k <= 2; ++k) {
    auto kr = canonical_decomposition(fixtures::kronecker(), k, 2, {2, 1});
    CHECK(kr.parts == std::vector<RankVector>{{2, 1}});
    CHECK(kr.criteria_hold());
  }
  auto zero = canonical_decomposition(a2, 1, 2, {0, 0});
  CHECK(zero.parts.empty());
  auto kind = k_independence_check(fixtures::b2(), 2, {1, 1}, 3);
  CHECK(kind.agree);
  auto j = to_json(kind);
  CHECK(j["agree"] == true);
  CHECK(j["per_k"].size() == 3);
}
