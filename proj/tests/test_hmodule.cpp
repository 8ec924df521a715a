#include "doctest.h"

#include "fixtures.hpp"
#include "hkrep/error.hpp"
#include "hkrep/random.hpp"

using namespace hkrep;

namespace {

FpMatrix random_invertible(std::uint32_t p, std::size_t n, std::uint64_t seed) {
  FieldSampler s(p, seed);
  for (;;) {
    FpMatrix m(p, n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = s();
    if (rank(m) == n) return m;
  }
}

std::vector<DatumPtr> all_data() {
  return {fixtures::a2(), fixtures::b2(), fixtures::kronecker(),
          make_datum({{2, -1}, {-2, 2}}, {2, 1}, {{1, 0}}), fixtures::disconnected({1, 2})};
}

}  // namespace

TEST_CASE("validation of relations") {
  auto a2 = fixtures::a2();
  CHECK(validate(free_module(a2, 2, 5, {2, 1})).ok());
  std::vector<FpMatrix> loops{FpMatrix(5, 1, 1), FpMatrix::from_rows(5, {{0, 0}, {1, 0}})};
  std::vector<FpMatrix> arrows{FpMatrix::from_rows(5, {{0, 1}})};
  HModule bad(a2, 2, 5, {1, 2}, loops, arrows);
  auto report = validate(bad);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].code == Errc::RelationH2Violated);
  CHECK_THROWS_AS(HModule(a2, 2, 5, {1, 1}, loops, arrows), Error);

  HModule m = fixtures::example_m(5);
  CHECK(validate(m).ok());
  // alpha sends the generator of vertex 2 to eps_1 times the generator of vertex 1.
  CHECK(m.arrows()[0] == FpMatrix::from_rows(5, {{0, 0}, {1, 0}}));
}

TEST_CASE("local freeness and rank vectors") {
  auto a2 = fixtures::a2();
  CHECK(is_locally_free(free_module(a2, 3, 2, {0, 1})));
  CHECK(rank_vector(free_module(a2, 2, 3, {0, 1})) == RankVector{0, 1});
  CHECK(rank_vector(free_module(a2, 2, 3, {3, 2})) == RankVector{3, 2});
  CHECK_FALSE(is_locally_free(simple_module(a2, 2, 3, 0)));
  CHECK(is_locally_free(simple_module(a2, 1, 3, 0)));
  CHECK(rank_vector(fixtures::example_m(2)) == RankVector{1, 1});
  CHECK_THROWS_AS(rank_vector(simple_module(a2, 2, 3, 1)), Error);
  auto e = free_module(fixtures::b2(), 2, 3, {1, 0});
  CHECK(e.dims() == std::vector<int>{4, 0});
  CHECK(zero_module(a2, 2, 3).total_dim() == 0);
}

TEST_CASE("structure matrices") {
  CHECK(structure_parameter_count(*fixtures::a2(), 1, {1, 1}) == 1);
  CHECK(structure_parameter_count(*fixtures::b2(), 2, {1, 1}) == 4);
  for (const auto& d : all_data()) {
    for (int k = 1; k <= 3; ++k) {
      for (std::uint32_t p : {2u, 3u, 5u}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          RankVector r{1 + static_cast<int>(seed % 2), 2 - static_cast<int>(seed % 2)};
          auto s = random_structure(d, k, p, r, seed);
          HModule m = from_structure_matrices(s, p);
          CHECK(validate(m).ok());
          CHECK(is_locally_free(m));
          CHECK(rank_vector(m) == r);
          CHECK(m.is_standard_form());
          CHECK(to_structure_matrices(m) == s);
          // Central element: commutes with everything and eps^k = 0.
          auto eps = m.central_action();
          for (std::size_t a = 0; a < d->arrows().size(); ++a) {
            const auto& spec = d->arrows()[a];
            CHECK(eps[spec.head] * m.arrows()[a] == m.arrows()[a] * eps[spec.tail]);
          }
          for (auto& e : eps) CHECK(e.power(k).is_zero());
        }
      }
    }
  }
  auto s1 = random_structure(fixtures::b2(), 2, 7, {2, 1}, 99);
  auto s2 = random_structure(fixtures::b2(), 2, 7, {2, 1}, 99);
  CHECK(s1 == s2);
  CHECK(from_structure_matrices(zero_structure(fixtures::a2(), 2, {1, 2}), 3).arrows()[0].is_zero());
  auto over = zero_structure(fixtures::a2(), 1, {1, 1});
  over.blocks[0].length = 2;
  over.blocks[0].coeffs = {0, 1};
  CHECK_THROWS_AS(from_structure_matrices(over, 3), Error);
}

TEST_CASE("normalization") {
  for (const auto& d : all_data()) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const std::uint32_t p = seed % 2 ? 3 : 2;
      HModule m = random_locally_free(d, 2, p, {1, 2}, seed);
      std::vector<FpMatrix> basis, inv;
      for (int i = 0; i < m.n(); ++i) {
        basis.push_back(random_invertible(p, m.dim(i), seed * 31 + i));
        inv.push_back(*inverse(basis.back()));
      }
      HModule twisted = HModule::from_rep(d, 2, change_basis(m.to_rep(), basis, inv));
      CHECK(validate(twisted).ok());
      NormalizedModule nm = normalize(twisted);
      CHECK(nm.module.is_standard_form());
      CHECK(rank_vector(nm.module) == RankVector{1, 2});
      // The basis change really conjugates the twisted module into the normal form.
      for (int i = 0; i < m.n(); ++i) CHECK(nm.inverse[i] * nm.basis[i] == FpMatrix::identity(p, m.dim(i)));
      CHECK(is_hom(twisted.to_rep(), nm.module.to_rep(), nm.inverse));
    }
  }
}

TEST_CASE("modules N^(k)") {
  for (int k = 1; k <= 3; ++k) {
    HModule n = fixtures::module_n(k, 3);
    CHECK(rank_vector(n) == RankVector{2, 2});
    CHECK(rank(n.arrows()[0]) == static_cast<std::size_t>(k));
  }
}

TEST_CASE("lifts and direct sums") {
  HModule m = fixtures::example_m(2);
  REQUIRE(m.lift().has_value());
  HModule m5 = reduce_mod_p(m, 5);
  CHECK(m5.p() == 5);
  CHECK(rank_vector(m5) == RankVector{1, 1});
  HModule sum = direct_sum(m, free_module(fixtures::a2(), 2, 2, {1, 0}));
  CHECK(rank_vector(sum) == RankVector{2, 1});
  REQUIRE(sum.lift().has_value());
  CHECK(validate(reduce_mod_p(sum, 3)).ok());
  // An F_2 relation that breaks over F_3.
  auto a2 = fixtures::a2();
  std::vector<FpMatrix> loops{FpMatrix(2, 1, 1), FpMatrix(2, 1, 1)};
  HModule odd(a2, 1, 2, {1, 1}, loops, {FpMatrix(2, 1, 1)});
  IntegerLift lift{{IntMatrix(1, 1), IntMatrix(1, 1)}, {IntMatrix(1, 1)}};
  lift.loops[0](0, 0) = 2;
  HModule odd_lifted(a2, 1, 2, {1, 1}, loops, {FpMatrix(2, 1, 1)}, lift);
  CHECK_THROWS_AS(reduce_mod_p(odd_lifted, 3), Error);
}

TEST_CASE("sub and quotient modules") {
  HModule m = fixtures::example_m(3);
  // eps M is a submodule; its quotient is S_1 + S_2 (arrow zero).
  std::vector<Subspace> u;
  for (const auto& e : m.central_action()) u.push_back(image(e));
  HSubQuotient sq = sub_quotient(m, u);
  CHECK(sq.quotient.dims() == std::vector<int>{1, 1});
  CHECK(sq.quotient.arrows()[0].is_zero());
  std::vector<Subspace> bad{Subspace::zero(3, 2), Subspace::full(3, 2)};
  CHECK_THROWS_AS(sub_quotient(m, bad), Error);
}
