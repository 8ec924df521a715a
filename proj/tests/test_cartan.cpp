#include "doctest.h"

#include "fixtures.hpp"
#include "hkrep/error.hpp"

using namespace hkrep;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidInput;
}

}  // namespace

TEST_CASE("Cartan validation") {
  auto a2 = validate_cartan({{2, -1}, {-1, 2}}, {1, 1});
  CHECK(a2.g(0, 1) == 1);
  CHECK(a2.f(0, 1) == 1);
  CHECK(a2.f(1, 0) == 1);
  auto b2 = validate_cartan({{2, -1}, {-2, 2}}, {2, 1});
  CHECK(b2.g(0, 1) == 1);
  CHECK(b2.f(0, 1) == 1);
  CHECK(b2.f(1, 0) == 2);
  CHECK(code_of([] { validate_cartan({{2, -1}, {-2, 2}}, {1, 1}); }) == Errc::SymmetrizerMismatch);
  CHECK(code_of([] { validate_cartan({{1, -1}, {-1, 2}}, {1, 1}); }) == Errc::DiagonalNotTwo);
  CHECK(code_of([] { validate_cartan({{2, 1}, {1, 2}}, {1, 1}); }) == Errc::PositiveOffDiagonal);
  CHECK(code_of([] { validate_cartan({{2, -1}, {-1, 2}}, {0, 0}); }) == Errc::NonPositiveSymmetrizer);
}

TEST_CASE("orientation validation") {
  auto a2 = validate_cartan({{2, -1}, {-1, 2}}, {1, 1});
  CHECK(validate_orientation(a2, {{0, 1}}).has_orientation());
  CHECK(code_of([&] { validate_orientation(a2, {{0, 1}, {1, 0}}); }) == Errc::BothDirections);
  CHECK(code_of([&] { validate_orientation(a2, {}); }) == Errc::MissingPair);
  auto tri = validate_cartan({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}, {1, 1, 1});
  CHECK(code_of([&] { validate_orientation(tri, {{0, 1}, {1, 2}, {2, 0}}); }) == Errc::CycleInOrientation);
  CHECK(validate_orientation(tri, suggest_orientation(tri)).has_orientation());
}

TEST_CASE("quiver") {
  auto q1 = build_quiver(*fixtures::a2(), 1);
  CHECK(q1.arrows.size() == 1);
  CHECK(q1.loop_orders == std::vector<int>{1, 1});
  CHECK(build_quiver(*fixtures::a2(), 2).loop_orders == std::vector<int>{2, 2});
  CHECK(build_quiver(*fixtures::kronecker(), 1).arrows.size() == 2);
  CHECK(build_quiver(*fixtures::b2(), 3).loop_orders == std::vector<int>{6, 3});
}

TEST_CASE("bilinear forms") {
  auto a2 = fixtures::a2();
  auto b2 = fixtures::b2();
  CHECK(euler_form(*a2, 1, {1, 1}, {1, 1}) == 1);
  CHECK(euler_form(*b2, 1, {1, 1}, {1, 1}) == 1);
  CHECK(euler_form(*b2, 3, {1, 0}, {1, 0}) == 6);
  CHECK(symmetrizer_form(*a2, 1, {1, 0}, {0, 1}) == 0);
  CHECK(symmetrizer_form(*a2, 2, {1, 1}, {1, 1}) == 4);
  CHECK(code_of([&] { euler_form(*a2, 1, {1}, {1, 1}); }) == Errc::LengthMismatch);
  // k-linearity and bilinearity on a grid.
  for (auto d : {a2, b2, fixtures::kronecker()}) {
    for (int a0 = -1; a0 <= 2; ++a0)
      for (int a1 = -1; a1 <= 2; ++a1)
        for (int b0 = -1; b0 <= 2; ++b0)
          for (int b1 = -1; b1 <= 2; ++b1) {
            RankVector a{a0, a1}, b{b0, b1};
            CHECK(euler_form(*d, 3, a, b) == 3 * euler_form(*d, 1, a, b));
            CHECK(euler_form(*d, 1, a + a, b) == 2 * euler_form(*d, 1, a, b));
            CHECK(symmetrizer_form(*d, 2, a, b) == symmetrizer_form(*d, 2, b, a));
          }
    for (auto [i, j] : d->omega()) CHECK(d->sym(i) * d->f(i, j) == d->sym(j) * d->f(j, i));
  }
  auto empty = fixtures::disconnected({1, 2});
  CHECK(euler_form(*empty, 2, {1, 2}, {3, 1}) == symmetrizer_form(*empty, 2, {1, 2}, {3, 1}));
}

TEST_CASE("flag dimension") {
  auto a2 = fixtures::a2();
  CHECK(flag_dimension(*a2, {{1, 0}, {0, 1}}) == 0);
  CHECK(flag_dimension(*a2, {{0, 1}, {1, 0}}) == -1);
  CHECK(flag_dimension(*a2, {{0, 1}, {1, 0}, {0, 0}}) == -1);
  CHECK(code_of([&] { flag_dimension(*a2, {{1, 1}}); }) == Errc::LengthMismatch);
}
