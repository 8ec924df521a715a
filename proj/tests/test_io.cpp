#include "doctest.h"

#include "fixtures.hpp"
#include "hkrep/error.hpp"
#include "hkrep/homext.hpp"
#include "hkrep/io.hpp"

using namespace hkrep;
using nlohmann::json;

TEST_CASE("config parsing") {
  Config a = parse_config(json::parse(R"({"n":2,"C":[[2,-1],[-1,2]],"D":[1,1],"omega":[[1,2]]})"));
  CHECK(a.k == 1);
  CHECK(a.p == 5);
  CHECK(*a.datum == *fixtures::a2());

  json t = parse_toml_subset("# comment\nn = 2\nC = [[2, -1], # first row\n     [-2, 2],]\nD = [2, 1]\nomega = [[1, 2]]\nk = 3\np = 7\n");
  Config b = parse_config(t);
  CHECK(*b.datum == *fixtures::b2());
  CHECK(b.k == 3);
  CHECK(b.p == 7);

  auto code = [](const std::string& text) {
    try {
      parse_config(json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidInput;
  };
  CHECK(code(R"({"n":2,"C":[[2,-1],[-2,2]],"D":[1,1],"omega":[[1,2]]})") == Errc::SymmetrizerMismatch);
  CHECK(code(R"({"n":2,"C":[[2,-1],[-1,2]],"D":[1,1],"omega":[[1,2]],"p":6})") == Errc::NotPrime);
  CHECK(code(R"({"n":3,"C":[[2,-1],[-1,2]],"D":[1,1]})") == Errc::LengthMismatch);
  CHECK(code(R"({"n":2,"C":[[2,-1],[-1,2]],"D":[1,1],"omega":[[1,3]]})") == Errc::InvalidInput);
  CHECK_THROWS_AS(parse_toml_subset("n = [1, 2"), Error);
  CHECK_THROWS_AS(parse_toml_subset("just words"), Error);
}

TEST_CASE("module files round trip") {
  for (auto d : {fixtures::a2(), fixtures::b2(), fixtures::kronecker()})
    for (int k = 1; k <= 2; ++k)
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        StructureMatrices s = random_structure(d, k, 5, {1, 2}, seed);
        HModule m = from_structure_matrices(s, 5);
        json j = module_to_json(m);
        CHECK(j["format_version"] == kFormatVersion);
        HModule back = module_from_json(d, json::parse(j.dump()));
        CHECK(to_structure_matrices(back) == s);
        CHECK(back.lift()->arrows == m.lift()->arrows);
      }
  // Integer entries outside [0, p) survive, so the file works at other primes.
  auto s = zero_structure(fixtures::a2(), 2, {1, 1});
  s.blocks[0](0, 0, 0) = -1;
  s.blocks[0](0, 0, 1) = 4;
  HModule m = from_structure_matrices(s, 3);
  HModule back = module_from_json(fixtures::a2(), module_to_json(m));
  CHECK(reduce_mod_p(back, 7).arrows() == from_structure_matrices(s, 7).arrows());

  // Raw form for modules that are not locally free.
  HModule simple = simple_module(fixtures::b2(), 1, 3, 0);
  json raw = module_to_json(simple);
  CHECK(raw.contains("eps"));
  HModule simple_back = module_from_json(fixtures::b2(), raw);
  CHECK(simple_back.loops() == simple.loops());
  CHECK(simple_back.dims() == simple.dims());

  json bad = json::parse(R"({"k":1,"p":5,"dims":[1,1],"eps":[[[1]],[[0]]],"arrow":[[[1]]]})");
  CHECK_THROWS_AS(module_from_json(fixtures::a2(), bad), Error);
  json wide = json::parse(R"j({"k":1,"p":5,"rank":[1,1],"structure":{"(1,2)":[[[0,1]]]}})j");
  try {
    module_from_json(fixtures::a2(), wide);
    FAIL("expected EntryDegreeOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EntryDegreeOverflow);
  }
  json stray = json::parse(R"j({"k":1,"p":5,"rank":[1,1],"structure":{"(2,1)":[[[1]]]}})j");
  CHECK_THROWS_AS(module_from_json(fixtures::a2(), stray), Error);
}

TEST_CASE("rank and brseq arguments") {
  CHECK(parse_rank("1, 0,2", 3) == RankVector{1, 0, 2});
  CHECK(parse_rank("", 2) == RankVector{0, 0});
  CHECK_THROWS_AS(parse_rank("1,2", 3), Error);
  CHECK_THROWS_AS(parse_rank("1,x", 2), Error);
  CHECK_THROWS_AS(parse_rank("1,-1", 2), Error);
  auto b = parse_brseq("1,0;0,1", 2);
  REQUIRE(b.size() == 2);
  CHECK(b[1] == RankVector{0, 1});
  CHECK(parse_brseq("1,0/0,1", 2) == b);
  CHECK_THROWS_AS(parse_brseq("", 2), Error);
}

TEST_CASE("integer rigid lifts") {
  auto found = find_rigid_lift(fixtures::a2(), 2, {2, 1}, {2, 3}, 50, 1);
  REQUIRE(found.structure);
  CHECK(found.exhaustive);
  for (std::uint32_t q : {2u, 3u, 5u}) CHECK(is_rigid(from_structure_matrices(*found.structure, q)));
  // The Kronecker rank (1,1) has no rigid module at all.
  auto none = find_rigid_lift(fixtures::kronecker(), 1, {1, 1}, {2}, 50, 1);
  CHECK_FALSE(none.structure);
  CHECK(none.exhaustive);
}
