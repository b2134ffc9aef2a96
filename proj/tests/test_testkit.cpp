#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "tpenum/enumerate.hpp"
#include "tpenum/testkit.hpp"

using namespace tpenum;

TEST_CASE("oracle enumerates projected homomorphisms") {
  auto tri = fixtures::triangle();
  auto k3 = fixtures::k3_neq();
  CHECK(oracle_enumerate(tri, k3, {}).size() == 1);  // just the empty map
  CHECK(oracle_enumerate(tri, k3, {"x"}).size() == 3);
  CHECK(oracle_enumerate(tri, k3, {"x", "y", "z"}).size() == 6);
  CHECK(oracle_enumerate(tri, fixtures::k2(), {}).empty());

  auto sols = oracle_enumerate(tri, k3, {"x", "y"});
  CHECK(std::is_sorted(sols.begin(), sols.end()));
  CHECK(sols.size() == 6);
  for (const auto& s : sols) CHECK(s.at("x") != s.at("y"));
}

TEST_CASE("oracle agrees with the exhaustive homomorphism search") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 25; ++i) {
    auto s = sample_instance({}, rng);
    auto maps = all_homomorphisms(s.a, s.b);
    std::set<PartialMap> projected;
    for (const auto& h : maps) {
      PartialMap p;
      for (const auto& v : s.output) p[v] = h.at(v);
      projected.insert(p);
    }
    auto got = oracle_enumerate(s.a, s.b, s.output);
    CHECK(got == std::vector<PartialMap>(projected.begin(), projected.end()));
  }
}

TEST_CASE("oracle budget refuses only oversized search spaces") {
  // 13 variables over 6 values: 6^13 candidate maps is past the ceiling
  std::vector<std::string> vars;
  std::map<std::string, std::set<Tuple>> path{{"E", {}}};
  for (int i = 0; i < 13; ++i) vars.push_back("v" + std::to_string(10 + i));
  for (int i = 0; i + 1 < 13; ++i)
    path["E"].insert({vars[std::size_t(i)], vars[std::size_t(i) + 1]});
  RelationalStructure big_a({{"E", 2}}, vars, path);

  std::vector<std::string> vals;
  for (int i = 0; i < 6; ++i) vals.push_back(std::to_string(i));
  std::map<std::string, std::set<Tuple>> complete{{"E", {}}};
  for (const auto& u : vals)
    for (const auto& v : vals) complete["E"].insert({u, v});
  RelationalStructure big_b({{"E", 2}}, vals, complete);
  CHECK_THROWS_AS(oracle_enumerate(big_a, big_b, {}), OracleBudgetError);

  // same variable count over two values stays under the ceiling
  RelationalStructure small_b({{"E", 2}}, {"0", "1"},
                              {{"E", {{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}}}});
  CHECK_NOTHROW(oracle_enumerate(big_a, small_b, {}));

  // twelve variables or fewer are always in budget
  auto tri = fixtures::triangle();
  OracleBudget tight;
  tight.max_maps = 1;
  CHECK_NOTHROW(oracle_enumerate(tri, fixtures::k3_neq(), {}, tight));
}

TEST_CASE("grid generator shape and orientation") {
  auto g = gen_grid(2, 2, false);
  CHECK(g.universe() == std::vector<std::string>{"v0_0", "v0_1", "v1_0", "v1_1"});
  // every edge points away from the even coordinate class
  std::set<Tuple> expected{{"v0_0", "v0_1"}, {"v0_0", "v1_0"}, {"v1_1", "v0_1"}, {"v1_1", "v1_0"}};
  CHECK(g.tuples("R") == expected);

  auto g1 = gen_grid(1, 1, false);
  CHECK(g1.universe().size() == 1);
  CHECK(g1.tuples("R").empty());

  CHECK_THROWS_AS(gen_grid(0, 3, false), std::invalid_argument);
  CHECK_THROWS_AS(gen_grid(3, -1, true), std::invalid_argument);
}

TEST_CASE("grid corner restriction pins the corner variables") {
  auto g = gen_grid(2, 3, true);
  std::set<std::string> doms;
  for (const auto& s : g.symbols())
    if (dom_symbol_var(s.name)) {
      CHECK(s.arity == 1);
      doms.insert(s.name);
    }
  CHECK(doms == std::set<std::string>{"dom(v0_0)", "dom(v0_2)", "dom(v1_0)", "dom(v1_2)"});
  for (const auto& d : doms) {
    const auto& tuples = g.tuples(d);
    REQUIRE(tuples.size() == 1);
    CHECK(*tuples.begin() == Tuple{*dom_symbol_var(d)});
  }
}

TEST_CASE("unrestricted grids retract onto single edges, restricted ones do not") {
  auto open_grid = gen_grid(2, 2, false);
  auto cores = compute_cores(open_grid);
  REQUIRE(cores.size() == 4);
  for (const auto& c : cores) {
    CHECK(c.universe().size() == 2);
    CHECK(c.tuples("R").size() == 1);
  }

  auto pinned = gen_grid(3, 3, true);
  auto endos = enumerate_endomorphisms(pinned);
  REQUIRE(endos.size() == 1);
  for (const auto& [k, v] : endos[0]) CHECK(k == v);
  auto pinned_cores = compute_cores(pinned);
  REQUIRE(pinned_cores.size() == 1);
  CHECK(pinned_cores[0] == pinned);
}

TEST_CASE("coloring gadget reduces 3-colorability to homomorphism existence") {
  // a 4-cycle is 3-colorable
  auto c4 = gen_3col(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(c4.a.universe().size() == 6);  // four vertices plus two fresh ones
  CHECK(exists_homomorphism(c4.a, c4.b));

  // K4 is not
  auto k4 = gen_3col(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(!exists_homomorphism(k4.a, k4.b));

  auto single = gen_3col(1, {});
  CHECK(single.a.universe().size() == 3);
  CHECK(exists_homomorphism(single.a, single.b));

  CHECK_THROWS_AS(gen_3col(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(gen_3col(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(gen_3col(3, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("instance sampler is deterministic and well formed") {
  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 10; ++i) {
    auto s1 = sample_instance({}, r1);
    auto s2 = sample_instance({}, r2);
    CHECK(s1.a == s2.a);
    CHECK(s1.b == s2.b);
    CHECK(s1.output == s2.output);

    CHECK(validate_instance(s1.a, s1.b, s1.output).ok());
    CHECK(s1.a.universe().size() <= 7);
    CHECK(s1.b.universe().size() <= 4);
    CHECK(s1.output.size() <= 3);
    std::set<std::string> distinct(s1.output.begin(), s1.output.end());
    CHECK(distinct.size() == s1.output.size());

    // every universe element occurs in some tuple
    std::set<std::string> covered;
    for (const auto& s : s1.a.symbols())
      for (const auto& t : s1.a.tuples(s.name))
        for (const auto& x : t) covered.insert(x);
    CHECK(std::vector<std::string>(covered.begin(), covered.end()) == s1.a.universe());
  }
  // different seeds eventually differ
  std::mt19937_64 r3(100);
  auto other = sample_instance({}, r3);
  auto base = sample_instance({}, r2);
  CHECK((other.a != base.a || other.b != base.b || other.output != base.output));
}

TEST_CASE("isomorphism check on small structures") {
  auto tri = fixtures::triangle();
  RelationalStructure relabeled({{"E", 2}}, {"a", "b", "c"},
                                {{"E", {{"a", "b"}, {"a", "c"}, {"b", "c"}}}});
  CHECK(are_isomorphic(tri, relabeled));
  CHECK(!are_isomorphic(tri, fixtures::path2()));
  CHECK(!are_isomorphic(tri, fixtures::k2()));
  CHECK(are_isomorphic(fixtures::k2(), fixtures::k2()));

  std::vector<std::string> many;
  for (int i = 0; i < 9; ++i) many.push_back("m" + std::to_string(i));
  RelationalStructure big({{"E", 2}}, many, {{"E", {}}});
  CHECK_THROWS_AS(are_isomorphic(big, big), std::invalid_argument);
}

TEST_CASE("delay report arithmetic") {
  EnumerationStats st;
  st.gac_per_gap = {3, 2, 0};
  auto r = measure_delay(st, 3);
  CHECK(r.max_gap == 3);
  CHECK(r.bound == 3);
  CHECK(r.within_bound);

  st.gac_per_gap = {5, 1};
  r = measure_delay(st, 3);
  CHECK(r.max_gap == 5);
  CHECK(!r.within_bound);

  st.gac_per_gap = {1};
  r = measure_delay(st, 0);
  CHECK(r.bound == 1);  // the bound never drops below one round
  CHECK(r.within_bound);
}
