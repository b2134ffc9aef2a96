#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "tpenum/gac.hpp"
#include "tpenum/testkit.hpp"

using namespace tpenum;

namespace {

bool shrinks(const ViewPair& before, const ViewPair& after) {
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    const auto& b = before.at(static_cast<int>(i)).tuples;
    const auto& a = after.at(static_cast<int>(i)).tuples;
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("pairwise consistent inputs are fixpoints") {
  auto views = build_views(fixtures::triangle(), fixtures::k2(), {Method::hw, 1});
  REQUIRE(is_pairwise_consistent(views));
  GacResult r = gac_traced(views);
  CHECK(r.views == views);
  CHECK(r.deleting_passes == 0);
  CHECK(r.semijoin_passes > 0);
}

TEST_CASE("fixpoints are pairwise consistent and idempotent") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 40; ++i) {
    auto s = sample_instance({}, rng);
    auto spec = MethodSpec{i % 2 ? Method::hw : Method::tw, 2};
    auto views = build_views(s.a, s.b, spec);
    auto fixed = gac(views);
    CHECK(is_pairwise_consistent(fixed));
    CHECK(shrinks(views, fixed));
    GacResult again = gac_traced(fixed);
    CHECK(again.views == fixed);
    CHECK(again.deleting_passes == 0);
  }
}

TEST_CASE("schedule order never changes the fixpoint") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 25; ++i) {
    auto s = sample_instance({}, rng);
    auto views = build_views(s.a, s.b, {i % 2 ? Method::hw : Method::tw, 2});
    auto base = gac(views);
    for (unsigned long long seed = 1; seed <= 10; ++seed)
      CHECK(gac_traced(views, seed).views == base);
  }
}

TEST_CASE("no solution projection is ever deleted") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 30; ++i) {
    auto s = sample_instance({}, rng);
    auto views = build_views(s.a, s.b, {i % 2 ? Method::hw : Method::tw, 2});
    auto fixed = gac(views);
    auto homs = all_homomorphisms(s.a, s.b);
    for (const auto& h : homs)
      for (const auto& v : fixed.views()) {
        Tuple proj;
        for (const auto& x : v.scope) proj.push_back(h.at(x));
        CHECK(v.tuples.count(proj) == 1);
      }
  }
}

TEST_CASE("an empty view drains everything") {
  // two views without shared variables: emptiness must still propagate
  View left{"L", {"x"}, {{"0"}}, false, {}};
  View right{"R", {"y"}, {}, false, {}};
  auto fixed = gac(ViewPair({left, right}));
  CHECK(fixed.at(0).tuples.empty());
  CHECK(fixed.at(1).tuples.empty());
  CHECK(is_pairwise_consistent(fixed));
  CHECK(!is_pairwise_consistent(ViewPair({left, right})));

  // a disconnected instance with one unsatisfiable component drains the
  // satisfiable component too
  RelationalStructure a({{"E", 2}}, {"p", "q", "x", "y", "z"},
                        {{"E", {{"p", "q"}, {"x", "y"}, {"x", "z"}, {"y", "z"}}}});
  auto views = build_views(a, fixtures::k2(), {Method::hw, 1});
  // base views alone cannot see the triangle contradiction
  CHECK(!gac(views).any_empty());
  // a width-3 variable view can
  auto wide = build_views(a, fixtures::k2(), {Method::tw, 3});
  auto fixed_wide = gac(wide);
  CHECK(fixed_wide.any_empty());
  for (const auto& v : fixed_wide.views()) CHECK(v.tuples.empty());
}

TEST_CASE("incremental seeding reaches the full fixpoint") {
  std::mt19937_64 rng(67);
  int exercised = 0;
  for (int i = 0; i < 60 && exercised < 30; ++i) {
    auto s = sample_instance({}, rng);
    if (s.output.empty()) continue;
    auto [ra, rb] = domain_restricted_version(s.a, s.b, s.output);
    auto views = build_views(ra, rb, {i % 2 ? Method::hw : Method::tw, 2});
    auto parent = gac(views);
    int dom = parent.dom_view(s.output.front());
    REQUIRE(dom >= 0);
    if (parent.at(dom).tuples.empty()) continue;
    Tuple value = *parent.at(dom).tuples.begin();
    auto child = parent.with_tuples(dom, {value});
    auto incremental = gac_traced(child, std::nullopt, dom).views;
    auto full = gac_traced(child).views;
    CHECK(incremental == full);
    ++exercised;
  }
  CHECK(exercised >= 20);
}

TEST_CASE("trace counters are coherent") {
  auto a = fixtures::ex1();
  auto views = build_views(a, a, {Method::tw, 2});
  GacResult r = gac_traced(views);
  CHECK(r.semijoin_passes >= r.deleting_passes);
  CHECK(r.semijoin_passes > 0);
  GacResult again = gac_traced(r.views);
  CHECK(again.deleting_passes == 0);
}
