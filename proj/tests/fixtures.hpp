#pragma once

#include <set>
#include <string>
#include <vector>

#include "tpenum/hypergraph.hpp"
#include "tpenum/structures.hpp"
#include "tpenum/views.hpp"

namespace fixtures {

using namespace tpenum;

// Running example: directed graph on A..F whose cores are the directed
// triangle on {A,B,C} and the one on {B,C,D}.
inline RelationalStructure ex1() {
  return RelationalStructure(
      {{"R", 2}}, {"A", "B", "C", "D", "E", "F"},
      {{"R",
        {{"F", "E"}, {"A", "E"}, {"A", "C"}, {"A", "B"}, {"B", "C"}, {"D", "B"}, {"D", "C"}}}});
}

inline RelationalStructure ex1_core_abc() {
  return RelationalStructure({{"R", 2}}, {"A", "B", "C"},
                             {{"R", {{"A", "C"}, {"A", "B"}, {"B", "C"}}}});
}

inline RelationalStructure ex1_core_bcd() {
  return RelationalStructure({{"R", 2}}, {"B", "C", "D"},
                             {{"R", {{"B", "C"}, {"D", "B"}, {"D", "C"}}}});
}

inline std::vector<std::set<std::string>> ex1_hand_scopes() {
  std::vector<std::set<std::string>> scopes;
  auto a = ex1();
  for (const auto& t : a.tuples("R")) scopes.push_back({t[0], t[1]});
  scopes.push_back({"A", "E", "F"});
  scopes.push_back({"A", "B", "C", "F"});
  scopes.push_back({"C", "D", "F"});
  return scopes;
}

inline Hypergraph ex1_hand_views() {
  return Hypergraph::from_sets(ex1().universe(), ex1_hand_scopes());
}

// The same hand view set as a ViewPair (scopes only; tuple sets left empty).
inline ViewPair ex1_hand_viewpair() {
  std::vector<View> views;
  int i = 0;
  for (const auto& scope : ex1_hand_scopes()) {
    View v;
    v.name = i < 7 ? "base" + std::to_string(i) : "R" + std::to_string(i - 6);
    v.scope.assign(scope.begin(), scope.end());
    v.base = i < 7;
    views.push_back(std::move(v));
    ++i;
  }
  return ViewPair(std::move(views));
}

// Undirected-style triangle on x,y,z (edges with sorted endpoints).
inline RelationalStructure triangle() {
  return RelationalStructure({{"E", 2}}, {"x", "y", "z"},
                             {{"E", {{"x", "y"}, {"x", "z"}, {"y", "z"}}}});
}

inline RelationalStructure k2() {
  return RelationalStructure({{"E", 2}}, {"0", "1"}, {{"E", {{"0", "1"}, {"1", "0"}}}});
}

// Inequality triple: both orientations of every pair on three values.
inline RelationalStructure k3_neq() {
  return RelationalStructure(
      {{"E", 2}}, {"1", "2", "3"},
      {{"E", {{"1", "2"}, {"2", "1"}, {"1", "3"}, {"3", "1"}, {"2", "3"}, {"3", "2"}}}});
}

inline RelationalStructure path2() {
  return RelationalStructure({{"E", 2}}, {"p", "q", "r"}, {{"E", {{"p", "q"}, {"q", "r"}}}});
}

}  // namespace fixtures
