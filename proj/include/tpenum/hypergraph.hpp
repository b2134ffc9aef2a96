#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpenum/structures.hpp"

namespace tpenum {

// Hypergraph over at most 64 named nodes; edges are node-index bitmasks.
// Duplicate edges collapse, subsumed edges are kept (reductions drop them
// internally where they cannot matter).
class Hypergraph {
 public:
  Hypergraph() = default;

  static Hypergraph from_masks(std::vector<std::string> nodes, std::vector<std::uint64_t> edges) {
    Hypergraph h;
    h.nodes_ = std::move(nodes);
    std::sort(h.nodes_.begin(), h.nodes_.end());
    if (std::adjacent_find(h.nodes_.begin(), h.nodes_.end()) != h.nodes_.end())
      throw std::invalid_argument("duplicate hypergraph node");
    if (h.nodes_.size() > 64) throw std::invalid_argument("more than 64 nodes");
    std::uint64_t all = h.nodes_.size() == 64 ? ~0ULL : (1ULL << h.nodes_.size()) - 1;
    for (std::uint64_t e : edges) {
      if (e == 0) throw std::invalid_argument("empty hyperedge");
      if ((e & ~all) != 0) throw std::invalid_argument("hyperedge over unknown node");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    h.edges_ = std::move(edges);
    return h;
  }

  static Hypergraph from_sets(const std::vector<std::string>& nodes,
                              const std::vector<std::set<std::string>>& edges) {
    std::vector<std::string> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < sorted.size(); ++i) index[sorted[i]] = static_cast<int>(i);
    std::vector<std::uint64_t> masks;
    masks.reserve(edges.size());
    for (const auto& e : edges) {
      std::uint64_t m = 0;
      for (const auto& x : e) {
        auto it = index.find(x);
        if (it == index.end()) throw std::invalid_argument("hyperedge over unknown node " + x);
        m |= 1ULL << it->second;
      }
      masks.push_back(m);
    }
    return from_masks(std::move(sorted), std::move(masks));
  }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<std::uint64_t>& edge_masks() const { return edges_; }

  int node_index(const std::string& name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end() || *it != name) return -1;
    return static_cast<int>(it - nodes_.begin());
  }

  std::set<std::string> names_of(std::uint64_t mask) const {
    std::set<std::string> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (mask & (1ULL << i)) out.insert(nodes_[i]);
    return out;
  }

  std::vector<std::set<std::string>> edge_sets() const {
    std::vector<std::set<std::string>> out;
    out.reserve(edges_.size());
    for (std::uint64_t e : edges_) out.push_back(names_of(e));
    return out;
  }

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::uint64_t> edges_;
};

// One edge per constraint tuple, over the set of variables it mentions.
inline Hypergraph hypergraph_of(const RelationalStructure& a) {
  std::map<std::string, int> index;
  const auto& u = a.universe();
  for (std::size_t i = 0; i < u.size(); ++i) index[u[i]] = static_cast<int>(i);
  std::vector<std::uint64_t> edges;
  for (const auto& [_, ts] : a.relations())
    for (const Tuple& t : ts) {
      std::uint64_t m = 0;
      for (const auto& e : t) m |= 1ULL << index.at(e);
      edges.push_back(m);
    }
  return Hypergraph::from_masks(u, std::move(edges));
}

// Binary co-occurrence graph of the hypergraph's structure.
inline Hypergraph gaifman_graph(const RelationalStructure& a) {
  std::map<std::string, int> index;
  const auto& u = a.universe();
  for (std::size_t i = 0; i < u.size(); ++i) index[u[i]] = static_cast<int>(i);
  std::set<std::uint64_t> edges;
  for (const auto& [_, ts] : a.relations())
    for (const Tuple& t : ts)
      for (const auto& x : t)
        for (const auto& y : t)
          if (x < y) edges.insert((1ULL << index.at(x)) | (1ULL << index.at(y)));
  return Hypergraph::from_masks(u, std::vector<std::uint64_t>(edges.begin(), edges.end()));
}

namespace detail {

// Core of the GYO reduction on raw masks: drop nodes occurring in at most one
// edge, drop edges contained in other edges, repeat.  Returns the residual
// edge set (no empty edges).
inline std::vector<std::uint64_t> gyo_masks(std::vector<std::uint64_t> edges) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges.erase(std::remove(edges.begin(), edges.end(), 0ULL), edges.end());

    // containment pass
    std::vector<std::uint64_t> kept;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      bool contained = false;
      for (std::size_t j = 0; j < edges.size(); ++j)
        if (i != j && (edges[i] & ~edges[j]) == 0 &&
            (edges[i] != edges[j] || i > j)) {
          contained = true;
          break;
        }
      if (!contained) kept.push_back(edges[i]);
    }
    if (kept.size() != edges.size()) changed = true;
    edges = std::move(kept);

    // node-occurrence pass
    std::map<int, int> occurrences;
    for (std::uint64_t e : edges)
      for (int v = 0; v < 64; ++v)
        if (e & (1ULL << v)) ++occurrences[v];
    std::uint64_t removable = 0;
    for (const auto& [v, cnt] : occurrences)
      if (cnt <= 1) removable |= 1ULL << v;
    if (removable) {
      for (auto& e : edges)
        if (e & removable) {
          e &= ~removable;
          changed = true;
        }
    }
  }
  return edges;
}

}  // namespace detail

// Residual hypergraph after the GYO reduction; empty iff the input is acyclic.
inline Hypergraph gyo_reduce(const Hypergraph& h) {
  std::vector<std::uint64_t> residual = detail::gyo_masks(h.edge_masks());
  std::uint64_t used = 0;
  for (std::uint64_t e : residual) used |= e;
  std::vector<std::string> nodes;
  std::vector<int> remap(h.nodes().size(), -1);
  for (std::size_t i = 0; i < h.nodes().size(); ++i)
    if (used & (1ULL << i)) {
      remap[i] = static_cast<int>(nodes.size());
      nodes.push_back(h.nodes()[i]);
    }
  std::vector<std::uint64_t> edges;
  for (std::uint64_t e : residual) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < h.nodes().size(); ++i)
      if (e & (1ULL << i)) m |= 1ULL << remap[i];
    edges.push_back(m);
  }
  return Hypergraph::from_masks(std::move(nodes), std::move(edges));
}

inline bool is_acyclic(const Hypergraph& h) {
  return detail::gyo_masks(h.edge_masks()).empty();
}

// Join tree: vertices are the hyperedges; for every node, the vertices whose
// edge contains it induce a connected subtree.
struct JoinTree {
  std::vector<std::set<std::string>> vertices;
  std::set<std::pair<int, int>> edges;  // index pairs, first < second
};

inline bool join_tree_connectedness_holds(const JoinTree& t) {
  int k = static_cast<int>(t.vertices.size());
  std::vector<std::vector<int>> adj(k);
  for (const auto& [i, j] : t.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::set<std::string> all_nodes;
  for (const auto& v : t.vertices) all_nodes.insert(v.begin(), v.end());
  for (const auto& node : all_nodes) {
    // vertices holding the node must form one connected block
    std::vector<int> holders;
    for (int i = 0; i < k; ++i)
      if (t.vertices[i].count(node)) holders.push_back(i);
    if (holders.empty()) continue;
    std::set<int> holder_set(holders.begin(), holders.end());
    std::vector<int> stack = {holders.front()};
    std::set<int> seen;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      for (int nxt : adj[cur])
        if (holder_set.count(nxt)) stack.push_back(nxt);
    }
    if (seen.size() != holders.size()) return false;
  }
  return true;
}

// Maximum-weight spanning tree over pairwise intersection sizes, components
// bridged by zero-weight links afterwards.  For an acyclic hypergraph this is
// a join tree; the connectedness condition is verified before returning.
inline JoinTree build_join_tree(const Hypergraph& h) {
  if (!is_acyclic(h)) throw std::invalid_argument("hypergraph is cyclic; no join tree exists");
  const auto& edges = h.edge_masks();
  int k = static_cast<int>(edges.size());
  JoinTree t;
  t.vertices = h.edge_sets();
  if (k <= 1) return t;

  struct Link {
    int w, i, j;
  };
  std::vector<Link> links;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      links.push_back({std::popcount(edges[i] & edges[j]), i, j});
  std::stable_sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    if (x.w != y.w) return x.w > y.w;
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });

  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Link& l : links) {
    int a = find(l.i), b = find(l.j);
    if (a == b) continue;
    parent[a] = b;
    t.edges.insert({l.i, l.j});
  }

  if (!join_tree_connectedness_holds(t))
    throw std::logic_error("constructed tree violates the connectedness condition");
  return t;
}

// Every edge of h1 contained in some edge of h2, comparing by node names.
inline bool hg_leq(const Hypergraph& h1, const Hypergraph& h2) {
  for (const auto& e1 : h1.edge_sets()) {
    bool covered = false;
    for (const auto& e2 : h2.edge_sets())
      if (std::includes(e2.begin(), e2.end(), e1.begin(), e1.end())) {
        covered = true;
        break;
      }
    if (covered) continue;
    return false;
  }
  return true;
}

namespace detail {

// Search state for sandwiched-acyclicity: find an acyclic hypergraph between
// h1 and h2.  Works on the primal graph of h1; a decomposition bag is any
// subset of an h2 edge.  dec(C) asks whether the component C, seen from the
// interface N(C), can be decomposed; the interface must be contained in the
// chosen bag, which must also pick up at least one node of C.
struct TreeProjectionSearch {
  std::vector<std::uint64_t> h1_edges;   // in h2 node index space
  std::vector<std::uint64_t> h2_maximal; // maximal edges of h2
  std::vector<std::uint64_t> adjacency;  // primal adjacency per node
  std::map<std::uint64_t, std::optional<std::uint64_t>> memo;  // component -> chosen bag
  std::map<std::uint64_t, std::vector<std::uint64_t>> chosen;  // component -> bags of its subtree

  std::uint64_t neighborhood(std::uint64_t c) const {
    std::uint64_t n = 0;
    for (int v = 0; v < 64; ++v)
      if (c & (1ULL << v)) n |= adjacency[v];
    return n & ~c;
  }

  std::vector<std::uint64_t> components(std::uint64_t within) const {
    std::vector<std::uint64_t> out;
    std::uint64_t left = within;
    while (left) {
      std::uint64_t seed = left & (~left + 1);
      std::uint64_t comp = seed;
      for (;;) {
        std::uint64_t grown = comp;
        for (int v = 0; v < 64; ++v)
          if (comp & (1ULL << v)) grown |= adjacency[v] & within;
        if (grown == comp) break;
        comp = grown;
      }
      out.push_back(comp);
      left &= ~comp;
    }
    return out;
  }

  bool dec(std::uint64_t c) {
    auto it = memo.find(c);
    if (it != memo.end()) return it->second.has_value();
    std::uint64_t s = neighborhood(c);

    // candidate bags: S plus a nonempty chunk of C, inside some maximal h2
    // edge; larger bags first
    std::vector<std::uint64_t> bags;
    for (std::uint64_t e : h2_maximal) {
      if ((s & ~e) != 0) continue;
      std::uint64_t inside = e & c;
      if (inside == 0) continue;
      for (std::uint64_t t = inside;; t = (t - 1) & inside) {
        if (t != 0) bags.push_back(s | t);
        if (t == 0) break;
      }
    }
    std::sort(bags.begin(), bags.end(), [](std::uint64_t x, std::uint64_t y) {
      int px = std::popcount(x), py = std::popcount(y);
      if (px != py) return px > py;
      return x < y;
    });
    bags.erase(std::unique(bags.begin(), bags.end()), bags.end());

    for (std::uint64_t bag : bags) {
      bool ok = true;
      std::vector<std::uint64_t> parts = components(c & ~bag);
      for (std::uint64_t part : parts)
        if (!dec(part)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      memo[c] = bag;
      std::vector<std::uint64_t>& collected = chosen[c];
      collected.push_back(bag);
      for (std::uint64_t part : parts) {
        const auto& sub = chosen[part];
        collected.insert(collected.end(), sub.begin(), sub.end());
      }
      return true;
    }
    memo[c] = std::nullopt;
    return false;
  }
};

}  // namespace detail

// Some acyclic hypergraph h with h1 <= h <= h2, or nullopt if none exists.
// Exact: memoized search over components of h1's primal graph with bags drawn
// from subsets of h2 edges, larger bags tried first.
inline std::optional<Hypergraph> find_tree_projection(const Hypergraph& h1,
                                                      const Hypergraph& h2) {
  for (const auto& n : h1.nodes())
    if (h2.node_index(n) < 0)
      throw std::invalid_argument("h1 node " + n + " missing from h2");

  detail::TreeProjectionSearch search;
  for (const auto& edge : h1.edge_sets()) {
    std::uint64_t m = 0;
    for (const auto& x : edge) m |= 1ULL << h2.node_index(x);
    search.h1_edges.push_back(m);
  }
  for (std::uint64_t e : h2.edge_masks()) {
    bool maximal = true;
    for (std::uint64_t f : h2.edge_masks())
      if (e != f && (e & ~f) == 0) {
        maximal = false;
        break;
      }
    if (maximal) search.h2_maximal.push_back(e);
  }

  // every h1 edge needs a covering h2 edge at all
  for (std::uint64_t e : search.h1_edges) {
    bool covered = false;
    for (std::uint64_t f : search.h2_maximal)
      if ((e & ~f) == 0) {
        covered = true;
        break;
      }
    if (!covered) return std::nullopt;
  }

  std::uint64_t vstar = 0;
  for (std::uint64_t e : search.h1_edges) vstar |= e;
  search.adjacency.assign(64, 0);
  for (std::uint64_t e : search.h1_edges)
    for (int v = 0; v < 64; ++v)
      if (e & (1ULL << v)) search.adjacency[v] |= e & ~(1ULL << v);

  std::vector<std::uint64_t> bags;
  for (std::uint64_t comp : search.components(vstar)) {
    if (!search.dec(comp)) return std::nullopt;
    const auto& sub = search.chosen[comp];
    bags.insert(bags.end(), sub.begin(), sub.end());
  }
  if (vstar == 0) {
    // no h1 edges: the empty hypergraph is a tree projection
    return Hypergraph::from_masks({}, {});
  }

  std::uint64_t used = 0;
  for (std::uint64_t b : bags) used |= b;
  std::vector<std::string> nodes;
  std::vector<int> remap(h2.nodes().size(), -1);
  for (std::size_t i = 0; i < h2.nodes().size(); ++i)
    if (used & (1ULL << i)) {
      remap[i] = static_cast<int>(nodes.size());
      nodes.push_back(h2.nodes()[i]);
    }
  std::vector<std::uint64_t> remapped;
  for (std::uint64_t b : bags) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < h2.nodes().size(); ++i)
      if (b & (1ULL << i)) m |= 1ULL << remap[i];
    remapped.push_back(m);
  }
  Hypergraph result = Hypergraph::from_masks(std::move(nodes), std::move(remapped));

  if (!is_acyclic(result) || !hg_leq(h1, result) || !hg_leq(result, h2))
    throw std::logic_error("tree projection search produced an invalid sandwich");
  return result;
}

// Is the output set covered: does some core of a + pin(output) have a tree
// projection with respect to the view hypergraph?  With an empty output the
// structure itself stands in for the pinned union.
inline bool is_tp_covered(const RelationalStructure& a, const Hypergraph& views,
                          const std::vector<std::string>& output) {
  for (const auto& x : output)
    if (!a.has_element(x))
      throw std::invalid_argument("output variable " + x + " outside the universe");
  RelationalStructure pinned =
      output.empty() ? a : disjoint_union(a, singleton_structure(output));
  for (const auto& core : compute_cores(pinned))
    if (find_tree_projection(hypergraph_of(core), views).has_value()) return true;
  return false;
}

}  // namespace tpenum
