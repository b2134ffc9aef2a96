#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpenum/hypergraph.hpp"
#include "tpenum/structures.hpp"

namespace tpenum {

enum class Method { tw, hw };

struct MethodSpec {
  Method method = Method::tw;
  int k = 2;
};

inline std::optional<Method> method_from_string(const std::string& s) {
  if (s == "tw") return Method::tw;
  if (s == "hw") return Method::hw;
  return std::nullopt;
}

inline std::string method_name(Method m) { return m == Method::tw ? "tw" : "hw"; }

// One view: a named scope over distinct variables plus the tuples currently
// allowed on it, each tuple aligned with the (sorted) scope.  Base views
// remember the constraint they came from.
struct View {
  std::string name;
  std::vector<std::string> scope;
  std::set<Tuple> tuples;
  bool base = false;
  std::optional<std::pair<std::string, Tuple>> origin;

  friend bool operator==(const View&, const View&) = default;
};

class ViewPair {
 public:
  ViewPair() = default;

  explicit ViewPair(std::vector<View> views) : views_(std::move(views)) {
    for (std::size_t i = 0; i < views_.size(); ++i) {
      const View& v = views_[i];
      if (v.scope.empty()) throw std::invalid_argument("view " + v.name + ": empty scope");
      if (!std::is_sorted(v.scope.begin(), v.scope.end()) ||
          std::adjacent_find(v.scope.begin(), v.scope.end()) != v.scope.end())
        throw std::invalid_argument("view " + v.name + ": scope must be sorted and distinct");
      for (const Tuple& t : v.tuples)
        if (t.size() != v.scope.size())
          throw std::invalid_argument("view " + v.name + ": tuple width differs from scope");
      if (!by_name_.emplace(v.name, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate view name " + v.name);
      if (v.base && v.origin)
        if (auto var = dom_symbol_var(v.origin->first))
          dom_view_[*var] = static_cast<int>(i);
    }
  }

  const std::vector<View>& views() const { return views_; }
  std::size_t size() const { return views_.size(); }
  const View& at(int i) const { return views_.at(i); }

  int index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
  }

  // Index of the base view carrying dom(var), -1 if the variable is not
  // domain restricted.
  int dom_view(const std::string& var) const {
    auto it = dom_view_.find(var);
    return it == dom_view_.end() ? -1 : it->second;
  }

  bool any_empty() const {
    for (const View& v : views_)
      if (v.tuples.empty()) return true;
    return false;
  }

  ViewPair with_tuples(int index, std::set<Tuple> tuples) const {
    ViewPair copy = *this;
    copy.views_.at(index).tuples = std::move(tuples);
    return copy;
  }

  friend bool operator==(const ViewPair& x, const ViewPair& y) { return x.views_ == y.views_; }

 private:
  std::vector<View> views_;
  std::map<std::string, int> by_name_;
  std::map<std::string, int> dom_view_;
};

namespace detail {

struct ConstraintRef {
  std::string symbol;
  Tuple tuple;
  std::string base_name;
  std::vector<std::string> scope;  // sorted distinct variables of `tuple`
};

inline std::vector<ConstraintRef> constraint_list(const RelationalStructure& a) {
  std::vector<ConstraintRef> out;
  for (const auto& [sym, ts] : a.relations()) {
    int i = 0;
    for (const Tuple& t : ts) {
      std::set<std::string> sc(t.begin(), t.end());
      out.push_back({sym, t, sym + "[" + std::to_string(i) + "]",
                     std::vector<std::string>(sc.begin(), sc.end())});
      ++i;
    }
  }
  return out;
}

// All assignments over `scope` (values from b's universe) satisfying every
// listed constraint positionally.  Constraints must mention only scope
// variables.
inline std::set<Tuple> solve_over_scope(const RelationalStructure& b,
                                        const std::vector<std::string>& scope,
                                        const std::vector<const ConstraintRef*>& constraints) {
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < scope.size(); ++i) pos[scope[i]] = static_cast<int>(i);

  struct Check {
    std::vector<int> positions;
    const std::set<Tuple>* allowed;
  };
  std::vector<std::vector<Check>> by_last(scope.size());
  for (const ConstraintRef* c : constraints) {
    Check ch;
    int last = 0;
    for (const auto& v : c->tuple) {
      int p = pos.at(v);
      ch.positions.push_back(p);
      last = std::max(last, p);
    }
    ch.allowed = &b.tuples(c->symbol);
    by_last[last].push_back(std::move(ch));
  }

  const auto& values = b.universe();
  std::set<Tuple> out;
  Tuple assign(scope.size());
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == scope.size()) {
      out.insert(assign);
      return;
    }
    for (const auto& val : values) {
      assign[depth] = val;
      bool ok = true;
      for (const Check& ch : by_last[depth]) {
        Tuple image;
        image.reserve(ch.positions.size());
        for (int p : ch.positions) image.push_back(assign[p]);
        if (!ch.allowed->count(image)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return out;
}

template <typename Emit>
inline void for_each_subset(int n, int maxk, Emit&& emit) {
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int start) -> void {
    if (!chosen.empty()) emit(chosen);
    if (static_cast<int>(chosen.size()) == maxk) return;
    for (int i = start; i < n; ++i) {
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace detail

// View scopes the method generates, beyond the base views: variable subsets
// of size <= k for tw, unions over <= k constraints for hw.
inline std::vector<std::vector<std::string>> method_scopes(const RelationalStructure& a,
                                                           const MethodSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("method width must be >= 1");
  std::vector<std::vector<std::string>> out;
  if (spec.method == Method::tw) {
    const auto& u = a.universe();
    detail::for_each_subset(static_cast<int>(u.size()), spec.k, [&](const std::vector<int>& sel) {
      std::vector<std::string> scope;
      scope.reserve(sel.size());
      for (int i : sel) scope.push_back(u[i]);
      out.push_back(std::move(scope));
    });
  } else {
    auto cons = detail::constraint_list(a);
    detail::for_each_subset(static_cast<int>(cons.size()), spec.k,
                            [&](const std::vector<int>& sel) {
                              std::set<std::string> scope;
                              for (int i : sel)
                                scope.insert(cons[i].scope.begin(), cons[i].scope.end());
                              out.emplace_back(scope.begin(), scope.end());
                            });
  }
  return out;
}

// Views of (a, b) under the chosen method: one base view per constraint
// tuple, then the method's subset views.  Subset view tuples solve the
// induced subproblem: for tw, every constraint fully inside the variable set
// applies; for hw, exactly the chosen constraints apply.
inline ViewPair build_views(const RelationalStructure& a, const RelationalStructure& b,
                            const MethodSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("method width must be >= 1");
  auto cons = detail::constraint_list(a);
  std::vector<View> views;

  for (const auto& c : cons) {
    View v;
    v.name = c.base_name;
    v.scope = c.scope;
    v.base = true;
    v.origin = {{c.symbol, c.tuple}};
    v.tuples = detail::solve_over_scope(b, v.scope, {&c});
    views.push_back(std::move(v));
  }

  if (spec.method == Method::tw) {
    const auto& u = a.universe();
    detail::for_each_subset(static_cast<int>(u.size()), spec.k, [&](const std::vector<int>& sel) {
      View v;
      for (int i : sel) v.scope.push_back(u[i]);
      std::string joined;
      for (const auto& x : v.scope) {
        if (!joined.empty()) joined += ",";
        joined += x;
      }
      v.name = "tw{" + joined + "}";
      std::set<std::string> inside(v.scope.begin(), v.scope.end());
      std::vector<const detail::ConstraintRef*> applicable;
      for (const auto& c : cons) {
        bool fits = true;
        for (const auto& x : c.scope)
          if (!inside.count(x)) {
            fits = false;
            break;
          }
        if (fits) applicable.push_back(&c);
      }
      v.tuples = detail::solve_over_scope(b, v.scope, applicable);
      views.push_back(std::move(v));
    });
  } else {
    detail::for_each_subset(static_cast<int>(cons.size()), spec.k,
                            [&](const std::vector<int>& sel) {
                              View v;
                              std::set<std::string> scope;
                              std::vector<const detail::ConstraintRef*> chosen;
                              std::string joined;
                              for (int i : sel) {
                                scope.insert(cons[i].scope.begin(), cons[i].scope.end());
                                chosen.push_back(&cons[i]);
                                if (!joined.empty()) joined += ",";
                                joined += cons[i].base_name;
                              }
                              v.name = "hw{" + joined + "}";
                              v.scope.assign(scope.begin(), scope.end());
                              v.tuples = detail::solve_over_scope(b, v.scope, chosen);
                              views.push_back(std::move(v));
                            });
  }

  return ViewPair(std::move(views));
}

// Hypergraph of the view scopes the method would generate for a.
inline Hypergraph view_hypergraph(const RelationalStructure& a, const MethodSpec& spec) {
  std::vector<std::set<std::string>> edges;
  for (const auto& c : detail::constraint_list(a))
    edges.emplace_back(c.scope.begin(), c.scope.end());
  for (const auto& scope : method_scopes(a, spec)) edges.emplace_back(scope.begin(), scope.end());
  return Hypergraph::from_sets(a.universe(), edges);
}

// Hypergraph of an explicit view collection.
inline Hypergraph view_hypergraph(const ViewPair& v, const std::vector<std::string>& universe) {
  std::vector<std::set<std::string>> edges;
  for (const View& view : v.views()) edges.emplace_back(view.scope.begin(), view.scope.end());
  return Hypergraph::from_sets(universe, edges);
}

// Legality: every view's tuple set contains the projection of every solution
// to its scope, and base views never exceed their source relation.  The lower
// bound is checked against brute-force enumeration; desk scale only.
inline bool is_legal(const ViewPair& v, const RelationalStructure& a,
                     const RelationalStructure& b) {
  auto homs = all_homomorphisms(a, b);
  for (const View& view : v.views()) {
    for (const auto& h : homs) {
      Tuple proj;
      proj.reserve(view.scope.size());
      for (const auto& x : view.scope) proj.push_back(h.at(x));
      if (!view.tuples.count(proj)) return false;
    }
    if (view.base) {
      const auto& [sym, at] = *view.origin;
      const std::set<Tuple>& rb = b.tuples(sym);
      std::map<std::string, int> pos;
      for (std::size_t i = 0; i < view.scope.size(); ++i)
        pos[view.scope[i]] = static_cast<int>(i);
      for (const Tuple& assignment : view.tuples) {
        Tuple expanded;
        expanded.reserve(at.size());
        for (const auto& x : at) expanded.push_back(assignment[pos.at(x)]);
        if (!rb.count(expanded)) return false;
      }
    }
  }
  return true;
}

// Per-variable covering: does some core of a extended with one pin per
// output variable have a tree projection with respect to the given view
// hypergraph?
inline bool tp_covered_through_dm(const RelationalStructure& a,
                                  const std::vector<std::string>& output, const Hypergraph& h2) {
  std::set<std::string> distinct(output.begin(), output.end());
  RelationalStructure pinned = a;
  for (const auto& x : distinct) {
    if (!a.has_element(x))
      throw std::invalid_argument("output variable " + x + " outside the universe");
    pinned = disjoint_union(pinned, singleton_structure({x}));
  }
  for (const auto& core : compute_cores(pinned))
    if (find_tree_projection(hypergraph_of(core), h2).has_value()) return true;
  return false;
}

inline bool tp_covered_through_dm(const RelationalStructure& a,
                                  const std::vector<std::string>& output,
                                  const MethodSpec& spec) {
  return tp_covered_through_dm(a, output, view_hypergraph(a, spec));
}

// The views as a two-structure instance of their own, variables on one side
// and allowed tuples on the other.
inline std::pair<RelationalStructure, RelationalStructure> to_structures(
    const ViewPair& v, const std::vector<std::string>& a_universe,
    const std::vector<std::string>& b_universe) {
  std::vector<Symbol> symbols;
  std::map<std::string, std::set<Tuple>> ar, br;
  for (const View& view : v.views()) {
    symbols.push_back({view.name, static_cast<int>(view.scope.size())});
    ar[view.name] = {Tuple(view.scope.begin(), view.scope.end())};
    br[view.name] = view.tuples;
  }
  return {RelationalStructure(symbols, a_universe, ar),
          RelationalStructure(std::move(symbols), b_universe, std::move(br))};
}

}  // namespace tpenum
