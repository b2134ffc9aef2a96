#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tpenum {

using Tuple = std::vector<std::string>;

// Assignment of values to a subset of the variables.  The empty map is the
// trivial solution of a decision-only instance (no output variables).
using PartialMap = std::map<std::string, std::string>;

struct Symbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// "dom(<var>)" is the reserved symbol pattern for domain-restriction
// relations: unary, with the single tuple <var> on the variable side.
inline std::string dom_symbol_name(const std::string& var) { return "dom(" + var + ")"; }

inline std::optional<std::string> dom_symbol_var(const std::string& name) {
  if (name.size() > 5 && name.compare(0, 4, "dom(") == 0 && name.back() == ')')
    return name.substr(4, name.size() - 5);
  return std::nullopt;
}

// Finite relational structure.  Universe, symbol list and every tuple set are
// kept in lexicographic order, so equal structures compare equal and all
// set-valued results downstream come out in one canonical order.
class RelationalStructure {
 public:
  RelationalStructure() = default;

  RelationalStructure(std::vector<Symbol> symbols, std::vector<std::string> universe,
                      std::map<std::string, std::set<Tuple>> relations)
      : symbols_(std::move(symbols)),
        universe_(std::move(universe)),
        relations_(std::move(relations)) {
    std::sort(symbols_.begin(), symbols_.end());
    std::sort(universe_.begin(), universe_.end());
    if (std::adjacent_find(universe_.begin(), universe_.end()) != universe_.end())
      throw std::invalid_argument("duplicate universe element");
    for (std::size_t i = 1; i < symbols_.size(); ++i)
      if (symbols_[i - 1].name == symbols_[i].name)
        throw std::invalid_argument("duplicate relation symbol: " + symbols_[i].name);
    for (const auto& s : symbols_) {
      if (s.arity < 1) throw std::invalid_argument("symbol " + s.name + ": arity must be >= 1");
      relations_[s.name];
    }
    for (const auto& [name, tuples] : relations_) {
      const Symbol* sym = find_symbol(name);
      if (sym == nullptr) throw std::invalid_argument("relation over undeclared symbol: " + name);
      for (const Tuple& t : tuples) {
        if (static_cast<int>(t.size()) != sym->arity)
          throw std::invalid_argument("tuple arity mismatch in relation " + name);
        for (const auto& e : t)
          if (!has_element(e))
            throw std::invalid_argument("tuple element '" + e + "' outside universe in relation " + name);
      }
    }
  }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<std::string>& universe() const { return universe_; }
  const std::map<std::string, std::set<Tuple>>& relations() const { return relations_; }

  const std::set<Tuple>& tuples(const std::string& symbol) const {
    auto it = relations_.find(symbol);
    if (it == relations_.end()) throw std::invalid_argument("no such symbol: " + symbol);
    return it->second;
  }

  bool has_element(const std::string& e) const {
    return std::binary_search(universe_.begin(), universe_.end(), e);
  }

  const Symbol* find_symbol(const std::string& name) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name,
                               [](const Symbol& s, const std::string& n) { return s.name < n; });
    if (it != symbols_.end() && it->name == name) return &*it;
    return nullptr;
  }

  int arity(const std::string& name) const {
    const Symbol* s = find_symbol(name);
    if (s == nullptr) throw std::invalid_argument("no such symbol: " + name);
    return s->arity;
  }

  // Variables carrying a dom(.) relation.
  std::set<std::string> restricted_variables() const {
    std::set<std::string> out;
    for (const auto& s : symbols_)
      if (auto v = dom_symbol_var(s.name)) out.insert(*v);
    return out;
  }

  std::size_t total_tuples() const {
    std::size_t n = 0;
    for (const auto& [_, ts] : relations_) n += ts.size();
    return n;
  }

  friend bool operator==(const RelationalStructure&, const RelationalStructure&) = default;
  friend bool operator<(const RelationalStructure& x, const RelationalStructure& y) {
    return std::tie(x.symbols_, x.universe_, x.relations_) <
           std::tie(y.symbols_, y.universe_, y.relations_);
  }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::string> universe_;
  std::map<std::string, std::set<Tuple>> relations_;
};

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

namespace detail {

// Shared backtracking core for homomorphism enumeration.  Variables are
// assigned in canonical order; a constraint is checked as soon as its last
// variable gets a value.
class HomSearch {
 public:
  HomSearch(const RelationalStructure& a, const RelationalStructure& b) : a_(a), b_(b) {
    const auto& au = a.universe();
    const auto& bu = b.universe();
    n_ = static_cast<int>(au.size());
    for (int i = 0; i < n_; ++i) var_index_[au[i]] = i;
    nvals_ = static_cast<int>(bu.size());

    for (const auto& [sym, atuples] : a.relations()) {
      if (atuples.empty()) continue;
      auto bit = b.relations().find(sym);
      allowed_.emplace_back();
      std::set<std::vector<int>>& al = allowed_.back();
      if (bit != b.relations().end())
        for (const Tuple& t : bit->second) {
          std::vector<int> enc;
          enc.reserve(t.size());
          for (const auto& e : t) enc.push_back(val_index(e));
          al.insert(std::move(enc));
        }
      int allowed_id = static_cast<int>(allowed_.size()) - 1;
      for (const Tuple& t : atuples) {
        Constraint c;
        c.allowed = allowed_id;
        int last = -1;
        for (const auto& v : t) {
          int vi = var_index_.at(v);
          c.vars.push_back(vi);
          last = std::max(last, vi);
        }
        int id = static_cast<int>(constraints_.size());
        constraints_.push_back(std::move(c));
        by_last_var_.resize(n_);
        by_last_var_[last].push_back(id);
      }
    }
    by_last_var_.resize(n_);
  }

  // Calls sink(assignment) for every homomorphism; stops early if sink
  // returns false.
  template <typename Sink>
  void run(Sink&& sink) const {
    std::vector<int> assign(n_, -1);
    if (n_ == 0) {
      // An empty universe admits no tuples, so the empty map is the one
      // homomorphism.
      sink(assign);
      return;
    }
    rec(0, assign, sink);
  }

  PartialMap decode(const std::vector<int>& assign) const {
    PartialMap h;
    for (int i = 0; i < n_; ++i) h[a_.universe()[i]] = b_.universe()[assign[i]];
    return h;
  }

 private:
  struct Constraint {
    std::vector<int> vars;
    int allowed = -1;
  };

  int val_index(const std::string& e) const {
    const auto& bu = b_.universe();
    auto it = std::lower_bound(bu.begin(), bu.end(), e);
    return static_cast<int>(it - bu.begin());
  }

  template <typename Sink>
  bool rec(int depth, std::vector<int>& assign, Sink&& sink) const {
    if (depth == n_) return sink(assign);
    for (int v = 0; v < nvals_; ++v) {
      assign[depth] = v;
      bool ok = true;
      for (int cid : by_last_var_[depth]) {
        const Constraint& c = constraints_[cid];
        std::vector<int> image;
        image.reserve(c.vars.size());
        for (int var : c.vars) image.push_back(assign[var]);
        if (!allowed_[c.allowed].count(image)) {
          ok = false;
          break;
        }
      }
      if (ok && !rec(depth + 1, assign, sink)) {
        assign[depth] = -1;
        return false;
      }
    }
    assign[depth] = -1;
    return true;
  }

  const RelationalStructure& a_;
  const RelationalStructure& b_;
  int n_ = 0;
  int nvals_ = 0;
  std::map<std::string, int> var_index_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<int>> by_last_var_;
  std::vector<std::set<std::vector<int>>> allowed_;
};

}  // namespace detail

// Is h a homomorphism from a to b?  h must be total on a's universe.
inline bool is_homomorphism(const PartialMap& h, const RelationalStructure& a,
                            const RelationalStructure& b) {
  for (const auto& x : a.universe()) {
    auto it = h.find(x);
    if (it == h.end()) throw std::invalid_argument("map not total on universe: missing " + x);
    if (!b.has_element(it->second))
      throw std::invalid_argument("map sends " + x + " outside the target universe");
  }
  for (const auto& [sym, atuples] : a.relations()) {
    if (atuples.empty()) continue;
    auto bit = b.relations().find(sym);
    for (const Tuple& t : atuples) {
      Tuple image;
      image.reserve(t.size());
      for (const auto& e : t) image.push_back(h.at(e));
      if (bit == b.relations().end() || !bit->second.count(image)) return false;
    }
  }
  return true;
}

inline std::vector<PartialMap> all_homomorphisms(const RelationalStructure& a,
                                                 const RelationalStructure& b) {
  detail::HomSearch search(a, b);
  std::vector<PartialMap> out;
  search.run([&](const std::vector<int>& assign) {
    out.push_back(search.decode(assign));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline bool exists_homomorphism(const RelationalStructure& a, const RelationalStructure& b) {
  detail::HomSearch search(a, b);
  bool found = false;
  search.run([&](const std::vector<int>&) {
    found = true;
    return false;
  });
  return found;
}

inline std::vector<PartialMap> enumerate_endomorphisms(const RelationalStructure& a) {
  return all_homomorphisms(a, a);
}

// Union of two structures over disjoint vocabularies.  Universes may overlap;
// the result's universe is the set union.
inline RelationalStructure disjoint_union(const RelationalStructure& a,
                                          const RelationalStructure& b) {
  std::vector<Symbol> symbols = a.symbols();
  for (const auto& s : b.symbols()) {
    if (a.find_symbol(s.name) != nullptr)
      throw std::invalid_argument("vocabularies overlap on symbol " + s.name);
    symbols.push_back(s);
  }
  std::vector<std::string> universe = a.universe();
  for (const auto& e : b.universe())
    if (!a.has_element(e)) universe.push_back(e);
  std::map<std::string, std::set<Tuple>> relations = a.relations();
  for (const auto& [name, ts] : b.relations()) relations[name] = ts;
  return RelationalStructure(std::move(symbols), std::move(universe), std::move(relations));
}

// Structure with one fresh relation holding the single tuple <X_1,...,X_r>.
// Taking the disjoint union with the owning structure pins those variables:
// every endomorphism must fix them pointwise.
inline RelationalStructure singleton_structure(const std::vector<std::string>& vars) {
  if (vars.empty()) throw std::invalid_argument("singleton structure needs at least one variable");
  std::set<std::string> seen(vars.begin(), vars.end());
  if (seen.size() != vars.size())
    throw std::invalid_argument("singleton structure variables must be distinct");
  std::string name = "pin(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) name += ",";
    name += vars[i];
  }
  name += ")";
  std::vector<std::string> universe(vars.begin(), vars.end());
  std::map<std::string, std::set<Tuple>> relations;
  relations[name] = {Tuple(vars.begin(), vars.end())};
  return RelationalStructure({{name, static_cast<int>(vars.size())}}, std::move(universe),
                             std::move(relations));
}

// Componentwise containment of substructures over the same vocabulary.
inline bool substructure_leq(const RelationalStructure& x, const RelationalStructure& y) {
  if (!std::includes(y.universe().begin(), y.universe().end(), x.universe().begin(),
                     x.universe().end()))
    return false;
  for (const auto& [name, ts] : x.relations()) {
    auto it = y.relations().find(name);
    if (it == y.relations().end()) {
      if (!ts.empty()) return false;
      continue;
    }
    if (!std::includes(it->second.begin(), it->second.end(), ts.begin(), ts.end())) return false;
  }
  return true;
}

// All cores of a: enumerate endomorphism images, keep the inclusion-minimal
// ones.  Every image admits a homomorphism from a (the endomorphism itself),
// and a substructure strictly below a minimal image that still admitted one
// would produce a strictly smaller image, so minimal images are exactly the
// cores.  Exponential-time backtracking; desk scale only.
inline std::vector<RelationalStructure> compute_cores(const RelationalStructure& a) {
  detail::HomSearch search(a, a);
  std::set<std::pair<std::vector<std::string>, std::map<std::string, std::set<Tuple>>>> images;
  const auto& au = a.universe();
  search.run([&](const std::vector<int>& assign) {
    std::set<std::string> uni;
    for (int v : assign) uni.insert(au[v]);
    std::map<std::string, std::set<Tuple>> rel;
    for (const auto& [sym, ts] : a.relations()) {
      auto& target = rel[sym];
      for (const Tuple& t : ts) {
        Tuple image;
        image.reserve(t.size());
        for (const auto& e : t) image.push_back(au[assign[std::lower_bound(au.begin(), au.end(), e) - au.begin()]]);
        target.insert(std::move(image));
      }
    }
    images.insert({std::vector<std::string>(uni.begin(), uni.end()), std::move(rel)});
    return true;
  });

  std::vector<RelationalStructure> candidates;
  for (const auto& [uni, rel] : images)
    candidates.emplace_back(a.symbols(), uni, rel);

  std::vector<RelationalStructure> cores;
  for (const auto& c : candidates) {
    bool minimal = true;
    for (const auto& other : candidates)
      if (!(other == c) && substructure_leq(other, c)) {
        minimal = false;
        break;
      }
    if (minimal) cores.push_back(c);
  }
  std::sort(cores.begin(), cores.end());
  return cores;
}

// Domain-restricted version of (a, b, vars): adds dom(X) for every X in vars
// that lacks one.  The allowed values for X are projected from the first
// relation (in canonical symbol order) whose variable side mentions X, at the
// first position of X in its first such tuple.
inline std::pair<RelationalStructure, RelationalStructure> domain_restricted_version(
    const RelationalStructure& a, const RelationalStructure& b,
    const std::vector<std::string>& vars) {
  std::vector<Symbol> symbols = a.symbols();
  std::vector<Symbol> bsymbols = b.symbols();
  auto arel = a.relations();
  auto brel = b.relations();
  std::set<std::string> already = a.restricted_variables();

  for (const auto& x : vars) {
    if (already.count(x)) continue;
    already.insert(x);
    std::string chosen_sym;
    int chosen_pos = -1;
    for (const auto& s : a.symbols()) {
      for (const Tuple& t : a.tuples(s.name)) {
        auto it = std::find(t.begin(), t.end(), x);
        if (it != t.end()) {
          chosen_sym = s.name;
          chosen_pos = static_cast<int>(it - t.begin());
          break;
        }
      }
      if (chosen_pos >= 0) break;
    }
    if (chosen_pos < 0)
      throw std::invalid_argument("variable " + x + " occurs in no constraint; cannot restrict");

    std::set<Tuple> values;
    auto bit = brel.find(chosen_sym);
    if (bit != brel.end())
      for (const Tuple& t : bit->second) values.insert({t[chosen_pos]});

    std::string dname = dom_symbol_name(x);
    symbols.push_back({dname, 1});
    bsymbols.push_back({dname, 1});
    arel[dname] = {{x}};
    brel[dname] = std::move(values);
  }

  return {RelationalStructure(std::move(symbols), a.universe(), std::move(arel)),
          RelationalStructure(std::move(bsymbols), b.universe(), std::move(brel))};
}

// Instance-level checks shared by every consumer of an (A, B, O) triple.
inline Diagnostics validate_instance(const RelationalStructure& a, const RelationalStructure& b,
                                     const std::vector<std::string>& output) {
  Diagnostics d;

  {
    auto as = a.symbols();
    auto bs = b.symbols();
    if (as != bs) d.errors.push_back("vocabulary mismatch between the two structures");
  }

  for (const auto& s : a.symbols()) {
    auto v = dom_symbol_var(s.name);
    if (!v) continue;
    if (s.arity != 1) d.errors.push_back(s.name + ": domain relations must be unary");
    if (!a.has_element(*v)) d.errors.push_back(s.name + ": variable outside the universe");
    const auto& ts = a.tuples(s.name);
    if (ts.size() != 1 || *ts.begin() != Tuple{*v})
      d.errors.push_back(s.name + ": variable side must hold exactly the tuple <" + *v + ">");
  }

  std::set<std::string> in_scope;
  for (const auto& [_, ts] : a.relations())
    for (const Tuple& t : ts)
      for (const auto& e : t) in_scope.insert(e);

  std::set<std::string> seen;
  for (const auto& x : output) {
    if (!a.has_element(x)) {
      d.errors.push_back("output variable " + x + " outside the universe");
      continue;
    }
    if (!seen.insert(x).second) d.errors.push_back("duplicate output variable " + x);
    if (!in_scope.count(x))
      d.errors.push_back("output variable " + x + " occurs in no constraint scope");
  }

  // Connectivity of the constraint hypergraph, elements as nodes.
  if (a.universe().size() > 1) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [_, ts] : a.relations())
      for (const Tuple& t : ts)
        for (const auto& x : t)
          for (const auto& y : t)
            if (x != y) adj[x].push_back(y);
    std::set<std::string> visited;
    std::vector<std::string> stack = {a.universe().front()};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!visited.insert(cur).second) continue;
      for (const auto& nxt : adj[cur]) stack.push_back(nxt);
    }
    if (visited.size() != a.universe().size())
      d.warnings.push_back("constraint hypergraph is disconnected");
  }

  return d;
}

}  // namespace tpenum
