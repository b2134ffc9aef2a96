#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpenum/enumerate.hpp"
#include "tpenum/structures.hpp"

namespace tpenum {

struct OracleBudget {
  std::size_t max_universe = 12;
  double max_maps = 1e8;
};

class OracleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference enumeration by plain backtracking over total maps, kept
// deliberately separate from the engine: no views, no propagation.  Returns
// the distinct projections onto the output list, sorted.  Refuses instances
// beyond the budget instead of running forever.
inline std::vector<PartialMap> oracle_enumerate(const RelationalStructure& a,
                                                const RelationalStructure& b,
                                                const std::vector<std::string>& output,
                                                const OracleBudget& budget = {}) {
  const auto& vars = a.universe();
  const auto& values = b.universe();
  if (vars.size() > budget.max_universe) {
    long double maps = 1.0L;
    bool over = false;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      maps *= static_cast<long double>(values.size());
      if (maps > static_cast<long double>(budget.max_maps)) {
        over = true;
        break;
      }
    }
    if (over)
      throw OracleBudgetError("oracle budget exceeded: " + std::to_string(vars.size()) +
                              " variables over " + std::to_string(values.size()) + " values");
  }

  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = static_cast<int>(i);
  for (const auto& x : output)
    if (!pos.count(x)) throw std::invalid_argument("output variable " + x + " outside the universe");

  struct Check {
    const std::set<Tuple>* allowed;
    std::vector<int> positions;
  };
  std::vector<std::vector<Check>> at(vars.size());
  for (const auto& [sym, ts] : a.relations())
    for (const Tuple& t : ts) {
      Check c;
      c.allowed = &b.tuples(sym);
      int last = 0;
      for (const auto& x : t) {
        int p = pos.at(x);
        c.positions.push_back(p);
        last = std::max(last, p);
      }
      at[last].push_back(std::move(c));
    }

  std::set<PartialMap> projections;
  Tuple assign(vars.size());
  auto rec = [&](auto&& self, std::size_t d) -> void {
    if (d == vars.size()) {
      PartialMap pm;
      for (const auto& x : output) pm[x] = assign[pos.at(x)];
      projections.insert(std::move(pm));
      return;
    }
    for (const auto& val : values) {
      assign[d] = val;
      bool ok = true;
      for (const Check& c : at[d]) {
        Tuple image;
        image.reserve(c.positions.size());
        for (int p : c.positions) image.push_back(assign[p]);
        if (!c.allowed->count(image)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, d + 1);
    }
  };
  rec(rec, 0);
  return {projections.begin(), projections.end()};
}

// Oriented grid over one binary relation R: vertices v<r>_<c>, edges between
// horizontal and vertical neighbours, directed away from the even
// checkerboard class.  That orientation keeps every single edge a retract of
// the unrestricted grid while leaving the neighbourhood structure intact.
// With restrict_corners the four corners carry dom() pins.
inline RelationalStructure gen_grid(int rows, int cols, bool restrict_corners) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs positive dimensions");
  auto name = [](int r, int c) { return "v" + std::to_string(r) + "_" + std::to_string(c); };

  std::vector<std::string> universe;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) universe.push_back(name(r, c));

  std::set<Tuple> edges;
  auto add = [&](int r, int c, int r2, int c2) {
    if ((r + c) % 2 == 0)
      edges.insert({name(r, c), name(r2, c2)});
    else
      edges.insert({name(r2, c2), name(r, c)});
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) add(r, c, r, c + 1);
      if (r + 1 < rows) add(r, c, r + 1, c);
    }

  std::vector<Symbol> symbols{{"R", 2}};
  std::map<std::string, std::set<Tuple>> rel;
  rel["R"] = std::move(edges);

  if (restrict_corners) {
    std::set<std::string> corners{name(0, 0), name(0, cols - 1), name(rows - 1, 0),
                                  name(rows - 1, cols - 1)};
    for (const auto& x : corners) {
      symbols.push_back({dom_symbol_name(x), 1});
      rel[dom_symbol_name(x)] = {{x}};
    }
  }

  return RelationalStructure(std::move(symbols), std::move(universe), std::move(rel));
}

struct ThreeColInstance {
  RelationalStructure a;
  RelationalStructure b;
};

// Colourability gadget: the input graph (vertices u0..u<n-1>, one edge tuple
// per undirected edge, endpoints in sorted order) plus two fresh mutually
// adjacent vertices both attached to u0.  The augmented graph maps into the
// inequality triple exactly when the input graph is 3-colourable.
inline ThreeColInstance gen_3col(int n, const std::vector<std::pair<int, int>>& graph_edges) {
  if (n < 1) throw std::invalid_argument("gadget needs at least one vertex");
  auto name = [](int i) { return "u" + std::to_string(i); };

  std::vector<std::string> universe;
  for (int i = 0; i < n; ++i) universe.push_back(name(i));
  universe.push_back("w0");
  universe.push_back("w1");

  std::set<Tuple> edges;
  for (auto [x, y] : graph_edges) {
    if (x == y || x < 0 || y < 0 || x >= n || y >= n)
      throw std::invalid_argument("bad edge in graph");
    std::string a = name(std::min(x, y)), b = name(std::max(x, y));
    edges.insert({a, b});
  }
  edges.insert({"w0", "w1"});
  edges.insert({name(0), "w0"});
  edges.insert({name(0), "w1"});

  std::set<Tuple> diff;
  for (const std::string x : {"1", "2", "3"})
    for (const std::string y : {"1", "2", "3"})
      if (x != y) diff.insert({x, y});

  RelationalStructure a({{"E", 2}}, universe, {{"E", std::move(edges)}});
  RelationalStructure b({{"E", 2}}, {"1", "2", "3"}, {{"E", std::move(diff)}});
  return {std::move(a), std::move(b)};
}

struct SampleParams {
  int max_vars = 7;
  int max_values = 4;
  int max_symbols = 2;
  int max_constraints = 6;
  int max_b_tuples = 10;
  int max_output = 3;
};

struct SampledInstance {
  RelationalStructure a;
  RelationalStructure b;
  std::vector<std::string> output;
};

namespace detail {

inline std::size_t rng_below(std::mt19937_64& rng, std::size_t n) {
  return n ? static_cast<std::size_t>(rng() % n) : 0;
}

}  // namespace detail

// Small random instance; the universe keeps only variables that occur in
// some constraint, so every produced instance validates and every variable
// is pinnable.  All draws go through rng() directly for reproducibility
// across platforms.
inline SampledInstance sample_instance(const SampleParams& p, std::mt19937_64& rng) {
  using detail::rng_below;
  const int n_vars = 2 + static_cast<int>(rng_below(rng, static_cast<std::size_t>(p.max_vars - 1)));
  const int n_vals =
      2 + static_cast<int>(rng_below(rng, static_cast<std::size_t>(p.max_values - 1)));
  const int n_syms = 1 + static_cast<int>(rng_below(rng, static_cast<std::size_t>(p.max_symbols)));

  std::vector<std::string> pool;
  for (int i = 1; i <= n_vars; ++i) pool.push_back("X" + std::to_string(i));
  std::vector<std::string> values;
  for (int i = 0; i < n_vals; ++i) values.push_back(std::string(1, static_cast<char>('a' + i)));

  std::vector<Symbol> symbols;
  const std::string sym_names[] = {"R", "S", "T", "U"};
  for (int i = 0; i < n_syms; ++i)
    symbols.push_back({sym_names[i], 1 + static_cast<int>(rng_below(rng, 3))});

  std::map<std::string, std::set<Tuple>> arel, brel;
  for (const auto& s : symbols) arel[s.name], brel[s.name];

  const int n_cons = 1 + static_cast<int>(rng_below(rng, static_cast<std::size_t>(p.max_constraints)));
  std::set<std::string> covered;
  for (int i = 0; i < n_cons; ++i) {
    const Symbol& s = symbols[rng_below(rng, symbols.size())];
    Tuple t;
    for (int j = 0; j < s.arity; ++j) t.push_back(pool[rng_below(rng, pool.size())]);
    covered.insert(t.begin(), t.end());
    arel[s.name].insert(std::move(t));
  }

  for (const auto& s : symbols) {
    const int n_t = 1 + static_cast<int>(rng_below(rng, static_cast<std::size_t>(p.max_b_tuples)));
    for (int i = 0; i < n_t; ++i) {
      Tuple t;
      for (int j = 0; j < s.arity; ++j) t.push_back(values[rng_below(rng, values.size())]);
      brel[s.name].insert(std::move(t));
    }
  }

  std::vector<std::string> universe(covered.begin(), covered.end());

  std::vector<std::string> output = universe;
  for (std::size_t i = output.size(); i > 1; --i)
    std::swap(output[i - 1], output[rng_below(rng, i)]);
  const std::size_t o_size =
      rng_below(rng, std::min<std::size_t>(p.max_output, output.size()) + 1);
  output.resize(o_size);

  return {RelationalStructure(symbols, universe, std::move(arel)),
          RelationalStructure(symbols, values, std::move(brel)), std::move(output)};
}

// Brute isomorphism test, usable for desk-size structures only.
inline bool are_isomorphic(const RelationalStructure& a, const RelationalStructure& b) {
  if (a.symbols() != b.symbols()) return false;
  const auto& ua = a.universe();
  const auto& ub = b.universe();
  if (ua.size() != ub.size()) return false;
  if (ua.size() > 8) throw std::invalid_argument("isomorphism test limited to 8 elements");

  std::vector<int> perm(ua.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < ua.size(); ++i) pos[ua[i]] = static_cast<int>(i);

  do {
    bool ok = true;
    for (const auto& [sym, ts] : a.relations()) {
      const auto& target = b.tuples(sym);
      if (ts.size() != target.size()) {
        ok = false;
        break;
      }
      for (const Tuple& t : ts) {
        Tuple image;
        image.reserve(t.size());
        for (const auto& x : t) image.push_back(ub[perm[pos.at(x)]]);
        if (!target.count(image)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

struct DelayReport {
  long long max_gap = 0;
  long long bound = 1;
  bool within_bound = false;
  long long failed_extensions = 0;
  double wall_seconds = 0.0;
};

// Delay check against the propagation-count bound: at most one propagation
// per ordered variable between consecutive outputs (and before the first and
// after the last), with max(1, vars) covering the no-variable case.
inline DelayReport measure_delay(const EnumerationStats& stats, std::size_t ordered_vars) {
  DelayReport r;
  r.max_gap = stats.max_gap();
  r.bound = std::max<long long>(1, static_cast<long long>(ordered_vars));
  r.within_bound = r.max_gap <= r.bound;
  r.failed_extensions = stats.failed_extensions;
  r.wall_seconds = stats.wall_seconds;
  return r;
}

}  // namespace tpenum
