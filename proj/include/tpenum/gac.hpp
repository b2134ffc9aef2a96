#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "tpenum/views.hpp"

namespace tpenum {

struct GacResult {
  ViewPair views;
  long long semijoin_passes = 0;
  long long deleting_passes = 0;
};

namespace detail {

// Positions of the shared variables inside each scope, in variable order.
// Both scopes are sorted, so a merge walk suffices.
inline std::pair<std::vector<int>, std::vector<int>> shared_positions(
    const std::vector<std::string>& r, const std::vector<std::string>& s) {
  std::vector<int> pr, ps;
  std::size_t i = 0, j = 0;
  while (i < r.size() && j < s.size()) {
    if (r[i] == s[j]) {
      pr.push_back(static_cast<int>(i));
      ps.push_back(static_cast<int>(j));
      ++i, ++j;
    } else if (r[i] < s[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return {std::move(pr), std::move(ps)};
}

inline Tuple project(const Tuple& t, const std::vector<int>& positions) {
  Tuple out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(t[p]);
  return out;
}

}  // namespace detail

// Greatest fixpoint of pairwise consistency over the views: repeatedly drop
// tuples with no partner on the shared variables of another view, then, if
// any view drained completely, drain them all (an empty view admits no
// solution at all).  The fixpoint is unique, so the worklist order only
// affects the trace counters, never the result.
//
// shuffle_seed randomises the initial schedule.  changed_view resumes from a
// state known pairwise consistent before that one view shrank: only pairs
// checking against it can fire first, so seeding those reaches the same
// fixpoint as a full restart.
inline GacResult gac_traced(const ViewPair& input,
                            std::optional<unsigned long long> shuffle_seed = std::nullopt,
                            std::optional<int> changed_view = std::nullopt) {
  const int n = static_cast<int>(input.size());
  GacResult result;
  std::vector<View> views = input.views();

  struct PairInfo {
    int target, other;
    std::vector<int> target_positions, other_positions;
  };
  std::vector<PairInfo> pairs;
  std::vector<std::vector<int>> checks_against(n);  // pair ids with .other == i
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto [pi, pj] = detail::shared_positions(views[i].scope, views[j].scope);
      if (pi.empty()) continue;
      checks_against[j].push_back(static_cast<int>(pairs.size()));
      pairs.push_back({i, j, std::move(pi), std::move(pj)});
    }

  std::vector<int> initial;
  if (changed_view) {
    initial = checks_against[*changed_view];
  } else {
    initial.resize(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) initial[p] = static_cast<int>(p);
  }
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(initial.begin(), initial.end(), rng);
  }

  std::deque<int> queue(initial.begin(), initial.end());
  std::vector<char> queued(pairs.size(), 0);
  for (int p : queue) queued[p] = 1;

  while (!queue.empty()) {
    int p = queue.front();
    queue.pop_front();
    queued[p] = 0;
    const PairInfo& info = pairs[p];
    View& target = views[info.target];
    const View& other = views[info.other];

    ++result.semijoin_passes;
    std::set<Tuple> partners;
    for (const Tuple& u : other.tuples) partners.insert(detail::project(u, info.other_positions));
    std::set<Tuple> kept;
    for (const Tuple& t : target.tuples)
      if (partners.count(detail::project(t, info.target_positions))) kept.insert(t);

    if (kept.size() != target.tuples.size()) {
      ++result.deleting_passes;
      target.tuples = std::move(kept);
      for (int q : checks_against[info.target])
        if (!queued[q]) {
          queued[q] = 1;
          queue.push_back(q);
        }
    }
  }

  bool any_empty = false;
  for (const View& v : views)
    if (v.tuples.empty()) {
      any_empty = true;
      break;
    }
  if (any_empty)
    for (View& v : views) v.tuples.clear();

  result.views = ViewPair(std::move(views));
  return result;
}

inline ViewPair gac(const ViewPair& input) { return gac_traced(input).views; }

// True when every view already survives every semijoin, with the all-or-none
// emptiness convention above.
inline bool is_pairwise_consistent(const ViewPair& input) {
  const auto& views = input.views();
  bool any_empty = false, all_empty = true;
  for (const View& v : views) {
    if (v.tuples.empty())
      any_empty = true;
    else
      all_empty = false;
  }
  if (any_empty) return all_empty;
  for (std::size_t i = 0; i < views.size(); ++i)
    for (std::size_t j = 0; j < views.size(); ++j) {
      if (i == j) continue;
      auto [pi, pj] = detail::shared_positions(views[i].scope, views[j].scope);
      if (pi.empty()) continue;
      std::set<Tuple> partners;
      for (const Tuple& u : views[j].tuples) partners.insert(detail::project(u, pj));
      for (const Tuple& t : views[i].tuples)
        if (!partners.count(detail::project(t, pi))) return false;
    }
  return true;
}

}  // namespace tpenum
