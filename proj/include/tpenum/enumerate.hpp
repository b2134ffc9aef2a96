#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpenum/gac.hpp"
#include "tpenum/structures.hpp"
#include "tpenum/views.hpp"

namespace tpenum {

enum class EventKind { projected_solution, certified_solution, dm_failure };

struct SolutionEvent {
  EventKind kind = EventKind::projected_solution;
  PartialMap solution;     // over the output variables
  PartialMap certificate;  // certified solutions: over the remaining variables

  friend bool operator==(const SolutionEvent&, const SolutionEvent&) = default;
};

struct EnumerationStats {
  long long solutions = 0;
  long long gac_calls = 0;
  long long semijoin_passes = 0;
  long long deleting_passes = 0;
  long long failed_extensions = 0;
  // Propagation calls per gap: before each emitted event and one terminal
  // entry after the last.
  std::vector<long long> gac_per_gap;
  bool top_level_empty = false;
  bool dm_failure = false;
  double wall_seconds = 0.0;

  long long max_gap() const {
    long long m = 0;
    for (long long g : gac_per_gap) m = std::max(m, g);
    return m;
  }
};

// Pull-based enumeration over a fixed variable order by propagate-and-fix:
// run the consistency fixpoint, read the active values of the current
// variable's domain view, and either emit or pin one value and descend.
//
// In plain mode the order holds only the output variables and every frame of
// the deepest level emits one projected solution.  In certified mode the
// order holds every variable; reaching the deepest level emits the projected
// assignment together with the first witness for the remaining variables,
// then abandons all frames beyond the output prefix, and any drained view
// after a pinning step reports a decomposition failure and halts the stream.
class SolutionStream {
 public:
  SolutionStream(ViewPair views, std::vector<std::string> order, std::size_t output_count,
                 bool certified)
      : views_(std::move(views)),
        order_(std::move(order)),
        m_(output_count),
        certified_(certified) {
    if (m_ > order_.size()) throw std::invalid_argument("output prefix longer than the order");
    if (!certified_ && m_ != order_.size())
      throw std::invalid_argument("plain enumeration orders exactly the output variables");
    for (const auto& x : order_)
      if (views_.dom_view(x) < 0)
        throw std::invalid_argument("no domain view for variable " + x);
  }

  const std::vector<std::string>& order() const { return order_; }
  std::size_t output_count() const { return m_; }
  bool done() const { return finished_; }
  const EnumerationStats& stats() const { return stats_; }

  std::optional<SolutionEvent> next() {
    if (finished_) return std::nullopt;
    auto t0 = std::chrono::steady_clock::now();
    auto out = step();
    stats_.wall_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

 private:
  struct Frame {
    ViewPair state;                   // fixpoint with the previous variables pinned
    std::vector<std::string> active;  // remaining values for this frame's variable
    std::size_t cursor = 0;
  };

  std::optional<SolutionEvent> step() {
    if (!started_) {
      started_ = true;
      assignment_.resize(order_.size());
      GacResult root = gac_traced(views_);
      absorb(root);
      if (root.views.any_empty()) {
        stats_.top_level_empty = true;
        return finish();
      }
      if (order_.empty()) {
        SolutionEvent ev;
        ev.kind = certified_ ? EventKind::certified_solution : EventKind::projected_solution;
        return emit(std::move(ev));
      }
      frames_.push_back({std::move(root.views), {}, 0});
      frames_.back().active = active_values(frames_.back().state, order_[0]);
    }

    while (!frames_.empty()) {
      Frame& f = frames_.back();
      const std::size_t d = frames_.size() - 1;
      if (f.cursor >= f.active.size()) {
        frames_.pop_back();
        continue;
      }
      const std::string value = f.active[f.cursor++];
      assignment_[d] = value;

      if (d + 1 == order_.size()) {
        SolutionEvent ev;
        if (certified_) {
          ev.kind = EventKind::certified_solution;
          for (std::size_t i = 0; i < m_; ++i) ev.solution[order_[i]] = assignment_[i];
          for (std::size_t i = m_; i < order_.size(); ++i)
            ev.certificate[order_[i]] = assignment_[i];
          if (m_ < order_.size()) frames_.resize(m_);
        } else {
          ev.kind = EventKind::projected_solution;
          for (std::size_t i = 0; i < order_.size(); ++i) ev.solution[order_[i]] = assignment_[i];
        }
        return emit(std::move(ev));
      }

      int dom = f.state.dom_view(order_[d]);
      GacResult child = gac_traced(f.state.with_tuples(dom, {{value}}), std::nullopt, dom);
      absorb(child);
      if (child.views.any_empty()) {
        if (certified_) {
          stats_.dm_failure = true;
          frames_.clear();
          SolutionEvent ev;
          ev.kind = EventKind::dm_failure;
          return emit(std::move(ev));
        }
        ++stats_.failed_extensions;
        continue;
      }
      frames_.push_back({std::move(child.views), {}, 0});
      frames_.back().active = active_values(frames_.back().state, order_[d + 1]);
    }
    return finish();
  }

  static std::vector<std::string> active_values(const ViewPair& state, const std::string& var) {
    const View& v = state.at(state.dom_view(var));
    std::vector<std::string> out;
    out.reserve(v.tuples.size());
    for (const Tuple& t : v.tuples) out.push_back(t[0]);
    return out;
  }

  void absorb(const GacResult& r) {
    ++stats_.gac_calls;
    ++current_gap_;
    stats_.semijoin_passes += r.semijoin_passes;
    stats_.deleting_passes += r.deleting_passes;
  }

  std::optional<SolutionEvent> emit(SolutionEvent ev) {
    stats_.gac_per_gap.push_back(current_gap_);
    current_gap_ = 0;
    if (ev.kind != EventKind::dm_failure) ++stats_.solutions;
    return ev;
  }

  std::optional<SolutionEvent> finish() {
    stats_.gac_per_gap.push_back(current_gap_);
    current_gap_ = 0;
    finished_ = true;
    return std::nullopt;
  }

  ViewPair views_;
  std::vector<std::string> order_;
  std::size_t m_;
  bool certified_;
  bool started_ = false;
  bool finished_ = false;
  std::vector<Frame> frames_;
  std::vector<std::string> assignment_;
  EnumerationStats stats_;
  long long current_gap_ = 0;
};

namespace detail {

inline void require_valid(const RelationalStructure& a, const RelationalStructure& b,
                          const std::vector<std::string>& output) {
  Diagnostics d = validate_instance(a, b, output);
  if (!d.ok()) {
    std::string msg = "invalid instance:";
    for (const auto& e : d.errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
}

}  // namespace detail

// Projected enumeration: pin the output variables one by one, propagating
// after each choice.  Complete and duplicate free whenever the instance is
// covered for the chosen method; polynomial delay additionally needs the
// per-variable (certified) covering.
inline SolutionStream enumerate_all(const RelationalStructure& a, const RelationalStructure& b,
                                    const std::vector<std::string>& output,
                                    const MethodSpec& spec) {
  detail::require_valid(a, b, output);
  auto [ra, rb] = domain_restricted_version(a, b, output);
  return SolutionStream(build_views(ra, rb, spec), output, output.size(), false);
}

// Certified enumeration: order every variable, output prefix first and the
// rest in canonical order, so each projected solution is emitted with a full
// witness.  A drained view after any pinning step is reported as a
// decomposition failure instead of being searched around, so the stream
// either matches the projected solution set exactly or ends with that
// failure event.
inline SolutionStream enumerate_certified(const RelationalStructure& a,
                                          const RelationalStructure& b,
                                          const std::vector<std::string>& output,
                                          const MethodSpec& spec) {
  detail::require_valid(a, b, output);
  std::set<std::string> covered;
  for (const auto& [sym, ts] : a.relations()) {
    if (dom_symbol_var(sym)) continue;
    for (const Tuple& t : ts) covered.insert(t.begin(), t.end());
  }
  for (const auto& x : a.universe())
    if (!covered.count(x))
      throw std::invalid_argument("variable " + x +
                                  " occurs in no constraint; certified enumeration needs every "
                                  "variable pinnable");

  std::vector<std::string> order = output;
  std::set<std::string> in_output(output.begin(), output.end());
  for (const auto& x : a.universe())
    if (!in_output.count(x)) order.push_back(x);

  auto [ra, rb] = domain_restricted_version(a, b, order);
  return SolutionStream(build_views(ra, rb, spec), std::move(order), output.size(), true);
}

}  // namespace tpenum
