#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpenum/enumerate.hpp"
#include "tpenum/gac.hpp"
#include "tpenum/hypergraph.hpp"
#include "tpenum/instance_io.hpp"
#include "tpenum/structures.hpp"
#include "tpenum/testkit.hpp"
#include "tpenum/views.hpp"

namespace tpenum {

// Exit codes: 0 success, 1 internal error, 2 negative outcome (failure
// event, no tree projection, not covered), 3 bad input or arguments,
// 4 oracle budget refused.
namespace cli_detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance load_instance(const std::string& path) { return parse_instance(slurp(path)); }

inline MethodSpec spec_of(const std::string& method, int k) {
  auto m = method_from_string(method);
  if (!m) throw std::invalid_argument("unknown method " + method + " (expected tw or hw)");
  if (k < 1) throw std::invalid_argument("-k must be at least 1");
  return {*m, k};
}

inline void require_valid(const Instance& inst) {
  Diagnostics d = validate_instance(inst.a, inst.b, inst.output);
  if (!d.ok()) {
    std::string msg = "invalid instance:";
    for (const auto& e : d.errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
}

inline std::string view_to_jsonl(const View& v) {
  nlohmann::ordered_json j;
  j["view"] = v.name;
  j["scope"] = v.scope;
  j["base"] = v.base;
  nlohmann::ordered_json ts = nlohmann::ordered_json::array();
  for (const Tuple& t : v.tuples) ts.push_back(t);
  j["tuples"] = std::move(ts);
  return j.dump();
}

inline std::string hypergraph_edges_jsonl(const Hypergraph& h) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : h.edge_sets()) edges.push_back(e);
  j["edges"] = std::move(edges);
  return j.dump();
}

inline Hypergraph scopes_hypergraph(const std::string& path, const RelationalStructure& a) {
  auto scopes = parse_scopes(slurp(path));
  if (scopes.empty()) throw std::invalid_argument(path + ": no scopes found");
  return Hypergraph::from_sets(a.universe(), scopes);
}

// Shared streaming loop for the enumeration subcommands.  Returns the exit
// code: 2 when the stream reported a failure event, 0 otherwise.
inline int drain_stream(SolutionStream& stream, long long max_solutions, bool stats,
                        std::ostream& out) {
  bool failed = false;
  while (auto ev = stream.next()) {
    out << event_to_jsonl(*ev) << '\n' << std::flush;
    if (ev->kind == EventKind::dm_failure) failed = true;
    if (max_solutions > 0 && stream.stats().solutions >= max_solutions && !stream.done()) {
      out << truncated_jsonl() << '\n' << std::flush;
      break;
    }
  }
  if (stats) out << stats_to_jsonl(stream.stats()) << '\n' << std::flush;
  return failed ? 2 : 0;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;

  CLI::App app{"Constraint solution enumeration over decomposition views"};
  app.require_subcommand(1);

  std::string input, method = "tw", scopes_path;
  int k = 2;
  long long max_solutions = 0;
  bool stats = false;

  auto add_common = [&](CLI::App* cmd, bool needs_method) {
    cmd->add_option("-i,--input", input, "instance file (JSON)")->required();
    if (needs_method) {
      cmd->add_option("-m,--method", method, "decomposition method: tw or hw");
      cmd->add_option("-k,--k", k, "method width");
    }
    return cmd;
  };

  auto* c_enum = add_common(app.add_subcommand("enumerate", "stream projected solutions"), true);
  c_enum->add_option("--max-solutions", max_solutions, "stop after this many solutions");
  c_enum->add_flag("--stats", stats, "append a stats record");

  auto* c_cert = add_common(
      app.add_subcommand("enumerate-certified", "stream solutions with full witnesses"), true);
  c_cert->add_option("--max-solutions", max_solutions, "stop after this many solutions");
  c_cert->add_flag("--stats", stats, "append a stats record");

  auto* c_oracle =
      add_common(app.add_subcommand("oracle", "reference enumeration by brute force"), false);

  auto* c_views = add_common(app.add_subcommand("views", "print the generated views"), true);
  auto* c_gac =
      add_common(app.add_subcommand("gac", "print the views after the consistency fixpoint"), true);

  auto* c_tp = add_common(
      app.add_subcommand("check-tp", "search a tree projection for the instance hypergraph"),
      true);
  c_tp->add_option("--scopes", scopes_path, "file of view scopes replacing the method views");

  auto* c_cov = add_common(app.add_subcommand("tp-covered", "test output covering"), true);
  c_cov->add_option("--scopes", scopes_path, "file of view scopes replacing the method views");
  bool through_dm = false;
  c_cov->add_flag("--through-dm", through_dm, "pin output variables one by one");
  std::vector<std::string> output_override;
  auto* opt_output =
      c_cov->add_option("--output", output_override, "override the instance's output list");

  auto* c_core = add_common(app.add_subcommand("core", "print the cores of structure a"), false);

  auto* c_bench = add_common(app.add_subcommand("bench-delay", "measure enumeration delay"), true);
  bool bench_certified = false;
  c_bench->add_flag("--certified", bench_certified, "run the certified stream");
  c_bench->add_option("--max-solutions", max_solutions, "stop after this many solutions");

  auto* c_gen = app.add_subcommand("gen", "emit generated instances");
  c_gen->require_subcommand(1);
  int rows = 2, cols = 2, gadget_n = 1;
  bool restrict_corners = false;
  std::vector<std::string> edge_args;
  auto* g_grid = c_gen->add_subcommand("grid", "oriented grid instance");
  g_grid->add_option("--rows", rows, "grid rows")->required();
  g_grid->add_option("--cols", cols, "grid columns")->required();
  g_grid->add_flag("--restrict-corners", restrict_corners, "pin the four corners");
  auto* g_col = c_gen->add_subcommand("3col", "colourability gadget instance");
  g_col->add_option("--n", gadget_n, "graph vertices")->required();
  g_col->add_option("--edge", edge_args, "graph edge as i,j (repeatable)");
  unsigned long long seed = 0;
  SampleParams params;
  auto* g_rand = c_gen->add_subcommand("random", "sampled instance");
  g_rand->add_option("--seed", seed, "generator seed")->required();
  g_rand->add_option("--max-vars", params.max_vars, "variable cap");
  g_rand->add_option("--max-values", params.max_values, "value cap");
  g_rand->add_option("--max-constraints", params.max_constraints, "constraint cap");
  g_rand->add_option("--max-output", params.max_output, "output size cap");

  std::vector<std::string> argv{"tpenum"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> ptrs;
  for (const auto& s : argv) ptrs.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  try {
    if (c_enum->parsed() || c_cert->parsed()) {
      Instance inst = load_instance(input);
      MethodSpec spec = spec_of(method, k);
      SolutionStream stream = c_cert->parsed()
                                  ? enumerate_certified(inst.a, inst.b, inst.output, spec)
                                  : enumerate_all(inst.a, inst.b, inst.output, spec);
      return drain_stream(stream, max_solutions, stats, out);
    }

    if (c_oracle->parsed()) {
      Instance inst = load_instance(input);
      require_valid(inst);
      std::vector<PartialMap> sols;
      try {
        sols = oracle_enumerate(inst.a, inst.b, inst.output);
      } catch (const OracleBudgetError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
      }
      for (const auto& s : sols) {
        SolutionEvent ev{EventKind::projected_solution, s, {}};
        out << event_to_jsonl(ev) << '\n';
      }
      out << std::flush;
      return 0;
    }

    if (c_views->parsed() || c_gac->parsed()) {
      Instance inst = load_instance(input);
      require_valid(inst);
      ViewPair views = build_views(inst.a, inst.b, spec_of(method, k));
      if (c_gac->parsed()) {
        GacResult r = gac_traced(views);
        for (const View& v : r.views.views()) out << view_to_jsonl(v) << '\n';
        nlohmann::ordered_json j;
        j["event"] = "gac_stats";
        j["semijoin_passes"] = r.semijoin_passes;
        j["deleting_passes"] = r.deleting_passes;
        j["any_empty"] = r.views.any_empty();
        out << j.dump() << '\n' << std::flush;
      } else {
        for (const View& v : views.views()) out << view_to_jsonl(v) << '\n';
        out << std::flush;
      }
      return 0;
    }

    if (c_tp->parsed()) {
      Instance inst = load_instance(input);
      Hypergraph h1 = hypergraph_of(inst.a);
      Hypergraph h2 = scopes_path.empty() ? view_hypergraph(inst.a, spec_of(method, k))
                                          : scopes_hypergraph(scopes_path, inst.a);
      auto tp = find_tree_projection(h1, h2);
      if (tp) {
        out << "tree projection\n" << hypergraph_edges_jsonl(*tp) << '\n';
        return 0;
      }
      out << "no tree projection\n";
      return 2;
    }

    if (c_cov->parsed()) {
      Instance inst = load_instance(input);
      if (opt_output->count() > 0) inst.output = output_override;
      require_valid(inst);
      Hypergraph h2 = scopes_path.empty() ? view_hypergraph(inst.a, spec_of(method, k))
                                          : scopes_hypergraph(scopes_path, inst.a);
      bool covered = through_dm ? tp_covered_through_dm(inst.a, inst.output, h2)
                                : is_tp_covered(inst.a, h2, inst.output);
      out << (covered ? "covered\n" : "not covered\n");
      return covered ? 0 : 2;
    }

    if (c_core->parsed()) {
      Instance inst = load_instance(input);
      for (const auto& core : compute_cores(inst.a))
        out << structure_to_json(core).dump() << '\n';
      out << std::flush;
      return 0;
    }

    if (c_bench->parsed()) {
      Instance inst = load_instance(input);
      MethodSpec spec = spec_of(method, k);
      SolutionStream stream = bench_certified
                                  ? enumerate_certified(inst.a, inst.b, inst.output, spec)
                                  : enumerate_all(inst.a, inst.b, inst.output, spec);
      bool failed = false;
      while (auto ev = stream.next()) {
        if (ev->kind == EventKind::dm_failure) failed = true;
        if (max_solutions > 0 && stream.stats().solutions >= max_solutions) break;
      }
      DelayReport r = measure_delay(stream.stats(), stream.order().size());
      nlohmann::ordered_json j;
      j["event"] = "delay_report";
      j["solutions"] = stream.stats().solutions;
      j["max_gap"] = r.max_gap;
      j["bound"] = r.bound;
      j["within_bound"] = r.within_bound;
      j["failed_extensions"] = r.failed_extensions;
      j["dm_failure"] = failed;
      j["wall_seconds"] = r.wall_seconds;
      out << j.dump() << '\n' << std::flush;
      return failed ? 2 : 0;
    }

    if (g_grid->parsed()) {
      RelationalStructure grid = gen_grid(rows, cols, restrict_corners);
      out << serialize_instance({grid, grid, {}}) << std::flush;
      return 0;
    }

    if (g_col->parsed()) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : edge_args) {
        auto comma = e.find(',');
        if (comma == std::string::npos)
          throw std::invalid_argument("bad --edge " + e + " (expected i,j)");
        try {
          edges.emplace_back(std::stoi(e.substr(0, comma)), std::stoi(e.substr(comma + 1)));
        } catch (const std::exception&) {
          throw std::invalid_argument("bad --edge " + e + " (expected i,j)");
        }
      }
      ThreeColInstance inst = gen_3col(gadget_n, edges);
      out << serialize_instance({inst.a, inst.b, {}}) << std::flush;
      return 0;
    }

    if (g_rand->parsed()) {
      std::mt19937_64 rng(seed);
      SampledInstance s = sample_instance(params, rng);
      out << serialize_instance({s.a, s.b, s.output}) << std::flush;
      return 0;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }

  err << "error: no subcommand\n";
  return 3;
}

}  // namespace tpenum
