#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpenum/enumerate.hpp"
#include "tpenum/structures.hpp"

namespace tpenum {

struct Instance {
  RelationalStructure a;
  RelationalStructure b;
  std::vector<std::string> output;

  friend bool operator==(const Instance&, const Instance&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key,
                                  const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string())
      throw ParseError(where + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

inline RelationalStructure structure_from_json(const std::vector<Symbol>& symbols,
                                               const nlohmann::json& node,
                                               const std::string& where) {
  std::vector<std::string> universe = string_list(need(node, "universe", where), where + ".universe");

  const nlohmann::json& rels = need(node, "relations", where);
  if (!rels.is_object()) throw ParseError(where + ".relations: expected an object");
  std::set<std::string> known;
  for (const auto& s : symbols) known.insert(s.name);

  std::map<std::string, std::set<Tuple>> relations;
  for (auto it = rels.begin(); it != rels.end(); ++it) {
    const std::string loc = where + ".relations." + it.key();
    if (!known.count(it.key())) throw ParseError(loc + ": symbol not in the vocabulary");
    if (!it.value().is_array()) throw ParseError(loc + ": expected an array of tuples");
    std::set<Tuple>& ts = relations[it.key()];
    for (std::size_t i = 0; i < it.value().size(); ++i)
      ts.insert(string_list(it.value()[i], loc + "[" + std::to_string(i) + "]"));
  }

  try {
    return RelationalStructure(symbols, std::move(universe), std::move(relations));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

// Instance files: one JSON object with a shared vocabulary, the two
// structures, and the output list.
//
//   {"vocabulary": {"R": 2},
//    "a": {"universe": ["X", "Y"], "relations": {"R": [["X", "Y"]]}},
//    "b": {"universe": ["0", "1"], "relations": {"R": [["0", "1"]]}},
//    "output": ["X"]}
inline Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(detail::line_of_byte(text, e.byte)) +
                     ": not valid JSON");
  }

  const nlohmann::json& vocab = detail::need(j, "vocabulary", "instance");
  if (!vocab.is_object()) throw ParseError("vocabulary: expected an object");
  std::vector<Symbol> symbols;
  for (auto it = vocab.begin(); it != vocab.end(); ++it) {
    if (!it.value().is_number_integer() || it.value().get<long long>() < 1)
      throw ParseError("vocabulary." + it.key() + ": expected a positive integer arity");
    symbols.push_back({it.key(), static_cast<int>(it.value().get<long long>())});
  }

  RelationalStructure a = detail::structure_from_json(symbols, detail::need(j, "a", "instance"), "a");
  RelationalStructure b = detail::structure_from_json(symbols, detail::need(j, "b", "instance"), "b");
  std::vector<std::string> output =
      detail::string_list(detail::need(j, "output", "instance"), "output");
  return {std::move(a), std::move(b), std::move(output)};
}

inline nlohmann::ordered_json structure_to_json(const RelationalStructure& s) {
  nlohmann::ordered_json node;
  node["universe"] = s.universe();
  nlohmann::ordered_json rels = nlohmann::ordered_json::object();
  for (const auto& [sym, ts] : s.relations()) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const Tuple& t : ts) list.push_back(t);
    rels[sym] = std::move(list);
  }
  node["relations"] = std::move(rels);
  return node;
}

inline std::string serialize_instance(const Instance& inst) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
  for (const auto& s : inst.a.symbols()) vocab[s.name] = s.arity;
  j["vocabulary"] = std::move(vocab);
  j["a"] = structure_to_json(inst.a);
  j["b"] = structure_to_json(inst.b);
  j["output"] = inst.output;
  return j.dump(2) + "\n";
}

// Scope files for externally supplied views: one scope per line, variables
// separated by spaces or commas, '#' starts a comment.
inline std::vector<std::set<std::string>> parse_scopes(const std::string& text) {
  std::vector<std::set<std::string>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::set<std::string> scope;
    std::string token;
    for (char c : line + " ") {
      if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
        if (!token.empty()) scope.insert(token);
        token.clear();
      } else {
        token += c;
      }
    }
    if (!scope.empty()) out.push_back(std::move(scope));
  }
  return out;
}

inline std::string event_to_jsonl(const SolutionEvent& ev) {
  nlohmann::ordered_json j;
  switch (ev.kind) {
    case EventKind::projected_solution:
      j["event"] = "projected_solution";
      j["solution"] = ev.solution;
      break;
    case EventKind::certified_solution:
      j["event"] = "certified_solution";
      j["solution"] = ev.solution;
      j["certificate"] = ev.certificate;
      break;
    case EventKind::dm_failure:
      j["event"] = "dm_failure";
      break;
  }
  return j.dump();
}

inline std::string stats_to_jsonl(const EnumerationStats& s) {
  nlohmann::ordered_json j;
  j["event"] = "stats";
  j["solutions"] = s.solutions;
  j["gac_calls"] = s.gac_calls;
  j["semijoin_passes"] = s.semijoin_passes;
  j["deleting_passes"] = s.deleting_passes;
  j["failed_extensions"] = s.failed_extensions;
  j["max_gap"] = s.max_gap();
  j["gac_per_gap"] = s.gac_per_gap;
  j["top_level_empty"] = s.top_level_empty;
  j["dm_failure"] = s.dm_failure;
  j["wall_seconds"] = s.wall_seconds;
  return j.dump();
}

inline std::string truncated_jsonl() { return R"({"event":"truncated"})"; }

}  // namespace tpenum
