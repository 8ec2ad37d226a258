// Copyright 2026 The finegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON formats for group specs, graph files and JSON-lines reports.

#ifndef FINEGRAPH_TOOLS_SPEC_IO_HPP
#define FINEGRAPH_TOOLS_SPEC_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "finegraph/finegraph.hpp"
#include "json.hpp"

namespace finegraph::io {

using nlohmann::ordered_json;

/// Malformed input, with a JSON-pointer style location.
class SpecError : public InvalidInput {
 public:
  SpecError(const std::string& where, const std::string& what) : InvalidInput(where + ": " + what) {}
};

inline ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, "cannot open file");
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw SpecError(path + " (byte " + std::to_string(e.byte) + ")", "malformed JSON");
  }
}

namespace detail {

inline const ordered_json& field(const ordered_json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SpecError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(where, "missing field '" + key + "'");
  return *it;
}

inline int as_int(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SpecError(where, "expected an integer");
  return j.get<int>();
}

inline std::string as_string(const ordered_json& j, const std::string& where) {
  if (!j.is_string()) throw SpecError(where, "expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> strings(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], where + "/" + std::to_string(i)));
  return out;
}

inline std::vector<std::vector<int>> int_rows(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where, "expected an array of arrays");
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "/" + std::to_string(i);
    if (!j[i].is_array()) throw SpecError(at, "expected an array");
    std::vector<int> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(as_int(j[i][k], at + "/" + std::to_string(k)));
    out.push_back(std::move(row));
  }
  return out;
}

inline std::vector<std::string> optional_names(const ordered_json& j, const std::string& where) {
  auto it = j.find("generators");
  return it == j.end() ? std::vector<std::string>{} : strings(*it, where + "/generators");
}

template <class F>
auto located(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw SpecError(where, e.what());
  }
}

}  // namespace detail

/// Group spec object. Kinds: "permutation" (images), "table" (table,
/// generator-elements), "free" and "free-abelian" (rank or generators),
/// "free-product" (factors), and the shorthands "symmetric", "dihedral",
/// "cyclic" (n).
inline GroupPtr parse_group(const ordered_json& j, const std::string& where = "group") {
  using namespace detail;
  const std::string kind = as_string(field(j, "kind", where), where + "/kind");
  auto names = optional_names(j, where);
  return located(where, [&]() -> GroupPtr {
    if (kind == "permutation") {
      return Group::permutation(int_rows(field(j, "images", where), where + "/images"), names);
    }
    if (kind == "table") {
      std::vector<int> gens;
      const auto& ge = field(j, "generator-elements", where);
      if (!ge.is_array()) throw SpecError(where + "/generator-elements", "expected an array");
      for (std::size_t i = 0; i < ge.size(); ++i) gens.push_back(as_int(ge[i], where + "/generator-elements/" + std::to_string(i)));
      return Group::finite_table(int_rows(field(j, "table", where), where + "/table"), gens, names);
    }
    if (kind == "free" || kind == "free-abelian") {
      int rank = j.contains("rank") ? as_int(j["rank"], where + "/rank") : static_cast<int>(names.size());
      if (!names.empty() && static_cast<int>(names.size()) != rank) {
        throw SpecError(where, "rank does not match the generator list");
      }
      if (rank == 0) return Group::permutation({}, {});  // the trivial group
      return kind == "free" ? Group::free(rank, names) : Group::free_abelian(rank, names);
    }
    if (kind == "free-product") {
      const auto& f = field(j, "factors", where);
      if (!f.is_array()) throw SpecError(where + "/factors", "expected an array");
      std::vector<GroupPtr> factors;
      for (std::size_t i = 0; i < f.size(); ++i) factors.push_back(parse_group(f[i], where + "/factors/" + std::to_string(i)));
      return Group::free_product(std::move(factors));
    }
    if (kind == "symmetric" || kind == "dihedral" || kind == "cyclic") {
      int n = as_int(field(j, "n", where), where + "/n");
      if (kind == "symmetric") return Group::symmetric(n);
      if (kind == "dihedral") return Group::dihedral(n);
      return Group::cyclic(n);
    }
    throw SpecError(where + "/kind", "unknown group kind '" + kind + "'");
  });
}

inline std::vector<Element> parse_words(const Group& group, const std::vector<std::string>& words,
                                        const std::string& where) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.push_back(detail::located(where + "/" + std::to_string(i), [&] { return group.parse(words[i]); }));
  }
  return out;
}

/// A group file: {"group": {...}, "subgroup": [words], "relative-generators": [words]}.
struct GroupSpec {
  GroupPtr group;
  std::optional<Subgroup> subgroup;
  std::vector<Element> relative_generators;
};

inline GroupSpec parse_group_spec(const ordered_json& j, const std::string& where = "") {
  GroupSpec spec;
  spec.group = parse_group(detail::field(j, "group", where), where + "/group");
  if (auto it = j.find("subgroup"); it != j.end()) {
    auto gens = parse_words(*spec.group, detail::strings(*it, where + "/subgroup"), where + "/subgroup");
    spec.subgroup = detail::located(where + "/subgroup", [&] { return Subgroup::generated_by(spec.group, gens); });
  }
  if (auto it = j.find("relative-generators"); it != j.end()) {
    spec.relative_generators =
        parse_words(*spec.group, detail::strings(*it, where + "/relative-generators"), where + "/relative-generators");
  }
  return spec;
}

inline GroupSpec load_group_spec(const std::string& path) { return parse_group_spec(load_json(path), path); }

/// A graph file: {"vertices": [id | {"id", "stabilizer"}], "edges": [[a, b]],
/// "apex": id, "action": {generator: {vertex: image}}}. Vertices missing from
/// a generator map have their image outside the window.
struct GraphSpec {
  SimplicialGraph graph;
  std::vector<StabilizerTag> tags;  // empty when no vertex declares one
  std::optional<Vertex> apex;
  std::map<std::string, std::map<std::string, std::string>> action;
};

inline GraphSpec parse_graph_spec(const ordered_json& j, const std::string& where = "") {
  using namespace detail;
  GraphSpec spec;
  GraphBuilder builder;
  std::map<std::string, StabilizerTag> declared;
  const auto& vs = field(j, "vertices", where);
  if (!vs.is_array()) throw SpecError(where + "/vertices", "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string at = where + "/vertices/" + std::to_string(i);
    std::string id;
    if (vs[i].is_string()) {
      id = vs[i].get<std::string>();
    } else {
      id = as_string(field(vs[i], "id", at), at + "/id");
      if (auto it = vs[i].find("stabilizer"); it != vs[i].end()) {
        std::string s = as_string(*it, at + "/stabilizer");
        if (s == "finite") {
          declared[id] = StabilizerTag::kFinite;
        } else if (s == "H") {
          declared[id] = StabilizerTag::kConjugateOfH;
        } else if (s != "unknown") {
          throw SpecError(at + "/stabilizer", "expected finite, H or unknown");
        }
      }
    }
    if (builder.has_vertex(id)) throw SpecError(at, "duplicate vertex '" + id + "'");
    located(at, [&] { return builder.add_vertex(id), 0; });
  }
  const auto& es = field(j, "edges", where);
  if (!es.is_array()) throw SpecError(where + "/edges", "expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string at = where + "/edges/" + std::to_string(i);
    auto pair = strings(es[i], at);
    if (pair.size() != 2) throw SpecError(at, "an edge has exactly two endpoints");
    for (const auto& v : pair) {
      if (!builder.has_vertex(v)) throw SpecError(at, "unknown vertex '" + v + "'");
    }
    located(at, [&] { return builder.add_edge(pair[0], pair[1]), 0; });
  }
  spec.graph = builder.build();
  if (!declared.empty()) {
    spec.tags.assign(spec.graph.num_vertices(), StabilizerTag::kUnknown);
    for (const auto& [id, tag] : declared) spec.tags[spec.graph.at(id)] = tag;
  }
  if (auto it = j.find("apex"); it != j.end()) {
    std::string id = as_string(*it, where + "/apex");
    auto v = spec.graph.find(id);
    if (!v) throw SpecError(where + "/apex", "unknown vertex '" + id + "'");
    spec.apex = *v;
  }
  if (auto it = j.find("action"); it != j.end()) {
    if (!it->is_object()) throw SpecError(where + "/action", "expected an object");
    for (const auto& [gen, m] : it->items()) {
      const std::string at = where + "/action/" + gen;
      if (!m.is_object()) throw SpecError(at, "expected an object");
      for (const auto& [v, image] : m.items()) {
        std::string target = as_string(image, at + "/" + v);
        if (!spec.graph.find(v) || !spec.graph.find(target)) throw SpecError(at + "/" + v, "unknown vertex");
        spec.action[gen][v] = target;
      }
    }
  }
  return spec;
}

inline GraphSpec load_graph_spec(const std::string& path) { return parse_graph_spec(load_json(path), path); }

/// The action of the ball of radius L induced by the generator maps; every
/// generator acts trivially when the file has no action.
inline GroupAction make_action(const GraphSpec& spec, const GroupPtr& group, int radius) {
  WindowPtr window = group->is_finite() ? Window::full(group) : Window::ball(group, radius);
  const std::size_t n = spec.graph.num_vertices();
  if (spec.action.empty()) return GroupAction::trivial(window, n);
  std::vector<std::vector<Vertex>> maps;
  for (const auto& name : group->generator_names()) {
    auto it = spec.action.find(name);
    if (it == spec.action.end()) throw SpecError("action", "no map for generator '" + name + "'");
    std::vector<Vertex> m(n, GroupAction::kOut);
    for (const auto& [v, image] : it->second) m[spec.graph.at(v)] = spec.graph.at(image);
    maps.push_back(std::move(m));
  }
  for (const auto& [name, m] : spec.action) {
    const auto& names = group->generator_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw SpecError("action/" + name, "not a generator of the group");
    }
  }
  auto action = detail::located("action", [&] { return GroupAction::from_generators(window, n, maps); });
  if (auto problem = action.verify(spec.graph)) throw SpecError("action", *problem);
  return action;
}

inline ordered_json graph_to_json(const SimplicialGraph& graph, const GroupAction* action,
                                  const std::vector<StabilizerTag>& tags, std::optional<Vertex> apex) {
  ordered_json j;
  j["vertices"] = ordered_json::array();
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (tags.empty() || tags[v] == StabilizerTag::kUnknown) {
      j["vertices"].push_back(graph.name(v));
    } else {
      j["vertices"].push_back({{"id", graph.name(v)}, {"stabilizer", std::string(to_string(tags[v]))}});
    }
  }
  j["edges"] = ordered_json::array();
  for (auto [a, b] : graph.edges()) j["edges"].push_back({graph.name(a), graph.name(b)});
  if (apex) j["apex"] = graph.name(*apex);
  if (action) {
    const Window& w = action->window();
    const Group& group = w.group();
    ordered_json maps = ordered_json::object();
    for (std::size_t i = 0; i < group.num_generators(); ++i) {
      auto g = w.find(group.generator(i));
      ordered_json m = ordered_json::object();
      for (Vertex v = 0; v < graph.num_vertices() && g; ++v) {
        Vertex x = action->image(*g, v);
        if (x != GroupAction::kOut) m[graph.name(v)] = graph.name(x);
      }
      maps[group.generator_names()[i]] = std::move(m);
    }
    j["action"] = std::move(maps);
  }
  return j;
}

/// One JSON-lines report record.
inline ordered_json record(const std::string& assertion, const std::string& instance, Verdict verdict,
                           ordered_json values = ordered_json::object(), ordered_json witness = nullptr) {
  ordered_json j;
  j["assertion"] = assertion;
  j["instance"] = instance;
  j["verdict"] = std::string(to_string(verdict));
  j["values"] = std::move(values);
  j["witness"] = std::move(witness);
  return j;
}

}  // namespace finegraph::io

#endif  // FINEGRAPH_TOOLS_SPEC_IO_HPP
