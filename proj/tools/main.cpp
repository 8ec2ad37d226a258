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

// finegraph command-line tool. Exit codes: 0 all assertions pass, 1 a
// property is violated (the report carries a witness), 2 window exceeded or
// inconclusive, 3 invalid input.

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpus.hpp"
#include "finegraph/finegraph.hpp"
#include "spec_io.hpp"

namespace {

using namespace finegraph;
using io::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInvalid = 3;

struct Options {
  std::string group_path;
  std::string graph_path;
  std::vector<std::string> gens;
  int window = 3;
  std::size_t cap = kDefaultElementCap;
  std::uint64_t seed = 1;
  std::string out;
  std::string graph_out;
  std::string from;
  std::string to;
  std::string base;
  std::string a;
  std::string b;
  unsigned k = 0;
  std::string lemma;
  bool fineness = false;
  std::size_t random = 0;
};

/// Collects report records and folds their verdicts into an exit code.
class Report {
 public:
  void add(ordered_json r) {
    const std::string v = r["verdict"];
    if (v == "fail") failed_ = true;
    if (v == "window-inconclusive") inconclusive_ = true;
    lines_.push_back(std::move(r));
  }
  int exit_code() const { return failed_ ? kExitViolation : inconclusive_ ? kExitInconclusive : kExitPass; }
  void write(const std::string& path) const {
    std::ostringstream s;
    for (const auto& l : lines_) s << l.dump() << '\n';
    if (path.empty()) {
      std::cout << s.str();
    } else {
      std::ofstream f(path);
      if (!f) throw InvalidInput("cannot write report to " + path);
      f << s.str();
    }
  }

 private:
  std::vector<ordered_json> lines_;
  bool failed_ = false;
  bool inconclusive_ = false;
};

Verdict verdict_of(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

/// Group file plus the relative generators from --gens (or the file).
struct Loaded {
  io::GroupSpec spec;
  std::vector<Element> gens;
  std::string instance;

  const Subgroup& subgroup() const {
    if (!spec.subgroup) throw io::SpecError("group", "a subgroup is required for this command");
    return *spec.subgroup;
  }
};

Loaded load_group(const Options& o, bool required = true) {
  Loaded l;
  if (o.group_path.empty()) {
    if (required) throw InvalidInput("--group is required");
    l.spec.group = Group::permutation({}, {});
    l.spec.subgroup = Subgroup::trivial(l.spec.group);
  } else {
    l.spec = io::load_group_spec(o.group_path);
  }
  l.gens = o.gens.empty() ? l.spec.relative_generators : io::parse_words(*l.spec.group, o.gens, "--gens");
  l.instance = o.group_path.empty() ? "trivial group" : o.group_path;
  return l;
}

/// The working G-graph: the --graph file under the --group action, or the
/// windowed coned-off graph of the group file.
struct Working {
  SimplicialGraph graph;
  GroupAction action;
  std::vector<StabilizerTag> tags;
  std::optional<Vertex> apex;
  std::string instance;
};

Working load_working(const Options& o, const Loaded& l) {
  Working w;
  if (!o.graph_path.empty()) {
    auto g = io::load_graph_spec(o.graph_path);
    w.action = io::make_action(g, l.spec.group, o.window);
    w.graph = std::move(g.graph);
    w.tags = std::move(g.tags);
    w.apex = g.apex;
    w.instance = o.graph_path;
  } else {
    auto c = build_coned_off(l.spec.group, l.subgroup(), l.gens, o.window, true, o.cap);
    w.tags = c.stabilizer_tags();
    w.apex = c.apex;
    w.graph = std::move(c.graph);
    w.action = std::move(c.action);
    w.instance = "coned-off " + l.instance;
  }
  if (!w.action.window().covers_group()) w.instance += " L=" + std::to_string(o.window);
  return w;
}

void write_graph(const Options& o, const SimplicialGraph& g, const GroupAction* action,
                 const std::vector<StabilizerTag>& tags, std::optional<Vertex> apex) {
  if (o.graph_out.empty()) return;
  std::ofstream f(o.graph_out);
  if (!f) throw InvalidInput("cannot write graph to " + o.graph_out);
  f << io::graph_to_json(g, action, tags, apex).dump(2) << '\n';
}

ordered_json path_json(const SimplicialGraph& g, const std::vector<Vertex>& path) {
  ordered_json j = ordered_json::array();
  for (Vertex v : path) j.push_back(g.name(v));
  return j;
}

ordered_json set_json(const SimplicialGraph& g, const std::vector<Vertex>& set) { return path_json(g, set); }

//------------------------------------------------------------------------------
// Subcommands
//------------------------------------------------------------------------------

void run_build_coned_off(const Options& o, Report& r) {
  auto l = load_group(o);
  auto c = build_coned_off(l.spec.group, l.subgroup(), l.gens, o.window, true, o.cap);
  std::size_t cones = 0;
  for (Vertex v = 0; v < c.graph.num_vertices(); ++v) cones += c.is_cone(v) ? 1 : 0;
  write_graph(o, c.graph, &c.action, c.stabilizer_tags(), c.apex);
  r.add(io::record("coned-off-graph", l.instance + " L=" + std::to_string(o.window), Verdict::kPass,
                   {{"vertices", c.graph.num_vertices()},
                    {"edges", c.graph.num_edges()},
                    {"group-vertices", c.window->size()},
                    {"cone-vertices", cones},
                    {"connected", is_connected(c.graph)}}));
}

void run_build_relative(const Options& o, Report& r) {
  auto l = load_group(o);
  auto rel = build_relative_cayley(l.spec.group, l.subgroup(), l.gens, o.window, o.cap);
  std::size_t h_edges = 0;
  ordered_json edges = ordered_json::array();
  for (const auto& e : rel.edges) {
    h_edges += e.h_letter ? 1 : 0;
    edges.push_back({rel.window->name(e.from), rel.window->name(e.to), l.spec.group->name(e.label), e.h_letter ? "H" : "X"});
  }
  if (!o.graph_out.empty()) {
    std::ofstream f(o.graph_out);
    if (!f) throw InvalidInput("cannot write graph to " + o.graph_out);
    f << ordered_json{{"edges", edges}}.dump(2) << '\n';
  }
  r.add(io::record("relative-cayley-graph", l.instance + " L=" + std::to_string(o.window), Verdict::kPass,
                   {{"vertices", rel.num_vertices()},
                    {"edges", rel.edges.size()},
                    {"x-edges", rel.edges.size() - h_edges},
                    {"h-edges", h_edges},
                    {"connected", is_connected(rel.underlying())}}));
}

/// Attachment of {--from, --to} with the distance sandwich and new-orbit bound.
struct AttachRun {
  Working w;
  Vertex u = 0;
  Vertex v = 0;
  AttachmentResult result;
  ReplacementScheme scheme;
};

AttachRun attach_working(const Options& o, const Loaded& l) {
  AttachRun a;
  a.w = load_working(o, l);
  if (o.from.empty() || o.to.empty()) throw InvalidInput("--from and --to are required");
  a.u = a.w.graph.at(o.from);
  a.v = a.w.graph.at(o.to);
  a.result = attach_edge_orbit(a.w.graph, a.w.action, a.u, a.v);
  a.scheme = make_replacement_scheme(a.w.graph, a.u, a.v);
  return a;
}

void check_attach_distances(const AttachRun& a, Report& r) {
  const SimplicialGraph& before = a.w.graph;
  const SimplicialGraph& after = a.result.graph;
  const Distance ell = static_cast<Distance>(a.scheme.length());
  std::size_t pairs = 0;
  ordered_json witness = nullptr;
  for (Vertex x = 0; x < before.num_vertices() && witness.is_null(); ++x) {
    auto d0 = bfs_distances(before, x);
    auto d1 = bfs_distances(after, x);
    for (Vertex y = x + 1; y < before.num_vertices(); ++y) {
      ++pairs;
      bool ok = d1[y] <= d0[y] && (d0[y] == kInfinity ? d1[y] == kInfinity : d0[y] <= ell * d1[y]);
      if (!ok) {
        witness = {{"x", before.name(x)}, {"y", before.name(y)}, {"before", distance_string(d0[y])},
                   {"after", distance_string(d1[y])}};
        break;
      }
    }
  }
  r.add(io::record("attach-distance-sandwich", a.w.instance, verdict_of(witness.is_null()),
                   {{"u", before.name(a.u)}, {"v", before.name(a.v)}, {"ell", ell}, {"pairs", pairs},
                    {"new-edges", a.result.new_edges.size()}, {"dropped-translates", a.result.dropped.size()}},
                   witness));
}

void check_new_orbits(const AttachRun& a, Report& r) {
  std::size_t worst = 0;
  ordered_json witness = nullptr;
  for (Vertex x = 0; x < a.w.graph.num_vertices(); ++x) {
    if (a.result.new_neighbors[x].empty()) continue;
    std::size_t c = new_orbit_count(a.result, a.w.action, x);
    if (c > worst) worst = c;
    if (c > 2 && witness.is_null()) {
      witness = {{"vertex", a.w.graph.name(x)}, {"new-neighbours", set_json(a.w.graph, a.result.new_neighbors[x])},
                 {"orbits", c}};
    }
  }
  r.add(io::record("new-orbit-bound", a.w.instance, verdict_of(witness.is_null()), {{"max-new-orbits", worst}},
                   witness));
}

void run_attach(const Options& o, Report& r) {
  auto l = load_group(o, false);
  auto a = attach_working(o, l);
  write_graph(o, a.result.graph, &a.w.action, a.w.tags, a.w.apex);
  check_attach_distances(a, r);
  check_new_orbits(a, r);
}

ordered_json probe_json(const FinenessProbe& p) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : p.rows) {
    rows.push_back({{"window", row.window}, {"k", row.k}, {"angle-ball", row.ball_size},
                    {"max-escaping", row.max_escaping_size}});
  }
  return {{"vertex", p.vertex}, {"center", p.center}, {"trend", std::string(to_string(p.verdict))}, {"rows", rows}};
}

void run_analyze(const Options& o, Report& r) {
  const Distance k_max = o.k ? o.k : 4;
  if (o.fineness) {
    auto l = load_group(o);
    if (!o.graph_path.empty()) throw InvalidInput("--fineness probes the coned-off family of --group");
    auto family = coned_off_family(l.spec.group, l.subgroup(), l.gens);
    std::vector<int> windows;
    for (int w = std::max(1, o.window - 3); w <= o.window; ++w) windows.push_back(w);
    auto probe = fineness_probe([&](int w) { return family(w).graph; }, windows,
                                cone_vertex_id(*l.spec.group, l.spec.group->identity()), k_max);
    r.add(io::record("fineness-probe", "coned-off " + l.instance, probe.verdict == Trend::kStable ? Verdict::kPass
                                                                                               : Verdict::kWindowInconclusive,
                     probe_json(probe)));
    return;
  }
  auto l = load_group(o, false);
  GHGraphReport report;
  std::string instance;
  if (o.graph_path.empty()) {
    report = validate_coned_off(l.spec.group, l.subgroup(), l.gens, o.window, k_max);
    instance = "coned-off " + l.instance + " L=" + std::to_string(o.window);
  } else {
    auto w = load_working(o, l);
    ValidationOptions options;
    options.tags = w.tags;
    options.apex = w.apex;
    options.k_max = k_max;
    const Subgroup h = l.spec.subgroup ? *l.spec.subgroup : Subgroup::trivial(l.spec.group);
    report = validate_gh_graph(w.graph, w.action, h, options);
    instance = w.instance;
  }
  static const char* names[] = {"connected-hyperbolic", "finitely-many-orbits", "stabilizers", "edge-stabilizers",
                                "fine-at-infinite-stabilizers"};
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    const auto& item = report.items[i];
    ordered_json values{{"evidence", item.evidence}};
    if (item.trend) values["trend"] = std::string(to_string(*item.trend));
    if (i == 0 && report.delta) {
      values["delta"] = report.delta->text();
      values["basepoint"] = report.delta->basepoint;
    }
    if (i == 4 && !report.fineness.empty()) {
      values["probes"] = ordered_json::array();
      for (const auto& p : report.fineness) values["probes"].push_back(probe_json(p));
    }
    ordered_json witness = nullptr;
    if (item.verdict == Verdict::kFail) witness = item.evidence;
    r.add(io::record(std::string("gh-graph/") + names[i], instance, item.verdict, values, witness));
  }
}

void run_thicken(const Options& o, Report& r, bool extract) {
  auto l = load_group(o);
  auto w = load_working(o, l);
  ThickenOptions t;
  t.apex = w.apex;
  t.tags = w.tags;
  if (!o.base.empty()) t.base = w.graph.at(o.base);
  auto thick = thicken(w.graph, w.action, l.subgroup(), l.gens, t);
  const auto& g = thick.graph;
  ordered_json attachments = ordered_json::array();
  for (const auto& a : thick.plan.attachments) {
    attachments.push_back({{"u", a.u}, {"v", a.v}, {"new-edges", a.new_edges}, {"dropped", a.dropped},
                           {"max-new-orbits", a.max_new_orbits}});
  }
  ordered_json reps = ordered_json::array();
  for (Vertex v : thick.plan.representatives) reps.push_back(g.name(v));
  auto missing = missing_thick_edge(g, thick.action, thick.plan);
  ordered_json witness = nullptr;
  if (missing) witness = {{"missing-edge", {g.name(missing->first), missing->second == GroupAction::kOut ? "out-of-window" : g.name(missing->second)}}};
  write_graph(o, g, &thick.action, thick.tags, thick.plan.apex);
  r.add(io::record("thickening-plan", w.instance, verdict_of(!missing),
                   {{"base", g.name(thick.plan.base)},
                    {"apex", g.name(thick.plan.apex)},
                    {"representatives", reps},
                    {"added-free-orbit", thick.plan.added_trivial_vertex},
                    {"attachments", attachments}},
                   witness));
  if (!extract) return;
  auto x = extract_X(g, thick.action, thick.plan);
  ordered_json elems = ordered_json::array();
  for (std::size_t i = 0; i < x.elements.size(); ++i) {
    elems.push_back({{"element", thick.action.window().name(x.elements[i])}, {"condition", x.provenance[i]}});
  }
  r.add(io::record("relative-generating-set", w.instance, Verdict::kPass, {{"size", x.elements.size()}, {"X", elems}}));
}

void run_hat_distance(const Options& o, Report& r) {
  auto l = load_group(o);
  if (o.from.empty() || o.to.empty()) throw InvalidInput("--from and --to are required");
  const Group& group = *l.spec.group;
  Element h = io::parse_words(group, {o.from}, "--from").front();
  Element k = io::parse_words(group, {o.to}, "--to").front();
  auto rel = build_relative_cayley(l.spec.group, l.subgroup(), l.gens, o.window, o.cap);
  auto d = hat_distance(rel, h, k);
  auto c = build_coned_off(l.spec.group, l.subgroup(), l.gens, o.window, false, o.cap);
  Distance angle = angle_distance(c.graph, c.apex, c.element_vertex[c.window->index_of(h)],
                                  c.element_vertex[c.window->index_of(k)]);
  Verdict v = d.status == HatDistance::Status::kInfiniteAtWindow ? Verdict::kWindowInconclusive : Verdict::kPass;
  r.add(io::record("hat-distance", l.instance + " L=" + std::to_string(o.window), v,
                   {{"from", group.name(h)}, {"to", group.name(k)}, {"hat-distance", d.to_string()},
                    {"angle", distance_string(angle)}}));
}

//------------------------------------------------------------------------------
// certify
//------------------------------------------------------------------------------

/// Both angle-ball containments at every (u, v, w) and k <= k_max.
std::optional<ordered_json> sandwich_violation(const SimplicialGraph& g, Distance k_max) {
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (g.degree(u) == 0) continue;
    AngleTable angle(g, u);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (v == u) continue;
      for (Distance k = 1; k <= k_max; ++k) {
        auto uv = escaping_set(g, u, v, k);
        for (Vertex w : uv.members) {
          for (Vertex x : uv.members) {
            if (angle(w, x) > 2 * k - 2) {
              return ordered_json{{"u", g.name(u)}, {"v", g.name(v)}, {"k", k}, {"w", g.name(w)}, {"x", g.name(x)},
                                  {"angle", distance_string(angle(w, x))}, {"inclusion", "uv(k) in B(w, 2k-2)"}};
            }
          }
        }
      }
    }
    for (Vertex w : g.neighbors(u)) {
      for (Distance k = 1; k <= k_max; ++k) {
        auto uw = escaping_set(g, u, w, k + 1);
        for (Vertex x : g.neighbors(u)) {
          if (angle(w, x) <= k && !uw.contains(x)) {
            return ordered_json{{"u", g.name(u)}, {"w", g.name(w)}, {"k", k}, {"x", g.name(x)},
                                {"inclusion", "B(w, k) in uw(k+1)"}};
          }
        }
      }
    }
  }
  return std::nullopt;
}

void certify_sandwich(const Options& o, Report& r) {
  const Distance k_max = o.k ? o.k : 4;
  std::vector<std::pair<std::string, SimplicialGraph>> graphs;
  if (!o.graph_path.empty()) graphs.emplace_back(o.graph_path, io::load_graph_spec(o.graph_path).graph);
  std::mt19937_64 rng(o.seed);
  for (std::size_t i = 0; i < o.random; ++i) {
    std::uniform_int_distribution<std::size_t> size(2, 25);
    std::uniform_real_distribution<double> density(0.05, 0.5);
    std::size_t n = size(rng);
    double p = density(rng);
    graphs.emplace_back("random #" + std::to_string(i) + " seed=" + std::to_string(o.seed), corpus::random_graph(n, p, rng));
  }
  if (graphs.empty()) throw InvalidInput("certify --lemma sandwich needs --graph or --random N");
  for (const auto& [name, g] : graphs) {
    auto bad = sandwich_violation(g, k_max);
    r.add(io::record("escaping-angle-sandwich", name, verdict_of(!bad),
                     {{"vertices", g.num_vertices()}, {"edges", g.num_edges()}, {"k-max", k_max}},
                     bad ? *bad : ordered_json(nullptr)));
  }
}

void certify_conedoff(const Options& o, Report& r) {
  auto l = load_group(o);
  auto report = check_coned_off_lemma(l.spec.group, l.subgroup(), l.gens, o.window);
  for (const auto& item : report.items) {
    ordered_json witness = item.witness.empty() ? ordered_json(nullptr) : ordered_json(item.witness);
    r.add(io::record("coned-off/" + item.id, l.instance + " L=" + std::to_string(o.window), item.verdict,
                     {{"evidence", item.evidence}, {"checked", item.checked}, {"exact", report.exact}}, witness));
  }
}

void certify_wz(const Options& o, Report& r) {
  auto l = load_group(o, false);
  auto a = attach_working(o, l);
  const SimplicialGraph& g = a.w.graph;
  const Distance k_max = o.k ? o.k : 3;
  std::vector<Vertex> as, bs;
  for (Vertex x = 0; x < g.num_vertices(); ++x) {
    if (o.a.empty() || g.name(x) == o.a) as.push_back(x);
    if (o.b.empty() || g.name(x) == o.b) bs.push_back(x);
  }
  if (as.empty() || bs.empty()) throw InvalidInput("unknown vertex in --a or --b");
  std::size_t runs = 0;
  ordered_json witness = nullptr;
  for (Vertex x : as) {
    for (Vertex y : bs) {
      if (x == y) continue;
      for (Distance k = 1; k <= k_max && witness.is_null(); ++k) {
        auto f = wz_filtration(g, a.result.graph, a.w.action, a.scheme, x, y, k);
        ++runs;
        if (auto j = f.chain_failure()) {
          witness = {{"a", g.name(x)}, {"b", g.name(y)}, {"k", k}, {"level", *j}, {"failure", "W_j in Z_{j-1} in W_{j-1}"}};
        } else if (auto u = f.uncovered(); !u.empty()) {
          witness = {{"a", g.name(x)}, {"b", g.name(y)}, {"k", k}, {"uncovered", set_json(g, u)},
                     {"failure", "ab(k) in W_1 union X_0"}};
        } else {
          for (const auto& d : f.witnesses) {
            if (auto bad = containment_failure(f, g, d.original, d.replaced)) {
              witness = {{"a", g.name(x)}, {"b", g.name(y)}, {"k", k}, {"path", path_json(g, d.original)},
                         {"replaced", path_json(g, d.replaced)}, {"vertex", g.name(*bad)},
                         {"failure", "path' and T_a in path and T_a in W_1"}};
              break;
            }
          }
        }
      }
    }
  }
  r.add(io::record("wz-filtration", a.w.instance, verdict_of(witness.is_null()),
                   {{"u", g.name(a.u)}, {"v", g.name(a.v)}, {"ell", a.scheme.length()}, {"runs", runs}}, witness));
}

void certify_alpha(const Options& o, Report& r) {
  auto l = load_group(o, false);
  auto a = attach_working(o, l);
  const SimplicialGraph& g = a.w.graph;
  const SimplicialGraph& g2 = a.result.graph;
  std::size_t paths = 0;
  ordered_json witness = nullptr;
  for (Vertex x = 0; x < g.num_vertices() && witness.is_null(); ++x) {
    for (Vertex y = 0; y < g.num_vertices(); ++y) {
      if (x == y) continue;
      auto p = geodesic(g2, x, y);
      if (p.empty()) continue;
      ++paths;
      auto rep = alpha_replacement(p, g, g2, a.w.action, a.scheme);
      bool valid = rep.path.front() == x && rep.path.back() == y;
      for (std::size_t i = 0; valid && i + 1 < rep.path.size(); ++i) valid = g.adjacent(rep.path[i], rep.path[i + 1]);
      bool short_enough = rep.path.size() - 1 <= a.scheme.length() * (p.size() - 1);
      std::set<Vertex> seen(rep.path.begin(), rep.path.end());
      bool covers = std::all_of(p.begin(), p.end(), [&](Vertex v) { return seen.contains(v); });
      if (!valid || !short_enough || !covers) {
        witness = {{"path", path_json(g, p)}, {"replaced", path_json(g, rep.path)}, {"valid", valid},
                   {"length-bound", short_enough}, {"vertex-subset", covers}};
        break;
      }
    }
  }
  r.add(io::record("alpha-replacement", a.w.instance, verdict_of(witness.is_null()),
                   {{"u", g.name(a.u)}, {"v", g.name(a.v)}, {"ell", a.scheme.length()}, {"paths", paths}}, witness));
}

void certify_qi53(const Options& o, Report& r) {
  auto l = load_group(o);
  auto w = load_working(o, l);
  ThickenOptions t;
  t.apex = w.apex;
  t.tags = w.tags;
  if (!o.base.empty()) t.base = w.graph.at(o.base);
  auto thick = thicken(w.graph, w.action, l.subgroup(), l.gens, t);
  auto x = extract_X(thick.graph, thick.action, thick.plan);
  auto witness = coned_off_qi_witness(thick.graph, thick.action, thick.plan, l.subgroup(),
                                      x.as_elements(thick.action.window()));
  ordered_json wj = nullptr;
  if (witness.violation) {
    const auto& v = *witness.violation;
    wj = {{"a", v.x}, {"b", v.y}, {"coned-off-distance", distance_string(v.coned_off_distance)},
          {"graph-distance", distance_string(v.graph_distance)}, {"inequality", v.inequality}};
  }
  r.add(io::record("coned-off-quasi-isometry", w.instance, verdict_of(witness.passed()),
                   {{"constants", {3, 2}}, {"X-size", x.elements.size()}, {"points", witness.points},
                    {"pairs", witness.pairs_checked}, {"density-radius", witness.density_radius}},
                   wj));
}

void run_certify(const Options& o, Report& r) {
  if (o.lemma == "sandwich") return certify_sandwich(o, r);
  if (o.lemma == "conedoff") return certify_conedoff(o, r);
  if (o.lemma == "wz") return certify_wz(o, r);
  if (o.lemma == "alpha") return certify_alpha(o, r);
  if (o.lemma == "qi53") return certify_qi53(o, r);
  if (o.lemma == "attach" || o.lemma == "neworbits") {
    auto l = load_group(o, false);
    auto a = attach_working(o, l);
    return o.lemma == "attach" ? check_attach_distances(a, r) : check_new_orbits(a, r);
  }
  throw InvalidInput("unknown lemma '" + o.lemma + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finegraph: fine graphs, coned-off Cayley graphs and edge-orbit constructions"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", o.group_path, "group spec JSON");
    sub->add_option("--graph", o.graph_path, "graph JSON");
    sub->add_option("--gens", o.gens, "relative generators as words")->delimiter(',');
    sub->add_option("--window", o.window, "window radius L")->check(CLI::PositiveNumber);
    sub->add_option("--cap", o.cap, "element cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "report path (JSON lines); stdout when absent");
    sub->add_option("--graph-out", o.graph_out, "write the resulting graph here");
  };
  auto* coned = app.add_subcommand("build-coned-off", "build the windowed coned-off Cayley graph");
  auto* relative = app.add_subcommand("build-relative", "build the windowed relative Cayley graph");
  auto* attach = app.add_subcommand("attach", "attach the edge orbit of {--from, --to}");
  auto* analyze = app.add_subcommand("analyze", "validate the (G,H)-graph conditions");
  auto* thick = app.add_subcommand("thicken", "attach orbits until the graph is thick");
  auto* extract = app.add_subcommand("extract-x", "thicken, then extract the relative generating set");
  auto* certify = app.add_subcommand("certify", "check one lemma exhaustively");
  auto* hat = app.add_subcommand("hat-distance", "admissible distance between two elements of H");
  for (auto* s : {coned, relative, attach, analyze, thick, extract, certify, hat}) common(s);
  for (auto* s : {attach, certify, hat}) {
    s->add_option("--from", o.from, "first vertex or element");
    s->add_option("--to", o.to, "second vertex or element");
  }
  for (auto* s : {thick, extract, certify}) s->add_option("--base", o.base, "base vertex with trivial stabilizer");
  analyze->add_flag("--fineness", o.fineness, "probe angle-ball growth across windows");
  analyze->add_option("--k", o.k, "largest k probed (default 4)");
  certify->add_option("--lemma", o.lemma, "sandwich|conedoff|attach|neworbits|wz|alpha|qi53")->required();
  certify->add_option("--k", o.k, "largest k checked");
  certify->add_option("--a", o.a, "restrict the filtration to this a");
  certify->add_option("--b", o.b, "restrict the filtration to this b");
  certify->add_option("--random", o.random, "number of seeded random graphs (sandwich)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  Report report;
  try {
    if (*coned) run_build_coned_off(o, report);
    if (*relative) run_build_relative(o, report);
    if (*attach) run_attach(o, report);
    if (*analyze) run_analyze(o, report);
    if (*thick) run_thicken(o, report, false);
    if (*extract) run_thicken(o, report, true);
    if (*certify) run_certify(o, report);
    if (*hat) run_hat_distance(o, report);
  } catch (const WindowExceeded& e) {
    std::cerr << "window exceeded: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    report.write(o.out);
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  }
  return report.exit_code();
}
