#include "graphkit/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace graphkit {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool Graph::has_vertex(const std::string& v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

const Edge* Graph::find_edge(const std::string& id) const {
  auto it = std::lower_bound(
      edges.begin(), edges.end(), id,
      [](const Edge& e, const std::string& key) { return e.id < key; });
  if (it == edges.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<SlotRef> Graph::incident_slots(const std::string& v) const {
  std::vector<SlotRef> out;
  for (const Edge& e : edges)
    for (int i = 0; i < 2; ++i)
      if (!e.ends[i].is_port && e.ends[i].name == v) out.push_back({e.id, i});
  return out;  // edges are sorted, so this is sorted by (edge, end)
}

std::vector<std::string> validate_graph(const Graph& g) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };

  if (!std::is_sorted(g.vertices.begin(), g.vertices.end()))
    complain("vertex list not sorted");
  for (size_t i = 0; i + 1 < g.vertices.size(); ++i)
    if (g.vertices[i] == g.vertices[i + 1])
      complain("duplicate vertex '" + g.vertices[i] + "'");
  for (const auto& v : g.vertices)
    if (v.empty()) complain("empty vertex name");

  if (!std::is_sorted(g.edges.begin(), g.edges.end(),
                      [](const Edge& a, const Edge& b) { return a.id < b.id; }))
    complain("edge list not sorted by id");
  for (size_t i = 0; i + 1 < g.edges.size(); ++i)
    if (g.edges[i].id == g.edges[i + 1].id)
      complain("duplicate edge id '" + g.edges[i].id + "'");

  std::map<std::string, int> port_uses;
  for (const Edge& e : g.edges) {
    if (e.id.empty()) complain("empty edge id");
    for (const Slot& s : e.ends) {
      if (s.name.empty()) complain("empty end name on edge '" + e.id + "'");
      if (s.is_port)
        ++port_uses[s.name];
      else if (!g.has_vertex(s.name))
        complain("edge '" + e.id + "' references unknown vertex '" + s.name +
                 "'");
    }
  }
  for (const auto& [p, n] : port_uses)
    if (n > 1) complain("port '" + p + "' used by " + std::to_string(n) +
                        " edge ends");

  std::set<std::string> boundary_set(g.boundary.begin(), g.boundary.end());
  if (boundary_set.size() != g.boundary.size())
    complain("duplicate port in boundary");
  for (const auto& p : g.boundary)
    if (!port_uses.count(p))
      complain("boundary port '" + p + "' not attached to any edge");
  for (const auto& [p, n] : port_uses)
    if (!boundary_set.count(p))
      complain("port '" + p + "' missing from boundary");

  // occupancy and connectivity
  if (g.vertices.empty()) {
    if (g.edges.size() != 1 || g.edges[0].ends[0].is_port == false ||
        g.edges[0].ends[1].is_port == false)
      complain("a vertex-free graph must be a single edge between two ports");
  } else {
    std::map<std::string, int> vidx;
    for (size_t i = 0; i < g.vertices.size(); ++i) vidx[g.vertices[i]] = int(i);
    std::vector<bool> used(g.vertices.size(), false);
    UnionFind uf(int(g.vertices.size()));
    for (const Edge& e : g.edges) {
      if (e.ends[0].is_port && e.ends[1].is_port)
        complain("edge '" + e.id +
                 "' floats between two ports in a graph with vertices");
      int a = -1, b = -1;
      for (int i = 0; i < 2; ++i)
        if (!e.ends[i].is_port) {
          auto it = vidx.find(e.ends[i].name);
          if (it != vidx.end()) {
            used[it->second] = true;
            (i == 0 ? a : b) = it->second;
          }
        }
      if (a >= 0 && b >= 0) uf.join(a, b);
    }
    for (size_t i = 0; i < g.vertices.size(); ++i)
      if (!used[i]) complain("isolated vertex '" + g.vertices[i] + "'");
    int root = uf.find(0);
    for (size_t i = 1; i < g.vertices.size(); ++i)
      if (uf.find(int(i)) != root) {
        complain("graph is not connected");
        break;
      }
  }
  return problems;
}

Graph make_graph(std::vector<std::string> vertices, std::vector<Edge> edges,
                 std::vector<std::string> boundary) {
  std::sort(vertices.begin(), vertices.end());
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  Graph g{std::move(vertices), std::move(edges), std::move(boundary)};
  auto problems = validate_graph(g);
  if (!problems.empty()) {
    std::string msg = "invalid graph:";
    for (const auto& p : problems) msg += " " + p + ";";
    fail(msg);
  }
  return g;
}

EdgeClass classify_edge(const Graph& g, const std::string& edge_id) {
  const Edge* e = g.find_edge(edge_id);
  if (!e) fail("no edge '" + edge_id + "'");
  bool p0 = e->ends[0].is_port, p1 = e->ends[1].is_port;
  if (p0 && p1) return EdgeClass::Unit;
  if (p0 || p1) return EdgeClass::Leg;
  return e->ends[0].name == e->ends[1].name ? EdgeClass::Loop
                                            : EdgeClass::Inner;
}

bool is_outer_vertex(const Graph& g, const std::string& v) {
  if (!g.has_vertex(v)) fail("no vertex '" + v + "'");
  int non_leg = 0;
  for (const SlotRef& s : g.incident_slots(v))
    if (classify_edge(g, s.edge) != EdgeClass::Leg) ++non_leg;
  return non_leg <= 1;
}

int betti1(const Graph& g) {
  if (g.vertices.empty()) return 0;
  int internal = 0;
  for (const Edge& e : g.edges) {
    EdgeClass c = classify_edge(g, e.id);
    if (c == EdgeClass::Inner || c == EdgeClass::Loop) ++internal;
  }
  return internal - int(g.vertices.size()) + 1;
}

Graph corolla(int n) {
  if (n < 0) fail("corolla needs n >= 0");
  std::vector<Edge> edges;
  std::vector<std::string> boundary;
  for (int i = 0; i <= n; ++i) {
    std::string p = "p" + std::to_string(i);
    edges.push_back({"e" + std::to_string(i), {vertex_end("v"), port_end(p)}});
    boundary.push_back(p);
  }
  return make_graph({"v"}, std::move(edges), std::move(boundary));
}

Graph edge_unit() {
  return make_graph({}, {{"e", {port_end("p0"), port_end("p1")}}},
                    {"p0", "p1"});
}

std::string merged_vertex_name(const std::string& x, const std::string& y) {
  std::vector<std::string> parts;
  for (const std::string* s : {&x, &y}) {
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, '*')) parts.push_back(item);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '*';
    out += parts[i];
  }
  return out;
}

Graph contract_edge(const Graph& g, const std::string& edge_id) {
  EdgeClass c = classify_edge(g, edge_id);
  if (c == EdgeClass::Loop) fail("cannot contract loop '" + edge_id + "'");
  if (c != EdgeClass::Inner) fail("'" + edge_id + "' is not an inner edge");
  const Edge* e = g.find_edge(edge_id);
  const std::string x = e->ends[0].name, y = e->ends[1].name;
  const std::string m = merged_vertex_name(x, y);

  std::vector<std::string> vs;
  for (const auto& v : g.vertices)
    if (v != x && v != y) {
      if (v == m) fail("merged vertex name '" + m + "' already taken");
      vs.push_back(v);
    }
  vs.push_back(m);

  std::vector<Edge> es;
  for (const Edge& f : g.edges) {
    if (f.id == edge_id) continue;
    Edge nf = f;
    for (Slot& s : nf.ends)
      if (!s.is_port && (s.name == x || s.name == y)) s.name = m;
    es.push_back(nf);
  }
  return make_graph(std::move(vs), std::move(es), g.boundary);
}

Graph delete_outer_vertex(const Graph& g, const std::string& v,
                          const std::optional<std::string>& survivor) {
  if (!g.has_vertex(v)) fail("no vertex '" + v + "'");
  if (!is_outer_vertex(g, v)) fail("vertex '" + v + "' is not outer");

  std::vector<SlotRef> leg_slots, other_slots;
  for (const SlotRef& s : g.incident_slots(v))
    (classify_edge(g, s.edge) == EdgeClass::Leg ? leg_slots : other_slots)
        .push_back(s);

  auto freed_port = [&](const std::string& edge, int end) {
    std::string p = edge + "#p" + std::to_string(end);
    for (const Edge& e : g.edges)
      for (const Slot& s : e.ends)
        if (s.is_port && s.name == p)
          fail("fresh port name '" + p + "' already taken");
    return p;
  };

  if (g.vertices.size() >= 2) {
    if (survivor)
      fail("survivor only applies when deleting the last vertex");
    if (other_slots.size() != 1)
      fail("vertex '" + v + "' has no single connecting edge");
    const SlotRef f = other_slots[0];
    const std::string p = freed_port(f.edge, f.end);

    std::set<std::string> dropped_ports;
    for (const SlotRef& s : leg_slots) {
      const Edge* e = g.find_edge(s.edge);
      for (const Slot& end : e->ends)
        if (end.is_port) dropped_ports.insert(end.name);
    }
    std::set<std::string> dropped_edges;
    for (const SlotRef& s : leg_slots) dropped_edges.insert(s.edge);

    std::vector<std::string> vs;
    for (const auto& w : g.vertices)
      if (w != v) vs.push_back(w);
    std::vector<Edge> es;
    for (const Edge& e : g.edges) {
      if (dropped_edges.count(e.id)) continue;
      Edge ne = e;
      if (ne.id == f.edge) ne.ends[f.end] = port_end(p);
      es.push_back(ne);
    }
    std::vector<std::string> bd;
    for (const auto& q : g.boundary)
      if (!dropped_ports.count(q)) bd.push_back(q);
    bd.push_back(p);
    return make_graph(std::move(vs), std::move(es), std::move(bd));
  }

  // last vertex: every edge is a leg of v, the result is the unit graph
  if (!other_slots.empty())
    fail("single vertex '" + v + "' unexpectedly has a non-leg edge");
  if (leg_slots.size() > 1 && !survivor)
    fail("deleting the last vertex needs a surviving leg");
  std::string s_id = survivor ? *survivor : leg_slots[0].edge;
  const Edge* s_edge = g.find_edge(s_id);
  if (!s_edge) fail("surviving edge '" + s_id + "' does not exist");
  int vend = s_edge->ends[0].is_port ? 1 : 0;
  if (s_edge->ends[vend].is_port || s_edge->ends[vend].name != v)
    fail("surviving edge '" + s_id + "' is not a leg of '" + v + "'");
  const std::string p = freed_port(s_id, vend);

  Edge unit = *s_edge;
  unit.ends[vend] = port_end(p);
  std::vector<std::string> bd;
  const std::string keep = unit.ends[1 - vend].name;
  for (const auto& q : g.boundary)
    if (q == keep) bd.push_back(q);
  bd.push_back(p);
  return make_graph({}, {unit}, std::move(bd));
}

Graph snip_loop(const Graph& g, const std::string& loop_id) {
  if (classify_edge(g, loop_id) != EdgeClass::Loop)
    fail("'" + loop_id + "' is not a loop");
  const Edge* l = g.find_edge(loop_id);
  const std::string x = l->ends[0].name;
  const std::string id1 = loop_id + "#1", id2 = loop_id + "#2";
  if (g.find_edge(id1) || g.find_edge(id2))
    fail("fresh edge names for snipping '" + loop_id + "' already taken");
  const std::string p0 = loop_id + "#p0", p1 = loop_id + "#p1";
  for (const Edge& e : g.edges)
    for (const Slot& s : e.ends)
      if (s.is_port && (s.name == p0 || s.name == p1))
        fail("fresh port names for snipping '" + loop_id + "' already taken");

  std::vector<Edge> es;
  for (const Edge& e : g.edges)
    if (e.id != loop_id) es.push_back(e);
  es.push_back({id1, {vertex_end(x), port_end(p0)}});
  es.push_back({id2, {vertex_end(x), port_end(p1)}});
  std::vector<std::string> bd = g.boundary;
  bd.push_back(p0);
  bd.push_back(p1);
  return make_graph(g.vertices, std::move(es), std::move(bd));
}

Graph subdivide_edge(const Graph& g, const std::string& edge_id) {
  const Edge* b = g.find_edge(edge_id);
  if (!b) fail("no edge '" + edge_id + "'");
  const std::string mid = edge_id + "#v";
  if (g.has_vertex(mid))
    fail("fresh vertex name '" + mid + "' already taken");
  const std::string id1 = edge_id + "#1", id2 = edge_id + "#2";
  if (g.find_edge(id1) || g.find_edge(id2))
    fail("fresh edge names for subdividing '" + edge_id + "' already taken");

  std::vector<std::string> vs = g.vertices;
  vs.push_back(mid);
  std::vector<Edge> es;
  for (const Edge& e : g.edges)
    if (e.id != edge_id) es.push_back(e);
  es.push_back({id1, {b->ends[0], vertex_end(mid)}});
  es.push_back({id2, {vertex_end(mid), b->ends[1]}});
  return make_graph(std::move(vs), std::move(es), g.boundary);
}

// --- isomorphism ------------------------------------------------------------

namespace {

const std::string& mapped(const std::map<std::string, std::string>& m,
                          const std::string& k, const char* what) {
  auto it = m.find(k);
  if (it == m.end()) fail(std::string("isomorphism misses ") + what + " '" + k + "'");
  return it->second;
}

}  // namespace

Graph apply_isomorphism(const Graph& g, const Isomorphism& iso) {
  std::vector<std::string> vs;
  for (const auto& v : g.vertices) vs.push_back(mapped(iso.vertex_map, v, "vertex"));
  std::vector<Edge> es;
  for (const Edge& e : g.edges) {
    Edge ne;
    ne.id = mapped(iso.edge_map, e.id, "edge");
    for (int i = 0; i < 2; ++i) {
      const Slot& s = e.ends[i];
      ne.ends[i] = s.is_port ? port_end(mapped(iso.port_map, s.name, "port"))
                             : vertex_end(mapped(iso.vertex_map, s.name, "vertex"));
    }
    if (iso.flipped.count(e.id)) std::swap(ne.ends[0], ne.ends[1]);
    es.push_back(ne);
  }
  std::vector<std::string> bd;
  for (const auto& p : g.boundary) bd.push_back(mapped(iso.port_map, p, "port"));
  return make_graph(std::move(vs), std::move(es), std::move(bd));
}

bool check_isomorphism(const Graph& g, const Graph& h, const Isomorphism& iso) {
  auto bijective_onto = [](const std::map<std::string, std::string>& m,
                           const std::vector<std::string>& dom,
                           const std::vector<std::string>& cod) {
    if (m.size() != dom.size() || dom.size() != cod.size()) return false;
    std::set<std::string> image;
    for (const auto& d : dom) {
      auto it = m.find(d);
      if (it == m.end()) return false;
      image.insert(it->second);
    }
    return image == std::set<std::string>(cod.begin(), cod.end());
  };
  std::vector<std::string> g_edge_ids, h_edge_ids, g_ports, h_ports;
  for (const Edge& e : g.edges) g_edge_ids.push_back(e.id);
  for (const Edge& e : h.edges) h_edge_ids.push_back(e.id);
  for (const Edge& e : g.edges)
    for (const Slot& s : e.ends)
      if (s.is_port) g_ports.push_back(s.name);
  for (const Edge& e : h.edges)
    for (const Slot& s : e.ends)
      if (s.is_port) h_ports.push_back(s.name);
  if (!bijective_onto(iso.vertex_map, g.vertices, h.vertices)) return false;
  if (!bijective_onto(iso.edge_map, g_edge_ids, h_edge_ids)) return false;
  if (!bijective_onto(iso.port_map, g_ports, h_ports)) return false;

  for (const Edge& e : g.edges) {
    auto eit = iso.edge_map.find(e.id);
    const Edge* he = h.find_edge(eit->second);
    if (!he) return false;
    bool flip = iso.flipped.count(e.id) > 0;
    for (int i = 0; i < 2; ++i) {
      const Slot& s = e.ends[i];
      const Slot& t = he->ends[flip ? 1 - i : i];
      if (s.is_port != t.is_port) return false;
      const auto& m = s.is_port ? iso.port_map : iso.vertex_map;
      if (m.at(s.name) != t.name) return false;
    }
  }
  return true;
}

namespace {

// invariant used to prune the vertex assignment search
std::string vertex_signature(const Graph& g, const std::string& v) {
  int inner = 0, loop = 0, leg = 0;
  for (const SlotRef& s : g.incident_slots(v)) {
    switch (classify_edge(g, s.edge)) {
      case EdgeClass::Inner: ++inner; break;
      case EdgeClass::Loop: ++loop; break;
      case EdgeClass::Leg: ++leg; break;
      case EdgeClass::Unit: break;
    }
  }
  return std::to_string(inner) + "," + std::to_string(loop) + "," +
         std::to_string(leg);
}

struct IsoSearch {
  const Graph& g;
  const Graph& h;
  bool first_only;
  std::vector<Isomorphism> found;
  std::map<std::string, std::string> vmap;
  std::set<std::string> vused;

  bool run() {
    if (g.vertices.size() != h.vertices.size() ||
        g.edges.size() != h.edges.size() ||
        g.boundary.size() != h.boundary.size())
      return false;
    assign_vertex(0);
    return !found.empty();
  }

  void assign_vertex(size_t i) {
    if (first_only && !found.empty()) return;
    if (i == g.vertices.size()) {
      match_edges();
      return;
    }
    const std::string& v = g.vertices[i];
    std::string sig = vertex_signature(g, v);
    for (const auto& w : h.vertices) {
      if (vused.count(w) || vertex_signature(h, w) != sig) continue;
      vmap[v] = w;
      vused.insert(w);
      assign_vertex(i + 1);
      vused.erase(w);
      vmap.erase(v);
    }
  }

  void match_edges() {
    std::map<std::string, std::string> emap;
    std::set<std::string> eused;
    std::map<std::string, std::string> pmap;
    std::set<std::string> flips;
    match_edge(0, emap, eused, pmap, flips);
  }

  void match_edge(size_t i, std::map<std::string, std::string>& emap,
                  std::set<std::string>& eused,
                  std::map<std::string, std::string>& pmap,
                  std::set<std::string>& flips) {
    if (first_only && !found.empty()) return;
    if (i == g.edges.size()) {
      found.push_back(Isomorphism{vmap, emap, pmap, flips});
      return;
    }
    const Edge& e = g.edges[i];
    for (const Edge& f : h.edges) {
      if (eused.count(f.id)) continue;
      for (int flip = 0; flip < 2; ++flip) {
        // the image of end k of e must match end (k xor flip) of f
        bool ok = true;
        std::vector<std::pair<std::string, std::string>> new_ports;
        for (int k = 0; k < 2 && ok; ++k) {
          const Slot& s = e.ends[k];
          const Slot& t = f.ends[flip ? 1 - k : k];
          if (s.is_port != t.is_port) {
            ok = false;
          } else if (!s.is_port) {
            if (vmap.at(s.name) != t.name) ok = false;
          } else {
            auto it = pmap.find(s.name);
            if (it != pmap.end()) {
              if (it->second != t.name) ok = false;
            } else {
              new_ports.push_back({s.name, t.name});
            }
          }
        }
        if (!ok) continue;
        // both flips can only match simultaneously on loops and the unit
        // edge, where they are genuinely different isomorphisms
        emap[e.id] = f.id;
        eused.insert(f.id);
        for (const auto& [a, b] : new_ports) pmap[a] = b;
        if (flip) flips.insert(e.id);
        match_edge(i + 1, emap, eused, pmap, flips);
        if (flip) flips.erase(e.id);
        for (const auto& [a, b] : new_ports) pmap.erase(a);
        eused.erase(f.id);
        emap.erase(e.id);
      }
    }
  }
};

}  // namespace

std::vector<Isomorphism> find_isomorphisms(const Graph& g, const Graph& h) {
  IsoSearch s{g, h, false, {}, {}, {}};
  s.run();
  return std::move(s.found);
}

std::optional<Isomorphism> find_isomorphism(const Graph& g, const Graph& h) {
  IsoSearch s{g, h, true, {}, {}, {}};
  if (!s.run()) return std::nullopt;
  return s.found.front();
}

// --- canonical form ---------------------------------------------------------

std::string graph_key(const Graph& g) {
  std::string out = "V";
  for (const auto& v : g.vertices) out += "|" + v;
  out += ";E";
  for (const Edge& e : g.edges) {
    out += "|" + e.id + "=";
    for (int i = 0; i < 2; ++i) {
      const Slot& s = e.ends[i];
      out += (s.is_port ? "p:" : "v:") + s.name + (i ? "" : ",");
    }
  }
  out += ";B";
  for (const auto& p : g.boundary) out += "|" + p;
  return out;
}

CanonicalForm canonicalize(const Graph& g) {
  if (g.vertices.empty()) {
    Graph c = edge_unit();
    Isomorphism iso;
    iso.edge_map[g.edges[0].id] = "e";
    iso.port_map[g.edges[0].ends[0].name] = "p0";
    iso.port_map[g.edges[0].ends[1].name] = "p1";
    return {c, iso};
  }

  const size_t n = g.vertices.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::optional<std::string> best_key;
  Graph best_graph;
  Isomorphism best_iso;

  std::vector<int> perm = order;
  std::sort(perm.begin(), perm.end());
  do {
    // position of each original vertex under this ordering
    std::vector<int> pos(n);
    for (size_t k = 0; k < n; ++k) pos[perm[k]] = int(k);
    std::map<std::string, int> vpos;
    for (size_t i = 0; i < n; ++i) vpos[g.vertices[i]] = pos[i];

    // describe each end: vertices sort before ports
    auto desc = [&](const Slot& s) {
      return s.is_port ? std::pair<int, int>(1, 0)
                       : std::pair<int, int>(0, vpos[s.name]);
    };
    struct Rec {
      std::pair<int, int> lo, hi;
      bool swapped;
      size_t orig;
    };
    std::vector<Rec> recs;
    for (size_t i = 0; i < g.edges.size(); ++i) {
      auto d0 = desc(g.edges[i].ends[0]), d1 = desc(g.edges[i].ends[1]);
      bool sw = d1 < d0;
      recs.push_back({sw ? d1 : d0, sw ? d0 : d1, sw, i});
    }
    std::stable_sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
      return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
    });

    Isomorphism iso;
    for (size_t i = 0; i < n; ++i)
      iso.vertex_map[g.vertices[i]] = "v" + std::to_string(pos[i]);
    std::vector<Edge> es;
    std::vector<std::string> bd;
    int next_port = 0;
    for (size_t k = 0; k < recs.size(); ++k) {
      const Edge& e = g.edges[recs[k].orig];
      Edge ne;
      ne.id = "e" + std::to_string(k);
      iso.edge_map[e.id] = ne.id;
      if (recs[k].swapped) iso.flipped.insert(e.id);
      for (int j = 0; j < 2; ++j) {
        const Slot& s = e.ends[recs[k].swapped ? 1 - j : j];
        if (s.is_port) {
          std::string p = "p" + std::to_string(next_port++);
          iso.port_map[s.name] = p;
          bd.push_back(p);
          ne.ends[j] = port_end(p);
        } else {
          ne.ends[j] = vertex_end(iso.vertex_map[s.name]);
        }
      }
      es.push_back(ne);
    }
    std::vector<std::string> vs;
    for (size_t k = 0; k < n; ++k) vs.push_back("v" + std::to_string(k));
    Graph cand = make_graph(std::move(vs), std::move(es), std::move(bd));
    std::string key = graph_key(cand);
    if (!best_key || key < *best_key) {
      best_key = key;
      best_graph = cand;
      best_iso = iso;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return {best_graph, best_iso};
}

// --- enumeration ------------------------------------------------------------

namespace {

// an edge type for generation: (i, j) vertices, j = -1 for a leg
struct EdgeType {
  int i, j;
};

void build_and_collect(int k, const std::vector<EdgeType>& types,
                       const std::vector<int>& chosen, bool trees_only,
                       std::set<std::string>& seen, std::vector<Graph>& out) {
  std::vector<bool> covered(k, false);
  UnionFind uf(k);
  int internal = 0;
  for (int t : chosen) {
    const EdgeType& ty = types[t];
    covered[ty.i] = true;
    if (ty.j >= 0) {
      covered[ty.j] = true;
      uf.join(ty.i, ty.j);
      ++internal;
    }
  }
  for (int i = 0; i < k; ++i)
    if (!covered[i]) return;
  int root = uf.find(0);
  for (int i = 1; i < k; ++i)
    if (uf.find(i) != root) return;
  if (trees_only && internal - k + 1 != 0) return;

  std::vector<std::string> vs;
  for (int i = 0; i < k; ++i) vs.push_back("v" + std::to_string(i));
  std::vector<Edge> es;
  std::vector<std::string> bd;
  int next_port = 0;
  for (size_t m = 0; m < chosen.size(); ++m) {
    const EdgeType& ty = types[chosen[m]];
    Edge e;
    e.id = "e" + std::to_string(m);
    e.ends[0] = vertex_end("v" + std::to_string(ty.i));
    if (ty.j >= 0) {
      e.ends[1] = vertex_end("v" + std::to_string(ty.j));
    } else {
      std::string p = "p" + std::to_string(next_port++);
      e.ends[1] = port_end(p);
      bd.push_back(p);
    }
    es.push_back(e);
  }
  Graph g = make_graph(std::move(vs), std::move(es), std::move(bd));
  CanonicalForm cf = canonicalize(g);
  std::string key = graph_key(cf.graph);
  if (seen.insert(key).second) out.push_back(cf.graph);
}

void choose_multiset(int k, const std::vector<EdgeType>& types, int m,
                     int start, std::vector<int>& chosen, bool trees_only,
                     std::set<std::string>& seen, std::vector<Graph>& out) {
  if (int(chosen.size()) == m) {
    build_and_collect(k, types, chosen, trees_only, seen, out);
    return;
  }
  for (int t = start; t < int(types.size()); ++t) {
    chosen.push_back(t);
    choose_multiset(k, types, m, t, chosen, trees_only, seen, out);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<Graph> enumerate_graphs(int max_vertices, int max_edges,
                                    bool trees_only) {
  std::set<std::string> seen;
  std::vector<Graph> out;
  if (max_edges >= 1) {
    Graph eta = edge_unit();
    seen.insert(graph_key(eta));
    out.push_back(eta);
  }
  for (int k = 1; k <= max_vertices; ++k) {
    std::vector<EdgeType> types;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) types.push_back({i, j});
    for (int i = 0; i < k; ++i) types.push_back({i, -1});
    for (int m = std::max(1, k - 1); m <= max_edges; ++m) {
      std::vector<int> chosen;
      choose_multiset(k, types, m, 0, chosen, trees_only, seen, out);
    }
  }
  std::sort(out.begin(), out.end(), [](const Graph& a, const Graph& b) {
    auto ka = std::tuple(a.vertices.size(), a.edges.size(), graph_key(a));
    auto kb = std::tuple(b.vertices.size(), b.edges.size(), graph_key(b));
    return ka < kb;
  });
  return out;
}

}  // namespace graphkit
