#include "graphkit/graph_map.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace graphkit {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}
[[noreturn]] void broken(const std::string& msg) {
  throw std::logic_error(msg);
}

}  // namespace

// --- embeddings ---------------------------------------------------------

std::vector<std::string> validate_embedding(const Graph& g,
                                            const Embedding& emb) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };

  if (emb.is_unit()) {
    if (emb.edges.size() != 1)
      complain("unit-type embedding needs exactly one edge");
    else if (!g.find_edge(emb.edges[0]))
      complain("embedding references unknown edge '" + emb.edges[0] + "'");
    return problems;
  }

  if (!std::is_sorted(emb.vertices.begin(), emb.vertices.end()) ||
      std::adjacent_find(emb.vertices.begin(), emb.vertices.end()) !=
          emb.vertices.end())
    complain("embedding vertices not sorted-unique");
  for (const auto& v : emb.vertices)
    if (!g.has_vertex(v))
      complain("embedding references unknown vertex '" + v + "'");
  if (!std::is_sorted(emb.edges.begin(), emb.edges.end()) ||
      std::adjacent_find(emb.edges.begin(), emb.edges.end()) !=
          emb.edges.end())
    complain("embedding edges not sorted-unique");
  if (!problems.empty()) return problems;

  std::set<std::string> w(emb.vertices.begin(), emb.vertices.end());
  std::map<std::string, int> idx;
  for (size_t i = 0; i < emb.vertices.size(); ++i) idx[emb.vertices[i]] = int(i);
  std::vector<int> parent(emb.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  for (const auto& id : emb.edges) {
    const Edge* e = g.find_edge(id);
    if (!e) {
      complain("embedding references unknown edge '" + id + "'");
      continue;
    }
    if (e->ends[0].is_port || e->ends[1].is_port ||
        e->ends[0].name == e->ends[1].name) {
      complain("internal edge '" + id + "' must join two distinct vertices");
      continue;
    }
    if (!w.count(e->ends[0].name) || !w.count(e->ends[1].name)) {
      complain("internal edge '" + id + "' leaves the vertex set");
      continue;
    }
    parent[find(idx[e->ends[0].name])] = find(idx[e->ends[1].name]);
  }
  if (!problems.empty()) return problems;

  if (emb.edges.size() + 1 != emb.vertices.size())
    complain("internal edges do not form a spanning tree (count)");
  int root = find(0);
  for (size_t i = 1; i < emb.vertices.size(); ++i)
    if (find(int(i)) != root) {
      complain("embedding is not connected");
      break;
    }
  return problems;
}

std::vector<SlotRef> embedding_border(const Graph& g, const Embedding& emb) {
  std::vector<SlotRef> border;
  if (emb.is_unit()) {
    border.push_back({emb.edges[0], 0});
    border.push_back({emb.edges[0], 1});
    return border;
  }
  std::set<std::string> w(emb.vertices.begin(), emb.vertices.end());
  std::set<std::string> f(emb.edges.begin(), emb.edges.end());
  for (const Edge& e : g.edges) {
    if (f.count(e.id)) continue;
    for (int j = 0; j < 2; ++j)
      if (!e.ends[j].is_port && w.count(e.ends[j].name))
        border.push_back({e.id, j});
  }
  return border;  // edges sorted, so border is sorted
}

std::vector<Embedding> enumerate_embeddings(const Graph& g) {
  std::vector<Embedding> out;
  const size_t n = g.vertices.size();
  for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
    std::vector<std::string> w;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) w.push_back(g.vertices[i]);
    std::set<std::string> ws(w.begin(), w.end());
    std::vector<std::string> candidates;
    for (const Edge& e : g.edges)
      if (!e.ends[0].is_port && !e.ends[1].is_port &&
          e.ends[0].name != e.ends[1].name && ws.count(e.ends[0].name) &&
          ws.count(e.ends[1].name))
        candidates.push_back(e.id);
    // all spanning trees: subsets of size |w|-1 that connect w
    const size_t need = w.size() - 1;
    if (need > candidates.size()) continue;
    std::vector<size_t> pick(need);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<std::string> f;
      for (size_t p : pick) f.push_back(candidates[p]);
      Embedding emb{w, f};
      if (validate_embedding(g, emb).empty()) out.push_back(emb);
      if (need == 0) break;
      // next combination
      size_t i = need;
      while (i > 0 && pick[i - 1] == candidates.size() - need + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (size_t k = i; k < need; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  for (const Edge& e : g.edges) out.push_back(Embedding{{}, {e.id}});
  return out;
}

// --- image and peel -------------------------------------------------------

std::pair<std::set<std::string>, std::set<std::string>> map_image(
    const GraphMap& m) {
  std::set<std::string> vs, es;
  for (const auto& [v, emb] : m.vertex_map) {
    vs.insert(emb.vertices.begin(), emb.vertices.end());
    if (!emb.is_unit()) es.insert(emb.edges.begin(), emb.edges.end());
  }
  for (const auto& [e, h] : m.edge_map) es.insert(h);
  return {vs, es};
}

std::optional<std::vector<PeelMove>> peel_to_image(const GraphMap& m) {
  auto [vstar, estar] = map_image(m);
  Graph cur = m.target;
  std::vector<PeelMove> moves;

  std::map<std::string, int> cover;  // target edge -> number of pieces over it
  for (const auto& [e, h] : m.edge_map) ++cover[h];

  auto is_image_exact = [&] {
    if (cur.vertices.size() != vstar.size() ||
        cur.edges.size() != estar.size())
      return false;
    for (const auto& v : cur.vertices)
      if (!vstar.count(v)) return false;
    for (const Edge& e : cur.edges)
      if (!estar.count(e.id)) return false;
    return true;
  };

  while (!is_image_exact()) {
    bool moved = false;
    // delete an outer vertex outside the image
    for (size_t vi = 0; vi < cur.vertices.size(); ++vi) {
      const std::string y = cur.vertices[vi];
      if (vstar.count(y)) continue;
      if (cur.vertices.size() >= 2) {
        if (!is_outer_vertex(cur, y)) continue;
        bool legs_clean = true;
        for (const SlotRef& s : cur.incident_slots(y))
          if (classify_edge(cur, s.edge) == EdgeClass::Leg &&
              estar.count(s.edge))
            legs_clean = false;
        if (!legs_clean) continue;
        cur = delete_outer_vertex(cur, y);
        moves.push_back({PeelMove::Kind::DeleteOuter, y, std::nullopt});
        moved = true;
        break;
      }
      // last vertex: the image must become the unit on a single leg; if it
      // is not one yet, fall through to the edge moves
      if (!vstar.empty()) break;
      if (estar.size() != 1) break;
      const std::string surv = *estar.begin();
      const Edge* se = cur.find_edge(surv);
      if (!se || classify_edge(cur, surv) != EdgeClass::Leg) break;
      if (!is_outer_vertex(cur, y)) break;  // loops first
      cur = delete_outer_vertex(cur, y, surv);
      moves.push_back({PeelMove::Kind::DeleteOuter, y, surv});
      moved = true;
      break;
    }
    if (moved) continue;
    for (size_t ei = 0; ei < cur.edges.size(); ++ei) {
      const std::string id = cur.edges[ei].id;
      if (estar.count(id)) continue;
      EdgeClass c = classify_edge(cur, id);
      if (c == EdgeClass::Inner) {
        cur = contract_edge(cur, id);
        moves.push_back({PeelMove::Kind::Contract, id, std::nullopt});
        moved = true;
        break;
      }
      if (c == EdgeClass::Loop) {
        cur = snip_loop(cur, id);
        moves.push_back({PeelMove::Kind::Snip, id, std::nullopt});
        moved = true;
        break;
      }
    }
    if (moved) continue;
    // an image loop at a vertex outside the image: the image treats the loop
    // as a bare edge, which only a snip can set free. One piece over it means
    // the source reaches it as the unit; more pieces force the loop's vertex
    // into the image as the bridge between the two snipped halves.
    for (size_t ei = 0; ei < cur.edges.size(); ++ei) {
      const std::string id = cur.edges[ei].id;
      const std::string at = cur.edges[ei].ends[0].name;
      if (!estar.count(id)) continue;
      if (classify_edge(cur, id) != EdgeClass::Loop) continue;
      if (vstar.count(at)) continue;
      int k = cover.count(id) ? cover.at(id) : 0;
      if (k < 1) continue;
      cur = snip_loop(cur, id);
      moves.push_back({PeelMove::Kind::Snip, id, std::nullopt});
      estar.erase(id);
      estar.insert(id + "#1");
      if (k >= 2) {
        estar.insert(id + "#2");
        vstar.insert(at);
      }
      moved = true;
      break;
    }
    if (!moved) return std::nullopt;
  }
  return moves;
}

// --- local validity ---------------------------------------------------------

std::vector<std::string> check_map_local(const GraphMap& m) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };

  {
    auto ps = validate_graph(m.source);
    for (const auto& p : ps) complain("source: " + p);
    auto pt = validate_graph(m.target);
    for (const auto& p : pt) complain("target: " + p);
    if (!problems.empty()) return problems;
  }

  // edge map totality
  for (const Edge& e : m.source.edges) {
    auto it = m.edge_map.find(e.id);
    if (it == m.edge_map.end())
      complain("edge '" + e.id + "' has no image");
    else if (!m.target.find_edge(it->second))
      complain("edge '" + e.id + "' maps to unknown '" + it->second + "'");
  }
  if (m.edge_map.size() != m.source.edges.size())
    complain("edge map mentions edges outside the source");

  // vertex map totality and embedding validity
  for (const auto& v : m.source.vertices) {
    auto it = m.vertex_map.find(v);
    if (it == m.vertex_map.end()) {
      complain("vertex '" + v + "' has no embedding");
      continue;
    }
    for (const auto& p : validate_embedding(m.target, it->second))
      complain("vertex '" + v + "': " + p);
  }
  if (m.vertex_map.size() != m.source.vertices.size())
    complain("vertex map mentions vertices outside the source");
  if (!problems.empty()) return problems;

  // slot map: exactly the vertex-borne source slots
  {
    std::set<SlotRef> expected;
    for (const auto& v : m.source.vertices)
      for (const SlotRef& s : m.source.incident_slots(v)) expected.insert(s);
    for (const auto& [s, t] : m.slot_map)
      if (!expected.count(s))
        complain("slot map mentions a non-slot " + s.edge + ":" +
                 std::to_string(s.end));
    for (const SlotRef& s : expected)
      if (!m.slot_map.count(s))
        complain("slot " + s.edge + ":" + std::to_string(s.end) +
                 " has no image");
  }
  if (!problems.empty()) return problems;

  // border bijection per vertex; unit-type shape conditions
  for (const auto& v : m.source.vertices) {
    const Embedding& emb = m.vertex_map.at(v);
    auto slots = m.source.incident_slots(v);
    auto border = embedding_border(m.target, emb);
    if (slots.size() != border.size()) {
      complain("vertex '" + v + "': " + std::to_string(slots.size()) +
               " slots vs border of size " + std::to_string(border.size()));
      continue;
    }
    std::set<SlotRef> bset(border.begin(), border.end());
    std::set<SlotRef> hit;
    for (const SlotRef& s : slots) {
      const SlotRef& t = m.slot_map.at(s);
      if (!bset.count(t))
        complain("vertex '" + v + "': slot lands outside its border");
      if (!hit.insert(t).second)
        complain("vertex '" + v + "': two slots land on the same end");
    }
    if (emb.is_unit()) {
      if (slots.size() != 2)
        complain("vertex '" + v + "' on the unit embedding needs 2 slots");
      else if (slots[0].edge == slots[1].edge)
        complain("vertex '" + v +
                 "' on the unit embedding has both slots on one edge");
    }
  }
  if (!problems.empty()) return problems;

  // per-edge end consistency with the edge map
  for (const Edge& e : m.source.edges) {
    const std::string& h = m.edge_map.at(e.id);
    std::vector<SlotRef> vals;
    for (int j = 0; j < 2; ++j)
      if (!e.ends[j].is_port) {
        const SlotRef& t = m.slot_map.at({e.id, j});
        if (t.edge != h)
          complain("slot of edge '" + e.id + "' lands off its edge image");
        vals.push_back(t);
      }
    if (vals.size() == 2 && vals[0].end == vals[1].end)
      complain("edge '" + e.id + "' maps both ends onto the same end of '" +
               h + "'");
  }
  if (!problems.empty()) return problems;

  // embedded subtrees are pairwise disjoint
  {
    std::map<std::string, std::string> owner;
    for (const auto& [v, emb] : m.vertex_map)
      for (const auto& w : emb.vertices) {
        auto [it, fresh] = owner.emplace(w, v);
        if (!fresh)
          complain("vertices '" + it->second + "' and '" + v +
                   "' embed overlapping subtrees at '" + w + "'");
      }
  }
  if (!problems.empty()) return problems;

  // thread shape over each target edge: the preimage edges form a path whose
  // inner joints are the unit-embedded vertices and whose free ends reach
  // the two distinct ends of the edge
  {
    std::map<std::string, std::vector<std::string>> pre;
    for (const auto& [e, h] : m.edge_map) pre[h].push_back(e);
    std::map<std::string, std::vector<std::string>> subdiv;
    for (const auto& [v, emb] : m.vertex_map)
      if (emb.is_unit()) subdiv[emb.edges[0]].push_back(v);

    for (const Edge& h : m.target.edges) {
      auto& edges_over = pre[h.id];
      auto& joints = subdiv[h.id];
      if (edges_over.empty()) {
        if (!joints.empty())
          complain("subdivision point over unused edge '" + h.id + "'");
        continue;
      }
      if (edges_over.size() < joints.size() + 1) {
        complain("edge '" + h.id + "': " +
                 std::to_string(edges_over.size()) + " pieces but " +
                 std::to_string(joints.size()) + " subdivision points");
        continue;
      }
      std::map<std::string, int> eidx;
      for (size_t i = 0; i < edges_over.size(); ++i)
        eidx[edges_over[i]] = int(i);
      std::vector<int> parent(edges_over.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      std::set<SlotRef> consumed;
      bool bad = false;
      for (const auto& v : joints) {
        auto slots = m.source.incident_slots(v);
        // unit-type shape already validated: 2 slots, distinct edges
        int a = eidx.count(slots[0].edge) ? eidx[slots[0].edge] : -1;
        int b = eidx.count(slots[1].edge) ? eidx[slots[1].edge] : -1;
        if (a < 0 || b < 0) {
          bad = true;
          break;
        }
        if (find(a) == find(b)) {
          complain("pieces over edge '" + h.id + "' close a cycle");
          bad = true;
          break;
        }
        parent[find(a)] = find(b);
        consumed.insert(slots[0]);
        consumed.insert(slots[1]);
      }
      if (bad) continue;
      // the joints glue the pieces into runs; one run subdivides the edge,
      // two runs cut it open from its two ends (as a snipped loop does)
      size_t runs = edges_over.size() - joints.size();
      if (runs > 2) {
        complain("pieces over edge '" + h.id + "' form " +
                 std::to_string(runs) + " separate runs");
        continue;
      }
      // free ends carried by vertices must reach distinct ends of h
      std::set<int> reached;
      std::set<int> anchored_runs;
      bool clash = false;
      for (const auto& e : edges_over) {
        const Edge* se = m.source.find_edge(e);
        for (int j = 0; j < 2; ++j) {
          SlotRef s{e, j};
          if (consumed.count(s)) continue;
          if (se->ends[j].is_port) continue;
          int end = m.slot_map.at(s).end;
          if (!reached.insert(end).second) clash = true;
          anchored_runs.insert(find(eidx[e]));
        }
      }
      if (clash) {
        complain("pieces over edge '" + h.id +
                 "' wrap onto the same end twice");
        continue;
      }
      // a run that touches no end of h would be a detached copy of the
      // whole source, impossible alongside a second run
      if (runs == 2 && anchored_runs.size() != 2)
        complain("two runs over edge '" + h.id +
                 "' but not both reach an end");
    }
  }
  if (!problems.empty()) return problems;

  if (!peel_to_image(m))
    complain("the part of the target outside the image cannot be removed");
  return problems;
}

// --- identities, isos, equality ----------------------------------------------

GraphMap iso_to_map(const Graph& g, const Graph& h, const Isomorphism& iso) {
  if (!check_isomorphism(g, h, iso)) fail("not an isomorphism");
  GraphMap m;
  m.source = g;
  m.target = h;
  m.edge_map = iso.edge_map;
  for (const auto& v : g.vertices)
    m.vertex_map[v] = Embedding{{iso.vertex_map.at(v)}, {}};
  for (const Edge& e : g.edges) {
    bool flip = iso.flipped.count(e.id) > 0;
    for (int j = 0; j < 2; ++j)
      if (!e.ends[j].is_port)
        m.slot_map[{e.id, j}] = {iso.edge_map.at(e.id), flip ? 1 - j : j};
  }
  return m;
}

GraphMap identity_map(const Graph& g) {
  Isomorphism id;
  for (const auto& v : g.vertices) id.vertex_map[v] = v;
  for (const Edge& e : g.edges) {
    id.edge_map[e.id] = e.id;
    for (const Slot& s : e.ends)
      if (s.is_port) id.port_map[s.name] = s.name;
  }
  return iso_to_map(g, g, id);
}

// Slot assignments are witness data, not identity: away from unit-type
// images they are forced by the edge map, and the two ways of attaching a
// vertex across a unit-type image give the same map. Comparing them would
// also break associativity of composition through vertex-free graphs.
bool equal_maps(const GraphMap& f, const GraphMap& g) {
  return f.source == g.source && f.target == g.target &&
         f.edge_map == g.edge_map && f.vertex_map == g.vertex_map;
}

bool equal_maps_up_to_source_iso(const GraphMap& f, const GraphMap& g) {
  if (f.target != g.target) return false;
  for (const Isomorphism& iso : find_isomorphisms(f.source, g.source))
    if (compose(g, iso_to_map(f.source, g.source, iso)) == f) return true;
  return false;
}

// --- composition --------------------------------------------------------------

GraphMap compose(const GraphMap& g, const GraphMap& f) {
  if (f.target != g.source) fail("maps are not composable");

  GraphMap r;
  r.source = f.source;
  r.target = g.target;
  for (const auto& [e, h] : f.edge_map) r.edge_map[e] = g.edge_map.at(h);

  for (const auto& v : f.source.vertices) {
    const Embedding& ef = f.vertex_map.at(v);
    auto slots = f.source.incident_slots(v);

    if (ef.is_unit()) {
      if (slots.size() != 2) broken("unit-riding vertex without 2 slots");
      const std::string& hm = ef.edges[0];
      const Edge* em = g.source.find_edge(hm);
      for (size_t i = 0; i < slots.size(); ++i) {
        const SlotRef mid = f.slot_map.at(slots[i]);
        const Slot& at = em->ends[mid.end];
        if (!at.is_port) {
          r.slot_map[slots[i]] = g.slot_map.at(mid);
        } else {
          const SlotRef omid = f.slot_map.at(slots[1 - i]);
          const Slot& oat = em->ends[omid.end];
          if (!oat.is_port) {
            // the middle end dangles at a port: the image continues across
            // the whole edge, so this slot takes the far end
            SlotRef ov = g.slot_map.at(omid);
            r.slot_map[slots[i]] = {ov.edge, 1 - ov.end};
          } else {
            // both middle ends are ports: the middle graph is the unit, and
            // every map out of it is index-straight
            r.slot_map[slots[i]] = {g.edge_map.at(hm), mid.end};
          }
        }
      }
      r.vertex_map[v] = Embedding{{}, {g.edge_map.at(hm)}};
      continue;
    }

    // union of the subtree pieces of the middle vertices
    std::set<std::string> w;
    for (const auto& mv : ef.vertices) {
      const Embedding& eg = g.vertex_map.at(mv);
      w.insert(eg.vertices.begin(), eg.vertices.end());
    }
    for (const SlotRef& s : slots) r.slot_map[s] = g.slot_map.at(f.slot_map.at(s));

    if (w.empty()) {
      // every piece was erased: the image must sit across one edge
      std::set<SlotRef> vals;
      for (const SlotRef& s : slots) vals.insert(r.slot_map.at(s));
      if (vals.size() != 2) broken("composite embedding collapsed badly");
      const SlotRef a = *vals.begin(), b = *std::next(vals.begin());
      if (a.edge != b.edge || a.end == b.end)
        broken("composite embedding collapsed badly");
      r.vertex_map[v] = Embedding{{}, {a.edge}};
      continue;
    }

    std::set<std::string> carried;
    for (const SlotRef& s : slots) carried.insert(r.slot_map.at(s).edge);
    std::vector<std::string> fset;
    for (const Edge& h : g.target.edges)
      if (!h.ends[0].is_port && !h.ends[1].is_port && w.count(h.ends[0].name) &&
          w.count(h.ends[1].name) && h.ends[0].name != h.ends[1].name &&
          !carried.count(h.id))
        fset.push_back(h.id);
    Embedding emb{{w.begin(), w.end()}, fset};
    if (!validate_embedding(g.target, emb).empty())
      broken("composite embedding of '" + v + "' is not a subtree");
    auto border = embedding_border(g.target, emb);
    std::set<SlotRef> bset(border.begin(), border.end());
    std::set<SlotRef> got;
    for (const SlotRef& s : slots) got.insert(r.slot_map.at(s));
    if (got != bset)
      broken("composite border of '" + v + "' does not match its slots");
    r.vertex_map[v] = emb;
  }
  return r;
}

// --- substitution --------------------------------------------------------------

namespace {

struct SubstituteTrace {
  std::map<std::string, std::string> vertex_names;  // piece name -> result name
  std::map<std::string, std::string> edge_names;    // piece internal edges
  // unit piece only: (kept edge, dropped edge, old far slot, new far slot)
  std::optional<std::tuple<std::string, std::string, SlotRef, SlotRef>> weld;
};

Graph substitute_impl(const Graph& g, const std::string& v, const Graph& h,
                      const std::map<std::string, SlotRef>& matching,
                      SubstituteTrace* trace) {
  if (!g.has_vertex(v)) fail("no vertex '" + v + "'");
  auto vslots = g.incident_slots(v);
  {
    std::set<SlotRef> ms;
    for (const auto& [p, s] : matching) ms.insert(s);
    std::set<SlotRef> vs(vslots.begin(), vslots.end());
    if (ms != vs) fail("matching does not cover the slots of '" + v + "'");
    std::set<std::string> hp;
    for (const Edge& e : h.edges)
      for (const Slot& s : e.ends)
        if (s.is_port) hp.insert(s.name);
    std::set<std::string> mk;
    for (const auto& [p, s] : matching) mk.insert(p);
    if (hp != mk) fail("matching does not cover the ports of the piece");
  }

  std::map<std::string, Edge> cur;  // current edges by id
  for (const Edge& e : g.edges) cur[e.id] = e;

  if (h.vertices.empty()) {
    // weld the two matched edges of g into one through the unit piece
    const Edge& unit = h.edges[0];
    SlotRef a = matching.at(unit.ends[0].name);
    SlotRef b = matching.at(unit.ends[1].name);
    if (a.edge == b.edge)
      fail("substituting the unit across a single edge closes a circle");
    if (b.edge < a.edge) std::swap(a, b);
    Slot far = cur.at(b.edge).ends[1 - b.end];
    cur.at(a.edge).ends[a.end] = far;
    cur.erase(b.edge);
    if (trace) {
      trace->weld = {a.edge, b.edge, SlotRef{b.edge, 1 - b.end},
                     SlotRef{a.edge, a.end}};
    }
    std::vector<std::string> vs;
    for (const auto& u : g.vertices)
      if (u != v) vs.push_back(u);
    std::vector<Edge> es;
    for (auto& [id, e] : cur) es.push_back(e);
    return make_graph(std::move(vs), std::move(es), g.boundary);
  }

  // fresh names for the piece interior
  std::set<std::string> taken_v(g.vertices.begin(), g.vertices.end());
  taken_v.erase(v);
  std::set<std::string> taken_e;
  for (const Edge& e : g.edges) taken_e.insert(e.id);
  auto freshen = [](std::set<std::string>& taken, const std::string& want) {
    std::string n = want;
    while (taken.count(n)) n += "'";
    taken.insert(n);
    return n;
  };
  std::map<std::string, std::string> vn, en;
  for (const auto& w : h.vertices) vn[w] = freshen(taken_v, w);
  for (const Edge& e : h.edges)
    if (!e.ends[0].is_port && !e.ends[1].is_port)
      en[e.id] = freshen(taken_e, e.id);
  if (trace) {
    trace->vertex_names = vn;
    trace->edge_names = en;
  }

  // weld each leg of the piece onto the matched edge of g
  for (const Edge& e : h.edges) {
    int pj = e.ends[0].is_port ? 0 : (e.ends[1].is_port ? 1 : -1);
    if (pj < 0) continue;
    const SlotRef s = matching.at(e.ends[pj].name);
    cur.at(s.edge).ends[s.end] = vertex_end(vn.at(e.ends[1 - pj].name));
  }

  std::vector<std::string> vs;
  for (const auto& u : g.vertices)
    if (u != v) vs.push_back(u);
  for (const auto& [w, nw] : vn) vs.push_back(nw);
  std::vector<Edge> es;
  for (auto& [id, e] : cur) es.push_back(e);
  for (const Edge& e : h.edges) {
    if (e.ends[0].is_port || e.ends[1].is_port) continue;
    Edge ne;
    ne.id = en.at(e.id);
    for (int j = 0; j < 2; ++j) ne.ends[j] = vertex_end(vn.at(e.ends[j].name));
    es.push_back(ne);
  }
  return make_graph(std::move(vs), std::move(es), g.boundary);
}

// standalone graph for an embedded piece; border end (h, j) becomes port h@j
Graph extract_piece(const Graph& target, const Embedding& emb) {
  if (emb.is_unit()) {
    const std::string& h = emb.edges[0];
    return make_graph({},
                      {{h, {port_end(h + "@0"), port_end(h + "@1")}}},
                      {h + "@0", h + "@1"});
  }
  std::vector<Edge> es;
  std::vector<std::string> bd;
  std::set<std::string> fset(emb.edges.begin(), emb.edges.end());
  for (const auto& id : emb.edges) es.push_back(*target.find_edge(id));
  for (const SlotRef& b : embedding_border(target, emb)) {
    const Edge* e = target.find_edge(b.edge);
    std::string port = b.edge + "@" + std::to_string(b.end);
    std::string leg_id = port;  // unique even when both ends are border
    Edge leg;
    leg.id = leg_id;
    leg.ends[0] = e->ends[b.end];  // the vertex inside the piece
    leg.ends[1] = port_end(port);
    es.push_back(leg);
    bd.push_back(port);
  }
  return make_graph(emb.vertices, std::move(es), std::move(bd));
}

}  // namespace

Graph graph_substitute(const Graph& g, const std::string& v, const Graph& h,
                       const std::map<std::string, SlotRef>& matching) {
  return substitute_impl(g, v, h, matching, nullptr);
}

SubstitutionPresentation as_substitutions_then_inclusion(const GraphMap& m) {
  SubstitutionPresentation out;
  Graph cur = m.source;

  // provenance: current slot -> original source slot, current edge/vertex ->
  // target names for inserted piece parts
  std::map<SlotRef, SlotRef> slot_origin;
  for (const auto& v : m.source.vertices)
    for (const SlotRef& s : m.source.incident_slots(v)) slot_origin[s] = s;
  std::map<std::string, std::string> piece_vertex;  // cur name -> target name
  std::map<std::string, std::string> piece_edge;    // cur name -> target name
  std::map<SlotRef, SlotRef> piece_slot;  // cur slot -> target end (F edges)

  for (const auto& v : m.source.vertices) {
    const Embedding& emb = m.vertex_map.at(v);
    if (!emb.is_unit() && emb.vertices.size() == 1 && emb.edges.empty())
      continue;  // plain corolla: nothing to insert

    Graph piece = extract_piece(m.target, emb);
    std::map<std::string, SlotRef> matching;
    for (const SlotRef& s : m.source.incident_slots(v)) {
      const SlotRef t = m.slot_map.at(s);
      // find the current position of the original slot s
      SlotRef cur_s = s;
      for (const auto& [c, o] : slot_origin)
        if (o == s) cur_s = c;
      matching[t.edge + "@" + std::to_string(t.end)] = cur_s;
    }
    out.substitutions.push_back({v, piece, matching});

    SubstituteTrace trace;
    cur = substitute_impl(cur, v, piece, matching, &trace);
    if (trace.weld) {
      auto [keep, drop, from, to] = *trace.weld;
      auto it = slot_origin.find(from);
      if (it != slot_origin.end()) {
        SlotRef orig = it->second;
        slot_origin.erase(it);
        slot_origin[to] = orig;
      } else if (piece_slot.count(from)) {
        SlotRef t = piece_slot.at(from);
        piece_slot.erase(from);
        piece_slot[to] = t;
      }
    }
    for (const auto& [w, nw] : trace.vertex_names) piece_vertex[nw] = w;
    for (const auto& [e, ne] : trace.edge_names) {
      piece_edge[ne] = e;
      for (int j = 0; j < 2; ++j) piece_slot[{ne, j}] = {e, j};
    }
  }

  // build the inclusion from the replayed graph into the target
  GraphMap inc;
  inc.source = cur;
  inc.target = m.target;
  std::map<SlotRef, SlotRef> origin_of;  // cur slot -> original source slot
  for (const auto& [c, o] : slot_origin) origin_of[c] = o;

  for (const Edge& e : cur.edges) {
    if (piece_edge.count(e.id)) {
      inc.edge_map[e.id] = piece_edge.at(e.id);
    } else {
      // an original source edge (possibly a weld survivor)
      inc.edge_map[e.id] = m.edge_map.at(e.id);
    }
    for (int j = 0; j < 2; ++j) {
      if (e.ends[j].is_port) continue;
      SlotRef s{e.id, j};
      if (origin_of.count(s))
        inc.slot_map[s] = m.slot_map.at(origin_of.at(s));
      else if (piece_slot.count(s))
        inc.slot_map[s] = piece_slot.at(s);
      else
        broken("untracked slot after substitution replay");
    }
  }
  for (const auto& x : cur.vertices) {
    if (piece_vertex.count(x))
      inc.vertex_map[x] = Embedding{{piece_vertex.at(x)}, {}};
    else
      inc.vertex_map[x] = Embedding{{m.vertex_map.at(x).vertices.at(0)}, {}};
  }
  out.inclusion = inc;
  return out;
}

// --- JSON ----------------------------------------------------------------------

using nlohmann::json;

namespace {

std::string slotref_str(const SlotRef& s) {
  return s.edge + ":" + std::to_string(s.end);
}

SlotRef slotref_parse(const std::string& t) {
  auto pos = t.rfind(':');
  if (pos == std::string::npos || pos + 1 >= t.size())
    fail("bad slot reference '" + t + "'");
  int end = std::stoi(t.substr(pos + 1));
  if (end != 0 && end != 1) fail("bad slot end in '" + t + "'");
  return {t.substr(0, pos), end};
}

}  // namespace

std::string map_to_json(const GraphMap& m) {
  json j;
  j["source"] = json::parse(graph_to_json(m.source));
  j["target"] = json::parse(graph_to_json(m.target));
  j["edge_map"] = m.edge_map;
  json vm = json::object();
  for (const auto& [v, emb] : m.vertex_map) {
    json je;
    je["vertices"] = emb.vertices;
    je["edges"] = emb.edges;
    json slots = json::object();
    for (const SlotRef& s : m.source.incident_slots(v))
      slots[slotref_str(s)] = slotref_str(m.slot_map.at(s));
    je["slots"] = slots;
    vm[v] = je;
  }
  j["vertex_map"] = vm;
  return j.dump();
}

GraphMap map_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("bad map JSON: ") + e.what());
  }
  try {
    GraphMap m;
    m.source = graph_from_json(j.at("source").dump());
    m.target = graph_from_json(j.at("target").dump());
    for (auto it = j.at("edge_map").begin(); it != j.at("edge_map").end(); ++it)
      m.edge_map[it.key()] = it.value().get<std::string>();
    for (auto it = j.at("vertex_map").begin(); it != j.at("vertex_map").end();
         ++it) {
      Embedding emb;
      emb.vertices = it.value().value("vertices", std::vector<std::string>{});
      emb.edges = it.value().value("edges", std::vector<std::string>{});
      m.vertex_map[it.key()] = emb;
      if (it.value().contains("slots"))
        for (auto st = it.value()["slots"].begin();
             st != it.value()["slots"].end(); ++st)
          m.slot_map[slotref_parse(st.key())] =
              slotref_parse(st.value().get<std::string>());
    }
    return m;
  } catch (const json::exception& e) {
    fail(std::string("bad map JSON: ") + e.what());
  }
}

bool is_valid_map(const GraphMap& m) { return check_graphical_map(m).empty(); }

}  // namespace graphkit
