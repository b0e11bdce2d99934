#include "graphkit/word.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graphkit {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

// invariant the factorization relies on broke: a bug, not a bad input
[[noreturn]] void broken(const std::string& msg) {
  throw std::logic_error(msg);
}

// The pieces of a residual map over one target edge: its preimage edges,
// the unit-riders joining them, the slots those joints consume, and the
// free vertex-borne slots together with the end of the edge they reach.
// The joints glue the pieces into runs; run_of names each piece's run by a
// representative index.
struct Thread {
  std::vector<std::string> pieces;  // sorted
  std::vector<std::string> joints;  // sorted
  std::set<SlotRef> consumed;
  std::vector<std::pair<SlotRef, int>> anchors;
  std::map<std::string, int> run_of;
  int runs = 0;
};

Thread analyze_thread(const GraphMap& m, const std::string& h) {
  Thread t;
  for (const auto& [e, img] : m.edge_map)
    if (img == h) t.pieces.push_back(e);
  for (const auto& [v, emb] : m.vertex_map)
    if (emb.is_unit() && emb.edges[0] == h) t.joints.push_back(v);

  std::map<std::string, int> idx;
  for (size_t i = 0; i < t.pieces.size(); ++i) idx[t.pieces[i]] = int(i);
  std::vector<int> parent(t.pieces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& v : t.joints) {
    auto slots = m.source.incident_slots(v);
    if (slots.size() != 2 || slots[0].edge == slots[1].edge)
      broken("unit-riding vertex '" + v + "' lost its shape");
    auto a = idx.find(slots[0].edge), b = idx.find(slots[1].edge);
    if (a == idx.end() || b == idx.end())
      broken("joint '" + v + "' rides an edge its pieces do not cover");
    if (find(a->second) == find(b->second))
      broken("pieces over edge '" + h + "' close a cycle");
    parent[find(a->second)] = find(b->second);
    t.consumed.insert(slots[0]);
    t.consumed.insert(slots[1]);
  }
  for (const auto& e : t.pieces) {
    const Edge* se = m.source.find_edge(e);
    for (int j = 0; j < 2; ++j) {
      SlotRef s{e, j};
      if (t.consumed.count(s) || se->ends[j].is_port) continue;
      const SlotRef val = m.slot_map.at(s);
      if (val.edge != h) broken("slot image strayed off its edge image");
      t.anchors.push_back({s, val.end});
    }
  }
  for (const auto& e : t.pieces) t.run_of[e] = find(idx[e]);
  t.runs = int(t.pieces.size()) - int(t.joints.size());
  return t;
}

// send everything riding edge `l` onto `half` with ends kept in place
void wind_onto_half(GraphMap& res, const std::string& l,
                    const std::string& half) {
  for (auto& [e, h] : res.edge_map)
    if (h == l) h = half;
  for (auto& [v, emb] : res.vertex_map)
    if (emb.is_unit() && emb.edges[0] == l) emb.edges[0] = half;
  for (auto& [s, val] : res.slot_map)
    if (val.edge == l) val.edge = half;
}

// Route the run anchored at end 0 of loop `l` onto l#1 and the other run
// onto l#2. The vertex end of l#1 is the old end 0 and the vertex end of
// l#2 the old end 1, so indices carry straight on the first half and cross
// over on the second.
void split_runs(GraphMap& res, const std::string& l, const Thread& t,
                int run0) {
  const std::string h1 = l + "#1", h2 = l + "#2";
  auto first = [&](const std::string& piece) {
    return t.run_of.at(piece) == run0;
  };
  for (auto& [e, h] : res.edge_map)
    if (h == l) h = first(e) ? h1 : h2;
  for (const auto& j : t.joints) {
    auto slots = res.source.incident_slots(j);
    res.vertex_map[j] = Embedding{{}, {first(slots[0].edge) ? h1 : h2}};
  }
  for (auto& [s, val] : res.slot_map)
    if (val.edge == l)
      val = first(s.edge) ? SlotRef{h1, val.end} : SlotRef{h2, 1 - val.end};
}

// Subdivision reroute for edge `c`: the chain head p1 rides half `ha`, the
// rest of the chain rides `hb`, the bridge joint becomes the corolla at the
// new vertex c#v, later joints keep riding hb. Slot ends carry straight on
// both halves, matching how a subdivision's halves cover the edge.
void reroute_degen(GraphMap& res, const std::string& c, const std::string& p1,
                   const std::string& ha, const std::string& hb,
                   const std::string& bridge,
                   const std::vector<std::string>& rest_joints) {
  for (auto& [e, h] : res.edge_map)
    if (h == c) h = (e == p1) ? ha : hb;
  for (auto& [s, val] : res.slot_map)
    if (val.edge == c) val.edge = (s.edge == p1) ? ha : hb;
  res.vertex_map[bridge] = Embedding{{c + "#v"}, {}};
  for (const auto& j : rest_joints)
    res.vertex_map[j] = Embedding{{}, {hb}};
}

}  // namespace

// Greedy factorization. A residual map res: source -> cur is maintained so
// that the word emitted so far, composed with res, stays equal to the input;
// every emitted step shrinks what res still has to explain. The phases:
// peel the target down to the exact image (cofaces), contract the embedded
// subtrees to corollas (inner cofaces), split edges whose pieces cut them
// open (snips, legal only for loops by then), collapse subdivision joints
// (codegeneracies), and finally read the leftover bijection off as a
// relabeling isomorphism. Faces are emitted before degeneracies, so the
// word comes out in standard form.
ElementaryWord decompose(const GraphMap& m) {
  {
    auto problems = check_map_local(m);
    if (!problems.empty()) fail("not a graphical map: " + problems[0]);
  }

  ElementaryWord w;
  w.start = m.target;
  GraphMap res = m;
  Graph cur = m.target;

  auto emit = [&](Elementary::Kind k, const std::string& datum,
                  std::optional<std::string> survivor = std::nullopt) {
    w.steps.push_back({k, datum, survivor});
    cur = elementary_source({k, datum, survivor, cur});
    res.target = cur;
  };

  const size_t guard =
      4 * (m.target.vertices.size() + m.target.edges.size() +
           m.source.vertices.size() + m.source.edges.size()) +
      16;

  // ---- peel the target down to the exact image -----------------------------
  for (size_t step = 0;; ++step) {
    if (step > guard) broken("peeling the image complement does not terminate");
    auto [vstar, estar] = map_image(res);
    std::set<std::string> cv(cur.vertices.begin(), cur.vertices.end());
    std::set<std::string> ce;
    for (const Edge& e : cur.edges) ce.insert(e.id);
    if (vstar == cv && estar == ce) break;

    bool acted = false;
    if (cur.vertices.size() >= 2) {
      // a silent outer vertex goes first; its legs must be silent too,
      // since deleting it drops them
      for (const auto& y : cur.vertices) {
        if (vstar.count(y) || !is_outer_vertex(cur, y)) continue;
        bool legs_silent = true;
        for (const SlotRef& s : cur.incident_slots(y))
          if (classify_edge(cur, s.edge) == EdgeClass::Leg &&
              estar.count(s.edge))
            legs_silent = false;
        if (!legs_silent) continue;
        const std::string name = y;
        emit(Elementary::Kind::Outer, name);
        acted = true;
        break;
      }
    } else if (cur.vertices.size() == 1 && vstar.empty() &&
               estar.size() == 1) {
      // last vertex: everything left rides one leg, which survives as the
      // unit's edge
      const std::string s = *estar.begin();
      if (classify_edge(cur, s) == EdgeClass::Leg &&
          is_outer_vertex(cur, cur.vertices[0])) {
        const std::string name = cur.vertices[0];
        emit(Elementary::Kind::Outer, name, s);
        acted = true;
      }
    }
    if (acted) continue;

    // a silent inner edge contracts away (endpoints of silent edges are
    // silent themselves: a border end on them would make them hit)
    for (const Edge& e : cur.edges) {
      if (estar.count(e.id) || classify_edge(cur, e.id) != EdgeClass::Inner)
        continue;
      const std::string id = e.id;
      emit(Elementary::Kind::Inner, id);
      acted = true;
      break;
    }
    if (acted) continue;

    // a silent loop snips into two silent legs
    for (const Edge& e : cur.edges) {
      if (estar.count(e.id) || classify_edge(cur, e.id) != EdgeClass::Loop)
        continue;
      const std::string id = e.id;
      emit(Elementary::Kind::Snip, id);
      acted = true;
      break;
    }
    if (acted) continue;

    // a hit loop at a silent vertex carries an unanchored chain; wind the
    // whole chain onto the first half and snip, leaving the vertex and the
    // second half behind as silent material
    for (const Edge& e : cur.edges) {
      if (!estar.count(e.id) || classify_edge(cur, e.id) != EdgeClass::Loop)
        continue;
      if (vstar.count(e.ends[0].name)) continue;
      const std::string id = e.id;
      wind_onto_half(res, id, id + "#1");
      emit(Elementary::Kind::Snip, id);
      acted = true;
      break;
    }
    if (!acted)
      fail("the target material outside the image cannot be peeled away");
  }

  // ---- contract the embedded subtrees to corollas ---------------------------
  // Internal embedding edges sit between embedding vertices, are referenced
  // by no edge or slot image, and belong to exactly one embedding, so each
  // contraction only rewrites that one entry.
  for (const auto& v : res.source.vertices) {
    for (size_t step = 0;; ++step) {
      if (step > guard) broken("contracting an embedding does not terminate");
      const Embedding emb = res.vertex_map.at(v);
      if (emb.is_unit() || emb.edges.empty()) break;
      std::vector<std::string> internal = emb.edges;
      std::sort(internal.begin(), internal.end());
      const std::string b = internal.front();
      const Edge* be = cur.find_edge(b);
      bool contractible = be && !be->ends[0].is_port &&
                          !be->ends[1].is_port &&
                          be->ends[0].name != be->ends[1].name;
      if (!contractible)
        broken("embedding of '" + v + "' lost its tree shape");
      const std::string u = be->ends[0].name, x = be->ends[1].name;
      Embedding next;
      for (const auto& wv : emb.vertices)
        if (wv != u && wv != x) next.vertices.push_back(wv);
      next.vertices.push_back(merged_vertex_name(u, x));
      std::sort(next.vertices.begin(), next.vertices.end());
      for (const auto& fe : internal)
        if (fe != b) next.edges.push_back(fe);
      res.vertex_map[v] = next;
      emit(Elementary::Kind::Inner, b);
    }
  }

  // ---- split edges whose pieces cut them open --------------------------------
  // Two separately anchored runs mean the edge was snipped. After the
  // contractions above every such edge must be a loop: an inner edge with
  // both ends anchored from different runs would need an embedding joining
  // its endpoints, and that embedding was just contracted onto one vertex.
  for (size_t step = 0;; ++step) {
    if (step > guard) broken("splitting snipped loops does not terminate");
    bool acted = false;
    for (const Edge& e : cur.edges) {
      Thread t = analyze_thread(res, e.id);
      if (t.pieces.empty())
        broken("edge '" + e.id + "' left unhit after peeling");
      if (t.runs > 2) broken("pieces over edge '" + e.id + "' fragmented");
      if (t.runs != 2) continue;
      const std::string id = e.id;
      if (classify_edge(cur, id) != EdgeClass::Loop)
        fail("pieces over edge '" + id +
             "' cut it open, which only a loop supports");
      int run0 = -1, run1 = -1;
      for (const auto& [s, end] : t.anchors)
        (end == 0 ? run0 : run1) = t.run_of.at(s.edge);
      if (run0 < 0 || run1 < 0 || run0 == run1)
        broken("cut runs over loop '" + id + "' are not anchored apart");
      split_runs(res, id, t, run0);
      emit(Elementary::Kind::Snip, id);
      acted = true;
      break;
    }
    if (!acted) break;
  }

  // ---- collapse subdivision joints -------------------------------------------
  // Each joint has one slot per neighbouring piece, so the pieces of a run
  // form a path. One codegeneracy per joint, innermost bridge first: the
  // chain head keeps the half whose far end it anchors, everything past the
  // bridge rides the other half, and the bridge lands on the new vertex.
  for (size_t step = 0;; ++step) {
    if (step > guard) broken("collapsing subdivision joints does not terminate");
    std::string c;
    Thread t;
    bool found = false;
    for (const Edge& e : cur.edges) {
      t = analyze_thread(res, e.id);
      if (!t.joints.empty()) {
        c = e.id;
        found = true;
        break;
      }
    }
    if (!found) break;
    if (t.runs != 1) broken("joints over edge '" + c + "' span several runs");

    std::map<std::string, std::vector<std::pair<std::string, std::string>>>
        adj;
    for (const auto& j : t.joints) {
      auto slots = res.source.incident_slots(j);
      adj[slots[0].edge].push_back({j, slots[1].edge});
      adj[slots[1].edge].push_back({j, slots[0].edge});
    }

    // orient the walk so anchored ends land on the matching halves
    std::optional<std::string> anchored_at_0, anchored_at_1;
    for (const auto& [s, end] : t.anchors)
      (end == 0 ? anchored_at_0 : anchored_at_1) = s.edge;
    std::vector<std::string> extremes;
    for (const auto& p : t.pieces)
      if (adj[p].size() <= 1) extremes.push_back(p);
    std::optional<std::string> start;
    if (anchored_at_0) {
      start = *anchored_at_0;
    } else if (anchored_at_1) {
      for (const auto& p : extremes)
        if (p != *anchored_at_1) {
          start = p;
          break;
        }
    } else if (!extremes.empty()) {
      start = extremes.front();
    }
    if (!start) broken("no usable chain end over edge '" + c + "'");

    std::vector<std::string> chain = {*start};
    std::vector<std::string> joints_in_order;
    std::set<std::string> seen;
    for (std::string at = *start;;) {
      bool advanced = false;
      for (const auto& [j, other] : adj[at]) {
        if (seen.count(j)) continue;
        seen.insert(j);
        joints_in_order.push_back(j);
        chain.push_back(other);
        at = other;
        advanced = true;
        break;
      }
      if (!advanced) break;
    }
    if (chain.size() != t.pieces.size() ||
        joints_in_order.size() != t.joints.size())
      broken("chain walk over edge '" + c + "' missed pieces");

    const std::string p1 = chain[0];
    const std::string bridge = joints_in_order[0];
    auto bslots = res.source.incident_slots(bridge);
    const SlotRef bslot = bslots[0].edge == p1 ? bslots[0] : bslots[1];
    if (bslot.edge != p1) broken("bridge joint detached from the chain head");
    // the bridge's slot on the chain head faces the far end of the edge;
    // which half the head rides follows from where that far end sits
    const int v_end = res.slot_map.at(bslot).end;
    const std::string ha = c + (v_end == 1 ? "#1" : "#2");
    const std::string hb = c + (v_end == 1 ? "#2" : "#1");
    std::vector<std::string> rest(joints_in_order.begin() + 1,
                                  joints_in_order.end());
    reroute_degen(res, c, p1, ha, hb, bridge, rest);
    emit(Elementary::Kind::Degen, c);
  }

  // ---- the residue must be a relabeling ---------------------------------------
  Isomorphism iso;
  for (const auto& [v, emb] : res.vertex_map) {
    bool corolla_emb =
        !emb.is_unit() && emb.vertices.size() == 1 && emb.edges.empty();
    if (!corolla_emb)
      fail("factorization left vertex '" + v + "' on a composite embedding");
    iso.vertex_map[v] = emb.vertices[0];
  }
  iso.edge_map = res.edge_map;
  for (const Edge& e : res.source.edges) {
    auto img = res.edge_map.find(e.id);
    if (img == res.edge_map.end())
      broken("edge '" + e.id + "' lost its image");
    const Edge* he = cur.find_edge(img->second);
    if (!he)
      broken("edge image '" + img->second + "' missing from the residue");
    std::optional<bool> flip;
    for (int j = 0; j < 2; ++j) {
      if (e.ends[j].is_port) continue;
      const SlotRef val = res.slot_map.at({e.id, j});
      if (val.edge != img->second)
        broken("slot image strayed off its edge image");
      bool flipped_here = val.end != j;
      if (flip && *flip != flipped_here)
        fail("edge '" + e.id + "' folds onto '" + img->second + "'");
      flip = flipped_here;
    }
    if (flip.value_or(false)) iso.flipped.insert(e.id);
    for (int j = 0; j < 2; ++j) {
      if (!e.ends[j].is_port) continue;
      const Slot& landing = he->ends[flip.value_or(false) ? 1 - j : j];
      if (!landing.is_port)
        fail("the residue after factorization is not a relabeling");
      iso.port_map[e.ends[j].name] = landing.name;
    }
  }
  if (!check_isomorphism(res.source, cur, iso))
    fail("the residue after factorization is not a relabeling");

  // independent replay: the emitted word composed with the residual
  // relabeling must reproduce the input on the nose
  GraphMap replay = compose(compose_word(w), iso_to_map(res.source, cur, iso));
  if (!equal_maps(replay, m)) broken("factorization lost the map");
  return w;
}

std::vector<std::string> check_graphical_map(const GraphMap& m) {
  std::vector<std::string> problems = check_map_local(m);
  if (!problems.empty()) return problems;
  try {
    decompose(m);
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  return problems;
}

namespace {

// Depth-first assignment of an embedding and a border bijection per source
// vertex. Edge images and sibling slots are checked as they appear, so
// inconsistent branches die early; survivors face the full validity check.
struct MapSearch {
  const Graph& src;
  const Graph& tgt;
  std::vector<Embedding> embs;
  std::vector<std::vector<SlotRef>> borders;
  GraphMap cand;
  std::set<std::string> used;
  std::vector<GraphMap> out;
  std::set<std::string> seen;  // identifying data of emitted maps

  // serializes the identifying data only, mirroring equal_maps: border
  // bijections that differ across a unit-type image present the same map
  static std::string data_key(const GraphMap& m) {
    std::string k;
    for (const auto& [a, b] : m.edge_map) {
      k += a;
      k += '>';
      k += b;
      k += ';';
    }
    k += '#';
    for (const auto& [v, emb] : m.vertex_map) {
      k += v;
      k += '>';
      for (const auto& w : emb.vertices) {
        k += w;
        k += ',';
      }
      k += '/';
      for (const auto& e : emb.edges) {
        k += e;
        k += ',';
      }
      k += ';';
    }
    return k;
  }

  MapSearch(const Graph& s, const Graph& t) : src(s), tgt(t) {
    embs = enumerate_embeddings(tgt);
    for (const Embedding& e : embs)
      borders.push_back(embedding_border(tgt, e));
    cand.source = src;
    cand.target = tgt;
  }

  void assign(size_t vi) {
    if (vi == src.vertices.size()) {
      if (cand.edge_map.size() == src.edges.size() && is_valid_map(cand) &&
          seen.insert(data_key(cand)).second)
        out.push_back(cand);
      return;
    }
    const std::string& v = src.vertices[vi];
    const auto slots = src.incident_slots(v);
    for (size_t ei = 0; ei < embs.size(); ++ei) {
      if (borders[ei].size() != slots.size()) continue;
      const Embedding& emb = embs[ei];
      bool clash = false;
      for (const auto& w : emb.vertices)
        if (used.count(w)) clash = true;
      if (clash) continue;

      std::vector<size_t> perm(slots.size());
      std::iota(perm.begin(), perm.end(), size_t{0});
      do {
        std::vector<std::string> added_edges;
        std::vector<SlotRef> added_slots;
        bool ok = true;
        for (size_t k = 0; k < slots.size(); ++k) {
          const SlotRef& s = slots[k];
          const SlotRef& t = borders[ei][perm[k]];
          auto [eit, fresh] = cand.edge_map.emplace(s.edge, t.edge);
          if (fresh) added_edges.push_back(s.edge);
          else if (eit->second != t.edge) {
            ok = false;
            break;
          }
          auto sib = cand.slot_map.find({s.edge, 1 - s.end});
          if (sib != cand.slot_map.end()) {
            bool same_edge = sib->second.edge == t.edge;
            bool other_end = sib->second.end != t.end;
            if (!same_edge || !other_end) {
              ok = false;
              break;
            }
          }
          cand.slot_map[s] = t;
          added_slots.push_back(s);
        }
        if (ok) {
          cand.vertex_map[v] = emb;
          for (const auto& w : emb.vertices) used.insert(w);
          assign(vi + 1);
          for (const auto& w : emb.vertices) used.erase(w);
          cand.vertex_map.erase(v);
        }
        for (const auto& id : added_edges) cand.edge_map.erase(id);
        for (const auto& s : added_slots) cand.slot_map.erase(s);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
};

}  // namespace

std::vector<GraphMap> enumerate_maps(const Graph& source, const Graph& target) {
  {
    auto ps = validate_graph(source);
    if (!ps.empty()) fail("source: " + ps[0]);
    ps = validate_graph(target);
    if (!ps.empty()) fail("target: " + ps[0]);
  }

  if (source.vertices.empty()) {
    // unit source: the edge can land on any edge of the target, one
    // candidate each
    std::vector<GraphMap> out;
    for (const Edge& h : target.edges) {
      GraphMap m;
      m.source = source;
      m.target = target;
      m.edge_map[source.edges[0].id] = h.id;
      if (is_valid_map(m)) out.push_back(m);
    }
    return out;
  }

  MapSearch search(source, target);
  search.assign(0);
  return search.out;
}

}  // namespace graphkit
