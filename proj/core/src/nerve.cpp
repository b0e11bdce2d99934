#include <algorithm>
#include <stdexcept>

#include "graphkit/operad.hpp"

namespace graphkit {

namespace {

// A decoration of a tree: one colour per edge and one operation per vertex,
// both in the graph's sorted order. Named "c0|c1;op0|op1"; colour and
// operation names never contain '|' or ';'.
struct Decoration {
  std::vector<std::string> colours;
  std::vector<std::string> ops;
};

std::string deco_name(const Decoration& d) {
  std::string out;
  for (size_t i = 0; i < d.colours.size(); ++i) {
    if (i) out += '|';
    out += d.colours[i];
  }
  out += ';';
  for (size_t i = 0; i < d.ops.size(); ++i) {
    if (i) out += '|';
    out += d.ops[i];
  }
  return out;
}

std::vector<std::string> split_bar(const std::string& s, size_t expect) {
  std::vector<std::string> out;
  if (expect == 0) {
    if (!s.empty())
      throw std::invalid_argument("decoration part should be empty: " + s);
    return out;
  }
  size_t start = 0;
  while (true) {
    size_t bar = s.find('|', start);
    if (bar == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, bar - start));
    start = bar + 1;
  }
  if (out.size() != expect)
    throw std::invalid_argument("decoration part has the wrong arity: " + s);
  return out;
}

Decoration parse_deco(const std::string& name, size_t n_edges,
                      size_t n_vertices) {
  size_t semi = name.find(';');
  if (semi == std::string::npos)
    throw std::invalid_argument("decoration name misses ';': " + name);
  Decoration d;
  d.colours = split_bar(name.substr(0, semi), n_edges);
  d.ops = split_bar(name.substr(semi + 1), n_vertices);
  return d;
}

int edge_pos(const Graph& g, const std::string& id) {
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].id == id) return (int)i;
  throw std::logic_error("nerve: unknown edge " + id);
}

int vertex_pos(const Graph& g, const std::string& v) {
  for (size_t i = 0; i < g.vertices.size(); ++i)
    if (g.vertices[i] == v) return (int)i;
  throw std::logic_error("nerve: unknown vertex " + v);
}

// One partially folded piece of an embedding: the operation accumulated so
// far and the border slots its profile positions read, in order.
struct Folding {
  std::string op;
  std::vector<SlotRef> open;
};

// Fold the image of one source vertex into a single operation whose profile
// follows the vertex's stored slot order.
std::string fold_vertex(const CyclicOperad& o, const GraphMap& f,
                        const std::string& v, const Decoration& dt) {
  const Graph& S = f.source;
  const Graph& T = f.target;
  const Embedding& emb = f.vertex_map.at(v);

  std::string op;
  std::vector<SlotRef> open;
  if (emb.is_unit()) {
    const std::string& h = emb.edges[0];
    op = o.units.at(dt.colours[edge_pos(T, h)]);
    open = {SlotRef{h, 0}, SlotRef{h, 1}};
  } else {
    std::vector<Folding> parts;
    for (const auto& w : emb.vertices)
      parts.push_back({dt.ops[vertex_pos(T, w)], T.incident_slots(w)});
    std::vector<std::string> inner(emb.edges.begin(), emb.edges.end());
    std::sort(inner.begin(), inner.end());
    for (const auto& ee : inner) {
      int fa = -1, pa = -1, fb = -1, pb = -1;
      for (size_t fi = 0; fi < parts.size(); ++fi)
        for (size_t q = 0; q < parts[fi].open.size(); ++q) {
          const SlotRef& sl = parts[fi].open[q];
          if (sl.edge != ee) continue;
          if (sl.end == 0) {
            fa = (int)fi;
            pa = (int)q;
          } else {
            fb = (int)fi;
            pb = (int)q;
          }
        }
      if (fa < 0 || fb < 0)
        throw std::logic_error("nerve: internal edge end not open");
      if (fa == fb) throw std::logic_error("nerve: internal edge closes a cycle");
      Folding& A = parts[fa];
      Folding& B = parts[fb];
      // rotate A so the contracted slot is last
      const int m = (int)A.open.size();
      Perm rot(m);
      for (int j = 0; j < m - 1; ++j) rot[j] = j < pa ? j : j + 1;
      rot[m - 1] = pa;
      std::string a_op = sigma_act(o, rot, A.op);
      std::vector<SlotRef> a_open;
      for (int j = 0; j < m; ++j) a_open.push_back(A.open[rot[j]]);

      std::string joined = circ(o, a_op, pb + 1, B.op);
      std::vector<SlotRef> new_open(B.open.begin(), B.open.begin() + pb);
      new_open.insert(new_open.end(), a_open.begin(), a_open.end() - 1);
      new_open.insert(new_open.end(), B.open.begin() + pb + 1, B.open.end());
      B.op = std::move(joined);
      B.open = std::move(new_open);
      parts.erase(parts.begin() + fa);
    }
    if (parts.size() != 1)
      throw std::logic_error("nerve: embedding folded into several pieces");
    op = parts[0].op;
    open = parts[0].open;
  }

  auto sv = S.incident_slots(v);
  if (sv.size() != open.size())
    throw std::logic_error("nerve: border does not match the vertex arity");
  Perm rho(sv.size());
  for (size_t j = 0; j < sv.size(); ++j) {
    const SlotRef target = f.slot_map.at(sv[j]);
    auto it = std::find(open.begin(), open.end(), target);
    if (it == open.end())
      throw std::logic_error("nerve: slot image missing from the fold border");
    rho[j] = (int)(it - open.begin());
  }
  return sigma_act(o, rho, op);
}

Decoration pull_decoration(const CyclicOperad& o, const GraphMap& f,
                           const Decoration& dt) {
  const Graph& S = f.source;
  const Graph& T = f.target;
  Decoration ds;
  ds.colours.resize(S.edges.size());
  for (size_t i = 0; i < S.edges.size(); ++i)
    ds.colours[i] = dt.colours[edge_pos(T, f.edge_map.at(S.edges[i].id))];
  ds.ops.resize(S.vertices.size());
  for (size_t vi = 0; vi < S.vertices.size(); ++vi)
    ds.ops[vi] = fold_vertex(o, f, S.vertices[vi], dt);
  return ds;
}

}  // namespace

GraphicalSet nerve(const CyclicOperad& o, std::shared_ptr<const Skeleton> sk) {
  if (!sk) throw std::invalid_argument("nerve: null skeleton");
  if (!sk->trees_only)
    throw std::invalid_argument("nerve: the skeleton must hold trees only");
  const int n = (int)sk->objects.size();

  GraphicalSet x;
  x.sk = sk;
  x.sets.resize(n);
  std::vector<std::vector<Decoration>> decos(n);
  std::vector<std::map<std::string, int>> index(n);

  for (int t = 0; t < n; ++t) {
    const Graph& g = sk->objects[t];
    const size_t ne = g.edges.size();
    const size_t nv = g.vertices.size();
    std::vector<int> ci(ne, 0);
    while (true) {
      Decoration d;
      d.colours.resize(ne);
      for (size_t i = 0; i < ne; ++i) d.colours[i] = o.colours[ci[i]];

      std::vector<const std::vector<std::string>*> choices(nv);
      bool feasible = true;
      for (size_t vi = 0; vi < nv && feasible; ++vi) {
        Profile prof;
        for (const SlotRef& sl : g.incident_slots(g.vertices[vi]))
          prof.push_back(d.colours[edge_pos(g, sl.edge)]);
        auto it = o.ops.find(profile_key(prof));
        if (it == o.ops.end() || it->second.empty())
          feasible = false;
        else
          choices[vi] = &it->second;
      }
      if (feasible) {
        std::vector<int> oi(nv, 0);
        while (true) {
          d.ops.resize(nv);
          for (size_t vi = 0; vi < nv; ++vi) d.ops[vi] = (*choices[vi])[oi[vi]];
          std::string name = deco_name(d);
          index[t].emplace(name, (int)x.sets[t].size());
          x.sets[t].push_back(std::move(name));
          decos[t].push_back(d);
          size_t pos = 0;
          while (pos < nv && ++oi[pos] == (int)choices[pos]->size()) {
            oi[pos] = 0;
            ++pos;
          }
          if (pos == nv) break;
        }
      }
      size_t pos = 0;
      while (pos < ne && ++ci[pos] == (int)o.colours.size()) {
        ci[pos] = 0;
        ++pos;
      }
      if (pos == ne) break;
    }
  }

  x.actions.resize(n);
  for (int s = 0; s < n; ++s) {
    x.actions[s].resize(n);
    for (int t = 0; t < n; ++t) {
      x.actions[s][t].resize(sk->homs[s][t].size());
      for (size_t k = 0; k < sk->homs[s][t].size(); ++k) {
        const GraphMap& f = sk->homs[s][t][k];
        auto& row = x.actions[s][t][k];
        row.resize(x.sets[t].size());
        for (size_t e = 0; e < x.sets[t].size(); ++e) {
          Decoration ds = pull_decoration(o, f, decos[t][e]);
          auto it = index[s].find(deco_name(ds));
          if (it == index[s].end())
            throw std::logic_error(
                "nerve: pulled-back decoration is not enumerated");
          row[e] = it->second;
        }
      }
    }
  }
  return x;
}

NaturalTransformation nerve_map(const OperadMorphism& f,
                                const CyclicOperad& o, const CyclicOperad& p,
                                const GraphicalSet& nerve_o,
                                const GraphicalSet& nerve_p) {
  (void)o;
  (void)p;
  if (!nerve_o.sk || !nerve_p.sk ||
      nerve_o.sk->max_vertices != nerve_p.sk->max_vertices ||
      nerve_o.sk->max_edges != nerve_p.sk->max_edges ||
      nerve_o.sk->trees_only != nerve_p.sk->trees_only)
    throw std::invalid_argument("nerve_map: skeletons differ");
  const Skeleton& sk = *nerve_o.sk;
  const int n = (int)sk.objects.size();

  std::vector<std::map<std::string, int>> index(n);
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < (int)nerve_p.sets[t].size(); ++e)
      index[t].emplace(nerve_p.sets[t][e], e);

  NaturalTransformation nt;
  nt.components.resize(n);
  for (int t = 0; t < n; ++t) {
    const Graph& g = sk.objects[t];
    nt.components[t].resize(nerve_o.sets[t].size());
    for (size_t e = 0; e < nerve_o.sets[t].size(); ++e) {
      Decoration d =
          parse_deco(nerve_o.sets[t][e], g.edges.size(), g.vertices.size());
      for (auto& c : d.colours) c = f.colour_map.at(c);
      for (auto& op : d.ops) op = f.op_map.at(op);
      auto it = index[t].find(deco_name(d));
      if (it == index[t].end())
        throw std::invalid_argument(
            "nerve_map: renamed decoration missing from the target nerve");
      nt.components[t][e] = (int)it->second;
    }
  }
  return nt;
}

}  // namespace graphkit
