#include "graphkit/presheaf.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "graphkit/elementary.hpp"

namespace graphkit {

namespace {

using nlohmann::json;

// Serialization of the variable part of a map, for hashing within one hom
// table (source and target fixed). Catalogue names stay clear of the
// separators; a miss falls back to equal_maps anyway.
// identifying data only, mirroring equal_maps: no slot witnesses, so
// composites hash to the stored representative whatever attachment they
// picked across unit-type images
std::string map_data_key(const GraphMap& m) {
  std::ostringstream os;
  for (const auto& [a, b] : m.edge_map) os << 'e' << a << '>' << b << ';';
  for (const auto& [v, emb] : m.vertex_map) {
    os << 'v' << v << '>';
    for (const auto& w : emb.vertices) os << w << ',';
    os << '|';
    for (const auto& e : emb.edges) os << e << ',';
    os << ';';
  }
  return os.str();
}

Isomorphism invert_iso(const Isomorphism& iso) {
  Isomorphism inv;
  for (const auto& [a, b] : iso.vertex_map) inv.vertex_map[b] = a;
  for (const auto& [a, b] : iso.edge_map) inv.edge_map[b] = a;
  for (const auto& [a, b] : iso.port_map) inv.port_map[b] = a;
  for (const auto& e : iso.flipped) inv.flipped.insert(iso.edge_map.at(e));
  return inv;
}

void require_skeleton(const std::shared_ptr<const Skeleton>& sk,
                      const char* who) {
  if (!sk) throw std::invalid_argument(std::string(who) + ": null skeleton");
}

void require_object(const Skeleton& sk, int g, const char* who) {
  if (g < 0 || g >= (int)sk.objects.size())
    throw std::invalid_argument(std::string(who) +
                                ": object index out of range");
}

// Same catalogue parameters, hence identical objects, homs and tables.
bool same_skeleton(const Skeleton& a, const Skeleton& b) {
  return a.max_vertices == b.max_vertices && a.max_edges == b.max_edges &&
         a.trees_only == b.trees_only;
}

// The corolla covering vertex v: leg j reads the jth stored incident slot.
GraphMap corolla_cover(const Graph& g, const std::string& v) {
  auto slots = g.incident_slots(v);
  GraphMap m;
  m.source = corolla((int)slots.size() - 1);
  m.target = g;
  m.vertex_map["v"] = Embedding{{v}, {}};
  for (size_t j = 0; j < slots.size(); ++j) {
    std::string id = "e" + std::to_string(j);
    const Edge* e = m.source.find_edge(id);
    int vend = e->ends[0].is_port ? 1 : 0;
    m.edge_map[id] = slots[j].edge;
    m.slot_map[SlotRef{id, vend}] = slots[j];
  }
  return m;
}

// Everything that precomposes a member into hom(-, object) is a member.
void close_under_precomposition(SubPresheaf& sub) {
  const Skeleton& sk = *sub.sk;
  const int n = (int)sk.objects.size();
  const int g = sub.object;
  std::vector<std::pair<int, int>> work;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < (int)sub.member[h].size(); ++k)
      if (sub.member[h][k]) work.push_back({h, k});
  while (!work.empty()) {
    auto [h, k] = work.back();
    work.pop_back();
    const int hg = (int)sk.homs[h][g].size();
    for (int s = 0; s < n; ++s) {
      const auto& tab = sk.compose_table[s][h][g];
      for (int u = 0; u < (int)sk.homs[s][h].size(); ++u) {
        int idx = tab[(size_t)u * hg + k];
        if (!sub.member[s][idx]) {
          sub.member[s][idx] = 1;
          work.push_back({s, idx});
        }
      }
    }
  }
}

SubPresheaf empty_sub(std::shared_ptr<const Skeleton> sk, int g) {
  SubPresheaf sub;
  sub.sk = sk;
  sub.object = g;
  sub.member.resize(sk->objects.size());
  for (size_t h = 0; h < sk->objects.size(); ++h)
    sub.member[h].assign(sk->homs[h][g].size(), 0);
  return sub;
}

// Restriction of element e over object g along every member of sub, shaped
// like a NaturalTransformation out of sub.
std::vector<std::vector<int>> restrict_element(const GraphicalSet& x,
                                               const SubPresheaf& sub, int g,
                                               int e) {
  const int n = (int)x.sk->objects.size();
  std::vector<std::vector<int>> comp(n);
  for (int h = 0; h < n; ++h) {
    comp[h].assign(x.sk->homs[h][g].size(), -1);
    for (int k = 0; k < (int)comp[h].size(); ++k)
      if (sub.member[h][k]) comp[h][k] = x.actions[h][g][k][e];
  }
  return comp;
}

}  // namespace

Skeleton build_skeleton(int max_vertices, int max_edges, bool trees_only) {
  Skeleton sk;
  sk.max_vertices = max_vertices;
  sk.max_edges = max_edges;
  sk.trees_only = trees_only;
  sk.objects = enumerate_graphs(max_vertices, max_edges, trees_only);
  const int n = (int)sk.objects.size();

  sk.homs.resize(n);
  for (int s = 0; s < n; ++s) {
    sk.homs[s].resize(n);
    for (int t = 0; t < n; ++t)
      sk.homs[s][t] = enumerate_maps(sk.objects[s], sk.objects[t]);
  }

  sk.identities.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    GraphMap id = identity_map(sk.objects[i]);
    for (int k = 0; k < (int)sk.homs[i][i].size(); ++k)
      if (equal_maps(sk.homs[i][i][k], id)) {
        sk.identities[i] = k;
        break;
      }
    if (sk.identities[i] < 0)
      throw std::logic_error("skeleton: identity missing from its hom table");
  }

  std::vector<std::vector<std::unordered_map<std::string, int>>> keyed(n);
  for (int s = 0; s < n; ++s) {
    keyed[s].resize(n);
    for (int t = 0; t < n; ++t)
      for (int k = 0; k < (int)sk.homs[s][t].size(); ++k)
        keyed[s][t].emplace(map_data_key(sk.homs[s][t][k]), k);
  }

  sk.compose_table.resize(n);
  for (int s = 0; s < n; ++s) {
    sk.compose_table[s].resize(n);
    for (int t = 0; t < n; ++t) {
      sk.compose_table[s][t].resize(n);
      for (int u = 0; u < n; ++u) {
        const auto& fs = sk.homs[s][t];
        const auto& gs = sk.homs[t][u];
        auto& tab = sk.compose_table[s][t][u];
        tab.assign(fs.size() * gs.size(), -1);
        for (size_t fi = 0; fi < fs.size(); ++fi)
          for (size_t gi = 0; gi < gs.size(); ++gi) {
            GraphMap c = compose(gs[gi], fs[fi]);
            int idx = -1;
            auto it = keyed[s][u].find(map_data_key(c));
            if (it != keyed[s][u].end()) {
              idx = it->second;
            } else {
              for (int k = 0; k < (int)sk.homs[s][u].size(); ++k)
                if (equal_maps(sk.homs[s][u][k], c)) {
                  idx = k;
                  break;
                }
            }
            if (idx < 0)
              throw std::logic_error(
                  "skeleton: composite missing from its hom table");
            tab[fi * gs.size() + gi] = idx;
          }
      }
    }
  }
  return sk;
}

int object_index(const Skeleton& sk, const Graph& g) {
  std::string key = graph_key(canonicalize(g).graph);
  for (int i = 0; i < (int)sk.objects.size(); ++i)
    if (graph_key(sk.objects[i]) == key) return i;
  return -1;
}

std::tuple<int, int, int> locate_map(const Skeleton& sk, const GraphMap& m) {
  // the target must be a skeleton object verbatim, since the relocated map
  // is compared against the stored homs by name
  int ti = -1;
  std::string tkey = graph_key(m.target);
  for (int i = 0; i < (int)sk.objects.size() && ti < 0; ++i)
    if (graph_key(sk.objects[i]) == tkey) ti = i;
  if (ti < 0)
    throw std::invalid_argument("locate_map: target is not a skeleton object");
  CanonicalForm cf = canonicalize(m.source);
  int si = object_index(sk, cf.graph);
  if (si < 0)
    throw std::invalid_argument(
        "locate_map: source class is outside the skeleton");
  GraphMap rewritten =
      compose(m, iso_to_map(cf.graph, m.source, invert_iso(cf.to_canonical)));
  for (int k = 0; k < (int)sk.homs[si][ti].size(); ++k)
    if (equal_maps(sk.homs[si][ti][k], rewritten)) return {si, ti, k};
  throw std::logic_error("locate_map: rewritten map missing from homs");
}

std::vector<std::string> validate_skeleton(const Skeleton& sk) {
  std::vector<std::string> out;
  const int n = (int)sk.objects.size();
  if ((int)sk.homs.size() != n || (int)sk.identities.size() != n ||
      (int)sk.compose_table.size() != n) {
    out.push_back("skeleton: top-level sizes disagree with the object count");
    return out;
  }
  for (int s = 0; s < n; ++s)
    if ((int)sk.homs[s].size() != n || (int)sk.compose_table[s].size() != n) {
      out.push_back("skeleton: ragged hom or table row at object " +
                    std::to_string(s));
      return out;
    }

  for (int i = 0; i < n; ++i) {
    int id = sk.identities[i];
    if (id < 0 || id >= (int)sk.homs[i][i].size() ||
        !equal_maps(sk.homs[i][i][id], identity_map(sk.objects[i])))
      out.push_back("skeleton: identities[" + std::to_string(i) +
                    "] is not the identity map");
  }

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u) {
        const auto& fs = sk.homs[s][t];
        const auto& gs = sk.homs[t][u];
        const auto& tab = sk.compose_table[s][t][u];
        if (tab.size() != fs.size() * gs.size()) {
          out.push_back("skeleton: table " + std::to_string(s) + "," +
                        std::to_string(t) + "," + std::to_string(u) +
                        " has the wrong size");
          continue;
        }
        for (size_t fi = 0; fi < fs.size(); ++fi)
          for (size_t gi = 0; gi < gs.size(); ++gi) {
            int idx = tab[fi * gs.size() + gi];
            if (idx < 0 || idx >= (int)sk.homs[s][u].size() ||
                !equal_maps(sk.homs[s][u][idx], compose(gs[gi], fs[fi])))
              out.push_back("skeleton: table entry " + std::to_string(s) +
                            "," + std::to_string(t) + "," + std::to_string(u) +
                            " f#" + std::to_string(fi) + " g#" +
                            std::to_string(gi) + " disagrees with compose");
          }
      }
  return out;
}

GraphicalSet representable(std::shared_ptr<const Skeleton> sk, int g) {
  require_skeleton(sk, "representable");
  require_object(*sk, g, "representable");
  const int n = (int)sk->objects.size();
  GraphicalSet x;
  x.sk = sk;
  x.sets.resize(n);
  for (int t = 0; t < n; ++t) {
    x.sets[t].resize(sk->homs[t][g].size());
    for (size_t k = 0; k < x.sets[t].size(); ++k)
      x.sets[t][k] = "m" + std::to_string(k);
  }
  x.actions.resize(n);
  for (int s = 0; s < n; ++s) {
    x.actions[s].resize(n);
    for (int t = 0; t < n; ++t) {
      const int hg = (int)sk->homs[t][g].size();
      const auto& tab = sk->compose_table[s][t][g];
      x.actions[s][t].resize(sk->homs[s][t].size());
      for (size_t k = 0; k < x.actions[s][t].size(); ++k) {
        auto& row = x.actions[s][t][k];
        row.resize(hg);
        for (int e = 0; e < hg; ++e) row[e] = tab[k * hg + e];
      }
    }
  }
  return x;
}

GraphicalSet terminal_presheaf(std::shared_ptr<const Skeleton> sk) {
  require_skeleton(sk, "terminal_presheaf");
  const int n = (int)sk->objects.size();
  GraphicalSet x;
  x.sk = sk;
  x.sets.assign(n, {"*"});
  x.actions.resize(n);
  for (int s = 0; s < n; ++s) {
    x.actions[s].resize(n);
    for (int t = 0; t < n; ++t)
      x.actions[s][t].assign(sk->homs[s][t].size(), std::vector<int>{0});
  }
  return x;
}

std::vector<std::string> validate_presheaf(const GraphicalSet& x) {
  std::vector<std::string> out;
  if (!x.sk) {
    out.push_back("presheaf: null skeleton");
    return out;
  }
  const Skeleton& sk = *x.sk;
  const int n = (int)sk.objects.size();
  if ((int)x.sets.size() != n || (int)x.actions.size() != n) {
    out.push_back("presheaf: sets or actions sized off the object count");
    return out;
  }
  for (int t = 0; t < n; ++t) {
    std::set<std::string> names(x.sets[t].begin(), x.sets[t].end());
    if (names.size() != x.sets[t].size())
      out.push_back("presheaf: duplicate element name over object " +
                    std::to_string(t));
  }
  for (int s = 0; s < n; ++s) {
    if ((int)x.actions[s].size() != n) {
      out.push_back("presheaf: ragged actions at object " + std::to_string(s));
      return out;
    }
    for (int t = 0; t < n; ++t) {
      if (x.actions[s][t].size() != sk.homs[s][t].size()) {
        out.push_back("presheaf: action count differs from hom count for " +
                      std::to_string(s) + "->" + std::to_string(t));
        return out;
      }
      for (size_t k = 0; k < x.actions[s][t].size(); ++k) {
        const auto& row = x.actions[s][t][k];
        if (row.size() != x.sets[t].size()) {
          out.push_back("presheaf: action row size for " + std::to_string(s) +
                        "->" + std::to_string(t) + " #" + std::to_string(k));
          return out;
        }
        for (int v : row)
          if (v < 0 || v >= (int)x.sets[s].size()) {
            out.push_back("presheaf: action value out of range for " +
                          std::to_string(s) + "->" + std::to_string(t) + " #" +
                          std::to_string(k));
            return out;
          }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto& row = x.actions[i][i][sk.identities[i]];
    for (size_t e = 0; e < row.size(); ++e)
      if (row[e] != (int)e)
        out.push_back("presheaf: identity action moves " + x.sets[i][e] +
                      " over object " + std::to_string(i));
  }

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u) {
        const auto& tab = sk.compose_table[s][t][u];
        const size_t hg = sk.homs[t][u].size();
        for (size_t fi = 0; fi < sk.homs[s][t].size(); ++fi)
          for (size_t gi = 0; gi < hg; ++gi) {
            int ci = tab[fi * hg + gi];
            const auto& via_c = x.actions[s][u][ci];
            const auto& via_g = x.actions[t][u][gi];
            const auto& via_f = x.actions[s][t][fi];
            for (size_t e = 0; e < via_c.size(); ++e)
              if (via_c[e] != via_f[via_g[e]])
                out.push_back(
                    "presheaf: functoriality fails at " + std::to_string(s) +
                    "->" + std::to_string(t) + " #" + std::to_string(fi) +
                    " then " + std::to_string(t) + "->" + std::to_string(u) +
                    " #" + std::to_string(gi) + " on " + x.sets[u][e]);
          }
      }
  return out;
}

std::vector<std::string> validate_subpresheaf(const SubPresheaf& s) {
  std::vector<std::string> out;
  if (!s.sk) {
    out.push_back("subpresheaf: null skeleton");
    return out;
  }
  const Skeleton& sk = *s.sk;
  const int n = (int)sk.objects.size();
  if (s.object < 0 || s.object >= n) {
    out.push_back("subpresheaf: object index out of range");
    return out;
  }
  if ((int)s.member.size() != n) {
    out.push_back("subpresheaf: member rows sized off the object count");
    return out;
  }
  for (int h = 0; h < n; ++h)
    if (s.member[h].size() != sk.homs[h][s.object].size()) {
      out.push_back("subpresheaf: member row at object " + std::to_string(h) +
                    " sized off its hom count");
      return out;
    }
  const int g = s.object;
  for (int h = 0; h < n; ++h) {
    const int hg = (int)sk.homs[h][g].size();
    for (int k = 0; k < hg; ++k) {
      if (!s.member[h][k]) continue;
      for (int sp = 0; sp < n; ++sp) {
        const auto& tab = sk.compose_table[sp][h][g];
        for (size_t u = 0; u < sk.homs[sp][h].size(); ++u)
          if (!s.member[sp][tab[u * hg + k]])
            out.push_back("subpresheaf: member " + std::to_string(h) + " #" +
                          std::to_string(k) + " loses its precomposite along " +
                          std::to_string(sp) + "->" + std::to_string(h) +
                          " #" + std::to_string(u));
      }
    }
  }
  return out;
}

SubPresheaf segal_core(std::shared_ptr<const Skeleton> sk, int g) {
  require_skeleton(sk, "segal_core");
  require_object(*sk, g, "segal_core");
  const Graph& G = sk->objects[g];
  if (G.vertices.empty())
    throw std::invalid_argument("segal_core: object has no vertices");
  SubPresheaf sub = empty_sub(sk, g);
  for (const auto& v : G.vertices) {
    auto [si, ti, ki] = locate_map(*sk, corolla_cover(G, v));
    (void)ti;
    sub.member[si][ki] = 1;
  }
  close_under_precomposition(sub);
  return sub;
}

SubPresheaf inner_horn(std::shared_ptr<const Skeleton> sk, int g,
                       const std::string& kept_edge) {
  require_skeleton(sk, "inner_horn");
  require_object(*sk, g, "inner_horn");
  const Graph& G = sk->objects[g];
  if (classify_edge(G, kept_edge) != EdgeClass::Inner)
    throw std::invalid_argument("inner_horn: edge is not inner");
  SubPresheaf sub = empty_sub(sk, g);
  for (const Elementary& el : elementary_cofaces(G)) {
    if (el.kind == Elementary::Kind::Inner && el.datum == kept_edge) continue;
    auto [si, ti, ki] = locate_map(*sk, elementary_to_map(el));
    (void)ti;
    sub.member[si][ki] = 1;
  }
  close_under_precomposition(sub);
  return sub;
}

std::vector<std::string> validate_natural(const GraphicalSet& x,
                                          const GraphicalSet& y,
                                          const NaturalTransformation& phi) {
  std::vector<std::string> out;
  if (!x.sk || !y.sk || !same_skeleton(*x.sk, *y.sk)) {
    out.push_back("natural: skeletons differ");
    return out;
  }
  const Skeleton& sk = *x.sk;
  const int n = (int)sk.objects.size();
  if ((int)phi.components.size() != n) {
    out.push_back("natural: component count off the object count");
    return out;
  }
  for (int t = 0; t < n; ++t) {
    if (phi.components[t].size() != x.sets[t].size()) {
      out.push_back("natural: component over object " + std::to_string(t) +
                    " sized off the source set");
      return out;
    }
    for (int v : phi.components[t])
      if (v < 0 || v >= (int)y.sets[t].size()) {
        out.push_back("natural: component value out of range over object " +
                      std::to_string(t));
        return out;
      }
  }
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (size_t k = 0; k < sk.homs[s][t].size(); ++k)
        for (size_t e = 0; e < x.sets[t].size(); ++e)
          if (phi.components[s][x.actions[s][t][k][e]] !=
              y.actions[s][t][k][phi.components[t][e]])
            out.push_back("natural: square fails at " + std::to_string(s) +
                          "->" + std::to_string(t) + " #" + std::to_string(k) +
                          " on " + x.sets[t][e]);
  return out;
}

std::vector<NaturalTransformation> hom_from_sub(const SubPresheaf& s,
                                                const GraphicalSet& x) {
  if (!s.sk || !x.sk || !same_skeleton(*s.sk, *x.sk))
    throw std::invalid_argument("hom_from_sub: skeletons differ");
  const Skeleton& sk = *s.sk;
  const int n = (int)sk.objects.size();
  const int g = s.object;

  std::vector<std::pair<int, int>> pos;
  std::vector<std::vector<int>> pidx(n);
  for (int h = 0; h < n; ++h) {
    pidx[h].assign(sk.homs[h][g].size(), -1);
    for (int k = 0; k < (int)sk.homs[h][g].size(); ++k)
      if (s.member[h][k]) {
        pidx[h][k] = (int)pos.size();
        pos.push_back({h, k});
      }
  }
  const int m = (int)pos.size();

  // Assigning position p forces every precomposite member along every map
  // into its object.
  struct Forced {
    int q, src, u;
  };
  std::vector<std::vector<Forced>> forced(m);
  for (int p = 0; p < m; ++p) {
    auto [h, k] = pos[p];
    const int hg = (int)sk.homs[h][g].size();
    for (int sp = 0; sp < n; ++sp) {
      const auto& tab = sk.compose_table[sp][h][g];
      for (int u = 0; u < (int)sk.homs[sp][h].size(); ++u) {
        int q = pidx[sp][tab[(size_t)u * hg + k]];
        if (q < 0)
          throw std::invalid_argument("hom_from_sub: subpresheaf not closed");
        forced[p].push_back({q, sp, u});
      }
    }
  }

  std::vector<int> val(m, -1);
  std::vector<int> trail;
  std::vector<NaturalTransformation> out;

  auto try_assign = [&](int p0, int c0) -> bool {
    std::vector<std::pair<int, int>> queue{{p0, c0}};
    while (!queue.empty()) {
      auto [p, c] = queue.back();
      queue.pop_back();
      if (val[p] == c) continue;
      if (val[p] != -1) return false;
      val[p] = c;
      trail.push_back(p);
      for (const Forced& f : forced[p])
        queue.push_back({f.q, x.actions[f.src][pos[p].first][f.u][c]});
    }
    return true;
  };
  auto undo_to = [&](size_t mark) {
    while (trail.size() > mark) {
      val[trail.back()] = -1;
      trail.pop_back();
    }
  };

  std::function<void()> dfs = [&]() {
    int p = -1;
    for (int i = 0; i < m; ++i)
      if (val[i] < 0) {
        p = i;
        break;
      }
    if (p < 0) {
      NaturalTransformation nt;
      nt.components.resize(n);
      for (int h = 0; h < n; ++h)
        nt.components[h].assign(sk.homs[h][g].size(), -1);
      for (int i = 0; i < m; ++i)
        nt.components[pos[i].first][pos[i].second] = val[i];
      out.push_back(std::move(nt));
      return;
    }
    const int h = pos[p].first;
    for (int c = 0; c < (int)x.sets[h].size(); ++c) {
      size_t mark = trail.size();
      if (try_assign(p, c)) dfs();
      undo_to(mark);
    }
  };
  dfs();
  return out;
}

SegalReport satisfies_segal(const GraphicalSet& x) {
  SegalReport rep;
  if (!x.sk) {
    rep.failures.push_back("segal: null skeleton");
    return rep;
  }
  auto sk = x.sk;
  const int n = (int)sk->objects.size();
  for (int gi = 0; gi < n; ++gi) {
    if (sk->objects[gi].vertices.empty()) continue;
    SubPresheaf core = segal_core(sk, gi);
    auto fams = hom_from_sub(core, x);
    rep.objects_checked += 1;
    rep.families_matched += (long)fams.size();

    std::map<std::vector<std::vector<int>>, int> where;
    for (int i = 0; i < (int)fams.size(); ++i)
      where.emplace(fams[i].components, i);
    std::vector<int> first_hit(fams.size(), -1);
    for (int e = 0; e < (int)x.sets[gi].size(); ++e) {
      auto r = restrict_element(x, core, gi, e);
      auto it = where.find(r);
      if (it == where.end()) {
        rep.failures.push_back("segal: object " + std::to_string(gi) +
                               " element " + x.sets[gi][e] +
                               " restricts outside hom(core, X)");
      } else if (first_hit[it->second] >= 0) {
        rep.failures.push_back("segal: object " + std::to_string(gi) +
                               " elements " +
                               x.sets[gi][first_hit[it->second]] + " and " +
                               x.sets[gi][e] + " share a core family");
      } else {
        first_hit[it->second] = e;
      }
    }
    for (int i = 0; i < (int)fams.size(); ++i)
      if (first_hit[i] < 0)
        rep.failures.push_back("segal: object " + std::to_string(gi) +
                               " core family #" + std::to_string(i) +
                               " lifts to no element");
  }
  rep.holds = rep.failures.empty();
  return rep;
}

std::vector<int> fillers(const GraphicalSet& x, int g,
                         const std::string& kept_edge,
                         const NaturalTransformation& horn_element) {
  require_skeleton(x.sk, "fillers");
  SubPresheaf horn = inner_horn(x.sk, g, kept_edge);
  std::vector<int> out;
  for (int e = 0; e < (int)x.sets[g].size(); ++e)
    if (restrict_element(x, horn, g, e) == horn_element.components)
      out.push_back(e);
  return out;
}

KanReport satisfies_kan(const GraphicalSet& x, bool strict) {
  KanReport rep;
  if (!x.sk) {
    rep.failures.push_back("kan: null skeleton");
    return rep;
  }
  auto sk = x.sk;
  const int n = (int)sk->objects.size();
  for (int gi = 0; gi < n; ++gi) {
    const Graph& G = sk->objects[gi];
    for (const Edge& ed : G.edges) {
      if (classify_edge(G, ed.id) != EdgeClass::Inner) continue;
      SubPresheaf horn = inner_horn(sk, gi, ed.id);
      auto fams = hom_from_sub(horn, x);
      rep.horns_checked += 1;
      rep.elements_checked += (long)fams.size();

      std::map<std::vector<std::vector<int>>, int> counts;
      for (const auto& f : fams) counts.emplace(f.components, 0);
      for (int e = 0; e < (int)x.sets[gi].size(); ++e) {
        auto it = counts.find(restrict_element(x, horn, gi, e));
        if (it == counts.end())
          rep.failures.push_back("kan: object " + std::to_string(gi) +
                                 " edge " + ed.id + " element " +
                                 x.sets[gi][e] +
                                 " restricts outside hom(horn, X)");
        else
          it->second += 1;
      }
      int i = 0;
      for (const auto& f : fams) {
        int c = counts.at(f.components);
        bool bad_lax = c < 1;
        bool bad_strict = strict && c != 1;
        if (bad_lax || bad_strict)
          rep.failures.push_back("kan: object " + std::to_string(gi) +
                                 " edge " + ed.id + " horn element #" +
                                 std::to_string(i) + " has " +
                                 std::to_string(c) + " fillers");
        ++i;
      }
    }
  }
  rep.holds = rep.failures.empty();
  return rep;
}

std::string presheaf_to_json(const GraphicalSet& x) {
  if (!x.sk) throw std::invalid_argument("presheaf_to_json: null skeleton");
  const Skeleton& sk = *x.sk;
  const int n = (int)sk.objects.size();
  json j;
  j["skeleton"] = {{"max_vertices", sk.max_vertices},
                   {"max_edges", sk.max_edges},
                   {"trees_only", sk.trees_only}};
  json sets = json::object();
  for (int t = 0; t < n; ++t) sets[graph_key(sk.objects[t])] = x.sets[t];
  j["sets"] = sets;
  json acts = json::object();
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (size_t k = 0; k < sk.homs[s][t].size(); ++k) {
        json one = json::object();
        for (size_t e = 0; e < x.sets[t].size(); ++e)
          one[x.sets[t][e]] = x.sets[s][x.actions[s][t][k][e]];
        acts[graph_key(sk.objects[s]) + " -> " + graph_key(sk.objects[t]) +
             " #" + std::to_string(k)] = one;
      }
  j["actions"] = acts;
  return j.dump(2);
}

GraphicalSet presheaf_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("presheaf: bad JSON: ") +
                                e.what());
  }
  if (!j.is_object() || !j.contains("skeleton") || !j.contains("sets") ||
      !j.contains("actions"))
    throw std::invalid_argument(
        "presheaf: need \"skeleton\", \"sets\" and \"actions\"");
  const json& sj = j["skeleton"];
  if (!sj.contains("max_vertices") || !sj.contains("max_edges") ||
      !sj.contains("trees_only"))
    throw std::invalid_argument(
        "presheaf: skeleton needs \"max_vertices\", \"max_edges\", "
        "\"trees_only\"");
  auto sk = std::make_shared<Skeleton>(
      build_skeleton(sj["max_vertices"].get<int>(),
                     sj["max_edges"].get<int>(), sj["trees_only"].get<bool>()));
  const int n = (int)sk->objects.size();

  std::map<std::string, int> by_key;
  for (int i = 0; i < n; ++i) by_key[graph_key(sk->objects[i])] = i;

  GraphicalSet x;
  x.sk = sk;
  x.sets.resize(n);
  std::vector<std::map<std::string, int>> elem_index(n);
  const json& sets = j["sets"];
  if (!sets.is_object())
    throw std::invalid_argument("presheaf: \"sets\" must be an object");
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    auto bi = by_key.find(it.key());
    if (bi == by_key.end())
      throw std::invalid_argument("presheaf: unknown object key \"" +
                                  it.key() + "\"");
    int t = bi->second;
    for (const json& name : it.value()) {
      if (!name.is_string())
        throw std::invalid_argument("presheaf: element names must be strings");
      if (!elem_index[t].emplace(name.get<std::string>(),
                                 (int)x.sets[t].size())
               .second)
        throw std::invalid_argument("presheaf: duplicate element \"" +
                                    name.get<std::string>() + "\"");
      x.sets[t].push_back(name.get<std::string>());
    }
  }
  if ((int)sets.size() != n)
    throw std::invalid_argument(
        "presheaf: \"sets\" must name every skeleton object");

  x.actions.resize(n);
  for (int s = 0; s < n; ++s) {
    x.actions[s].resize(n);
    for (int t = 0; t < n; ++t)
      x.actions[s][t].assign(sk->homs[s][t].size(), {});
  }
  const json& acts = j["actions"];
  if (!acts.is_object())
    throw std::invalid_argument("presheaf: \"actions\" must be an object");
  for (auto it = acts.begin(); it != acts.end(); ++it) {
    const std::string& key = it.key();
    size_t arrow = key.find(" -> ");
    size_t hash = key.rfind(" #");
    if (arrow == std::string::npos || hash == std::string::npos ||
        hash <= arrow)
      throw std::invalid_argument("presheaf: bad action key \"" + key + "\"");
    auto si = by_key.find(key.substr(0, arrow));
    auto ti = by_key.find(key.substr(arrow + 4, hash - arrow - 4));
    if (si == by_key.end() || ti == by_key.end())
      throw std::invalid_argument("presheaf: unknown object in action key \"" +
                                  key + "\"");
    int s = si->second, t = ti->second;
    int k = -1;
    try {
      k = std::stoi(key.substr(hash + 2));
    } catch (...) {
      throw std::invalid_argument("presheaf: bad hom index in \"" + key +
                                  "\"");
    }
    if (k < 0 || k >= (int)sk->homs[s][t].size())
      throw std::invalid_argument("presheaf: hom index out of range in \"" +
                                  key + "\"");
    const json& one = it.value();
    if (!one.is_object())
      throw std::invalid_argument("presheaf: action \"" + key +
                                  "\" must be an object");
    std::vector<int> row(x.sets[t].size(), -1);
    for (auto et = one.begin(); et != one.end(); ++et) {
      auto from = elem_index[t].find(et.key());
      if (from == elem_index[t].end())
        throw std::invalid_argument("presheaf: unknown element \"" + et.key() +
                                    "\" in \"" + key + "\"");
      if (!et.value().is_string())
        throw std::invalid_argument("presheaf: action values must be strings");
      auto to = elem_index[s].find(et.value().get<std::string>());
      if (to == elem_index[s].end())
        throw std::invalid_argument("presheaf: unknown image element in \"" +
                                    key + "\"");
      row[from->second] = to->second;
    }
    for (int v : row)
      if (v < 0)
        throw std::invalid_argument("presheaf: action \"" + key +
                                    "\" misses an element");
    x.actions[s][t][k] = std::move(row);
  }
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (size_t k = 0; k < sk->homs[s][t].size(); ++k)
        if (x.actions[s][t][k].size() != x.sets[t].size())
          throw std::invalid_argument(
              "presheaf: missing action for " + graph_key(sk->objects[s]) +
              " -> " + graph_key(sk->objects[t]) + " #" + std::to_string(k));
  return x;
}

}  // namespace graphkit
