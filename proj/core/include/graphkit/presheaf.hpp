#pragma once

#include <memory>
#include <tuple>

#include "graphkit/graph_map.hpp"

namespace graphkit {

// A finite full subcategory of graphs: every canonical graph within the
// budget, every map between each ordered pair, and a precomputed
// composition table. Objects are stored in enumeration order; homs[s][t]
// holds the maps from objects[s] to objects[t] in enumeration order.
//
// compose_table[s][t][u] is flattened: for f in homs[s][t] (index fi) and
// g in homs[t][u] (index gi), the composite g.f sits at
// homs[s][u][ compose_table[s][t][u][fi * |homs[t][u]| + gi] ].
struct Skeleton {
  int max_vertices = 0;
  int max_edges = 0;
  bool trees_only = false;
  std::vector<Graph> objects;
  std::vector<std::vector<std::vector<GraphMap>>> homs;
  std::vector<int> identities;  // index of id in homs[i][i]
  std::vector<std::vector<std::vector<std::vector<int>>>> compose_table;
};

Skeleton build_skeleton(int max_vertices, int max_edges, bool trees_only);

// Index of a canonical graph among the objects, or -1.
int object_index(const Skeleton& sk, const Graph& g);

// Locate an arbitrary map whose target is a skeleton object: the source is
// canonicalized, the map rewritten to start at the canonical graph, and the
// result looked up. Returns (source index, target index, hom index).
// Throws std::invalid_argument when either endpoint falls outside the
// skeleton; a rewritten map missing from its hom table is a logic error.
std::tuple<int, int, int> locate_map(const Skeleton& sk, const GraphMap& m);

// Recomputes identities and spot-checks the table against compose():
// empty result means the skeleton is internally consistent. Quadratic in
// hom sizes; meant for tests on small budgets, not for routine use.
std::vector<std::string> validate_skeleton(const Skeleton& sk);

// A contravariant set-valued functor on a skeleton, stored extensionally.
// sets[t] names the elements over objects[t]; actions[s][t][k] tabulates
// the action of homs[s][t][k] as a map from element indices over t to
// element indices over s.
struct GraphicalSet {
  std::shared_ptr<const Skeleton> sk;
  std::vector<std::vector<std::string>> sets;
  std::vector<std::vector<std::vector<std::vector<int>>>> actions;
};

// Shape errors, identity actions that move elements, and functoriality
// failures X(g.f) != X(f).X(g), each named by the offending data.
std::vector<std::string> validate_presheaf(const GraphicalSet& x);

// The functor represented by objects[g]: elements over t are hom indices
// into homs[t][g], actions are given by the composition table.
GraphicalSet representable(std::shared_ptr<const Skeleton> sk, int g);

// One element everywhere, every action trivial.
GraphicalSet terminal_presheaf(std::shared_ptr<const Skeleton> sk);

// A subfunctor of the functor represented by objects[object]: member[h][k]
// flags whether homs[h][object][k] belongs. Closure demands that every
// precomposite of a member is again a member.
struct SubPresheaf {
  std::shared_ptr<const Skeleton> sk;
  int object = -1;
  std::vector<std::vector<char>> member;
};

std::vector<std::string> validate_subpresheaf(const SubPresheaf& s);

// The union of the corolla images, one per vertex: the smallest subfunctor
// through which every vertex's corolla inclusion factors. Demands at least
// one vertex.
SubPresheaf segal_core(std::shared_ptr<const Skeleton> sk, int g);

// The union of the images of every elementary coface except the
// contraction of kept_edge, which must be inner. Cosnips count as outer
// cofaces and are included.
SubPresheaf inner_horn(std::shared_ptr<const Skeleton> sk, int g,
                       const std::string& kept_edge);

// components[t][k] is the image over objects[t] of element k. For a map
// out of a subfunctor, k runs over the members of homs[t][object] in hom
// order and non-members hold -1.
struct NaturalTransformation {
  std::vector<std::vector<int>> components;
};

// Naturality of phi : x -> y against every map of the skeleton.
std::vector<std::string> validate_natural(const GraphicalSet& x,
                                          const GraphicalSet& y,
                                          const NaturalTransformation& phi);

// Every natural map from the subfunctor into x, by exhaustive search with
// propagation: assigning one member forces all of its precomposites.
std::vector<NaturalTransformation> hom_from_sub(const SubPresheaf& s,
                                                const GraphicalSet& x);

// For each object with a vertex, restriction along the Segal core inclusion
// must biject elements over the object with natural maps out of the core.
// Reports carry the object and a witness element or unreached family.
struct SegalReport {
  bool holds = false;
  std::vector<std::string> failures;
  long objects_checked = 0;
  long families_matched = 0;
};

SegalReport satisfies_segal(const GraphicalSet& x);

// All elements over objects[g] whose restrictions agree with the given
// natural map out of the horn at kept_edge.
std::vector<int> fillers(const GraphicalSet& x, int g,
                         const std::string& kept_edge,
                         const NaturalTransformation& horn_element);

// Every inner horn over every object must admit a filler; strict demands
// exactly one. Failures carry the object, edge, and horn element.
struct KanReport {
  bool holds = false;
  std::vector<std::string> failures;
  long horns_checked = 0;
  long elements_checked = 0;
};

KanReport satisfies_kan(const GraphicalSet& x, bool strict);

// {"skeleton": {"max_vertices", "max_edges", "trees_only"},
//  "sets": {object key: [names]},
//  "actions": {"<source key> -> <target key> #<hom index>": {name: name}}}
// where object keys come from graph_key. Loading rebuilds the skeleton.
std::string presheaf_to_json(const GraphicalSet& x);
GraphicalSet presheaf_from_json(const std::string& text);

}  // namespace graphkit
