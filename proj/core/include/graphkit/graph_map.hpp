#pragma once

#include <optional>
#include <utility>

#include "graphkit/graph.hpp"

namespace graphkit {

// Where a vertex lands in the target: either a subtree (vertices plus the
// internal edges of a spanning tree) or, when `vertices` is empty, a single
// edge standing in for the unit graph.
struct Embedding {
  std::vector<std::string> vertices;  // sorted; empty means unit-type
  std::vector<std::string> edges;     // internal tree edges, or the one edge
  bool is_unit() const { return vertices.empty(); }
  auto operator<=>(const Embedding&) const = default;
};

std::vector<std::string> validate_embedding(const Graph& g,
                                            const Embedding& emb);
// Ends of g not internal to the embedding, sorted. For a subtree these are
// the non-internal ends sitting on its vertices; for unit-type the two ends
// of the edge.
std::vector<SlotRef> embedding_border(const Graph& g, const Embedding& emb);
// Every valid embedding: all spanning trees of every connected vertex set,
// plus one unit-type per edge.
std::vector<Embedding> enumerate_embeddings(const Graph& g);

// A map of graphs: edges to edges, vertices to embeddings, and for every
// vertex-borne source slot the border end it lands on.
struct GraphMap {
  Graph source;
  Graph target;
  std::map<std::string, std::string> edge_map;
  std::map<std::string, Embedding> vertex_map;
  std::map<SlotRef, SlotRef> slot_map;

  bool operator==(const GraphMap&) const = default;
};

// Structural conditions checked locally: totality, embedding validity and
// pairwise disjointness, border bijections compatible with the edge map,
// end consistency per source edge, the per-target-edge thread shape, and
// removability of the image complement. Returns problems (empty = pass).
std::vector<std::string> check_map_local(const GraphMap& m);

// Full validity: local conditions plus constructive factorization into
// elementary maps and a relabeling isomorphism (defined with the
// decomposition machinery).
std::vector<std::string> check_graphical_map(const GraphMap& m);
bool is_valid_map(const GraphMap& m);

GraphMap identity_map(const Graph& g);
// The map induced by an isomorphism g -> h (corolla embeddings, slots moved
// by the recorded end flips).
GraphMap iso_to_map(const Graph& g, const Graph& h, const Isomorphism& iso);

// Equality on the identifying data: graphs, edge map, and embeddings. The
// slot assignment is a witness and is ignored (it is determined by the edge
// map except at unit-type images, where both choices present the same map).
bool equal_maps(const GraphMap& f, const GraphMap& g);
// True when f = g composed with some isomorphism of the sources
// (targets must agree on the nose).
bool equal_maps_up_to_source_iso(const GraphMap& f, const GraphMap& g);

// g after f; throws std::invalid_argument when not composable and
// std::logic_error if the inputs fail the structural invariants the
// derivation relies on.
GraphMap compose(const GraphMap& g, const GraphMap& f);

// All graphical maps from source to target, deterministic order. Candidates
// come from assigning embeddings and border bijections per vertex; only
// candidates that factor through elementary maps survive. (Defined with the
// decomposition machinery.)
std::vector<GraphMap> enumerate_maps(const Graph& source, const Graph& target);

// vertices and edges of the target hit by the map
std::pair<std::set<std::string>, std::set<std::string>> map_image(
    const GraphMap& m);

// One step of removing the part of a target outside an image.
struct PeelMove {
  enum class Kind { DeleteOuter, Contract, Snip } kind;
  std::string datum;
  std::optional<std::string> survivor;
};
// Plan that removes everything outside the image of m from its target,
// lex-least applicable move first; nullopt when the complement cannot be
// removed (then m is not a graphical map).
std::optional<std::vector<PeelMove>> peel_to_image(const GraphMap& m);

// --- substitution -----------------------------------------------------------

// Replace vertex v of G by H. `matching` sends each boundary port of H to a
// slot of v; H's legs weld onto the corresponding edges of G, H's interior
// is copied (renamed on clashes). H may be the unit graph, welding the two
// matched edges of G into one (keeping the smaller id).
Graph graph_substitute(const Graph& g, const std::string& v, const Graph& h,
                       const std::map<std::string, SlotRef>& matching);

struct SubstitutionStep {
  std::string vertex;
  Graph piece;
  std::map<std::string, SlotRef> matching;
};

// Presentation of a map as: substitute each vertex's embedded piece into the
// source, then include the result into the target.
struct SubstitutionPresentation {
  std::vector<SubstitutionStep> substitutions;  // only non-corolla pieces
  GraphMap inclusion;
};

SubstitutionPresentation as_substitutions_then_inclusion(const GraphMap& m);

// --- JSON -------------------------------------------------------------------

std::string map_to_json(const GraphMap& m);
GraphMap map_from_json(const std::string& text);

}  // namespace graphkit
