#pragma once

#include "graphkit/graph_map.hpp"

namespace graphkit {

// One generator of the category of graphs: a coface (inner, outer, snip)
// or a codegeneracy, described by its target graph and the datum the
// construction acts on. The source graph is derived, never stored.
struct Elementary {
  enum class Kind { Inner, Outer, Snip, Degen } kind;
  std::string datum;
  // only for an outer coface deleting the last vertex with several legs:
  // which leg survives as the unit's edge
  std::optional<std::string> survivor;
  Graph target;

  bool operator==(const Elementary&) const = default;
};

// Contraction of the inner edge b, as the map G/b -> G. The merged vertex
// embeds as the two old endpoints joined by b; edges keep their names.
GraphMap inner_coface(const Graph& g, const std::string& b);

// Deletion of the outer vertex v (with its legs), as the map G/v -> G. The
// one non-leg edge at v dangles in the source. Deleting the only vertex
// yields the unit graph on the surviving leg; `survivor` picks it when v
// has several legs.
GraphMap outer_coface(const Graph& g, const std::string& v,
                      const std::optional<std::string>& survivor = {});

// Snip of the loop l into two legs, as the map G/l -> G. Both halves map
// onto l, the only non-injective edge behaviour among the generators.
GraphMap cosnip(const Graph& g, const std::string& l);

// Subdivision of edge b at a new 2-valent vertex, as the map G_b -> G. The
// new vertex rides the unit embedding at b; both halves map onto b.
GraphMap codegeneracy(const Graph& g, const std::string& b);

GraphMap elementary_to_map(const Elementary& e);
// The derived source graph (target after the surgery).
Graph elementary_source(const Elementary& e);

// Every coface with target g, deterministic order: inner per inner edge,
// outer per outer vertex (one per surviving leg when the source is the
// unit), snip per loop.
std::vector<Elementary> elementary_cofaces(const Graph& g);
// Every codegeneracy with target g: one per edge.
std::vector<Elementary> elementary_degeneracies(const Graph& g);

std::string elementary_to_json(const Elementary& e);
Elementary elementary_from_json(const std::string& text);

}  // namespace graphkit
