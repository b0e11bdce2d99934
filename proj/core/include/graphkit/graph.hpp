#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace graphkit {

// One end of an edge: either attached to a named vertex or dangling at a
// named boundary port.
struct Slot {
  bool is_port = false;
  std::string name;
  auto operator<=>(const Slot&) const = default;
};

inline Slot vertex_end(std::string n) { return Slot{false, std::move(n)}; }
inline Slot port_end(std::string n) { return Slot{true, std::move(n)}; }

struct Edge {
  std::string id;
  std::array<Slot, 2> ends;
  auto operator<=>(const Edge&) const = default;
};

// Reference to one end of one edge, by edge id and end index.
struct SlotRef {
  std::string edge;
  int end = 0;
  auto operator<=>(const SlotRef&) const = default;
};

enum class EdgeClass { Inner, Loop, Leg, Unit };

// Connected undirected graph with named vertices, two-ended edges, and an
// ordered list of boundary ports. Loops and parallel edges are allowed;
// isolated vertices are not. The vertex-free graph consisting of a single
// edge between two ports is allowed and acts as the unit.
//
// Invariant (enforced by make_graph / JSON input): vertices sorted, edges
// sorted by id, each port name used by exactly one edge end, and the
// boundary is an ordering of exactly the port names.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<std::string> boundary;

  bool operator==(const Graph&) const = default;

  bool has_vertex(const std::string& v) const;
  const Edge* find_edge(const std::string& id) const;
  // All edge ends attached to v, sorted by (edge id, end index).
  std::vector<SlotRef> incident_slots(const std::string& v) const;
};

// Sorts the pieces, validates, throws std::invalid_argument on problems.
Graph make_graph(std::vector<std::string> vertices, std::vector<Edge> edges,
                 std::vector<std::string> boundary);

// Structural problems, empty when the graph is well formed.
std::vector<std::string> validate_graph(const Graph& g);

EdgeClass classify_edge(const Graph& g, const std::string& edge_id);

// A vertex is outer when at most one of its slots sits on a non-leg edge.
// A loop contributes two such slots, so a vertex carrying a loop is never
// outer.
bool is_outer_vertex(const Graph& g, const std::string& v);

// First Betti number: 0 for the unit graph, otherwise
// #inner + #loops - #vertices + 1.
int betti1(const Graph& g);

// Corolla with one vertex "v" and n+1 legs e0..en, boundary p0..pn.
Graph corolla(int n);
// The unit graph: a single edge "e" between ports "p0" and "p1".
Graph edge_unit();

// --- surgeries ------------------------------------------------------------
// Each returns a new graph and throws std::invalid_argument when the
// precondition fails. Fresh names are derived from the datum; a clash with
// an existing name is an error.

// Contract an inner (non-loop, non-leg) edge; its endpoints x, y merge into
// one vertex whose name joins the '*'-separated parts of x and y in sorted
// order, so iterated contractions commute on the nose.
Graph contract_edge(const Graph& g, const std::string& edge_id);

// Delete an outer vertex together with its legs. With >= 2 vertices the one
// non-leg edge at v survives, its freed end becoming port "<edge>#p<i>"
// (appended to the boundary); survivor must not be passed. With exactly one
// vertex the result is the unit graph on the chosen surviving leg (required
// when there is more than one leg); the other legs disappear.
Graph delete_outer_vertex(const Graph& g, const std::string& v,
                          const std::optional<std::string>& survivor = {});

// Cut a loop l at x into two legs l#1 = [x, port l#p0] and
// l#2 = [x, port l#p1]; both new ports are appended to the boundary.
Graph snip_loop(const Graph& g, const std::string& loop_id);

// Split edge b at a new vertex b#v into b#1 = [b.ends[0], b#v] and
// b#2 = [b#v, b.ends[1]].
Graph subdivide_edge(const Graph& g, const std::string& edge_id);

// Name of the vertex obtained by merging x and y (sorted '*'-join of their
// atomic parts).
std::string merged_vertex_name(const std::string& x, const std::string& y);

// --- isomorphism ----------------------------------------------------------

// Bijective relabeling of vertices, edges and ports. `flipped` lists source
// edges whose two ends cross over; for edges with distinguishable ends the
// flag is forced by the end images, for loops and the unit edge it is free
// data.
struct Isomorphism {
  std::map<std::string, std::string> vertex_map;
  std::map<std::string, std::string> edge_map;
  std::map<std::string, std::string> port_map;
  std::set<std::string> flipped;

  bool operator==(const Isomorphism&) const = default;
};

Graph apply_isomorphism(const Graph& g, const Isomorphism& iso);
bool check_isomorphism(const Graph& g, const Graph& h, const Isomorphism& iso);
// Search in deterministic order; boundary order is not required to match.
std::optional<Isomorphism> find_isomorphism(const Graph& g, const Graph& h);
std::vector<Isomorphism> find_isomorphisms(const Graph& g, const Graph& h);
inline bool is_isomorphic(const Graph& g, const Graph& h) {
  return find_isomorphism(g, h).has_value();
}

struct CanonicalForm {
  Graph graph;
  Isomorphism to_canonical;  // from the input graph onto `graph`
};

// Deterministic representative of the isomorphism class (boundary order
// free). Vertices become v0.., edges e0.., ports p0.. .
CanonicalForm canonicalize(const Graph& g);

// Compact deterministic serialization, equal iff graphs are equal.
std::string graph_key(const Graph& g);

// All isomorphism classes with at most max_vertices vertices and max_edges
// edges (canonical representatives, deterministic order). Includes the unit
// graph. trees_only keeps graphs with betti1 = 0.
std::vector<Graph> enumerate_graphs(int max_vertices, int max_edges,
                                    bool trees_only = false);

// --- JSON -----------------------------------------------------------------

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace graphkit
