#include "graphkit/elementary.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace graphkit {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

// identity slot images for every vertex-borne slot of the source
void identity_slots(const Graph& src, GraphMap& m) {
  for (const Edge& e : src.edges)
    for (int j = 0; j < 2; ++j)
      if (!e.ends[j].is_port) m.slot_map[{e.id, j}] = {e.id, j};
}

void corolla_vertices(const Graph& src, GraphMap& m) {
  for (const auto& v : src.vertices)
    if (!m.vertex_map.count(v)) m.vertex_map[v] = Embedding{{v}, {}};
}

}  // namespace

GraphMap inner_coface(const Graph& g, const std::string& b) {
  const Edge* e = g.find_edge(b);
  if (!e) fail("no edge '" + b + "'");
  if (classify_edge(g, b) != EdgeClass::Inner)
    fail("edge '" + b + "' is not inner");

  GraphMap m;
  m.source = contract_edge(g, b);
  m.target = g;
  for (const Edge& se : m.source.edges) m.edge_map[se.id] = se.id;
  std::vector<std::string> ends = {e->ends[0].name, e->ends[1].name};
  std::sort(ends.begin(), ends.end());
  m.vertex_map[merged_vertex_name(ends[0], ends[1])] =
      Embedding{{ends[0], ends[1]}, {b}};
  corolla_vertices(m.source, m);
  identity_slots(m.source, m);
  return m;
}

GraphMap outer_coface(const Graph& g, const std::string& v,
                      const std::optional<std::string>& survivor) {
  GraphMap m;
  m.source = delete_outer_vertex(g, v, survivor);
  m.target = g;
  for (const Edge& se : m.source.edges) m.edge_map[se.id] = se.id;
  corolla_vertices(m.source, m);
  identity_slots(m.source, m);
  return m;
}

GraphMap cosnip(const Graph& g, const std::string& l) {
  GraphMap m;
  m.source = snip_loop(g, l);
  m.target = g;
  for (const Edge& se : m.source.edges) m.edge_map[se.id] = se.id;
  m.edge_map[l + "#1"] = l;
  m.edge_map[l + "#2"] = l;
  corolla_vertices(m.source, m);
  identity_slots(m.source, m);
  m.slot_map[{l + "#1", 0}] = {l, 0};
  m.slot_map[{l + "#2", 0}] = {l, 1};
  return m;
}

GraphMap codegeneracy(const Graph& g, const std::string& b) {
  const Edge* e = g.find_edge(b);
  if (!e) fail("no edge '" + b + "'");

  GraphMap m;
  m.source = subdivide_edge(g, b);
  m.target = g;
  for (const Edge& se : m.source.edges) m.edge_map[se.id] = se.id;
  m.edge_map[b + "#1"] = b;
  m.edge_map[b + "#2"] = b;
  m.vertex_map[b + "#v"] = Embedding{{}, {b}};
  corolla_vertices(m.source, m);
  identity_slots(m.source, m);
  // the halves cover b from its two ends; the new vertex's slots face the
  // rest of the edge
  if (!e->ends[0].is_port) m.slot_map[{b + "#1", 0}] = {b, 0};
  m.slot_map[{b + "#1", 1}] = {b, 1};
  m.slot_map[{b + "#2", 0}] = {b, 0};
  if (!e->ends[1].is_port) m.slot_map[{b + "#2", 1}] = {b, 1};
  return m;
}

GraphMap elementary_to_map(const Elementary& e) {
  switch (e.kind) {
    case Elementary::Kind::Inner:
      return inner_coface(e.target, e.datum);
    case Elementary::Kind::Outer:
      return outer_coface(e.target, e.datum, e.survivor);
    case Elementary::Kind::Snip:
      return cosnip(e.target, e.datum);
    case Elementary::Kind::Degen:
      return codegeneracy(e.target, e.datum);
  }
  fail("bad elementary kind");
}

Graph elementary_source(const Elementary& e) {
  switch (e.kind) {
    case Elementary::Kind::Inner:
      return contract_edge(e.target, e.datum);
    case Elementary::Kind::Outer:
      return delete_outer_vertex(e.target, e.datum, e.survivor);
    case Elementary::Kind::Snip:
      return snip_loop(e.target, e.datum);
    case Elementary::Kind::Degen:
      return subdivide_edge(e.target, e.datum);
  }
  fail("bad elementary kind");
}

std::vector<Elementary> elementary_cofaces(const Graph& g) {
  std::vector<Elementary> out;
  for (const Edge& e : g.edges)
    if (classify_edge(g, e.id) == EdgeClass::Inner)
      out.push_back({Elementary::Kind::Inner, e.id, std::nullopt, g});
  for (const auto& v : g.vertices) {
    if (!is_outer_vertex(g, v)) continue;
    if (g.vertices.size() >= 2) {
      out.push_back({Elementary::Kind::Outer, v, std::nullopt, g});
      continue;
    }
    // the source is the unit graph; every leg can survive
    auto slots = g.incident_slots(v);
    if (slots.size() == 1) {
      out.push_back({Elementary::Kind::Outer, v, std::nullopt, g});
    } else {
      for (const SlotRef& s : slots)
        out.push_back({Elementary::Kind::Outer, v, s.edge, g});
    }
  }
  for (const Edge& e : g.edges)
    if (classify_edge(g, e.id) == EdgeClass::Loop)
      out.push_back({Elementary::Kind::Snip, e.id, std::nullopt, g});
  return out;
}

std::vector<Elementary> elementary_degeneracies(const Graph& g) {
  std::vector<Elementary> out;
  for (const Edge& e : g.edges)
    out.push_back({Elementary::Kind::Degen, e.id, std::nullopt, g});
  return out;
}

using nlohmann::json;

namespace {

const char* kind_name(Elementary::Kind k) {
  switch (k) {
    case Elementary::Kind::Inner:
      return "inner";
    case Elementary::Kind::Outer:
      return "outer";
    case Elementary::Kind::Snip:
      return "snip";
    case Elementary::Kind::Degen:
      return "degen";
  }
  return "";
}

}  // namespace

std::string elementary_to_json(const Elementary& e) {
  json j;
  j["kind"] = kind_name(e.kind);
  j["datum"] = e.datum;
  if (e.survivor) j["survivor"] = *e.survivor;
  j["target"] = json::parse(graph_to_json(e.target));
  return j.dump();
}

Elementary elementary_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    fail(std::string("bad elementary JSON: ") + ex.what());
  }
  try {
    Elementary e;
    std::string k = j.at("kind").get<std::string>();
    if (k == "inner")
      e.kind = Elementary::Kind::Inner;
    else if (k == "outer")
      e.kind = Elementary::Kind::Outer;
    else if (k == "snip")
      e.kind = Elementary::Kind::Snip;
    else if (k == "degen")
      e.kind = Elementary::Kind::Degen;
    else
      fail("bad elementary kind '" + k + "'");
    e.datum = j.at("datum").get<std::string>();
    if (j.contains("survivor")) e.survivor = j["survivor"].get<std::string>();
    e.target = graph_from_json(j.at("target").dump());
    return e;
  } catch (const json::exception& ex) {
    fail(std::string("bad elementary JSON: ") + ex.what());
  }
}

}  // namespace graphkit
