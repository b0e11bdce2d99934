#include <json.hpp>
#include <stdexcept>

#include "graphkit/graph.hpp"

namespace graphkit {

using nlohmann::json;

namespace {

json slot_to_json(const Slot& s) {
  json j;
  j[s.is_port ? "p" : "v"] = s.name;
  return j;
}

Slot slot_from_json(const json& j) {
  if (j.contains("v")) return vertex_end(j.at("v").get<std::string>());
  if (j.contains("p")) return port_end(j.at("p").get<std::string>());
  throw std::invalid_argument("edge end needs a \"v\" or \"p\" field");
}

}  // namespace

std::string graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = g.vertices;
  j["edges"] = json::array();
  for (const Edge& e : g.edges) {
    json je;
    je["id"] = e.id;
    je["ends"] = {slot_to_json(e.ends[0]), slot_to_json(e.ends[1])};
    j["edges"].push_back(je);
  }
  j["boundary"] = g.boundary;
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad graph JSON: ") + e.what());
  }
  try {
    std::vector<std::string> vs =
        j.value("vertices", std::vector<std::string>{});
    std::vector<Edge> es;
    for (const json& je : j.value("edges", json::array())) {
      Edge e;
      e.id = je.at("id").get<std::string>();
      const json& ends = je.at("ends");
      if (!ends.is_array() || ends.size() != 2)
        throw std::invalid_argument("edge '" + e.id + "' needs two ends");
      e.ends[0] = slot_from_json(ends[0]);
      e.ends[1] = slot_from_json(ends[1]);
      es.push_back(e);
    }
    std::vector<std::string> bd =
        j.value("boundary", std::vector<std::string>{});
    return make_graph(std::move(vs), std::move(es), std::move(bd));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad graph JSON: ") + e.what());
  }
}

}  // namespace graphkit
