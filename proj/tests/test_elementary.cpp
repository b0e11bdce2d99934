#include <doctest.h>

#include "graphkit/elementary.hpp"

#include <stdexcept>

using namespace graphkit;

namespace {

Edge E(std::string id, Slot a, Slot b) {
  return Edge{std::move(id), {std::move(a), std::move(b)}};
}

Graph barbell() {
  return make_graph({"x", "y"},
                    {E("b", vertex_end("x"), vertex_end("y")),
                     E("l0", vertex_end("x"), port_end("p0")),
                     E("l1", vertex_end("y"), port_end("p1"))},
                    {"p0", "p1"});
}

Graph two_cycle() {
  return make_graph({"x", "y"},
                    {E("a", vertex_end("x"), vertex_end("y")),
                     E("c", vertex_end("x"), vertex_end("y"))},
                    {});
}

Graph loop_graph() {
  return make_graph({"w"}, {E("l", vertex_end("w"), vertex_end("w"))}, {});
}

Graph loop_with_leg() {
  return make_graph({"w"},
                    {E("c", vertex_end("w"), port_end("r0")),
                     E("l", vertex_end("w"), vertex_end("w"))},
                    {"r0"});
}

Graph theta() {
  return make_graph({"x", "y"},
                    {E("h0", vertex_end("x"), vertex_end("y")),
                     E("h1", vertex_end("x"), vertex_end("y")),
                     E("h2", vertex_end("x"), vertex_end("y"))},
                    {});
}

Graph triangle() {
  return make_graph({"x", "y", "z"},
                    {E("exy", vertex_end("x"), vertex_end("y")),
                     E("eyz", vertex_end("y"), vertex_end("z")),
                     E("ezx", vertex_end("z"), vertex_end("x"))},
                    {});
}

}  // namespace

TEST_CASE("inner cofaces") {
  // valences 3 and 4 merge into a 5-leg corolla
  Graph g = make_graph({"x", "y"},
                       {E("b", vertex_end("x"), vertex_end("y")),
                        E("k0", vertex_end("x"), port_end("q0")),
                        E("k1", vertex_end("x"), port_end("q1")),
                        E("k2", vertex_end("y"), port_end("q2")),
                        E("k3", vertex_end("y"), port_end("q3")),
                        E("k4", vertex_end("y"), port_end("q4"))},
                       {"q0", "q1", "q2", "q3", "q4"});
  GraphMap m = inner_coface(g, "b");
  CHECK(check_map_local(m).empty());
  CHECK(m.source.vertices == std::vector<std::string>{"x*y"});
  CHECK(m.source.edges.size() == 5);
  CHECK(is_isomorphic(m.source, corolla(4)));
  CHECK(m.target.vertices.size() == m.source.vertices.size() + 1);
  CHECK(m.target.edges.size() == m.source.edges.size() + 1);
  CHECK(m.source.boundary == m.target.boundary);
  CHECK(m.vertex_map.at("x*y") == Embedding{{"x", "y"}, {"b"}});

  // contracting one of two parallel edges leaves a loop
  GraphMap p = inner_coface(two_cycle(), "a");
  CHECK(check_map_local(p).empty());
  CHECK(classify_edge(p.source, "c") == EdgeClass::Loop);

  // contracting a triangle edge leaves a double edge, betti number kept
  GraphMap t = inner_coface(triangle(), "exy");
  CHECK(check_map_local(t).empty());
  CHECK(t.source.vertices.size() == 2);
  CHECK(betti1(t.source) == betti1(triangle()));

  CHECK_THROWS_AS((void)inner_coface(loop_graph(), "l"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)inner_coface(barbell(), "l0"), std::invalid_argument);
  CHECK_THROWS_AS((void)inner_coface(barbell(), "zz"), std::invalid_argument);
}

TEST_CASE("outer cofaces") {
  Graph g = barbell();
  GraphMap d = outer_coface(g, "y");
  CHECK(check_map_local(d).empty());
  CHECK(d.source == delete_outer_vertex(g, "y"));
  CHECK(d.source.boundary == std::vector<std::string>{"p0", "b#p1"});
  CHECK(d.vertex_map.at("x") == Embedding{{"x"}, {}});

  // deleting the only vertex of a corolla needs a surviving leg
  GraphMap s = outer_coface(corolla(2), "v", std::optional<std::string>("e1"));
  CHECK(check_map_local(s).empty());
  CHECK(s.source.vertices.empty());
  REQUIRE(s.source.edges.size() == 1);
  CHECK(s.source.edges[0].id == "e1");
  CHECK(s.edge_map.at("e1") == "e1");
  CHECK_THROWS_AS((void)outer_coface(corolla(2), "v"), std::invalid_argument);

  // a lone leg needs no choice
  GraphMap s0 = outer_coface(corolla(0), "v");
  CHECK(check_map_local(s0).empty());
  CHECK(s0.source.vertices.empty());

  CHECK_THROWS_AS((void)outer_coface(theta(), "x"), std::invalid_argument);
  CHECK_THROWS_AS((void)outer_coface(loop_with_leg(), "w"),
                  std::invalid_argument);
}

TEST_CASE("cosnips") {
  GraphMap c = cosnip(loop_with_leg(), "l");
  CHECK(check_map_local(c).empty());
  CHECK(c.source.vertices.size() == 1);
  CHECK(is_isomorphic(c.source, corolla(2)));
  CHECK(betti1(c.source) + 1 == betti1(c.target));
  CHECK(c.source.edges.size() == c.target.edges.size() + 1);
  CHECK(c.edge_map.at("l#1") == "l");
  CHECK(c.edge_map.at("l#2") == "l");
  CHECK(c.slot_map.at({"l#1", 0}) == SlotRef{"l", 0});
  CHECK(c.slot_map.at({"l#2", 0}) == SlotRef{"l", 1});

  // two snips commute up to isomorphism
  Graph g2 = make_graph({"x"},
                        {E("l1", vertex_end("x"), vertex_end("x")),
                         E("l2", vertex_end("x"), vertex_end("x"))},
                        {});
  Graph a = snip_loop(snip_loop(g2, "l1"), "l2");
  Graph b = snip_loop(snip_loop(g2, "l2"), "l1");
  CHECK(is_isomorphic(a, b));

  CHECK_THROWS_AS((void)cosnip(barbell(), "b"), std::invalid_argument);
}

TEST_CASE("codegeneracies") {
  // the unit: its subdivision is the 2-valent corolla
  GraphMap s = codegeneracy(edge_unit(), "e");
  CHECK(check_map_local(s).empty());
  CHECK(s.source.vertices == std::vector<std::string>{"e#v"});
  CHECK(s.source.edges.size() == 2);
  CHECK(s.vertex_map.at("e#v") == Embedding{{}, {"e"}});
  CHECK(s.slot_map.at({"e#1", 1}) == SlotRef{"e", 1});
  CHECK(s.slot_map.at({"e#2", 0}) == SlotRef{"e", 0});

  // a loop subdivides into a 2-cycle
  GraphMap sl = codegeneracy(loop_graph(), "l");
  CHECK(check_map_local(sl).empty());
  CHECK(is_isomorphic(sl.source, two_cycle()));
  CHECK(betti1(sl.source) == betti1(sl.target));

  for (const std::string b : {"b", "l0"}) {
    GraphMap m = codegeneracy(barbell(), b);
    CHECK(check_map_local(m).empty());
    CHECK(m.source.vertices.size() == barbell().vertices.size() + 1);
    CHECK(m.source.edges.size() == barbell().edges.size() + 1);
    CHECK(m.source.boundary == barbell().boundary);
  }

  CHECK_THROWS_AS((void)codegeneracy(barbell(), "zz"), std::invalid_argument);
}

TEST_CASE("a subdivision then a contraction of one half collapses") {
  Graph g = barbell();
  GraphMap sb = codegeneracy(g, "b");
  for (const std::string half : {"b#1", "b#2"}) {
    GraphMap d = inner_coface(sb.source, half);
    GraphMap comp = compose(sb, d);
    CHECK(check_map_local(comp).empty());
    // the composite is a pure relabeling: corolla vertices, bijective edges
    std::set<std::string> hit;
    for (const auto& [e, h] : comp.edge_map) hit.insert(h);
    CHECK(hit.size() == comp.target.edges.size());
    for (const auto& [v, emb] : comp.vertex_map) {
      CHECK(!emb.is_unit());
      CHECK(emb.vertices.size() == 1);
      CHECK(emb.edges.empty());
    }
  }
}

TEST_CASE("coface and degeneracy enumeration") {
  auto cb = elementary_cofaces(barbell());
  REQUIRE(cb.size() == 3);
  CHECK(cb[0].kind == Elementary::Kind::Inner);
  CHECK(cb[0].datum == "b");
  CHECK(cb[1].kind == Elementary::Kind::Outer);
  CHECK(cb[2].kind == Elementary::Kind::Outer);

  CHECK(elementary_cofaces(corolla(2)).size() == 3);  // one per survivor
  CHECK(elementary_cofaces(corolla(0)).size() == 1);
  CHECK(elementary_cofaces(theta()).size() == 3);
  CHECK(elementary_cofaces(loop_with_leg()).size() == 1);
  CHECK(elementary_cofaces(loop_graph()).size() == 1);
  CHECK(elementary_cofaces(edge_unit()).empty());

  CHECK(elementary_degeneracies(barbell()).size() == 3);
  CHECK(elementary_degeneracies(edge_unit()).size() == 1);

  for (const Graph& g : {barbell(), two_cycle(), loop_with_leg(), theta(),
                         corolla(2), edge_unit()}) {
    for (const Elementary& e : elementary_cofaces(g)) {
      GraphMap m = elementary_to_map(e);
      CHECK(check_map_local(m).empty());
      CHECK(m.source == elementary_source(e));
      CHECK(m.target == g);
    }
    for (const Elementary& e : elementary_degeneracies(g)) {
      GraphMap m = elementary_to_map(e);
      CHECK(check_map_local(m).empty());
      CHECK(m.source == elementary_source(e));
    }
  }
}

TEST_CASE("elementary JSON round trip") {
  std::vector<Elementary> all = elementary_cofaces(barbell());
  for (const Elementary& e : elementary_cofaces(corolla(2)))
    all.push_back(e);
  for (const Elementary& e : elementary_degeneracies(loop_graph()))
    all.push_back(e);
  for (const Elementary& e : all) {
    Elementary back = elementary_from_json(elementary_to_json(e));
    CHECK(back == e);
  }
  CHECK_THROWS_AS((void)elementary_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS((void)elementary_from_json("nope"), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)elementary_from_json(
          R"({"kind":"sideways","datum":"b","target":{}})"),
      std::invalid_argument);
}
