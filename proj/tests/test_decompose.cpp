#include <doctest.h>

#include "graphkit/word.hpp"

#include <stdexcept>

using namespace graphkit;
using K = Elementary::Kind;

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

Graph loop_with_leg() {
  return make_graph({"w"},
                    {E("c", vertex_end("w"), port_end("r0")),
                     E("l", vertex_end("w"), vertex_end("w"))},
                    {"r0"});
}

Graph bare_loop() {
  return make_graph({"x"}, {E("l", vertex_end("x"), vertex_end("x"))}, {});
}

Graph theta() {
  return make_graph({"u", "x"},
                    {E("a", vertex_end("u"), vertex_end("x")),
                     E("b", vertex_end("u"), vertex_end("x")),
                     E("c", vertex_end("u"), vertex_end("x"))},
                    {});
}

Graph triangle() {
  return make_graph({"x", "y", "z"},
                    {E("a", vertex_end("x"), vertex_end("y")),
                     E("b", vertex_end("y"), vertex_end("z")),
                     E("c", vertex_end("z"), vertex_end("x"))},
                    {});
}

WordStep step(K k, std::string datum,
              std::optional<std::string> survivor = {}) {
  return WordStep{k, std::move(datum), std::move(survivor)};
}

}  // namespace

TEST_CASE("identity and isomorphisms decompose to the empty word") {
  for (const Graph& g : {barbell(), loop_with_leg(), edge_unit()}) {
    ElementaryWord w = decompose(identity_map(g));
    CHECK(w.steps.empty());
    CHECK(w.start == g);
  }

  // the loop reflection is a morphism with no elementary content at all
  Isomorphism refl;
  refl.vertex_map["w"] = "w";
  refl.edge_map["c"] = "c";
  refl.edge_map["l"] = "l";
  refl.port_map["r0"] = "r0";
  refl.flipped.insert("l");
  GraphMap m = iso_to_map(loop_with_leg(), loop_with_leg(), refl);
  CHECK(decompose(m).steps.empty());
}

TEST_CASE("each elementary map decomposes to its own single step") {
  GraphMap inner = inner_coface(barbell(), "b");
  CHECK(decompose(inner).steps == std::vector<WordStep>{step(K::Inner, "b")});

  GraphMap outer = outer_coface(barbell(), "x");
  CHECK(decompose(outer).steps == std::vector<WordStep>{step(K::Outer, "x")});

  GraphMap last = outer_coface(corolla(2), "v", std::string("e1"));
  CHECK(decompose(last).steps ==
        std::vector<WordStep>{step(K::Outer, "v", std::string("e1"))});

  GraphMap snip = cosnip(loop_with_leg(), "l");
  CHECK(decompose(snip).steps == std::vector<WordStep>{step(K::Snip, "l")});

  GraphMap degen = codegeneracy(barbell(), "b");
  CHECK(decompose(degen).steps == std::vector<WordStep>{step(K::Degen, "b")});

  // subdividing the unit edge still yields one codegeneracy
  GraphMap unit_degen = codegeneracy(edge_unit(), "e");
  CHECK(decompose(unit_degen).steps ==
        std::vector<WordStep>{step(K::Degen, "e")});
}

TEST_CASE("hom sets out of the unit count the edges") {
  for (int n = 1; n <= 4; ++n) {
    auto homs = enumerate_maps(edge_unit(), corolla(n));
    CHECK(int(homs.size()) == n + 1);
  }
  CHECK(enumerate_maps(edge_unit(), edge_unit()).size() == 1);
  CHECK(enumerate_maps(corolla(2), edge_unit()).empty());
  // every edge is reachable, including loops and inner edges on cycles
  CHECK(enumerate_maps(edge_unit(), barbell()).size() == 3);
  CHECK(enumerate_maps(edge_unit(), theta()).size() == 3);
  CHECK(enumerate_maps(edge_unit(), loop_with_leg()).size() == 2);
  CHECK(enumerate_maps(edge_unit(), bare_loop()).size() == 1);
}

TEST_CASE("an inner edge cut open from both sides is rejected") {
  // path source pretending the triangle edge c was snipped: passes every
  // local condition, but only loops can be cut open
  Graph src = make_graph({"xx", "yy", "zz"},
                         {E("a1", vertex_end("xx"), vertex_end("yy")),
                          E("b1", vertex_end("yy"), vertex_end("zz")),
                          E("c1", vertex_end("zz"), port_end("q0")),
                          E("c2", vertex_end("xx"), port_end("q1"))},
                         {"q0", "q1"});
  GraphMap m;
  m.source = src;
  m.target = triangle();
  m.edge_map = {{"a1", "a"}, {"b1", "b"}, {"c1", "c"}, {"c2", "c"}};
  m.vertex_map = {{"xx", Embedding{{"x"}, {}}},
                  {"yy", Embedding{{"y"}, {}}},
                  {"zz", Embedding{{"z"}, {}}}};
  m.slot_map = {{{"a1", 0}, {"a", 0}}, {{"a1", 1}, {"a", 1}},
                {{"b1", 0}, {"b", 0}}, {{"b1", 1}, {"b", 1}},
                {{"c1", 0}, {"c", 0}}, {{"c2", 0}, {"c", 1}}};

  CHECK(check_map_local(m).empty());
  auto problems = check_graphical_map(m);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("cut it open") != std::string::npos);
  CHECK_THROWS_AS(decompose(m), std::invalid_argument);
  CHECK_FALSE(is_valid_map(m));
}

TEST_CASE("a chain wound around a loop factors through a snip") {
  // two edges joined by a unit-rider, everything landing on the loop
  Graph src = make_graph({"u"},
                         {E("d1", port_end("s0"), vertex_end("u")),
                          E("d2", vertex_end("u"), port_end("s1"))},
                         {"s0", "s1"});
  GraphMap m;
  m.source = src;
  m.target = bare_loop();
  m.edge_map = {{"d1", "l"}, {"d2", "l"}};
  m.vertex_map = {{"u", Embedding{{}, {"l"}}}};
  m.slot_map = {{{"d1", 1}, {"l", 0}}, {{"d2", 0}, {"l", 1}}};

  REQUIRE(check_map_local(m).empty());
  ElementaryWord w = decompose(m);
  std::vector<WordStep> expected = {step(K::Snip, "l"),
                                    step(K::Outer, "x", std::string("l#1")),
                                    step(K::Degen, "l#1")};
  CHECK(w.steps == expected);
  CHECK(is_standard_form(w));
  CHECK(equal_maps_up_to_source_iso(compose_word(w), m));
}

TEST_CASE("decomposition round-trips over the small catalogue") {
  auto catalogue = enumerate_graphs(2, 2);
  int seen = 0;
  for (const Graph& s : catalogue)
    for (const Graph& t : catalogue)
      for (const GraphMap& m : enumerate_maps(s, t)) {
        ElementaryWord w = decompose(m);
        bool standard = is_standard_form(w);
        CHECK(standard);
        bool same = equal_maps_up_to_source_iso(compose_word(w), m);
        if (!same) {
          const std::string label =
              "map " + graph_key(s) + " -> " + graph_key(t);
          INFO(label);
          CHECK(same);
        }
        ++seen;
      }
  // identities, inclusions, contractions, snips and subdivisions all occur
  CHECK(seen > 50);
}

TEST_CASE("decomposed words are normalize fixpoints") {
  GraphMap m = compose(cosnip(loop_with_leg(), "l"),
                       codegeneracy(snip_loop(loop_with_leg(), "l"), "l#1"));
  ElementaryWord w = decompose(m);
  CHECK(is_standard_form(w));
  ElementaryWord again = normalize(w);
  CHECK(again.steps == w.steps);
  CHECK(equal_maps_up_to_source_iso(compose_word(w), m));
}

TEST_CASE("decompose rejects locally broken maps outright") {
  GraphMap m;
  m.source = edge_unit();
  m.target = barbell();
  // no edge image at all
  CHECK_THROWS_AS(decompose(m), std::invalid_argument);
}
