#include <doctest.h>

#include "graphkit/graph.hpp"
#include "graphkit/graph_map.hpp"

#include <stdexcept>

using namespace graphkit;

namespace {

Edge E(std::string id, Slot a, Slot b) {
  return Edge{std::move(id), {std::move(a), std::move(b)}};
}

// x --b-- y with a leg on each side
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

// corolla(1) with its first leg subdivided at m
Graph sub_c1() {
  return make_graph({"m", "u"},
                    {E("e0a", vertex_end("u"), vertex_end("m")),
                     E("e0b", vertex_end("m"), port_end("q0")),
                     E("e1x", vertex_end("u"), port_end("q1"))},
                    {"q0", "q1"});
}

// the chain of two edges through one 2-valent vertex
Graph two_chain() {
  return make_graph({"j"},
                    {E("d1", port_end("q0"), vertex_end("j")),
                     E("d2", vertex_end("j"), port_end("q1"))},
                    {"q0", "q1"});
}

GraphMap mk(Graph s, Graph t, std::map<std::string, std::string> em,
            std::map<std::string, Embedding> vm,
            std::map<SlotRef, SlotRef> sm) {
  GraphMap m;
  m.source = std::move(s);
  m.target = std::move(t);
  m.edge_map = std::move(em);
  m.vertex_map = std::move(vm);
  m.slot_map = std::move(sm);
  return m;
}

// contraction of b, presented as the map from barbell()/b into barbell()
GraphMap coface_map() {
  Graph g = barbell();
  Graph gb = contract_edge(g, "b");
  std::map<SlotRef, SlotRef> sm;
  sm[{"l0", 0}] = {"l0", 0};
  sm[{"l1", 0}] = {"l1", 0};
  return mk(gb, g, {{"l0", "l0"}, {"l1", "l1"}},
            {{"x*y", Embedding{{"x", "y"}, {"b"}}}}, sm);
}

// deletion of y, presented as the map from barbell() minus y into barbell()
GraphMap deletion_map() {
  Graph g = barbell();
  Graph gy = delete_outer_vertex(g, "y");
  std::map<SlotRef, SlotRef> sm;
  sm[{"b", 0}] = {"b", 0};
  sm[{"l0", 0}] = {"l0", 0};
  return mk(gy, g, {{"b", "b"}, {"l0", "l0"}},
            {{"x", Embedding{{"x"}, {}}}}, sm);
}

// subdivision collapse: the 2-cycle onto the loop, y riding the unit
GraphMap sigma_map() {
  std::map<SlotRef, SlotRef> sm;
  sm[{"a", 0}] = {"l", 0};
  sm[{"a", 1}] = {"l", 1};
  sm[{"c", 0}] = {"l", 1};
  sm[{"c", 1}] = {"l", 0};
  return mk(two_cycle(), loop_graph(), {{"a", "l"}, {"c", "l"}},
            {{"x", Embedding{{"w"}, {}}}, {"y", Embedding{{}, {"l"}}}}, sm);
}

// corolla(1) folded across the unit onto the loop's vertexless core
GraphMap fold_c1_to_unit() {
  std::map<SlotRef, SlotRef> sm;
  sm[{"e0", 0}] = {"e", 0};
  sm[{"e1", 0}] = {"e", 1};
  return mk(corolla(1), edge_unit(), {{"e0", "e"}, {"e1", "e"}},
            {{"v", Embedding{{}, {"e"}}}}, sm);
}

}  // namespace

TEST_CASE("embedding validation and borders") {
  Graph g = barbell();

  Embedding tree{{"x", "y"}, {"b"}};
  CHECK(validate_embedding(g, tree).empty());
  auto border = embedding_border(g, tree);
  REQUIRE(border.size() == 2);
  CHECK(border[0] == SlotRef{"l0", 0});
  CHECK(border[1] == SlotRef{"l1", 0});

  Embedding single{{"x"}, {}};
  CHECK(validate_embedding(g, single).empty());
  auto sb = embedding_border(g, single);
  REQUIRE(sb.size() == 2);
  CHECK(sb[0] == SlotRef{"b", 0});
  CHECK(sb[1] == SlotRef{"l0", 0});

  Embedding unit{{}, {"b"}};
  CHECK(validate_embedding(g, unit).empty());
  auto ub = embedding_border(g, unit);
  REQUIRE(ub.size() == 2);
  CHECK(ub[0] == SlotRef{"b", 0});
  CHECK(ub[1] == SlotRef{"b", 1});

  // disconnected vertex set
  CHECK(!validate_embedding(g, Embedding{{"x", "y"}, {}}).empty());
  // unknown pieces
  CHECK(!validate_embedding(g, Embedding{{"z"}, {}}).empty());
  CHECK(!validate_embedding(g, Embedding{{}, {"zz"}}).empty());
  // a leg can never be internal
  CHECK(!validate_embedding(g, Embedding{{"x", "y"}, {"l0"}}).empty());
  // a loop can never be internal
  Graph l = loop_graph();
  CHECK(!validate_embedding(l, Embedding{{"w"}, {"l"}}).empty());
  // too many internal edges
  Graph t = two_cycle();
  CHECK(!validate_embedding(t, Embedding{{"x", "y"}, {"a", "c"}}).empty());
  CHECK(validate_embedding(t, Embedding{{"x", "y"}, {"a"}}).empty());
  CHECK(validate_embedding(t, Embedding{{"x", "y"}, {"c"}}).empty());
}

TEST_CASE("embedding enumeration") {
  CHECK(enumerate_embeddings(barbell()).size() == 6);   // x, y, xy + 3 units
  CHECK(enumerate_embeddings(loop_graph()).size() == 2);  // w + 1 unit
  CHECK(enumerate_embeddings(two_cycle()).size() == 6);   // x, y, 2 trees + 2
  CHECK(enumerate_embeddings(theta()).size() == 8);       // 2 + 3 trees + 3
  CHECK(enumerate_embeddings(edge_unit()).size() == 1);
  for (const Embedding& e : enumerate_embeddings(theta()))
    CHECK(validate_embedding(theta(), e).empty());
}

TEST_CASE("identity and isomorphism maps are valid") {
  for (const Graph& g : {barbell(), two_cycle(), loop_graph(), edge_unit(),
                         corolla(2), theta()}) {
    GraphMap id = identity_map(g);
    CHECK(check_map_local(id).empty());
    CHECK(compose(id, id) == id);
  }

  // a genuine relabeling
  Graph g = barbell();
  Graph h = make_graph({"n1", "n2"},
                       {E("k", vertex_end("n2"), vertex_end("n1")),
                        E("m0", vertex_end("n2"), port_end("t0")),
                        E("m1", vertex_end("n1"), port_end("t1"))},
                       {"t0", "t1"});
  auto iso = find_isomorphism(g, h);
  REQUIRE(iso.has_value());
  GraphMap im = iso_to_map(g, h, *iso);
  CHECK(check_map_local(im).empty());

  // the loop flip crosses the slot images
  Graph l = loop_graph();
  auto autos = find_isomorphisms(l, l);
  REQUIRE(autos.size() == 2);
  bool saw_crossed = false;
  for (const auto& a : autos) {
    GraphMap am = iso_to_map(l, l, a);
    CHECK(check_map_local(am).empty());
    if (am.slot_map.at({"l", 0}) == SlotRef{"l", 1}) saw_crossed = true;
  }
  CHECK(saw_crossed);
}

TEST_CASE("local checks reject broken data") {
  // the 2-cycle cannot wrap around the unit: two pieces need one joint
  {
    std::map<SlotRef, SlotRef> sm;
    sm[{"a", 0}] = {"e", 0};
    sm[{"a", 1}] = {"e", 1};
    sm[{"c", 0}] = {"e", 1};
    sm[{"c", 1}] = {"e", 0};
    GraphMap m = mk(two_cycle(), edge_unit(), {{"a", "e"}, {"c", "e"}},
                    {{"x", Embedding{{}, {"e"}}}, {"y", Embedding{{}, {"e"}}}},
                    sm);
    CHECK(!check_map_local(m).empty());
  }
  // the loop cannot ride the unit: both slots sit on one edge
  {
    std::map<SlotRef, SlotRef> sm;
    sm[{"l", 0}] = {"e", 0};
    sm[{"l", 1}] = {"e", 1};
    GraphMap m = mk(loop_graph(), edge_unit(), {{"l", "e"}},
                    {{"w", Embedding{{}, {"e"}}}}, sm);
    CHECK(!check_map_local(m).empty());
  }
  // overlapping subtrees
  {
    Graph g = barbell();
    Graph gb = contract_edge(g, "b");
    Graph gz = make_graph({"z", "z2"},
                          {E("l0", vertex_end("z"), port_end("p0")),
                           E("l1", vertex_end("z2"), port_end("p1")),
                           E("bb", vertex_end("z"), vertex_end("z2"))},
                          {"p0", "p1"});
    std::map<SlotRef, SlotRef> sm;
    sm[{"l0", 0}] = {"l0", 0};
    sm[{"l1", 0}] = {"l1", 0};
    sm[{"bb", 0}] = {"b", 0};
    sm[{"bb", 1}] = {"b", 1};
    GraphMap m = mk(gz, g, {{"l0", "l0"}, {"l1", "l1"}, {"bb", "b"}},
                    {{"z", Embedding{{"x"}, {}}}, {"z2", Embedding{{"x"}, {}}}},
                    sm);
    CHECK(!check_map_local(m).empty());
  }
  // missing data
  {
    GraphMap m;
    m.source = barbell();
    m.target = barbell();
    CHECK(!check_map_local(m).empty());
  }
  // image complement stuck behind a leg: chain onto the loop-with-leg
  {
    std::map<SlotRef, SlotRef> sm;
    sm[{"d1", 1}] = {"l", 0};
    sm[{"d2", 0}] = {"l", 1};
    GraphMap m = mk(two_chain(), loop_with_leg(), {{"d1", "l"}, {"d2", "l"}},
                    {{"j", Embedding{{}, {"l"}}}}, sm);
    CHECK(!check_map_local(m).empty());
  }
}

TEST_CASE("contraction, deletion and subdivision shaped maps are valid") {
  GraphMap mc = coface_map();
  CHECK(check_map_local(mc).empty());
  auto [vs, es] = map_image(mc);
  CHECK(vs == std::set<std::string>{"x", "y"});
  CHECK(es == std::set<std::string>{"b", "l0", "l1"});
  auto peel = peel_to_image(mc);
  REQUIRE(peel.has_value());
  CHECK(peel->empty());

  GraphMap md = deletion_map();
  CHECK(check_map_local(md).empty());
  auto pd = peel_to_image(md);
  REQUIRE(pd.has_value());
  REQUIRE(pd->size() == 1);
  CHECK(pd->at(0).kind == PeelMove::Kind::DeleteOuter);
  CHECK(pd->at(0).datum == "y");

  GraphMap ms = sigma_map();
  CHECK(check_map_local(ms).empty());
  auto ps = peel_to_image(ms);
  REQUIRE(ps.has_value());
  CHECK(ps->empty());

  // subdividing a leg of the corolla
  std::map<SlotRef, SlotRef> sm;
  sm[{"e0a", 0}] = {"e0", 0};
  sm[{"e0a", 1}] = {"e0", 1};
  sm[{"e0b", 0}] = {"e0", 0};
  sm[{"e1x", 0}] = {"e1", 0};
  GraphMap mf = mk(sub_c1(), corolla(1),
                   {{"e0a", "e0"}, {"e0b", "e0"}, {"e1x", "e1"}},
                   {{"u", Embedding{{"v"}, {}}}, {"m", Embedding{{}, {"e0"}}}},
                   sm);
  CHECK(check_map_local(mf).empty());

  CHECK(check_map_local(fold_c1_to_unit()).empty());
}

TEST_CASE("edge inclusions of the unit graph") {
  // onto a leg of the corolla
  GraphMap leg = mk(edge_unit(), corolla(1), {{"e", "e0"}}, {}, {});
  CHECK(check_map_local(leg).empty());

  // onto the inner edge of the barbell: peel deletes both vertices
  GraphMap inner = mk(edge_unit(), barbell(), {{"e", "b"}}, {}, {});
  CHECK(check_map_local(inner).empty());
  auto pi = peel_to_image(inner);
  REQUIRE(pi.has_value());
  REQUIRE(pi->size() == 2);
  CHECK(pi->at(0).kind == PeelMove::Kind::DeleteOuter);
  CHECK(pi->at(1).kind == PeelMove::Kind::DeleteOuter);
  CHECK(pi->at(1).survivor == std::optional<std::string>("b"));

  // onto the loop: a snip must free the edge first
  GraphMap onto_loop = mk(edge_unit(), loop_graph(), {{"e", "l"}}, {}, {});
  CHECK(check_map_local(onto_loop).empty());
  auto pl = peel_to_image(onto_loop);
  REQUIRE(pl.has_value());
  REQUIRE(pl->size() == 2);
  CHECK(pl->at(0).kind == PeelMove::Kind::Snip);
  CHECK(pl->at(1).kind == PeelMove::Kind::DeleteOuter);

  // onto every edge of the theta graph, including the middle one
  for (const std::string h : {"h0", "h1", "h2"}) {
    GraphMap m = mk(edge_unit(), theta(), {{"e", h}}, {}, {});
    CHECK(check_map_local(m).empty());
  }

  // the chain across the snipped loop is the snip map itself
  std::map<SlotRef, SlotRef> sm;
  sm[{"d1", 1}] = {"l", 0};
  sm[{"d2", 0}] = {"l", 1};
  GraphMap chain = mk(two_chain(), loop_graph(), {{"d1", "l"}, {"d2", "l"}},
                      {{"j", Embedding{{}, {"l"}}}}, sm);
  CHECK(check_map_local(chain).empty());
}

TEST_CASE("composition") {
  GraphMap mc = coface_map();
  CHECK(compose(mc, identity_map(mc.source)) == mc);
  CHECK(compose(identity_map(mc.target), mc) == mc);

  GraphMap ms = sigma_map();
  CHECK(compose(ms, identity_map(ms.source)) == ms);
  CHECK(compose(identity_map(ms.target), ms) == ms);

  CHECK_THROWS_AS((void)compose(mc, ms), std::invalid_argument);

  // elimination across a dangling middle end: subdivide then fold
  std::map<SlotRef, SlotRef> sm;
  sm[{"e0a", 0}] = {"e0", 0};
  sm[{"e0a", 1}] = {"e0", 1};
  sm[{"e0b", 0}] = {"e0", 0};
  sm[{"e1x", 0}] = {"e1", 0};
  GraphMap mf = mk(sub_c1(), corolla(1),
                   {{"e0a", "e0"}, {"e0b", "e0"}, {"e1x", "e1"}},
                   {{"u", Embedding{{"v"}, {}}}, {"m", Embedding{{}, {"e0"}}}},
                   sm);
  GraphMap fold = fold_c1_to_unit();
  GraphMap comp = compose(fold, mf);
  CHECK(check_map_local(comp).empty());
  CHECK(comp.edge_map.at("e0a") == "e");
  CHECK(comp.edge_map.at("e0b") == "e");
  CHECK(comp.edge_map.at("e1x") == "e");
  CHECK(comp.vertex_map.at("u") == Embedding{{}, {"e"}});
  CHECK(comp.vertex_map.at("m") == Embedding{{}, {"e"}});
  CHECK(comp.slot_map.at({"e0a", 0}) == SlotRef{"e", 0});
  CHECK(comp.slot_map.at({"e0a", 1}) == SlotRef{"e", 1});
  CHECK(comp.slot_map.at({"e0b", 0}) == SlotRef{"e", 0});
  CHECK(comp.slot_map.at({"e1x", 0}) == SlotRef{"e", 1});

  // index transport through the unit middle graph
  GraphMap back = mk(edge_unit(), corolla(1), {{"e", "e0"}}, {}, {});
  GraphMap transport = compose(back, fold);
  CHECK(check_map_local(transport).empty());
  CHECK(transport.vertex_map.at("v") == Embedding{{}, {"e0"}});
  CHECK(transport.slot_map.at({"e0", 0}) == SlotRef{"e0", 0});
  CHECK(transport.slot_map.at({"e1", 0}) == SlotRef{"e0", 1});

  // associativity on the nose
  CHECK(compose(transport, mf) == compose(back, comp));
}

TEST_CASE("equality up to source relabeling") {
  GraphMap mc = coface_map();
  Graph gz = make_graph({"z"},
                        {E("l0", vertex_end("z"), port_end("p0")),
                         E("l1", vertex_end("z"), port_end("p1"))},
                        {"p0", "p1"});
  std::map<SlotRef, SlotRef> sm;
  sm[{"l0", 0}] = {"l0", 0};
  sm[{"l1", 0}] = {"l1", 0};
  GraphMap mz = mk(gz, barbell(), {{"l0", "l0"}, {"l1", "l1"}},
                   {{"z", Embedding{{"x", "y"}, {"b"}}}}, sm);
  CHECK(check_map_local(mz).empty());
  CHECK(equal_maps_up_to_source_iso(mz, mc));
  CHECK(!equal_maps(mz, mc));
  CHECK(!equal_maps_up_to_source_iso(deletion_map(), mc));
}

TEST_CASE("substitution") {
  Graph g = barbell();

  // a matching corolla changes nothing up to isomorphism
  {
    Graph piece = corolla(1);
    std::map<std::string, SlotRef> matching;
    matching["p0"] = {"b", 0};
    matching["p1"] = {"l0", 0};
    Graph out = graph_substitute(g, "x", piece, matching);
    CHECK(validate_graph(out).empty());
    CHECK(is_isomorphic(out, g));
  }

  // substituting the contracted piece back restores the graph on the nose
  {
    Graph gb = contract_edge(g, "b");
    Graph piece = make_graph({"x", "y"},
                             {E("b", vertex_end("x"), vertex_end("y")),
                              E("l0@0", vertex_end("x"), port_end("l0@0")),
                              E("l1@0", vertex_end("y"), port_end("l1@0"))},
                             {"l0@0", "l1@0"});
    std::map<std::string, SlotRef> matching;
    matching["l0@0"] = {"l0", 0};
    matching["l1@0"] = {"l1", 0};
    CHECK(graph_substitute(gb, "x*y", piece, matching) == g);
  }

  // the unit welds the two neighbouring edges
  {
    Graph p3 = make_graph({"m2", "u", "w"},
                          {E("c1", vertex_end("u"), vertex_end("m2")),
                           E("c2", vertex_end("m2"), vertex_end("w")),
                           E("lu", vertex_end("u"), port_end("a0")),
                           E("lw", vertex_end("w"), port_end("a1"))},
                          {"a0", "a1"});
    Graph piece = make_graph(
        {}, {E("uu", port_end("s0"), port_end("s1"))}, {"s0", "s1"});
    std::map<std::string, SlotRef> matching;
    matching["s0"] = {"c1", 1};
    matching["s1"] = {"c2", 0};
    Graph out = graph_substitute(p3, "m2", piece, matching);
    Graph want = make_graph({"u", "w"},
                            {E("c1", vertex_end("u"), vertex_end("w")),
                             E("lu", vertex_end("u"), port_end("a0")),
                             E("lw", vertex_end("w"), port_end("a1"))},
                            {"a0", "a1"});
    CHECK(out == want);
  }

  // welding an edge to itself is refused
  {
    Graph piece = make_graph(
        {}, {E("uu", port_end("s0"), port_end("s1"))}, {"s0", "s1"});
    std::map<std::string, SlotRef> matching;
    matching["s0"] = {"l", 0};
    matching["s1"] = {"l", 1};
    CHECK_THROWS_AS(
        (void)graph_substitute(loop_graph(), "w", piece, matching),
        std::invalid_argument);
  }

  // interior names are freshened on clashes
  {
    Graph gb = contract_edge(g, "b");
    Graph piece = make_graph({"x", "y"},
                             {E("l0", vertex_end("x"), vertex_end("y")),
                              E("s0", vertex_end("x"), port_end("s0")),
                              E("s1", vertex_end("y"), port_end("s1"))},
                             {"s0", "s1"});
    std::map<std::string, SlotRef> matching;
    matching["s0"] = {"l0", 0};
    matching["s1"] = {"l1", 0};
    Graph out = graph_substitute(gb, "x*y", piece, matching);
    CHECK(validate_graph(out).empty());
    CHECK(out.find_edge("l0'") != nullptr);  // the piece's inner edge
    CHECK(is_isomorphic(out, g));
  }
}

TEST_CASE("substitution presentations") {
  // identity: nothing to substitute, the inclusion is the identity
  {
    Graph g = barbell();
    auto pres = as_substitutions_then_inclusion(identity_map(g));
    CHECK(pres.substitutions.empty());
    CHECK(pres.inclusion == identity_map(g));
  }

  // contraction: one substitution and the identity inclusion
  {
    GraphMap mc = coface_map();
    auto pres = as_substitutions_then_inclusion(mc);
    REQUIRE(pres.substitutions.size() == 1);
    const SubstitutionStep& st = pres.substitutions[0];
    CHECK(st.vertex == "x*y");
    CHECK(st.piece.vertices == std::vector<std::string>{"x", "y"});
    CHECK(st.piece.find_edge("b") != nullptr);
    CHECK(pres.inclusion == identity_map(barbell()));
  }

  // deletion: no substitutions, the map itself is the inclusion
  {
    GraphMap md = deletion_map();
    auto pres = as_substitutions_then_inclusion(md);
    CHECK(pres.substitutions.empty());
    CHECK(pres.inclusion == md);
  }

  // subdivision collapse: the weld survivor carries both loop ends
  {
    GraphMap ms = sigma_map();
    auto pres = as_substitutions_then_inclusion(ms);
    REQUIRE(pres.substitutions.size() == 1);
    CHECK(pres.substitutions[0].vertex == "y");
    CHECK(pres.substitutions[0].piece.vertices.empty());
    REQUIRE(pres.inclusion.source.edges.size() == 1);
    CHECK(pres.inclusion.source.edges[0].id == "a");
    CHECK(classify_edge(pres.inclusion.source, "a") == EdgeClass::Loop);
    CHECK(pres.inclusion.edge_map.at("a") == "l");
    CHECK(pres.inclusion.slot_map.at({"a", 0}) == SlotRef{"l", 0});
    CHECK(pres.inclusion.slot_map.at({"a", 1}) == SlotRef{"l", 1});
    CHECK(check_map_local(pres.inclusion).empty());
  }
}

TEST_CASE("map JSON round trip") {
  for (const GraphMap& m : {coface_map(), sigma_map(), deletion_map(),
                            identity_map(theta())}) {
    GraphMap back = map_from_json(map_to_json(m));
    CHECK(back == m);
  }
  CHECK_THROWS_AS((void)map_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS((void)map_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS((void)map_from_json("[1,2]"), std::invalid_argument);
}
