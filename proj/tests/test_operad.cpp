#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphkit/operad.hpp"

using namespace graphkit;

namespace {

// the parity seeds: singleton at arity 1, inequality at 2, ternary xor at 3
std::vector<RelationSeed> parity_seeds() {
  RelationSeed point{{"c"}, {{0}}};
  RelationSeed neq{{"c", "c"}, {{1, 0}, {0, 1}}};
  RelationSeed xor3{{"c", "c", "c"},
                    {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
  return {point, neq, xor3};
}

CyclicOperad parity_operad() {
  return relational_operad({"c"}, parity_seeds(), 5);
}

// the operation accepting exactly the tuples of the given parity, named by
// the accepted-tuple bitmask, computed here from scratch
std::string parity_name(int arity, int parity) {
  unsigned long long mask = 0;
  for (int idx = 0; idx < (1 << arity); ++idx)
    if (__builtin_popcount((unsigned)idx) % 2 == parity)
      mask |= 1ull << idx;
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%llx", mask);
  Profile prof(arity, "c");
  return std::string(buf) + "@" + profile_key(prof);
}

}  // namespace

TEST_CASE("profile keys round-trip") {
  Profile p{"a", "b", "a"};
  CHECK(profile_key(p) == "(a,b,a)");
  CHECK(parse_profile_key("(a,b,a)") == p);
  CHECK(parse_profile_key("()") == Profile{});
  CHECK(profile_key(Profile{"x"}) == "(x)");
}

TEST_CASE("permutations compose right-to-left over profiles") {
  Perm s{1, 2, 0};
  Perm t{0, 2, 1};
  Profile c{"x", "y", "z"};
  // acting by s then t equals acting by the composite once
  Profile once = apply_perm(compose_perms(s, t), c);
  Profile twice = apply_perm(t, apply_perm(s, c));
  CHECK(once == twice);
  CHECK(apply_perm(invert_perm(s), apply_perm(s, c)) == c);
  CHECK(compose_perms(identity_perm(3), s) == s);
}

TEST_CASE("splice replaces the grafted slot by the head of a") {
  Profile a{"x", "y", "c"};
  Profile b{"d", "c", "e"};
  CHECK(splice_profiles(a, 2, b) == Profile{"d", "x", "y", "e"});
  CHECK_THROWS_AS(splice_profiles(a, 1, b), std::invalid_argument);
  CHECK_THROWS_AS(splice_profiles(a, 4, b), std::invalid_argument);
}

TEST_CASE("terminal operad validates with one operation per profile") {
  CyclicOperad t = terminal_operad({"a", "b"}, 4);
  CHECK(validate_cyclic_operad(t).empty());
  // 2 + 4 + 8 + 16 profiles, one operation each
  size_t total = 0;
  for (const auto& [key, v] : t.ops) {
    CHECK(v.size() == 1);
    total += v.size();
  }
  CHECK(total == 30);
  CHECK(t.units.at("a") == t.ops.at("(a,a)")[0]);
}

TEST_CASE("parity relations close to the two parity classes per arity") {
  CyclicOperad par = parity_operad();
  CHECK(validate_cyclic_operad(par).empty());

  size_t total = 0;
  for (int n = 1; n <= 5; ++n) {
    Profile prof(n, "c");
    const auto& have = par.ops.at(profile_key(prof));
    std::vector<std::string> want{parity_name(n, 0), parity_name(n, 1)};
    std::sort(want.begin(), want.end());
    std::vector<std::string> got = have;
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    total += have.size();
  }
  CHECK(total == 10);
  CHECK(par.ops.size() == 5);
  CHECK(par.units.at("c") == parity_name(2, 0));  // the diagonal is even
}

TEST_CASE("partial composition adds parities") {
  CyclicOperad par = parity_operad();
  std::string odd2 = parity_name(2, 1);   // r6
  std::string even2 = parity_name(2, 0);  // r9
  CHECK(circ(par, odd2, 1, even2) == odd2);
  CHECK(circ(par, odd2, 1, odd2) == even2);
  CHECK(circ(par, odd2, 2, odd2) == even2);
  std::string odd3 = parity_name(3, 1);
  CHECK(circ(par, odd2, 2, odd3) == parity_name(3, 0));

  // arity 5 grafted into arity 2 would need arity 5; into arity 3, arity 6:
  // the first exists, the second was truncated away
  std::string big = parity_name(5, 0);
  auto kept = try_circ(par, big, 1, even2);
  REQUIRE(kept.has_value());
  CHECK(*kept == parity_name(5, 0));
  CHECK_FALSE(try_circ(par, big, 1, odd3).has_value());

  // two arity-1 operations splice to the empty profile: no such entry
  std::string pt = parity_name(1, 0);
  CHECK_FALSE(try_circ(par, pt, 1, pt).has_value());
  CHECK_THROWS_AS(circ(par, pt, 1, pt), std::out_of_range);

  // colour/index misuse throws
  CHECK_THROWS_AS(circ(par, odd2, 3, odd2), std::invalid_argument);
  CHECK_THROWS_AS(circ(par, odd2, 1, "nope"), std::invalid_argument);
}

TEST_CASE("asymmetric relation transports through the action") {
  // one seed accepting (0,1) over (a,b); closing under the action must
  // produce the coordinate-swapped relation over (b,a)
  RelationSeed half{{"a", "b"}, {{0, 1}}};
  CyclicOperad o = relational_operad({"a", "b"}, {half}, 4);
  CHECK(validate_cyclic_operad(o).empty());
  // (0,1) indexes bit 2, so the seed is r4; swapped it indexes bit 1
  const auto& ab = o.ops.at("(a,b)");
  const auto& ba = o.ops.at("(b,a)");
  bool seed_there = std::count(ab.begin(), ab.end(), "r4@(a,b)") == 1;
  bool swapped_there = std::count(ba.begin(), ba.end(), "r2@(b,a)") == 1;
  CHECK(seed_there);
  CHECK(swapped_there);
  CHECK(sigma_act(o, Perm{1, 0}, "r4@(a,b)") == "r2@(b,a)");
  // joining the seed with itself along the matching colour: the only slot
  // of colour b in (a,b) is slot 2; tuples pair (0,1) with (0,1) sharing
  // the 1, leaving (0,0) over (a,a), which is bit 0
  CHECK(circ(o, "r4@(a,b)", 2, "r4@(a,b)") == "r1@(a,a)");
}

TEST_CASE("validator pinpoints a broken unit action") {
  CyclicOperad par = parity_operad();
  std::string diag = par.units.at("c");
  std::string odd2 = parity_name(2, 1);
  // swapping the two rows keeps the right-action law intact (swap then swap
  // lands back home), so only the unit-symmetry axiom can catch this
  par.act.at(diag).at(Perm{1, 0}) = odd2;
  par.act.at(odd2).at(Perm{1, 0}) = diag;
  auto problems = validate_cyclic_operad(par);
  bool mentions_symmetry = false;
  for (const auto& p : problems)
    if (p.find("transposition") != std::string::npos) mentions_symmetry = true;
  CHECK(mentions_symmetry);
}

TEST_CASE("validator rejects a twisted action table") {
  CyclicOperad par = parity_operad();
  std::string odd2 = parity_name(2, 1);
  par.act.at(odd2).at(Perm{1, 0}) = parity_name(2, 0);
  CHECK_FALSE(validate_cyclic_operad(par).empty());
}

TEST_CASE("validator rejects a wrong composite") {
  CyclicOperad par = parity_operad();
  std::string odd2 = parity_name(2, 1);
  par.comp.at({odd2, 1, odd2}) = odd2;  // truth: parities add to even
  CHECK_FALSE(validate_cyclic_operad(par).empty());
}

TEST_CASE("validator notices a missing unit") {
  CyclicOperad par = parity_operad();
  par.units.erase("c");
  CHECK_FALSE(validate_cyclic_operad(par).empty());
}

TEST_CASE("collapse onto the terminal operad is a morphism") {
  CyclicOperad par = parity_operad();
  CyclicOperad term = terminal_operad({"c"}, 5);
  OperadMorphism f;
  f.colour_map["c"] = "c";
  for (const auto& [name, prof] : par.profile_of)
    f.op_map[name] = term.ops.at(profile_key(prof))[0];
  CHECK(validate_morphism(f, par, term).empty());

  // wreck one operation's image profile
  OperadMorphism bad = f;
  bad.op_map[parity_name(3, 0)] = term.ops.at("(c,c)")[0];
  CHECK_FALSE(validate_morphism(bad, par, term).empty());

  // drop an operation from the map
  OperadMorphism partial = f;
  partial.op_map.erase(parity_name(4, 1));
  CHECK_FALSE(validate_morphism(partial, par, term).empty());
}

TEST_CASE("operad serialization round-trips") {
  CyclicOperad par = parity_operad();
  std::string text = operad_to_json(par);
  CyclicOperad back = operad_from_json(text);
  CHECK(validate_cyclic_operad(back).empty());
  CHECK(back.colours == par.colours);
  CHECK(back.ops == par.ops);
  CHECK(back.units == par.units);
  CHECK(back.act == par.act);
  CHECK(back.comp == par.comp);

  CHECK_THROWS_AS(operad_from_json("{\"colours\": []}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(operad_from_json("not json"), std::invalid_argument);
}

TEST_CASE("relational seeds are validated") {
  RelationSeed bad{{"c", "c"}, {{0, 1, 1}}};  // tuple longer than profile
  CHECK_THROWS_AS(relational_operad({"c"}, {bad}, 4), std::invalid_argument);
  RelationSeed stray{{"d"}, {{0}}};  // unknown colour
  CHECK_THROWS_AS(relational_operad({"c"}, {stray}, 4), std::invalid_argument);
}

TEST_CASE("colour names that break the key syntax are rejected") {
  CyclicOperad t = terminal_operad({"a,b"}, 2);
  CHECK_FALSE(validate_cyclic_operad(t).empty());
}
