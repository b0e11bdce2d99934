#pragma once

#include <map>
#include <optional>

#include "graphkit/presheaf.hpp"

namespace graphkit {

// An ordered tuple of colours. Keys look like "(a,b,a)"; colour names must
// avoid ',' and parentheses so the keys parse back.
using Profile = std::vector<std::string>;

std::string profile_key(const Profile& p);
Profile parse_profile_key(const std::string& key);

// A permutation of {0..n-1} stored as images: p[j] is where position j
// reads from, so the permuted profile has (p . c)[j] = c[p[j]].
using Perm = std::vector<int>;

Perm identity_perm(int n);
// Acting by s then by t equals acting by compose_perms(s, t) once:
// the composite reads position j from s[t[j]].
Perm compose_perms(const Perm& s, const Perm& t);
Perm invert_perm(const Perm& p);
Profile apply_perm(const Perm& p, const Profile& c);

// A finite coloured cyclic operad stored as full tables. ops lists the
// operation names per profile key; profile_of inverts that. units[c] is an
// operation with profile (c,c). act[o][p] is the operation p.o over the
// permuted profile. comp[(a,i,b)] is the partial composition grafting a
// into slot i of b (i is 1-based, per-profile-position); it is populated
// exactly when the last colour of a matches the ith colour of b and the
// spliced profile is short enough for the stored tables.
struct CyclicOperad {
  std::vector<std::string> colours;
  std::map<std::string, std::vector<std::string>> ops;
  std::map<std::string, Profile> profile_of;
  std::map<std::string, std::string> units;
  std::map<std::string, std::map<Perm, std::string>> act;
  std::map<std::tuple<std::string, int, std::string>, std::string> comp;
};

// The profile of circ(a, i, b): b's with slot i replaced by all of a's
// except its last. Throws on colour mismatch or i out of range.
Profile splice_profiles(const Profile& a, int i, const Profile& b);

// Partial composition. try_circ returns nothing when the entry was
// truncated away; circ throws std::out_of_range instead. Both throw
// std::invalid_argument when the colour condition or index fails.
std::optional<std::string> try_circ(const CyclicOperad& o,
                                    const std::string& a, int i,
                                    const std::string& b);
std::string circ(const CyclicOperad& o, const std::string& a, int i,
                 const std::string& b);

// The permutation action on operations. Throws on length mismatch or a
// missing table entry.
std::string sigma_act(const CyclicOperad& o, const Perm& p,
                      const std::string& a);

// Table well-formedness, the action laws, unit laws, equivariance of
// composition in both arguments, and the associativity square, each
// checked over every instance the stored tables can express. Empty result
// means valid.
std::vector<std::string> validate_cyclic_operad(const CyclicOperad& o);

// colour_map sends colours of the source to colours of the target; op_map
// sends operations likewise.
struct OperadMorphism {
  std::map<std::string, std::string> colour_map;
  std::map<std::string, std::string> op_map;
};

// Totality, profile compatibility, and preservation of units, action, and
// composition.
std::vector<std::string> validate_morphism(const OperadMorphism& f,
                                           const CyclicOperad& o,
                                           const CyclicOperad& p);

// One operation at every profile of length 1..max_arity; every structure
// map the only one possible.
CyclicOperad terminal_operad(const std::vector<std::string>& colours,
                             int max_arity);

// A relation on bits: the tuples over {0,1} the operation accepts, each as
// long as the profile.
struct RelationSeed {
  Profile profile;
  std::vector<std::vector<int>> tuples;
};

// The operad of relations generated by the seeds: operations are sets of
// bit tuples, composition is the relational join along the grafted slot,
// the action permutes coordinates, and the unit at each colour is the
// diagonal. Seeds are closed under circ and act up to max_arity; names are
// derived from the accepted-tuple bitmask.
CyclicOperad relational_operad(const std::vector<std::string>& colours,
                               const std::vector<RelationSeed>& seeds,
                               int max_arity);

// {"colours": [...], "ops": {profile key: [names]}, "units": {colour: op},
//  "act": {op: {"0,2,1": op}}, "comp": {op: {"2": {op: op}}}}
// Permutation keys list images 0-based; composition indices are 1-based.
std::string operad_to_json(const CyclicOperad& o);
CyclicOperad operad_from_json(const std::string& text);

// The tree-shaped nerve: an element over a tree assigns a colour to every
// edge and to each vertex an operation whose profile reads the edge
// colours in the vertex's stored slot order. A map acts by pulling
// colours back along the edge map and folding each vertex's image, one
// partial composition per contracted edge, with permutation actions
// aligning slots; unit embeddings decorate by units. Demands a skeleton
// built with trees_only.
GraphicalSet nerve(const CyclicOperad& o, std::shared_ptr<const Skeleton> sk);

// The transformation between nerves induced by renaming colours and
// operations along f. f must validate against (o, p).
NaturalTransformation nerve_map(const OperadMorphism& f,
                                const CyclicOperad& o, const CyclicOperad& p,
                                const GraphicalSet& nerve_o,
                                const GraphicalSet& nerve_p);

}  // namespace graphkit
