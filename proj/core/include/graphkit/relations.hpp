#pragma once

#include <map>

#include "graphkit/word.hpp"

namespace graphkit {

// The pairwise exchange laws satisfied by the elementary maps: which
// surgeries commute, which pairs cancel, and which composites are rejected.
enum class RelationKind {
  InnerInner,          // two contractions commute
  ParallelPair,        // contracting one of a parallel pair blocks the other
  OuterOuter,          // two deletions commute (through the unit for 2 vertices)
  InnerOuterDisjoint,  // contraction and deletion of disjoint data commute
  InnerOuterAdjacent,  // contraction at a deletable endpoint: merged-vertex square
  DegenDegen,          // two subdivisions commute
  FaceDegen,           // a face moves past a subdivision it does not touch
  Annihilation,        // a face undoing its subdivision composes to a relabeling
  SnipSnip,            // snips of distinct loops commute
  SnipInner,           // snip and contraction commute; cut form when the
                       //   loop only appears after contracting a parallel edge
  SnipOuter,           // snip and deletion commute; a loop on the deleted
                       //   vertex folds into one direct inclusion
  SplitVertex,         // dropping a two-connection vertex, split or merged
  SnipRemoved,         // snipping an edge a face removed is rejected
};

std::string relation_kind_name(RelationKind k);

// One concrete statement of a relation: the host graph, the edges and
// vertices involved, and the two words asserted equal (stored outermost
// first, both anchored at the host). Kinds whose content is an
// undefinedness claim, or whose non-word side is a directly built
// inclusion, leave the corresponding side empty; the verifier rebuilds
// whatever a side needs from `data`.
struct RelationInstance {
  RelationKind kind = RelationKind::InnerInner;
  Graph host;
  std::vector<std::string> data;
  std::vector<WordStep> left, right;

  bool operator==(const RelationInstance&) const = default;
};

// applicable: the side conditions hold. holds: the asserted equality (or
// undefinedness) checks out; meaningless when not applicable. The
// certificate says what was compared, or why the instance fell through.
struct RelationVerdict {
  bool applicable = false;
  bool holds = false;
  std::string certificate;
};

RelationVerdict verify_relation(const RelationInstance& inst);

// Every instance whose side conditions hold on g, deterministic order.
std::vector<RelationInstance> relation_instances(const Graph& g);

struct RelationCounts {
  long checked = 0;
  long passed = 0;
  long inapplicable = 0;

  bool operator==(const RelationCounts&) const = default;
};

// verify_relation over relation_instances of every host. Any instance that
// fails, or that its own generator mislabels as applicable, is recorded as
// the first failure.
struct RelationSweep {
  long hosts = 0;
  std::map<RelationKind, RelationCounts> by_kind;
  std::optional<RelationInstance> first_failure;
  std::string failure_certificate;
};

RelationSweep sweep_relations(const std::vector<Graph>& hosts);

// {"hosts", "ok", "kinds": {name: {checked, passed, inapplicable}},
//  "first_failure": null | {kind, host, data, certificate}}
std::string sweep_to_json(const RelationSweep& s);

}  // namespace graphkit
