#pragma once

#include "graphkit/elementary.hpp"

namespace graphkit {

// One step of a word: kind and datum, anchored to whatever graph the replay
// has reached. The source of the step is derived by the matching surgery.
struct WordStep {
  Elementary::Kind kind = Elementary::Kind::Inner;
  std::string datum;
  std::optional<std::string> survivor;

  bool operator==(const WordStep&) const = default;
};

// A composite of elementary maps stored outermost first: `start` is the
// composite's target, steps[0] lands on it, and each later step lands on
// the source of the one before. Reading left to right walks from the
// target down to the source; the maps are applied in the reverse order.
struct ElementaryWord {
  Graph start;
  std::vector<WordStep> steps;

  bool operator==(const ElementaryWord&) const = default;
};

// Materialize each step against its anchor, outermost first. Throws
// std::invalid_argument when a step does not apply to its anchor.
std::vector<Elementary> replay_word(const ElementaryWord& w);

// The graph left after all steps (the start itself for the empty word).
Graph word_source(const ElementaryWord& w);

// The composite map word_source(w) -> w.start; identity for no steps.
GraphMap compose_word(const ElementaryWord& w);

// True when no degeneracy step is stored before a face step, i.e. the
// composite applies every degeneracy before any face.
bool is_standard_form(const ElementaryWord& w);

// Rewrite into standard form without changing the composite (up to
// relabeling of its source). Adjacent out-of-order pairs are swapped with
// their data carried across the exchanged surgeries, or cancelled outright
// when the face undoes exactly what the degeneracy created.
ElementaryWord normalize(const ElementaryWord& w);

// Express a valid map as a standard-form word whose composite equals it
// up to relabeling of the source.
ElementaryWord decompose(const GraphMap& m);

std::string word_to_json(const ElementaryWord& w);
ElementaryWord word_from_json(const std::string& text);

}  // namespace graphkit
