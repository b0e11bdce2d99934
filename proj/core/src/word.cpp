#include "graphkit/word.hpp"

#include <json.hpp>
#include <stdexcept>

namespace graphkit {

namespace {

bool is_face(Elementary::Kind k) { return k != Elementary::Kind::Degen; }

GraphMap step_map(const Graph& anchor, const WordStep& s) {
  return elementary_to_map(Elementary{s.kind, s.datum, s.survivor, anchor});
}

// rename a step's data through an isomorphism of its anchor
WordStep carry_step(const Isomorphism& iso, const WordStep& s) {
  WordStep t = s;
  if (s.kind == Elementary::Kind::Outer) {
    auto it = iso.vertex_map.find(s.datum);
    if (it == iso.vertex_map.end())
      throw std::logic_error("word rewrite lost a vertex datum");
    t.datum = it->second;
    if (s.survivor) t.survivor = iso.edge_map.at(*s.survivor);
  } else {
    auto it = iso.edge_map.find(s.datum);
    if (it == iso.edge_map.end())
      throw std::logic_error("word rewrite lost an edge datum");
    t.datum = it->second;
  }
  return t;
}

// Rebase steps[from..] from old_anchor onto new_anchor along iso, renaming
// each datum and pushing the isomorphism across the surgery: at every step
// the square  new_map . psi == iso_map . old_map  pins the next leg.
void rebase_tail(std::vector<WordStep>& steps, size_t from, Graph old_anchor,
                 Graph new_anchor, Isomorphism iso) {
  for (size_t j = from; j < steps.size(); ++j) {
    GraphMap old_map = step_map(old_anchor, steps[j]);
    WordStep moved = carry_step(iso, steps[j]);
    GraphMap new_map = step_map(new_anchor, moved);
    GraphMap want = compose(iso_to_map(old_anchor, new_anchor, iso), old_map);
    bool found = false;
    for (const Isomorphism& cand :
         find_isomorphisms(old_map.source, new_map.source)) {
      if (compose(new_map, iso_to_map(old_map.source, new_map.source, cand)) ==
          want) {
        iso = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("word rewrite does not carry across a step");
    steps[j] = std::move(moved);
    old_anchor = old_map.source;
    new_anchor = new_map.source;
  }
}

const char* kind_name(Elementary::Kind k) {
  switch (k) {
    case Elementary::Kind::Inner: return "inner";
    case Elementary::Kind::Outer: return "outer";
    case Elementary::Kind::Snip: return "snip";
    case Elementary::Kind::Degen: return "degen";
  }
  return "";
}

}  // namespace

std::vector<Elementary> replay_word(const ElementaryWord& w) {
  std::vector<Elementary> out;
  Graph cur = w.start;
  for (const WordStep& s : w.steps) {
    out.push_back(Elementary{s.kind, s.datum, s.survivor, cur});
    cur = elementary_source(out.back());
  }
  return out;
}

Graph word_source(const ElementaryWord& w) {
  Graph cur = w.start;
  for (const WordStep& s : w.steps) cur = step_map(cur, s).source;
  return cur;
}

GraphMap compose_word(const ElementaryWord& w) {
  if (w.steps.empty()) return identity_map(w.start);
  GraphMap acc = step_map(w.start, w.steps[0]);
  for (size_t i = 1; i < w.steps.size(); ++i)
    acc = compose(acc, step_map(acc.source, w.steps[i]));
  return acc;
}

bool is_standard_form(const ElementaryWord& w) {
  bool seen_degen = false;
  for (const WordStep& s : w.steps) {
    if (s.kind == Elementary::Kind::Degen)
      seen_degen = true;
    else if (seen_degen)
      return false;
  }
  return true;
}

ElementaryWord normalize(const ElementaryWord& w) {
  GraphMap before = compose_word(w);  // also validates the input
  ElementaryWord out = w;
  for (;;) {
    // anchors[i] is the graph steps[i] lands on
    std::vector<Graph> anchors{out.start};
    for (const WordStep& s : out.steps)
      anchors.push_back(step_map(anchors.back(), s).source);

    size_t i = out.steps.size();
    for (size_t j = 0; j + 1 < out.steps.size(); ++j)
      if (out.steps[j].kind == Elementary::Kind::Degen &&
          is_face(out.steps[j + 1].kind)) {
        i = j;
        break;
      }
    if (i == out.steps.size()) break;

    const WordStep sd = out.steps[i];      // degeneracy, lands on anchors[i]
    const WordStep sf = out.steps[i + 1];  // face, lands on the subdivision
    GraphMap dmap = step_map(anchors[i], sd);
    GraphMap fmap = step_map(dmap.source, sf);
    GraphMap old_comp = compose(dmap, fmap);

    bool kills_half = sf.kind == Elementary::Kind::Inner &&
                      (sf.datum == sd.datum + "#1" ||
                       sf.datum == sd.datum + "#2");
    bool kills_joint = sf.kind == Elementary::Kind::Outer &&
                       sf.datum == sd.datum + "#v";
    if (kills_half || kills_joint) {
      // the pair composes to a pure relabeling: drop it
      bool found = false;
      for (const Isomorphism& cand :
           find_isomorphisms(fmap.source, anchors[i])) {
        if (iso_to_map(fmap.source, anchors[i], cand) == old_comp) {
          out.steps.erase(out.steps.begin() + i, out.steps.begin() + i + 2);
          rebase_tail(out.steps, i, fmap.source, anchors[i], cand);
          found = true;
          break;
        }
      }
      if (!found)
        throw std::logic_error("annihilating pair is not a relabeling");
    } else {
      // the face does not touch the subdivision apparatus: move it out
      // verbatim, then subdivide on the surgered graph
      WordStep nf = sf;
      // deleting the last vertex is asked to keep a leg; without the
      // subdivision in the way that leg is the subdivided edge itself
      if (nf.kind == Elementary::Kind::Outer && !nf.survivor &&
          anchors[i].vertices.size() == 1 && anchors[i].edges.size() > 1)
        nf.survivor = sd.datum;
      GraphMap nfmap = step_map(anchors[i], nf);
      GraphMap ndmap = step_map(nfmap.source, sd);
      GraphMap new_comp = compose(nfmap, ndmap);
      bool found = false;
      for (const Isomorphism& cand :
           find_isomorphisms(fmap.source, ndmap.source)) {
        if (compose(new_comp,
                    iso_to_map(fmap.source, ndmap.source, cand)) == old_comp) {
          out.steps[i] = nf;
          out.steps[i + 1] = sd;
          rebase_tail(out.steps, i + 2, fmap.source, ndmap.source, cand);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("face and degeneracy do not commute");
    }
  }
  if (!equal_maps_up_to_source_iso(before, compose_word(out)))
    throw std::logic_error("normalization changed the composite");
  return out;
}

std::string word_to_json(const ElementaryWord& w) {
  nlohmann::json j;
  j["start"] = nlohmann::json::parse(graph_to_json(w.start));
  j["steps"] = nlohmann::json::array();
  for (const WordStep& s : w.steps) {
    nlohmann::json js{{"kind", kind_name(s.kind)}, {"datum", s.datum}};
    if (s.survivor) js["survivor"] = *s.survivor;
    j["steps"].push_back(std::move(js));
  }
  return j.dump();
}

ElementaryWord word_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    ElementaryWord w;
    w.start = graph_from_json(j.at("start").dump());
    for (const auto& js : j.at("steps")) {
      WordStep s;
      std::string kind = js.at("kind").get<std::string>();
      if (kind == "inner")
        s.kind = Elementary::Kind::Inner;
      else if (kind == "outer")
        s.kind = Elementary::Kind::Outer;
      else if (kind == "snip")
        s.kind = Elementary::Kind::Snip;
      else if (kind == "degen")
        s.kind = Elementary::Kind::Degen;
      else
        throw std::invalid_argument("unknown step kind '" + kind + "'");
      s.datum = js.at("datum").get<std::string>();
      if (js.contains("survivor"))
        s.survivor = js.at("survivor").get<std::string>();
      w.steps.push_back(std::move(s));
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad word JSON: ") + e.what());
  }
}

}  // namespace graphkit
