#include "towerkit/presentation.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace towerkit {

bool Presentation::is_generator(const std::string& edge) const {
  return std::binary_search(generators.begin(), generators.end(), edge);
}

Presentation presentation(ComplexPtr c, const std::string& base) {
  if (!c) throw std::invalid_argument("presentation: null complex");
  if (!c->has_vertex(base)) throw std::invalid_argument("presentation: unknown basepoint " + base);

  Presentation p;
  p.space = c;
  p.basepoint = base;
  p.tree_paths[base] = {};

  std::deque<std::string> queue{base};
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    for (const auto& d : c->darts_at(v)) {
      const std::string& w = c->dst(d);
      if (p.tree_paths.count(w)) continue;
      p.tree.insert(c->edge_of(d));
      DartPath path = p.tree_paths.at(v);
      path.push_back(d);
      p.tree_paths[w] = std::move(path);
      queue.push_back(w);
    }
  }
  if (p.tree_paths.size() != c->vertices.size())
    throw std::invalid_argument("presentation: complex is not connected");

  for (const auto& e : c->edge_ids())
    if (!p.tree.count(e)) p.generators.push_back(e);

  for (const auto& [f, w] : c->faces) {
    DartPath rel;
    for (const auto& d : w)
      if (!p.tree.count(c->edge_of(d))) rel.push_back(d);
    p.relators.push_back(reduced_path(rel));
  }
  return p;
}

Presentation presentation(ComplexPtr c) {
  if (!c || c->vertices.empty()) throw std::invalid_argument("presentation: empty complex");
  return presentation(c, *c->vertices.begin());
}

ValidationReport validate_presentation(const Presentation& p) {
  ValidationReport r;
  if (!p.space) {
    r.add("no-space", "presentation has no underlying complex");
    return r;
  }
  const Complex2& c = *p.space;
  if (!c.has_vertex(p.basepoint)) r.add("basepoint-missing", "basepoint is not a vertex");

  auto edges = c.edge_ids();
  for (const auto& e : p.tree)
    if (!edges.count(e)) r.add("tree-edge-missing", "tree edge " + e + " is not in the complex");
  if (p.tree.size() + 1 != c.vertices.size())
    r.add("tree-size", "a spanning tree of a connected complex has V-1 edges");

  // the recorded tree paths must walk the tree from the basepoint
  for (const auto& [v, path] : p.tree_paths) {
    std::string at = p.basepoint;
    for (const auto& d : path) {
      if (!c.has_dart(d) || c.src(d) != at || !p.tree.count(c.edge_of(d))) {
        r.add("tree-path", "recorded path to " + v + " does not follow the tree");
        break;
      }
      at = c.dst(d);
    }
    if (at != v) r.add("tree-path", "recorded path does not end at " + v);
  }
  if (p.tree_paths.size() != c.vertices.size())
    r.add("tree-not-spanning", "some vertex has no tree path");

  std::set<std::string> gens(p.generators.begin(), p.generators.end());
  for (const auto& e : edges) {
    bool in_tree = p.tree.count(e) > 0;
    if (in_tree == (gens.count(e) > 0))
      r.add("generator-set", "edge " + e + " must be a generator iff it is not in the tree");
  }
  for (const auto& rel : p.relators)
    for (const auto& d : rel)
      if (!c.has_dart(d) || !gens.count(c.edge_of(d)))
        r.add("relator-letter", "relator letter " + d + " is not a generator dart");
  if (p.relators.size() != c.faces.size())
    r.add("relator-count", "expected one relator per face");
  return r;
}

const DartPath& tree_path(const Presentation& p, const std::string& v) {
  auto it = p.tree_paths.find(v);
  if (it == p.tree_paths.end()) throw std::invalid_argument("tree_path: unknown vertex " + v);
  return it->second;
}

DartPath loop_word(const Presentation& p, const DartPath& path) {
  return loop_word_at(p, p.basepoint, path);
}

DartPath loop_word_at(const Presentation& p, const std::string& start, const DartPath& path) {
  const Complex2& c = *p.space;
  std::string at = start;
  DartPath word;
  for (const auto& d : path) {
    if (!c.has_dart(d) || c.src(d) != at)
      throw std::invalid_argument("loop_word: path breaks at dart " + d);
    if (!p.tree.count(c.edge_of(d))) word.push_back(d);
    at = c.dst(d);
  }
  if (at != start) throw std::invalid_argument("loop_word: path is not closed");
  return reduced_path(word);
}

DartPath generator_loop(const Presentation& p, const std::string& gen) {
  const Complex2& c = *p.space;
  if (!p.is_generator(gen)) throw std::invalid_argument("generator_loop: " + gen + " is not a generator");
  DartPath out = tree_path(p, c.src(gen));
  out.push_back(gen);
  DartPath back = reversed_path(tree_path(p, c.dst(gen)));
  out.insert(out.end(), back.begin(), back.end());
  return reduced_path(out);
}

}  // namespace towerkit
