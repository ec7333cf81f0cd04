#pragma once

#include "towerkit/complex.hpp"
#include "towerkit/validation.hpp"

namespace towerkit {

// Spanning-tree presentation of the fundamental group of a connected
// complex: one generator per non-tree edge, one relator per face (the
// boundary word with tree darts deleted, freely reduced).  The tree is
// grown by BFS from the basepoint, exploring darts in sorted order, so
// the presentation is reproducible.
struct Presentation {
  ComplexPtr space;
  std::string basepoint;
  std::set<std::string> tree;              // edge ids in the spanning tree
  std::vector<std::string> generators;     // non-tree edge ids, sorted
  std::vector<DartPath> relators;          // one per face, sorted by face id
  std::map<std::string, DartPath> tree_paths;  // vertex -> path from basepoint

  bool is_generator(const std::string& edge) const;
};

// Build the presentation at the given basepoint (default: smallest vertex).
// Throws std::invalid_argument if the complex is disconnected or the
// basepoint is unknown.
Presentation presentation(ComplexPtr c, const std::string& base);
Presentation presentation(ComplexPtr c);

ValidationReport validate_presentation(const Presentation& p);

// Tree path from the basepoint to a vertex (empty for the basepoint).
const DartPath& tree_path(const Presentation& p, const std::string& v);

// Word over the generators for a closed path at the basepoint: tree darts
// are deleted and the result freely reduced.  Throws if the path is not a
// closed path at the basepoint.
DartPath loop_word(const Presentation& p, const DartPath& path);

// Same for a closed path at an arbitrary vertex, conjugated to the
// basepoint along tree paths first.
DartPath loop_word_at(const Presentation& p, const std::string& start, const DartPath& path);

// Canonical loop at the basepoint realizing a generator: tree path to the
// generator edge's source, the edge, tree path back.
DartPath generator_loop(const Presentation& p, const std::string& gen);

}  // namespace towerkit
