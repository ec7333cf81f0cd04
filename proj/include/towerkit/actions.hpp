#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "towerkit/maps.hpp"

namespace towerkit {

// A finite group as an explicit multiplication table.
struct FinGroup {
  std::vector<std::string> elements;
  std::string id;  // identity element
  std::map<std::pair<std::string, std::string>, std::string> table;

  // Builds a group from raw data; the identity is detected, not trusted.
  static FinGroup from_table(std::vector<std::string> elements,
                             std::map<std::pair<std::string, std::string>, std::string> table);
  // Closes a set of named permutations (partial maps; omitted points are
  // fixed). Derived elements are named parent*gen; the identity is "e".
  static FinGroup from_permgens(
      const std::map<std::string, std::map<std::string, std::string>>& gens,
      std::size_t max_order = 10000);

  bool has(const std::string& g) const;
  const std::string& identity() const { return id; }
  std::string mul(const std::string& a, const std::string& b) const;
  std::string inv(const std::string& a) const;
  std::size_t order() const { return elements.size(); }

  bool operator==(const FinGroup&) const = default;
};

ValidationReport validate_group(const FinGroup& g);

FinGroup trivial_group();
FinGroup cyclic_table(std::size_t n, const std::string& gen);  // e, gen, gen^2...

std::set<std::string> subgroup_generated(const FinGroup& g, const std::set<std::string>& gens);
bool is_subgroup(const FinGroup& g, const std::set<std::string>& h);
bool is_normal_subgroup(const FinGroup& g, const std::set<std::string>& h);

// The subgroup as a group in its own right, keeping element names.
FinGroup subgroup_as_group(const FinGroup& g, const std::set<std::string>& h);

// Quotient by a normal subgroup; cosets are named by their smallest member.
// Second component is the projection element -> coset name.
std::pair<FinGroup, std::map<std::string, std::string>> quotient_group(
    const FinGroup& g, const std::set<std::string>& n);

bool is_homomorphism(const FinGroup& g, const FinGroup& h,
                     const std::map<std::string, std::string>& phi);

enum class CellKind { Vertex, Edge, Face };

// A finite group acting by automorphisms on a complex.  One map per element.
struct FinAction {
  FinGroup group;
  ComplexPtr space;
  std::map<std::string, CombMap> maps;

  const CombMap& act(const std::string& g) const;
  std::string vertex_image(const std::string& g, const std::string& v) const;
  Dart dart_image(const std::string& g, const Dart& d) const;
  std::string face_image_of(const std::string& g, const std::string& f) const;

  bool operator==(const FinAction& o) const;
};

ValidationReport validate_action(const FinAction& a);

FinAction trivial_action(const ComplexPtr& c);

// Extends generator automorphisms to the whole group by multiplying along a
// breadth-first traversal of the Cayley graph.
FinAction action_from_generators(const FinGroup& g, const ComplexPtr& space,
                                 const std::map<std::string, CombMap>& genmaps);

std::vector<std::set<std::string>> vertex_orbits(const FinAction& a);
std::vector<std::set<std::string>> edge_orbits(const FinAction& a);  // by edge id
std::vector<std::set<std::string>> face_orbits(const FinAction& a);
// (vertex orbit count, edge orbit count)
std::pair<std::size_t, std::size_t> orbit_counts(const FinAction& a);

// Pointwise stabilizer of a cell, as an element subset (always a subgroup).
std::set<std::string> stabilizer(const FinAction& a, CellKind kind, const std::string& cell);

// True iff every element fixing a cell setwise fixes it pointwise.
bool is_without_inversions(const FinAction& a);

bool is_invariant(const FinAction& a, const Subcomplex& k);

// Cells fixed pointwise by every element of f.  Requires an action without
// inversions; the result is then automatically a subcomplex.
Subcomplex fixed_subcomplex(const FinAction& a, const std::set<std::string>& f);

// Repeatedly removes a whole orbit of free edges together with the faces they
// bound, smallest free edge first, until no free edge remains.  An edge is
// free when it occurs exactly once across all retained face boundaries.
Subcomplex equivariant_collapse(const FinAction& a, const Subcomplex& z);

// Same space, subgroup of the group.
FinAction restrict_action(const FinAction& a, const std::set<std::string>& h);

// A map of spaces plus a homomorphism of the acting groups, intertwining the
// two actions: f(g.x) = fsharp(g).f(x).
struct EqMap {
  CombMap f;
  FinAction source_action;
  FinAction target_action;
  std::map<std::string, std::string> fsharp;
};

// Checks both actions, the map, the homomorphism, and equivariance on every
// cell.  Notes classify the map: "inclusion", "zero-surjective",
// "stabilizer-preserving".
ValidationReport validate_eq_map(const EqMap& m);

struct EqMapClass {
  bool inclusion = false;
  bool zero_surjective = false;
  bool stabilizer_preserving = false;
};
EqMapClass classify_eq_map(const EqMap& m);

EqMap identity_eq_map(const FinAction& a);
// m2 after m1; middle actions must agree.
EqMap compose(const EqMap& m1, const EqMap& m2);

}  // namespace towerkit
