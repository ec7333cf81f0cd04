#pragma once

#include <optional>
#include <vector>

#include "towerkit/actions.hpp"
#include "towerkit/coset.hpp"
#include "towerkit/oracle.hpp"

namespace towerkit {

enum class TriState { Yes, No, Unknown };

// True iff iterated elementary collapses reach a single vertex: free edges
// (edges on exactly one face side) are collapsed with their faces first,
// then leaf vertices with their edges.  A sound certificate of
// contractibility; false only means this procedure got stuck.
bool collapses_to_point(const Complex2& c);

// Decides one-connectedness within a coset-enumeration budget.  Yes when the
// presentation has no generators, the complex collapses to a point, or the
// trivial-subgroup coset table closes with index 1; No when a generator loop
// is provably essential (index > 1, or any non-tree edge of a bare graph);
// Unknown when the budget runs out first.  Requires a connected complex.
TriState is_simply_connected(const ComplexPtr& c, long coset_limit = 4000);

// A finite universal cover built from a closed coset table over the trivial
// subgroup.  Cover cells are named "<sheet>|<base cell>"; the projection
// strips sheets; the deck group (elements "g0", "g1", ...) permutes sheets
// freely and transitively.
struct CoverData {
  ComplexPtr cover;
  CombMap projection;  // cover -> base
  FinAction deck;      // free deck action on the cover
  Presentation pres;   // base presentation the construction is built on
  CosetTable table;    // closed coset table over the trivial subgroup
};

// Materializes the full universal cover when the fundamental group is finite
// (certified by coset enumeration within limit); nullopt when the table does
// not close.  Requires a connected, nonempty complex.
std::optional<CoverData> universal_cover_finite(const ComplexPtr& c, long limit = 4000);

// The full preimage of an acting group in the automorphisms of the universal
// cover: every lift of every element.  Elements are named "<h>#<sheet>",
// where the sheet records the image of the basepoint lift "0|<basepoint>".
struct LiftedGroup {
  CoverData cover;
  FinAction action;   // the lifted group acting on the cover
  EqMap projection;   // cover projection, equivariant over "<h>#<k>" -> "<h>"
};

// Lifts a whole group action to the universal cover.  The result satisfies,
// by construction checks: |lifted| = (number of sheets) * |group|, the name
// projection is a homomorphism whose kernel acts as the deck group, the
// covering projection is equivariant, and cell stabilizers map isomorphically
// onto image-cell stabilizers.  nullopt when the cover is out of budget.
std::optional<LiftedGroup> lifted_group(const FinAction& a, long limit = 4000);

// Decides whether the subgroup generated by the given loops (closed paths at
// the presentation basepoint, the smallest vertex) is normal in the lifted
// group, i.e. whether the corresponding intermediate cover carries an action
// compatible with a.  nullopt when the universal cover is out of budget.
std::optional<bool> is_h_regular(const std::vector<DartPath>& subgroup, const FinAction& a,
                                 long limit = 4000);

// Intermediate cover for a regular subgroup: the universal cover divided by
// the subgroup's deck translates, carrying the quotient of the lifted group.
struct IntermediateCover {
  ComplexPtr cover;
  CombMap projection;  // intermediate cover -> base
  FinAction action;    // quotient of the lifted group
  EqMap to_base;       // projection, equivariant over coset -> element
};

// Throws std::invalid_argument when the subgroup is not regular for a;
// nullopt when the universal cover is out of budget.
std::optional<IntermediateCover> intermediate_lift(const std::vector<DartPath>& subgroup,
                                                   const FinAction& a, long limit = 4000);

// Lifts an equivariant map from a certified one-connected complex through
// the covering projection, together with the group homomorphism into the
// lifted group.  The target action of m must be the lifted group's base
// action.  Throws std::invalid_argument when the source is not one-connected
// and OracleUnknown when one-connectedness cannot be certified in budget.
EqMap lift_eq_map(const EqMap& m, const LiftedGroup& lifted, long coset_limit = 4000);

}  // namespace towerkit
