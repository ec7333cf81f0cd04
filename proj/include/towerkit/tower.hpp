#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "towerkit/cover.hpp"

namespace towerkit {

// Lexicographic size of an equivariant map.  `defect` counts source vertex
// orbits minus orbits of image vertices under the image subgroup; `edges`
// counts target edge orbits.  Lifting engines drive the pair strictly
// downward until it repeats.
struct Complexity {
  long defect = 0;
  long edges = 0;
  friend auto operator<=>(const Complexity&, const Complexity&) = default;
};

std::string to_string(const Complexity& c);

Complexity complexity(const EqMap& m);

enum class StepKind { Inclusion, FullInclusion, Cover };

// One stage of a factored map, stored top stage first.  Inclusion stages
// embed an invariant subcomplex carrying a subgroup of the ambient action;
// full inclusions embed a spanned subcomplex (no ambient edge or face has
// all of its boundary inside without belonging itself).  Cover stages
// project a cover carrying a lifted action; a truncated cover is
// materialized only on a finite window around the lifted image, and its
// projection is a genuine covering over every vertex retained by the stage
// above it.
struct TowerStep {
  StepKind kind = StepKind::Inclusion;
  EqMap map;
  bool cover_truncated = false;
  std::string cover_note;
};

// A chain of stages whose composition is `composite`, with the complexity
// ledger of the successive lifts that produced it; the ledger ends with the
// repeat that stopped the engine.
struct TowerCert {
  std::vector<TowerStep> steps;
  EqMap composite;
  std::size_t length = 0;
  std::vector<Complexity> ledger;
};

// Structural checks per stage kind: injectivity for inclusions, spanning
// for full inclusions, covering plus fiber-transitive kernel for untruncated
// covers, and local covering over the retained stage for truncated ones;
// then chain adjacency and agreement of the stored composite.  Notes:
// "f-tower" when every inclusion stage is full, "immersion" when the
// composite map is an immersion, "truncated-cover" when one is present.
ValidationReport validate_tower(const TowerCert& t);

enum class LiftMode { Tower, FTower };

// Whether the map cannot be lifted any further: the group image is all of
// the target group, the target is certified one-connected, and the image
// fills the target (every cell for Tower, every vertex and edge for
// FTower).  Throws std::invalid_argument on an invalid map or a source that
// is provably not one-connected, and OracleUnknown when a needed
// one-connectedness certificate is out of budget.
bool is_maximal_lift(const EqMap& m, LiftMode mode, long coset_limit = 4000);

struct TowerBudgets {
  long coset_limit = 4000;
  int area_limit = 8;
};

// A lift of a map to the top of a tower over its target: `tower.composite`
// after `lift` reproduces the original map.
struct TowerLift {
  EqMap lift;
  TowerCert tower;
};

// Drives the lift as far as it goes: restrict to the span of the image
// (full inclusion stages), climb the one-connected cover (cover stages),
// repeat until the complexity repeats, then certify the top stage
// one-connected.  nullopt when an identification, cover, or certificate is
// out of budget.  Throws std::invalid_argument on an invalid map or a
// source that is provably not one-connected.
std::optional<TowerLift> max_f_tower_lift(const EqMap& m, const TowerBudgets& budgets = {});

// Same engine, but each stage keeps the image itself rather than its span,
// so inclusion stages are plain.
std::optional<TowerLift> max_tower_lift(const EqMap& m, const TowerBudgets& budgets = {});

// The subgroup generated by `gens`, realized on its own one-connected
// complex: shortest paths from a basepoint to its generator translates are
// spread over the subgroup, their loops are filled with disks, and the
// assembled complex is maximally lifted.  `action` is the subgroup acting
// on the tower's top stage; `tower` carries that stage into the original
// space.  nullopt when a filling, identification, or certificate is out of
// budget; throws std::invalid_argument on unknown generators or a space
// that is not certified one-connected.
struct SubgroupCore {
  FinAction action;
  TowerCert tower;
};
std::optional<SubgroupCore> subgroup_core(const FinAction& y, const std::set<std::string>& gens,
                                          const TowerBudgets& budgets = {});

}  // namespace towerkit
