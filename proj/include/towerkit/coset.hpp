#pragma once

#include <optional>

#include "towerkit/presentation.hpp"

namespace towerkit {

// Complete right-coset table of a finite-index subgroup: one row per coset,
// one column per generator dart (generator ids and their '-' reversals).
// Row 0 is the subgroup's own coset; rows are numbered in BFS order from it,
// following generator darts in sorted order, so tables are canonical.
struct CosetTable {
  std::vector<std::string> generators;
  std::vector<std::map<Dart, int>> rows;

  std::size_t index() const { return rows.size(); }
  int follow(int start, const Dart& d) const;
  int follow(int start, const DartPath& word) const;
  bool operator==(const CosetTable&) const = default;
};

// Checks totality, range, and that each generator column is a permutation
// inverted by its reversal column.
ValidationReport validate_coset_table(const CosetTable& t);

// HLT-style Todd-Coxeter enumeration of the subgroup generated by the given
// words (over p.generators' darts).  limit bounds the total number of cosets
// ever defined; returns nullopt when the table cannot be closed within it.
// Deterministic: fixed processing order, canonical renumbering on success.
std::optional<CosetTable> coset_enumerate(const Presentation& p,
                                          const std::vector<DartPath>& subgens,
                                          long limit);

}  // namespace towerkit
