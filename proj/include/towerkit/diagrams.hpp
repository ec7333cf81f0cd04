#pragma once

#include <map>
#include <optional>

#include "towerkit/maps.hpp"

namespace towerkit {

// A disk filling of a closed loop: a contractible planar complex whose
// distinguished boundary cycle maps onto the loop, dart for dart.
struct DiskDiagram {
  ComplexPtr disk;
  DartPath boundary;  // cycle of disk darts; its image reads the filled loop
  CombMap to_target;
  int area = 0;  // number of faces
};

// Structural checks: valid complex and map, connectedness, V - E + F = 1,
// boundary cycle closed with image equal to the loop, area = face count, and
// no mirror face pair glued back-to-back across an edge.
ValidationReport validate_disk_diagram(const DiskDiagram& d, const ComplexPtr& target,
                                       const DartPath& loop);

// Minimal-area filling engine.  Searches every way of peeling a face off the
// boundary word, so a returned area is exactly minimal among fillings within
// the budget; the memo persists across queries against the same target.
class DiskFiller {
 public:
  explicit DiskFiller(ComplexPtr target);

  // Smallest filling area of the closed loop, searching areas <= max_area.
  std::optional<int> min_area(const DartPath& loop, int max_area);

  // Same bound for an arbitrary closed dart word (reduced internally).
  std::optional<int> word_area(const DartPath& closed_word, int max_area);

  // Minimal filling together with the explicit diagram.
  std::optional<DiskDiagram> fill(const DartPath& loop, int max_area);

  const ComplexPtr& target() const { return target_; }

 private:
  struct Entry {
    int floor = 0;             // no filling uses fewer than this many faces
    std::optional<int> exact;  // exact minimum once known
  };

  std::optional<int> fill_word(const DartPath& canon, int budget);

  ComplexPtr target_;
  std::map<DartPath, Entry> memo_;

  friend struct DiskRebuilder;
};

// One-shot convenience wrapper around DiskFiller::fill.
std::optional<DiskDiagram> search_disk(const ComplexPtr& c, const DartPath& loop, int max_area);

// Largest minimal filling area over all closed paths of each length 1..n,
// with every filling searched up to max_area.  Returns nullopt when some loop
// certified null-homotopic (by coset enumeration over the full face relations)
// admits no filling within the budget; loops whose homotopy class cannot be
// certified are skipped.  The table is monotone in the length.
std::optional<std::map<int, int>> dehn_estimate(const ComplexPtr& c, int n, int max_area,
                                                std::size_t coset_limit = 4000);

// A closed surface of Euler characteristic 2 mapped to the target: every edge
// lies on exactly two face sides and each face boundary stays embedded after
// one subdivision (distinct vertices and distinct edges along the cycle).
struct SphereDiagram {
  ComplexPtr sphere;
  CombMap to_target;
};

ValidationReport validate_sphere_diagram(const SphereDiagram& s, const ComplexPtr& target);

// Exhaustively glues up to max_faces copies of target faces (either
// orientation) into closed surfaces and returns the first sphere, in a fixed
// enumeration order, whose map is a near-immersion; nullopt when none exists
// at the budget.  A nullopt is evidence at the budget only, not a certificate.
std::optional<SphereDiagram> sphere_search(const ComplexPtr& c, int max_faces);

// Neighbourhood contraction test for an immersion m: X -> Y at a vertex x0:
// compares the diameter of a set of neighbours measured in X minus x0 with
// the filling-bound estimate C * dehn(diam + 2) in Y minus m(x0), where C is
// the longest face boundary of Y.  Requires Y reducibility-certified and
// one-connected; otherwise Undecided.
enum class FineResult { Holds, Violated, Undecided };

struct FineBudgets {
  std::size_t coset_limit = 4000;  // one-connectedness certification
  int max_area = 12;               // filling search bound for the Dehn table
  int sphere_faces = 4;            // sphere search bound for the reducibility certificate
};

struct FineReport {
  FineResult result = FineResult::Undecided;
  int diam_a = -1;       // diameter of a in the punctured source
  int diam_fa = -1;      // diameter of the image in the punctured target
  int max_face_len = 0;  // longest face boundary length in the target
  int dehn_value = -1;   // filling estimate at diam_a + 2
  std::string note;
};

FineReport fine_inequality_check(const CombMap& m, const std::string& x0,
                                 const std::set<std::string>& a, const FineBudgets& budgets);

}  // namespace towerkit
