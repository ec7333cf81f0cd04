#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "towerkit/complex.hpp"
#include "towerkit/maps.hpp"
#include "towerkit/oracle.hpp"

namespace towerkit {

// Snapshot of the region of a cover materialized so far, together with the
// projection onto the base.
struct LazySnapshot {
  ComplexPtr complex;
  CombMap projection;
};

// Universal cover of a connected base complex, materialized on demand.
//
// Cover vertices are classes of reduced edge paths from a fixed basepoint
// (the smallest base vertex); two paths name the same cover vertex exactly
// when the oracle certifies their difference loop trivial.  Lifting a dart
// into territory where the oracle cannot settle an identification throws
// OracleUnknown instead of guessing, so every materialized cell is certified
// correct.  Vertex ids look like "v@0", edges like "a@2", faces like "f@1":
// the base cell name plus a per-cell creation counter.
//
// A LazyCover mutates internal memo tables, so a single instance must stay
// on one thread of control; distinct instances are independent.
class LazyCover {
 public:
  // The oracle must be bound to the same complex as `base`.
  LazyCover(ComplexPtr base, WordOracle oracle);

  const ComplexPtr& base() const { return base_; }
  const WordOracle& oracle() const { return oracle_; }

  // The cover vertex carrying the empty path class.
  const std::string& basepoint() const { return basepoint_; }

  // Reduced representative path (from the base basepoint) of a cover vertex.
  const DartPath& representative(const std::string& vertex) const;

  // Oracle verdict on whether two base paths from the basepoint reach the
  // same cover vertex.  Paths ending at different base vertices are
  // Nontrivial without consulting the oracle.
  LoopAnswer identify(const DartPath& p, const DartPath& q) const;

  // Lift of one base dart leaving the image of `at`.  Creates or identifies
  // the far vertex as needed; throws OracleUnknown when the oracle cannot
  // settle the identification.
  Dart lift_dart(const std::string& at, const Dart& d);

  // Lift of a whole base path starting at `at`, as its cover dart sequence.
  DartPath lift_path(const std::string& at, const DartPath& p);

  // Terminal vertex of the lift of a base path starting at the basepoint.
  std::string lift_vertex(const DartPath& path_from_basepoint);

  // Lift of a base face whose boundary starts at the image of `at`; the
  // lifted boundary must close up at `at` again.
  std::string lift_face(const std::string& at, const std::string& base_face);

  // Endpoints of a materialized cover dart.
  const std::string& dart_tail(const Dart& d) const;
  const std::string& dart_head(const Dart& d) const;

  LazySnapshot materialized() const;

 private:
  struct CoverVertex {
    std::string base;
    DartPath rep;  // reduced path from the base basepoint
  };
  struct CoverEdge {
    std::string base;  // base edge id; the forward dart projects forward
    std::string src, dst;
  };
  struct CoverFace {
    std::string base;
    DartPath boundary;
  };

  std::string new_vertex(const std::string& base_vertex, DartPath rep);
  const CoverEdge& edge_rec(const Dart& d) const;

  ComplexPtr base_;
  WordOracle oracle_;
  std::string base_basepoint_;
  std::string basepoint_;

  std::map<std::string, CoverVertex> verts_;
  std::map<std::string, CoverEdge> edges_;
  std::map<std::string, CoverFace> faces_;
  // Base vertex -> cover vertices over it, in creation order.
  std::map<std::string, std::vector<std::string>> over_;
  // (cover vertex, base dart) -> cover dart, kept for both orientations.
  std::map<std::pair<std::string, Dart>, Dart> dlift_;
  // (anchor cover vertex, base face) -> cover face.
  std::map<std::pair<std::string, std::string>, std::string> flift_;
  std::map<std::string, int> vseq_, eseq_, fseq_;
};

}  // namespace towerkit
