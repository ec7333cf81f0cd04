#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "towerkit/complex.hpp"
#include "towerkit/diagrams.hpp"
#include "towerkit/rational.hpp"

namespace towerkit {

// Flagness truncated at dimension two: every triangle in the 1-skeleton must
// span a 2-simplex.  4-cliques cannot be tested at this dimension cap and are
// reported as warnings instead of silently passing.
struct FlagCheck {
  bool ok = false;
  std::vector<std::string> violating_clique;  // a triangle spanning no 2-simplex
  std::vector<std::vector<std::string>> four_cliques;  // untestable warnings
};

FlagCheck is_flag(const SimpComplex& s);

// k-largeness: flag plus no full embedded cycle of length 4..k-1, where full
// means chordless (triangles are excluded: flagness fills them).
struct LargenessCheck {
  bool ok = false;
  std::string reason;                // "clique" or "cycle" when not ok
  std::vector<std::string> witness;  // the offending clique or cycle
  std::vector<std::vector<std::string>> four_cliques;
};

LargenessCheck is_k_large(const SimpComplex& s, int k);

// Local k-largeness: the link of every simplex is k-large.  In dimension two
// edge links are discrete and triangle links empty, so vertices carry the
// real content; all simplices are still checked and named in the certificate.
struct LocalLargenessCheck {
  bool ok = false;
  std::vector<std::string> simplex;  // the simplex whose link fails
  LargenessCheck link_check;
};

LocalLargenessCheck is_locally_k_large(const SimpComplex& s, int k);

// Corner angles per face, listed in boundary order; corner i of a face sits
// at the source vertex of boundary dart i.  Values are multiples of pi.
struct AngleAssignment {
  std::map<std::string, std::vector<Rational>> corners;
};

ValidationReport validate_angles(const Complex2& c, const AngleAssignment& a);

// Exact conformal curvature test: every n-gon's angle sum must stay strictly
// below (n-2)pi and every immersed non-backtracking link circuit must measure
// at least 2pi.  All arithmetic is exact rational multiples of pi.
struct CurvatureCheck {
  bool ok = false;
  std::string face;           // face whose angle sum is too large
  std::string vertex;         // vertex whose link has a light circuit
  Rational measure;           // the offending sum, as a multiple of pi
  std::vector<Dart> circuit;  // link nodes of the light circuit
};

CurvatureCheck check_negative_curvature(const Complex2& c, const AngleAssignment& a);

// Residue of iterated free-edge face deletion: faces are removed while some
// boundary edge lies in exactly one face slot; the outcome is independent of
// the deletion order.  `core` is the closure of the surviving faces and
// `empty` records that none survived.
struct DRCore {
  Subcomplex core;
  bool empty = false;
};

DRCore dr_core(const Complex2& c);
DRCore dr_core(const Complex2& c, const Subcomplex& k);

enum class DRStatus { Certified, Refuted, Unknown };

struct DRBudgets {
  std::size_t coset_limit = 4000;  // one-connectedness certification
  int sphere_faces = 4;            // near-immersed sphere search bound
};

// Certified: one-connected with an empty face core, which forces a free edge
// in every subregion.  Refuted: a near-immersed sphere exists.  Unknown
// covers everything else, in particular complexes that cannot be certified
// one-connected, where the free-edge argument does not apply.
struct DRCertificate {
  DRStatus status = DRStatus::Unknown;
  std::optional<SphereDiagram> sphere;  // present when Refuted
  std::string note;
};

DRCertificate dr_certify(const ComplexPtr& c, const DRBudgets& budgets = {});

// For each edge of a 1-dimensional complex, the number of embedded circuits
// of each length 1..max_len through it.
std::map<std::string, std::map<int, long>> fineness_profile(const Complex2& g,
                                                            int max_len);

}  // namespace towerkit
