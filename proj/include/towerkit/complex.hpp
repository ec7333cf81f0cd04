#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "towerkit/ids.hpp"
#include "towerkit/validation.hpp"

namespace towerkit {

struct DartInfo {
  std::string rev;  // opposite dart
  std::string src;  // source vertex
  std::string dst;  // target vertex
  friend bool operator==(const DartInfo&, const DartInfo&) = default;
};

struct EdgeSpec {
  std::string id, from, to;
};

struct FaceSpec {
  std::string id;
  DartPath boundary;
};

// A finite combinatorial 2-complex: vertices, darts (oriented edges closed
// under a fixed-point-free reversal) and faces attached along closed dart
// words.  from_edges() builds the standard sign-convention representation
// where edge "x" yields darts "x" and "-x"; the raw fields stay public so
// that broken instances can be constructed and fed to validate_complex.
struct Complex2 {
  std::set<std::string> vertices;
  std::map<std::string, DartInfo> darts;
  std::map<std::string, DartPath> faces;

  static Complex2 from_edges(const std::vector<std::string>& vs,
                             const std::vector<EdgeSpec>& es,
                             const std::vector<FaceSpec>& fs = {});

  bool has_vertex(const std::string& v) const { return vertices.count(v) > 0; }
  bool has_dart(const Dart& d) const { return darts.count(d) > 0; }
  bool has_face(const std::string& f) const { return faces.count(f) > 0; }

  const DartInfo& dart(const Dart& d) const;
  const std::string& src(const Dart& d) const { return dart(d).src; }
  const std::string& dst(const Dart& d) const { return dart(d).dst; }
  const std::string& rev(const Dart& d) const { return dart(d).rev; }
  const DartPath& boundary(const std::string& f) const;

  // Canonical representative of the unoriented edge carrying d.
  std::string edge_of(const Dart& d) const;
  std::set<std::string> edge_ids() const;

  // Darts leaving v, sorted.
  std::vector<Dart> darts_at(const std::string& v) const;

  size_t vertex_count() const { return vertices.size(); }
  size_t edge_count() const { return darts.size() / 2; }
  size_t face_count() const { return faces.size(); }

  friend bool operator==(const Complex2&, const Complex2&) = default;
};

using ComplexPtr = std::shared_ptr<const Complex2>;

ValidationReport validate_complex(const Complex2& c);

// Corner arc of a link graph: the face corner at boundary position pos joins
// the two darts a, b leaving the link's vertex.
struct LinkArc {
  std::string face;
  size_t pos = 0;
  Dart a, b;
  friend bool operator==(const LinkArc&, const LinkArc&) = default;
};

struct LinkGraph {
  std::string vertex;
  std::set<Dart> nodes;       // darts leaving the vertex
  std::vector<LinkArc> arcs;  // one arc per face corner, sorted by (face, pos)
};

LinkGraph link(const Complex2& c, const std::string& v);

// A subcomplex is stored as id sets; closed means every cell's boundary is
// also present (darts closed under reversal).
struct Subcomplex {
  std::set<std::string> vertices;
  std::set<Dart> darts;
  std::set<std::string> faces;
  friend bool operator==(const Subcomplex&, const Subcomplex&) = default;
};

ValidationReport validate_subcomplex(const Complex2& c, const Subcomplex& k);

// Downward closure of an arbitrary cell selection.
Subcomplex closure(const Complex2& c, const Subcomplex& cells);

Subcomplex whole_subcomplex(const Complex2& c);

// Smallest full subcomplex containing k: repeatedly adds every cell of c
// whose boundary already lies in the subcomplex.
Subcomplex span(const Complex2& c, const Subcomplex& k);

bool is_full(const Complex2& c, const Subcomplex& k);

// Materialize a closed subcomplex as a complex of its own (ids preserved).
Complex2 restrict_complex(const Complex2& c, const Subcomplex& k);

// Rename every cell through the given injective maps (missing entries keep
// their id).  Dart names follow the renamed edge names.
Complex2 rename_cells(const Complex2& c,
                      const std::map<std::string, std::string>& vmap,
                      const std::map<std::string, std::string>& emap,
                      const std::map<std::string, std::string>& fmap);

// Barycentric subdivision: one new vertex per edge and per face, each n-gon
// replaced by 2n triangles.  Output ids are prefixed to stay collision-free.
Complex2 barycentric_subdivision(const Complex2& c);

std::vector<std::set<std::string>> connected_components(const Complex2& c);
bool is_connected(const Complex2& c);

// V - E + F.
long euler_characteristic(const Complex2& c);

// Simplicial complexes of dimension at most 2: a downward-closed family of
// vertex sets of size 1..3.
struct SimpComplex {
  std::set<std::string> vertices;
  std::set<std::vector<std::string>> simplices;  // sorted vertex lists, sizes 1..3

  static SimpComplex from_maximal(const std::vector<std::string>& vs,
                                  const std::vector<std::vector<std::string>>& maximal);

  bool has_simplex(std::vector<std::string> s) const;
  bool adjacent(const std::string& u, const std::string& v) const;
  std::set<std::string> neighbors(const std::string& v) const;

  friend bool operator==(const SimpComplex&, const SimpComplex&) = default;
};

ValidationReport validate_simp(const SimpComplex& s);

// Link of a vertex: neighbors plus the edges induced by triangles through v.
SimpComplex simp_vertex_link(const SimpComplex& s, const std::string& v);

}  // namespace towerkit
