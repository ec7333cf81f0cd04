#pragma once

#include <map>
#include <optional>
#include <string>

#include "towerkit/complex.hpp"

namespace towerkit {

// Image of a face under a combinatorial map: target face plus the rotation
// offset and orientation flag that align the boundary words.  With flip
// false, dart i of the source boundary maps to dart (i + rot) mod n of the
// image boundary; with flip true it maps to the reverse of dart
// (rot - i) mod n.
struct FaceImage {
  std::string face;
  size_t rot = 0;
  bool flip = false;
  friend bool operator==(const FaceImage&, const FaceImage&) = default;
};

struct CombMap {
  ComplexPtr source;
  ComplexPtr target;
  std::map<std::string, std::string> vmap;
  std::map<Dart, Dart> dmap;  // forward darts only; reverses are implied
  std::map<std::string, FaceImage> fmap;

  Dart dart_image(const Dart& d) const;
  std::string vertex_image(const std::string& v) const;
  const FaceImage& face_image(const std::string& f) const;

  friend bool operator==(const CombMap& a, const CombMap& b) {
    return *a.source == *b.source && *a.target == *b.target && a.vmap == b.vmap &&
           a.dmap == b.dmap && a.fmap == b.fmap;
  }
};

CombMap identity_map(const ComplexPtr& c);

ValidationReport validate_map(const CombMap& m);

// Rotation/flip pairs aligning face f of src with face g of dst under dmap,
// in deterministic order (unflipped rotations first).
std::vector<FaceImage> face_alignments(const Complex2& src, const Complex2& dst,
                                       const std::map<Dart, Dart>& dmap,
                                       const std::string& f, const std::string& g);

// m2 after m1; requires target(m1) == source(m2).
CombMap compose(const CombMap& m1, const CombMap& m2);

// Restriction to a closed subcomplex of the source.
CombMap restrict_map(const CombMap& m, const Subcomplex& k);

bool is_injective(const CombMap& m);

// Link-injective at every source vertex (nodes and corner arcs).
bool is_immersion(const CombMap& m);

// Injective on the face sides over every source edge; folds across open
// edges are the only failures detected.
bool is_near_immersion(const CombMap& m);

bool is_zero_surjective(const CombMap& m);

// The link map at v is bijective (immersion plus equal node/arc counts).
bool is_covering_at(const CombMap& m, const std::string& v);

bool is_covering_map(const CombMap& m);

// Image cells of m as a subcomplex of the target.
Subcomplex image_subcomplex(const CombMap& m);

}  // namespace towerkit
