#include "towerkit/maps.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace towerkit {

Dart CombMap::dart_image(const Dart& d) const {
  auto it = dmap.find(d);
  if (it != dmap.end()) return it->second;
  // stored on the opposite dart
  const Dart r = source->rev(d);
  auto it2 = dmap.find(r);
  if (it2 == dmap.end()) throw std::invalid_argument("dart not in map: " + d);
  return target->rev(it2->second);
}

std::string CombMap::vertex_image(const std::string& v) const {
  auto it = vmap.find(v);
  if (it == vmap.end()) throw std::invalid_argument("vertex not in map: " + v);
  return it->second;
}

const FaceImage& CombMap::face_image(const std::string& f) const {
  auto it = fmap.find(f);
  if (it == fmap.end()) throw std::invalid_argument("face not in map: " + f);
  return it->second;
}

CombMap identity_map(const ComplexPtr& c) {
  CombMap m;
  m.source = c;
  m.target = c;
  for (const auto& v : c->vertices) m.vmap[v] = v;
  for (const auto& [d, info] : c->darts)
    if (dart_is_forward(d)) m.dmap[d] = d;
  for (const auto& [f, w] : c->faces) m.fmap[f] = {f, 0, false};
  return m;
}

ValidationReport validate_map(const CombMap& m) {
  ValidationReport r;
  if (!m.source || !m.target) {
    r.add("null-complex", "map lacks a source or target complex");
    return r;
  }
  const Complex2& S = *m.source;
  const Complex2& T = *m.target;

  for (const auto& v : S.vertices)
    if (!m.vmap.count(v)) r.add("vertex-unmapped", "vertex " + v + " has no image");
  for (const auto& [v, w] : m.vmap) {
    if (!S.has_vertex(v)) r.add("unknown-cell", "vmap names unknown vertex " + v);
    if (!T.has_vertex(w)) r.add("unknown-cell", "vmap sends " + v + " to unknown vertex " + w);
  }

  std::set<std::string> covered;
  for (const auto& [d, img] : m.dmap) {
    if (!dart_is_forward(d))
      r.add("dart-key", "dmap must be keyed on forward darts, got " + d);
    if (!S.has_dart(d)) {
      r.add("unknown-cell", "dmap names unknown dart " + d);
      continue;
    }
    if (!T.has_dart(img)) {
      r.add("unknown-cell", "dmap sends " + d + " to unknown dart " + img);
      continue;
    }
    covered.insert(d);
    covered.insert(S.rev(d));
    if (m.dmap.count(S.rev(d)) && T.rev(m.dmap.at(S.rev(d))) != img)
      r.add("rev-incompatible", "dmap disagrees with reversal on edge of " + d);
    if (m.vmap.count(S.src(d)) && m.vmap.at(S.src(d)) != T.src(img))
      r.add("endpoint-mismatch", "dart " + d + ": image of source vertex differs from source of image");
    if (m.vmap.count(S.dst(d)) && m.vmap.at(S.dst(d)) != T.dst(img))
      r.add("endpoint-mismatch", "dart " + d + ": image of target vertex differs from target of image");
  }
  for (const auto& [d, info] : S.darts)
    if (!covered.count(d)) r.add("dart-unmapped", "dart " + d + " has no image");

  for (const auto& [f, w] : S.faces)
    if (!m.fmap.count(f)) r.add("face-unmapped", "face " + f + " has no image");
  for (const auto& [f, img] : m.fmap) {
    if (!S.has_face(f)) {
      r.add("unknown-cell", "fmap names unknown face " + f);
      continue;
    }
    if (!T.has_face(img.face)) {
      r.add("unknown-cell", "fmap sends " + f + " to unknown face " + img.face);
      continue;
    }
    const auto& w = S.boundary(f);
    const auto& u = T.boundary(img.face);
    if (w.size() != u.size()) {
      r.add("face-length", "face " + f + " maps to a face of different boundary length");
      continue;
    }
    size_t n = w.size();
    bool all_present = true;
    for (const auto& d : w)
      if (!S.has_dart(d) || (!m.dmap.count(d) && !m.dmap.count(S.rev(d)))) {
        all_present = false;
        break;
      }
    if (!all_present) continue;
    if (img.rot >= n) {
      r.add("face-rotation", "face " + f + " image rotation out of range");
      continue;
    }
    for (size_t i = 0; i < n; ++i) {
      Dart want = img.flip ? T.rev(u[(img.rot + n - i) % n]) : u[(i + img.rot) % n];
      if (m.dart_image(w[i]) != want) {
        r.add("face-word", "face " + f + " boundary does not match its declared image at position " +
                               std::to_string(i));
        break;
      }
    }
  }
  return r;
}

std::vector<FaceImage> face_alignments(const Complex2& src, const Complex2& dst,
                                       const std::map<Dart, Dart>& dmap,
                                       const std::string& f, const std::string& g) {
  auto image = [&](const Dart& d) -> std::optional<Dart> {
    auto it = dmap.find(d);
    if (it != dmap.end()) return it->second;
    auto it2 = dmap.find(src.rev(d));
    if (it2 != dmap.end()) return dst.rev(it2->second);
    return std::nullopt;
  };
  std::vector<FaceImage> out;
  const auto& w = src.boundary(f);
  const auto& u = dst.boundary(g);
  if (w.size() != u.size()) return out;
  size_t n = w.size();
  for (size_t rot = 0; rot < n; ++rot) {
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i) {
      auto img = image(w[i]);
      ok = img && *img == u[(i + rot) % n];
    }
    if (ok) out.push_back({g, rot, false});
  }
  for (size_t rot = 0; rot < n; ++rot) {
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i) {
      auto img = image(w[i]);
      ok = img && *img == dst.rev(u[(rot + n - i) % n]);
    }
    if (ok) out.push_back({g, rot, true});
  }
  return out;
}

CombMap compose(const CombMap& m1, const CombMap& m2) {
  if (!(*m1.target == *m2.source))
    throw std::invalid_argument("compose: middle complexes differ");
  CombMap m;
  m.source = m1.source;
  m.target = m2.target;
  for (const auto& [v, w] : m1.vmap) m.vmap[v] = m2.vertex_image(w);
  for (const auto& [d, img] : m1.dmap) m.dmap[d] = m2.dart_image(img);
  for (const auto& [f, i1] : m1.fmap) {
    const FaceImage& i2 = m2.face_image(i1.face);
    size_t n = m2.target->boundary(i2.face).size();
    size_t rot = i2.flip ? (i2.rot + n - i1.rot % n) % n
                         : (i1.rot + i2.rot) % n;
    m.fmap[f] = {i2.face, rot, i1.flip != i2.flip};
  }
  return m;
}

CombMap restrict_map(const CombMap& m, const Subcomplex& k) {
  auto rep = validate_subcomplex(*m.source, k);
  if (!rep.ok()) throw std::invalid_argument("restrict_map: " + rep.to_string());
  CombMap out;
  out.source = std::make_shared<Complex2>(restrict_complex(*m.source, k));
  out.target = m.target;
  for (const auto& v : k.vertices) out.vmap[v] = m.vertex_image(v);
  for (const auto& d : k.darts)
    if (dart_is_forward(d)) out.dmap[d] = m.dart_image(d);
  for (const auto& f : k.faces) out.fmap[f] = m.face_image(f);
  return out;
}

bool is_injective(const CombMap& m) {
  std::set<std::string> vs, fs;
  std::set<Dart> ds;
  for (const auto& [v, w] : m.vmap)
    if (!vs.insert(w).second) return false;
  for (const auto& [d, info] : m.source->darts)
    if (!ds.insert(m.dart_image(d)).second) return false;
  for (const auto& [f, img] : m.fmap)
    if (!fs.insert(img.face).second) return false;
  return true;
}

// Corner (f, i) maps to a corner of the image face: position (i + rot) mod n
// unflipped, position (rot - i + 1) mod n flipped.
static std::pair<std::string, size_t> corner_image(const CombMap& m, const std::string& f,
                                                   size_t i, size_t n) {
  const FaceImage& img = m.face_image(f);
  size_t j = img.flip ? (img.rot + n + 1 - i) % n : (i + img.rot) % n;
  return {img.face, j};
}

bool is_immersion(const CombMap& m) {
  const Complex2& S = *m.source;
  for (const auto& v : S.vertices) {
    std::set<Dart> images;
    for (const auto& d : S.darts_at(v))
      if (!images.insert(m.dart_image(d)).second) return false;
  }
  // corner arcs, grouped by the source vertex they sit at
  std::map<std::string, std::set<std::pair<std::string, size_t>>> seen;
  for (const auto& [f, w] : S.faces) {
    size_t n = w.size();
    for (size_t i = 0; i < n; ++i) {
      const std::string& v = S.src(w[i]);
      if (!seen[v].insert(corner_image(m, f, i, n)).second) return false;
    }
  }
  return true;
}

// A face side is an occurrence (f, i) of an edge in a boundary word; its
// image side is (image face, i + rot) or (image face, rot - i) when flipped.
bool is_near_immersion(const CombMap& m) {
  const Complex2& S = *m.source;
  std::map<std::string, std::set<std::pair<std::string, size_t>>> sides_by_edge;
  for (const auto& [f, w] : S.faces) {
    size_t n = w.size();
    const FaceImage& img = m.face_image(f);
    for (size_t i = 0; i < n; ++i) {
      size_t j = img.flip ? (img.rot + n - i) % n : (i + img.rot) % n;
      if (!sides_by_edge[S.edge_of(w[i])].insert({img.face, j}).second) return false;
    }
  }
  return true;
}

bool is_zero_surjective(const CombMap& m) {
  std::set<std::string> hit;
  for (const auto& [v, w] : m.vmap) hit.insert(w);
  return hit.size() == m.target->vertices.size();
}

bool is_covering_at(const CombMap& m, const std::string& v) {
  const Complex2& S = *m.source;
  const Complex2& T = *m.target;
  LinkGraph lv = link(S, v);
  LinkGraph lw = link(T, m.vertex_image(v));
  if (lv.nodes.size() != lw.nodes.size() || lv.arcs.size() != lw.arcs.size()) return false;
  std::set<Dart> images;
  for (const auto& d : lv.nodes)
    if (!images.insert(m.dart_image(d)).second) return false;
  std::set<std::pair<std::string, size_t>> corner_images;
  for (const auto& a : lv.arcs) {
    size_t n = S.boundary(a.face).size();
    if (!corner_images.insert(corner_image(m, a.face, a.pos, n)).second) return false;
  }
  return true;
}

bool is_covering_map(const CombMap& m) {
  for (const auto& v : m.source->vertices)
    if (!is_covering_at(m, v)) return false;
  return true;
}

Subcomplex image_subcomplex(const CombMap& m) {
  Subcomplex k;
  for (const auto& [v, w] : m.vmap) k.vertices.insert(w);
  for (const auto& [d, info] : m.source->darts) k.darts.insert(m.dart_image(d));
  for (const auto& [f, img] : m.fmap) k.faces.insert(img.face);
  return k;
}

}  // namespace towerkit
