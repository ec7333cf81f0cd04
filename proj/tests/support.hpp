#pragma once

#include <random>
#include <string>
#include <vector>

#include "towerkit/actions.hpp"
#include "towerkit/fixtures.hpp"

namespace towerkit {
namespace testsupport {

// Small random valid complex: random graph plus faces glued along random
// closed walks.  Always passes validate_complex.
inline Complex2 random_complex(std::mt19937& rng, std::size_t max_v = 5, std::size_t max_e = 7,
                               std::size_t max_f = 3) {
  std::size_t nv = 1 + rng() % max_v;
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < nv; ++i) vs.push_back("u" + std::to_string(i));
  std::size_t ne = rng() % (max_e + 1);
  std::vector<EdgeSpec> es;
  for (std::size_t i = 0; i < ne; ++i)
    es.push_back({"x" + std::to_string(i), vs[rng() % nv], vs[rng() % nv]});
  Complex2 graph = Complex2::from_edges(vs, es);

  std::vector<FaceSpec> fs;
  std::size_t want = rng() % (max_f + 1);
  for (std::size_t attempt = 0; attempt < 4 * want + 1 && fs.size() < want; ++attempt) {
    const std::string& start = vs[rng() % nv];
    std::size_t len = 1 + rng() % 5;
    DartPath walk;
    std::string at = start;
    for (std::size_t s = 0; s < len; ++s) {
      auto out = graph.darts_at(at);
      if (out.empty()) break;
      Dart d = out[rng() % out.size()];
      walk.push_back(d);
      at = graph.dst(d);
    }
    if (walk.size() == len && at == start)
      fs.push_back({"q" + std::to_string(fs.size()), walk});
  }
  return Complex2::from_edges(vs, es, fs);
}

// Random closed subcomplex: random cell subset, then boundary closure.
inline Subcomplex random_subcomplex(std::mt19937& rng, const Complex2& c) {
  Subcomplex k;
  for (const auto& v : c.vertices)
    if (rng() % 2) k.vertices.insert(v);
  for (const auto& e : c.edge_ids())
    if (rng() % 2) {
      k.darts.insert(e);
      k.darts.insert(c.rev(e));
    }
  for (const auto& [f, w] : c.faces)
    if (rng() % 2) k.faces.insert(f);
  return closure(c, k);
}

// Random bijective renaming of a name set onto prefix0..prefixN in shuffled
// order.
inline std::map<std::string, std::string> random_rename(std::mt19937& rng,
                                                        const std::set<std::string>& names,
                                                        const std::string& prefix) {
  std::vector<std::size_t> idx(names.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  for (const auto& n : names) out[n] = prefix + std::to_string(idx[i++]);
  return out;
}

struct Renaming {
  std::map<std::string, std::string> v, e, f;
};

inline Renaming random_renaming(std::mt19937& rng, const Complex2& c) {
  Renaming r;
  r.v = random_rename(rng, c.vertices, "rv");
  r.e = random_rename(rng, c.edge_ids(), "re");
  std::set<std::string> faces;
  for (const auto& [f, w] : c.faces) faces.insert(f);
  r.f = random_rename(rng, faces, "rf");
  return r;
}

inline Dart rename_dart(const std::map<std::string, std::string>& emap, const Dart& d) {
  return dart_is_forward(d) ? emap.at(d) : dart_flip(emap.at(dart_edge(d)));
}

// Conjugates an action by a cell renaming; used for relabeling-invariance
// tests.
inline FinAction rename_action(const FinAction& a, const Renaming& r) {
  FinAction out;
  out.group = a.group;
  out.space = std::make_shared<Complex2>(rename_cells(*a.space, r.v, r.e, r.f));
  std::map<std::string, std::string> vinv;
  std::map<std::string, std::string> einv;
  std::map<std::string, std::string> finv;
  for (const auto& [k, w] : r.v) vinv[w] = k;
  for (const auto& [k, w] : r.e) einv[w] = k;
  for (const auto& [k, w] : r.f) finv[w] = k;
  for (const auto& [g, m] : a.maps) {
    CombMap n;
    n.source = out.space;
    n.target = out.space;
    for (const auto& v : out.space->vertices) n.vmap[v] = r.v.at(m.vertex_image(vinv.at(v)));
    for (const auto& e : out.space->edge_ids())
      n.dmap[e] = rename_dart(r.e, m.dart_image(einv.at(e)));
    for (const auto& [f, w] : out.space->faces) {
      FaceImage img = m.face_image(finv.at(f));
      n.fmap[f] = {r.f.at(img.face), img.rot, img.flip};
    }
    out.maps[g] = n;
  }
  return out;
}

}  // namespace testsupport
}  // namespace towerkit
