#include "towerkit/complex.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace towerkit {

Complex2 Complex2::from_edges(const std::vector<std::string>& vs,
                              const std::vector<EdgeSpec>& es,
                              const std::vector<FaceSpec>& fs) {
  Complex2 c;
  for (const auto& v : vs) {
    if (v.empty()) throw std::invalid_argument("empty vertex id");
    if (!c.vertices.insert(v).second) throw std::invalid_argument("duplicate vertex id: " + v);
  }
  for (const auto& e : es) {
    if (e.id.empty() || e.id[0] == '-')
      throw std::invalid_argument("bad edge id: '" + e.id + "'");
    if (c.darts.count(e.id)) throw std::invalid_argument("duplicate edge id: " + e.id);
    if (!c.has_vertex(e.from) || !c.has_vertex(e.to))
      throw std::invalid_argument("edge " + e.id + " references unknown vertex");
    c.darts[e.id] = {dart_flip(e.id), e.from, e.to};
    c.darts[dart_flip(e.id)] = {e.id, e.to, e.from};
  }
  for (const auto& f : fs) {
    if (f.id.empty()) throw std::invalid_argument("empty face id");
    if (c.faces.count(f.id)) throw std::invalid_argument("duplicate face id: " + f.id);
    for (const auto& d : f.boundary)
      if (!c.has_dart(d)) throw std::invalid_argument("face " + f.id + " uses unknown dart " + d);
    c.faces[f.id] = f.boundary;
  }
  return c;
}

const DartInfo& Complex2::dart(const Dart& d) const {
  auto it = darts.find(d);
  if (it == darts.end()) throw std::invalid_argument("unknown dart: " + d);
  return it->second;
}

const DartPath& Complex2::boundary(const std::string& f) const {
  auto it = faces.find(f);
  if (it == faces.end()) throw std::invalid_argument("unknown face: " + f);
  return it->second;
}

std::string Complex2::edge_of(const Dart& d) const {
  const auto& r = dart(d).rev;
  return dart_is_forward(d) ? d : r;
}

std::set<std::string> Complex2::edge_ids() const {
  std::set<std::string> out;
  for (const auto& [d, info] : darts) out.insert(dart_is_forward(d) ? d : info.rev);
  return out;
}

std::vector<Dart> Complex2::darts_at(const std::string& v) const {
  std::vector<Dart> out;
  for (const auto& [d, info] : darts)
    if (info.src == v) out.push_back(d);
  return out;
}

ValidationReport validate_complex(const Complex2& c) {
  ValidationReport r;
  for (const auto& v : c.vertices)
    if (v.empty()) r.add("empty-id", "empty vertex id");
  for (const auto& [d, info] : c.darts) {
    if (d.empty()) r.add("empty-id", "empty dart id");
    if (!c.has_dart(info.rev)) {
      r.add("rev-missing", "dart " + d + " reverses to unknown dart " + info.rev);
      continue;
    }
    if (info.rev == d) r.add("rev-fixed-point", "dart " + d + " is its own reverse");
    const auto& back = c.darts.at(info.rev);
    if (back.rev != d)
      r.add("rev-not-involution", "rev(rev(" + d + ")) = " + back.rev);
    if (!c.has_vertex(info.src))
      r.add("vertex-missing", "dart " + d + " starts at unknown vertex " + info.src);
    if (!c.has_vertex(info.dst))
      r.add("vertex-missing", "dart " + d + " ends at unknown vertex " + info.dst);
    if (back.src != info.dst || back.dst != info.src)
      r.add("rev-endpoints", "dart " + d + " and its reverse disagree on endpoints");
  }
  for (const auto& [f, w] : c.faces) {
    if (w.empty()) {
      r.add("empty-face", "face " + f + " has empty boundary");
      continue;
    }
    bool known = true;
    for (const auto& d : w)
      if (!c.has_dart(d)) {
        r.add("dart-missing", "face " + f + " uses unknown dart " + d);
        known = false;
      }
    if (!known) continue;
    for (size_t i = 0; i < w.size(); ++i) {
      const auto& cur = c.darts.at(w[i]);
      const auto& nxt = c.darts.at(w[(i + 1) % w.size()]);
      if (cur.dst != nxt.src)
        r.add("face-not-closed", "face " + f + " breaks between positions " +
                                     std::to_string(i) + " and " + std::to_string((i + 1) % w.size()));
    }
  }
  return r;
}

LinkGraph link(const Complex2& c, const std::string& v) {
  if (!c.has_vertex(v)) throw std::invalid_argument("unknown vertex: " + v);
  LinkGraph g;
  g.vertex = v;
  for (const auto& [d, info] : c.darts)
    if (info.src == v) g.nodes.insert(d);
  for (const auto& [f, w] : c.faces) {
    size_t n = w.size();
    for (size_t i = 0; i < n; ++i) {
      if (c.src(w[i]) != v) continue;
      g.arcs.push_back({f, i, c.rev(w[(i + n - 1) % n]), w[i]});
    }
  }
  return g;
}

ValidationReport validate_subcomplex(const Complex2& c, const Subcomplex& k) {
  ValidationReport r;
  for (const auto& v : k.vertices)
    if (!c.has_vertex(v)) r.add("unknown-cell", "subcomplex vertex " + v + " not in complex");
  for (const auto& d : k.darts) {
    if (!c.has_dart(d)) {
      r.add("unknown-cell", "subcomplex dart " + d + " not in complex");
      continue;
    }
    if (!k.darts.count(c.rev(d)))
      r.add("not-closed", "dart " + d + " present without its reverse");
    if (!k.vertices.count(c.src(d)) || !k.vertices.count(c.dst(d)))
      r.add("not-closed", "dart " + d + " present without its endpoints");
  }
  for (const auto& f : k.faces) {
    if (!c.has_face(f)) {
      r.add("unknown-cell", "subcomplex face " + f + " not in complex");
      continue;
    }
    for (const auto& d : c.boundary(f))
      if (!k.darts.count(d))
        r.add("not-closed", "face " + f + " present without boundary dart " + d);
  }
  return r;
}

Subcomplex closure(const Complex2& c, const Subcomplex& cells) {
  Subcomplex k = cells;
  for (const auto& f : k.faces)
    for (const auto& d : c.boundary(f)) k.darts.insert(d);
  std::set<Dart> ds = k.darts;
  for (const auto& d : ds) {
    k.darts.insert(c.rev(d));
    k.vertices.insert(c.src(d));
    k.vertices.insert(c.dst(d));
  }
  return k;
}

Subcomplex whole_subcomplex(const Complex2& c) {
  Subcomplex k;
  k.vertices = c.vertices;
  for (const auto& [d, info] : c.darts) k.darts.insert(d);
  for (const auto& [f, w] : c.faces) k.faces.insert(f);
  return k;
}

Subcomplex span(const Complex2& c, const Subcomplex& k0) {
  Subcomplex k = closure(c, k0);
  // Edges first: an edge enters when both endpoints are present; this cannot
  // create new vertices, so one pass suffices.  Faces follow the same way.
  for (const auto& [d, info] : c.darts)
    if (k.vertices.count(info.src) && k.vertices.count(info.dst)) k.darts.insert(d);
  for (const auto& [f, w] : c.faces) {
    bool inside = true;
    for (const auto& d : w)
      if (!k.darts.count(d)) { inside = false; break; }
    if (inside) k.faces.insert(f);
  }
  return k;
}

bool is_full(const Complex2& c, const Subcomplex& k) { return span(c, k) == k; }

Complex2 restrict_complex(const Complex2& c, const Subcomplex& k) {
  auto rep = validate_subcomplex(c, k);
  if (!rep.ok()) throw std::invalid_argument("restrict_complex: " + rep.to_string());
  Complex2 out;
  out.vertices = k.vertices;
  for (const auto& d : k.darts) out.darts[d] = c.dart(d);
  for (const auto& f : k.faces) out.faces[f] = c.boundary(f);
  return out;
}

Complex2 rename_cells(const Complex2& c,
                      const std::map<std::string, std::string>& vmap,
                      const std::map<std::string, std::string>& emap,
                      const std::map<std::string, std::string>& fmap) {
  auto vren = [&](const std::string& v) {
    auto it = vmap.find(v);
    return it == vmap.end() ? v : it->second;
  };
  auto dren = [&](const Dart& d) {
    std::string e = dart_edge(d);
    auto it = emap.find(e);
    std::string e2 = it == emap.end() ? e : it->second;
    return dart_is_forward(d) ? e2 : dart_flip(e2);
  };
  Complex2 out;
  for (const auto& v : c.vertices) out.vertices.insert(vren(v));
  if (out.vertices.size() != c.vertices.size())
    throw std::invalid_argument("rename_cells: vertex renaming not injective");
  for (const auto& [d, info] : c.darts)
    out.darts[dren(d)] = {dren(info.rev), vren(info.src), vren(info.dst)};
  if (out.darts.size() != c.darts.size())
    throw std::invalid_argument("rename_cells: edge renaming not injective");
  for (const auto& [f, w] : c.faces) {
    auto it = fmap.find(f);
    std::string f2 = it == fmap.end() ? f : it->second;
    DartPath w2;
    for (const auto& d : w) w2.push_back(dren(d));
    if (!out.faces.emplace(f2, w2).second)
      throw std::invalid_argument("rename_cells: face renaming not injective");
  }
  return out;
}

Complex2 barycentric_subdivision(const Complex2& c) {
  std::vector<std::string> vs;
  std::vector<EdgeSpec> es;
  std::vector<FaceSpec> fs;
  for (const auto& v : c.vertices) vs.push_back("p." + v);
  auto edges = c.edge_ids();
  for (const auto& e : edges) vs.push_back("m." + e);
  for (const auto& [f, w] : c.faces) vs.push_back("o." + f);

  auto pv = [](const std::string& v) { return "p." + v; };
  auto mv = [&](const Dart& d) { return "m." + c.edge_of(d); };

  // Edge halves: for the canonical dart e of each edge, e.a runs src -> mid
  // and e.b runs mid -> dst.
  for (const auto& e : edges)
    if (c.has_dart(e)) {
      es.push_back({e + ".a", pv(c.src(e)), mv(e)});
      es.push_back({e + ".b", mv(e), pv(c.dst(e))});
    }

  // Traversal of d's first half (src(d) -> mid) and second half (mid -> dst(d))
  // in terms of those edges.
  auto first_half = [&](const Dart& d) -> Dart {
    std::string e = c.edge_of(d);
    return d == e ? Dart(e + ".a") : dart_flip(e + ".b");
  };
  auto second_half = [&](const Dart& d) -> Dart {
    std::string e = c.edge_of(d);
    return d == e ? Dart(e + ".b") : dart_flip(e + ".a");
  };

  for (const auto& [f, w] : c.faces) {
    size_t n = w.size();
    std::string center = "o." + f;
    for (size_t i = 0; i < n; ++i) {
      es.push_back({f + ".c" + std::to_string(i), center, pv(c.src(w[i]))});
      es.push_back({f + ".m" + std::to_string(i), center, mv(w[i])});
    }
    for (size_t i = 0; i < n; ++i) {
      std::string ci = f + ".c" + std::to_string(i);
      std::string cj = f + ".c" + std::to_string((i + 1) % n);
      std::string mi = f + ".m" + std::to_string(i);
      fs.push_back({f + ".t" + std::to_string(i) + "a",
                    {ci, first_half(w[i]), dart_flip(mi)}});
      fs.push_back({f + ".t" + std::to_string(i) + "b",
                    {mi, second_half(w[i]), dart_flip(cj)}});
    }
  }
  return Complex2::from_edges(vs, es, fs);
}

std::vector<std::set<std::string>> connected_components(const Complex2& c) {
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    auto& p = parent[x];
    if (p.empty() || p == x) { parent[x] = x; return x; }
    return parent[x] = find(p);
  };
  for (const auto& v : c.vertices) find(v);
  for (const auto& [d, info] : c.darts) {
    auto a = find(info.src), b = find(info.dst);
    if (a != b) parent[a] = b;
  }
  std::map<std::string, std::set<std::string>> comps;
  for (const auto& v : c.vertices) comps[find(v)].insert(v);
  std::vector<std::set<std::string>> out;
  for (auto& [root, vs] : comps) out.push_back(std::move(vs));
  return out;
}

bool is_connected(const Complex2& c) { return connected_components(c).size() <= 1; }

long euler_characteristic(const Complex2& c) {
  return static_cast<long>(c.vertex_count()) - static_cast<long>(c.edge_count()) +
         static_cast<long>(c.face_count());
}

SimpComplex SimpComplex::from_maximal(const std::vector<std::string>& vs,
                                      const std::vector<std::vector<std::string>>& maximal) {
  SimpComplex s;
  s.vertices.insert(vs.begin(), vs.end());
  for (auto simp : maximal) {
    std::sort(simp.begin(), simp.end());
    if (simp.size() > 3) throw std::invalid_argument("simplex of dimension > 2");
    for (const auto& v : simp)
      if (!s.vertices.count(v)) throw std::invalid_argument("simplex uses unknown vertex " + v);
    // downward closure over all nonempty subsets
    size_t n = simp.size();
    for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
      std::vector<std::string> sub;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t(1) << i)) sub.push_back(simp[i]);
      s.simplices.insert(sub);
    }
  }
  for (const auto& v : s.vertices) s.simplices.insert({v});
  return s;
}

bool SimpComplex::has_simplex(std::vector<std::string> s) const {
  std::sort(s.begin(), s.end());
  return simplices.count(s) > 0;
}

bool SimpComplex::adjacent(const std::string& u, const std::string& v) const {
  if (u == v) return false;
  return has_simplex({u, v});
}

std::set<std::string> SimpComplex::neighbors(const std::string& v) const {
  std::set<std::string> out;
  for (const auto& s : simplices)
    if (s.size() == 2) {
      if (s[0] == v) out.insert(s[1]);
      if (s[1] == v) out.insert(s[0]);
    }
  return out;
}

ValidationReport validate_simp(const SimpComplex& s) {
  ValidationReport r;
  for (const auto& simp : s.simplices) {
    if (simp.empty() || simp.size() > 3) {
      r.add("bad-simplex", "simplex of size " + std::to_string(simp.size()));
      continue;
    }
    if (!std::is_sorted(simp.begin(), simp.end()) ||
        std::adjacent_find(simp.begin(), simp.end()) != simp.end()) {
      r.add("bad-simplex", "simplex not a sorted duplicate-free vertex list");
      continue;
    }
    for (const auto& v : simp)
      if (!s.vertices.count(v)) r.add("unknown-vertex", "simplex uses unknown vertex " + v);
    if (simp.size() >= 2) {
      // downward closure check over facets
      for (size_t skip = 0; skip < simp.size(); ++skip) {
        std::vector<std::string> facet;
        for (size_t i = 0; i < simp.size(); ++i)
          if (i != skip) facet.push_back(simp[i]);
        if (!s.simplices.count(facet))
          r.add("not-closed", "simplex present without one of its facets");
      }
    }
  }
  return r;
}

SimpComplex simp_vertex_link(const SimpComplex& s, const std::string& v) {
  if (!s.vertices.count(v)) throw std::invalid_argument("unknown vertex: " + v);
  SimpComplex out;
  for (const auto& simp : s.simplices) {
    auto it = std::find(simp.begin(), simp.end(), v);
    if (it == simp.end()) continue;
    std::vector<std::string> rest;
    for (const auto& u : simp)
      if (u != v) rest.push_back(u);
    if (rest.empty()) continue;
    for (const auto& u : rest) out.vertices.insert(u);
    out.simplices.insert(rest);
  }
  return out;
}

}  // namespace towerkit
