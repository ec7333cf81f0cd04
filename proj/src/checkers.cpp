#include "towerkit/checkers.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "towerkit/cover.hpp"

namespace towerkit {

namespace {

bool clique(const SimpComplex& s, const std::vector<std::string>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!s.adjacent(vs[i], vs[j])) return false;
  return true;
}

bool chordless(const SimpComplex& s, const std::vector<std::string>& cyc) {
  const std::size_t n = cyc.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool consecutive = (j == i + 1) || (i == 0 && j == n - 1);
      if (!consecutive && s.adjacent(cyc[i], cyc[j])) return false;
    }
  return true;
}

// First full embedded cycle of exactly the given length, with the start
// vertex minimal in the cycle; deterministic via sorted neighbor order.
std::optional<std::vector<std::string>> full_cycle_of_length(const SimpComplex& s,
                                                             std::size_t len) {
  std::vector<std::string> path;
  std::set<std::string> used;
  std::optional<std::vector<std::string>> found;
  auto dfs = [&](auto&& self, const std::string& cur) -> bool {
    if (path.size() == len) {
      if (s.adjacent(cur, path.front()) && chordless(s, path)) {
        found = path;
        return true;
      }
      return false;
    }
    for (const auto& nb : s.neighbors(cur)) {
      if (nb <= path.front() || used.count(nb)) continue;
      path.push_back(nb);
      used.insert(nb);
      if (self(self, nb)) return true;
      path.pop_back();
      used.erase(nb);
    }
    return false;
  };
  for (const auto& v : s.vertices) {
    path = {v};
    used = {v};
    if (dfs(dfs, v)) return found;
  }
  return std::nullopt;
}

// Minimal-measure immersed non-backtracking circuit in a vertex link.  Each
// corner arc may be traversed in both directions; a circuit's measure is the
// sum of the angles of the arcs it crosses.
struct LightCircuit {
  Rational measure;
  std::vector<Dart> nodes;
};

std::optional<LightCircuit> min_circuit(const LinkGraph& g, const AngleAssignment& a) {
  const std::size_t m2 = g.arcs.size() * 2;
  if (m2 == 0) return std::nullopt;
  std::vector<Rational> angle(m2);
  std::vector<Dart> tails(m2), heads(m2);
  for (std::size_t t = 0; t < m2; ++t) {
    const LinkArc& arc = g.arcs[t / 2];
    angle[t] = a.corners.at(arc.face)[arc.pos];
    tails[t] = (t % 2) ? arc.b : arc.a;
    heads[t] = (t % 2) ? arc.a : arc.b;
  }

  std::optional<LightCircuit> best;
  for (std::size_t s = 0; s < m2; ++s) {
    std::vector<std::optional<Rational>> dist(m2);
    std::vector<int> parent(m2, -1);
    dist[s] = angle[s];
    std::set<std::pair<Rational, std::size_t>> pq{{angle[s], s}};
    while (!pq.empty()) {
      const auto [dcur, t] = *pq.begin();
      pq.erase(pq.begin());
      for (std::size_t u = 0; u < m2; ++u) {
        if (u == (t ^ 1) || tails[u] != heads[t]) continue;
        const Rational nd = dcur + angle[u];
        if (!dist[u] || nd < *dist[u]) {
          if (dist[u]) pq.erase({*dist[u], u});
          dist[u] = nd;
          parent[u] = static_cast<int>(t);
          pq.insert({nd, u});
        }
      }
    }
    for (std::size_t t = 0; t < m2; ++t) {
      if (!dist[t] || s == (t ^ 1) || heads[t] != tails[s]) continue;
      if (best && !(*dist[t] < best->measure)) continue;
      LightCircuit cand;
      cand.measure = *dist[t];
      std::vector<std::size_t> chain;
      for (int cur = static_cast<int>(t); cur != -1; cur = parent[cur])
        chain.push_back(static_cast<std::size_t>(cur));
      std::reverse(chain.begin(), chain.end());
      for (const std::size_t tr : chain) cand.nodes.push_back(tails[tr]);
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace

FlagCheck is_flag(const SimpComplex& s) {
  FlagCheck out;
  out.ok = true;
  const std::vector<std::string> vs(s.vertices.begin(), s.vertices.end());
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!s.adjacent(vs[i], vs[j])) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!s.adjacent(vs[i], vs[k]) || !s.adjacent(vs[j], vs[k])) continue;
        if (out.ok && !s.has_simplex({vs[i], vs[j], vs[k]})) {
          out.ok = false;
          out.violating_clique = {vs[i], vs[j], vs[k]};
        }
        for (std::size_t l = k + 1; l < n; ++l)
          if (clique(s, {vs[i], vs[j], vs[k], vs[l]}))
            out.four_cliques.push_back({vs[i], vs[j], vs[k], vs[l]});
      }
    }
  return out;
}

LargenessCheck is_k_large(const SimpComplex& s, int k) {
  if (k < 6) throw std::invalid_argument("largeness needs k >= 6");
  LargenessCheck out;
  const FlagCheck fc = is_flag(s);
  out.four_cliques = fc.four_cliques;
  if (!fc.ok) {
    out.reason = "clique";
    out.witness = fc.violating_clique;
    return out;
  }
  for (int len = 4; len < k; ++len)
    if (auto cyc = full_cycle_of_length(s, static_cast<std::size_t>(len))) {
      out.reason = "cycle";
      out.witness = std::move(*cyc);
      return out;
    }
  out.ok = true;
  return out;
}

LocalLargenessCheck is_locally_k_large(const SimpComplex& s, int k) {
  if (k < 6) throw std::invalid_argument("largeness needs k >= 6");
  LocalLargenessCheck out;
  for (const auto& simplex : s.simplices) {
    SimpComplex lk;
    if (simplex.size() == 1) {
      lk = simp_vertex_link(s, simplex.front());
    } else if (simplex.size() == 2) {
      // apexes of triangles over the edge; discrete at this dimension
      for (const auto& w : s.vertices) {
        std::vector<std::string> tri{simplex[0], simplex[1], w};
        std::sort(tri.begin(), tri.end());
        if (w != simplex[0] && w != simplex[1] && s.has_simplex(tri)) {
          lk.vertices.insert(w);
          lk.simplices.insert({w});
        }
      }
    }  // triangles have empty links
    LargenessCheck check = is_k_large(lk, k);
    if (!check.ok) {
      out.simplex = simplex;
      out.link_check = std::move(check);
      return out;
    }
  }
  out.ok = true;
  return out;
}

ValidationReport validate_angles(const Complex2& c, const AngleAssignment& a) {
  ValidationReport rep;
  for (const auto& [f, w] : c.faces) {
    const auto it = a.corners.find(f);
    if (it == a.corners.end()) {
      rep.add("missing-face", "no angles for face " + f);
      continue;
    }
    if (it->second.size() != w.size()) {
      rep.add("corner-count", "face " + f + " needs " + std::to_string(w.size()) +
                                  " corners, got " + std::to_string(it->second.size()));
      continue;
    }
    for (const Rational& r : it->second)
      if (r < Rational(0)) rep.add("negative-angle", "negative angle on face " + f);
  }
  for (const auto& [f, angles] : a.corners) {
    (void)angles;
    if (!c.has_face(f)) rep.add("unknown-face", "angles name unknown face " + f);
  }
  return rep;
}

CurvatureCheck check_negative_curvature(const Complex2& c, const AngleAssignment& a) {
  if (const auto rep = validate_angles(c, a); !rep.ok())
    throw std::invalid_argument(rep.issues.front().message);
  CurvatureCheck out;
  for (const auto& [f, w] : c.faces) {
    Rational sum;
    for (const Rational& r : a.corners.at(f)) sum = sum + r;
    if (!(sum < Rational(static_cast<std::int64_t>(w.size()) - 2))) {
      out.face = f;
      out.measure = sum;
      return out;
    }
  }
  for (const auto& v : c.vertices) {
    const auto light = min_circuit(link(c, v), a);
    if (light && light->measure < Rational(2)) {
      out.vertex = v;
      out.measure = light->measure;
      out.circuit = light->nodes;
      return out;
    }
  }
  out.ok = true;
  return out;
}

DRCore dr_core(const Complex2& c) { return dr_core(c, whole_subcomplex(c)); }

DRCore dr_core(const Complex2& c, const Subcomplex& k) {
  std::set<std::string> faces = k.faces;
  for (;;) {
    std::map<std::string, int> mult;
    for (const auto& f : faces)
      for (const Dart& d : c.boundary(f)) mult[dart_edge(d)] += 1;
    std::string victim;
    for (const auto& f : faces) {
      for (const Dart& d : c.boundary(f))
        if (mult.at(dart_edge(d)) == 1) {
          victim = f;
          break;
        }
      if (!victim.empty()) break;
    }
    if (victim.empty()) break;
    faces.erase(victim);
  }
  DRCore out;
  Subcomplex seed;
  seed.faces = faces;
  out.core = closure(c, seed);
  out.empty = faces.empty();
  return out;
}

DRCertificate dr_certify(const ComplexPtr& c, const DRBudgets& budgets) {
  if (!c) throw std::invalid_argument("reducibility check needs a complex");
  DRCertificate out;
  TriState one = TriState::Unknown;
  if (!c->vertices.empty() && is_connected(*c))
    one = is_simply_connected(c, static_cast<long>(budgets.coset_limit));
  if (one == TriState::Yes && dr_core(*c).empty) {
    out.status = DRStatus::Certified;
    out.note = "one-connected and face deletion reaches the empty core";
    return out;
  }
  if (auto s = sphere_search(c, budgets.sphere_faces)) {
    out.status = DRStatus::Refuted;
    out.sphere = std::move(s);
    out.note = "near-immersed sphere found";
    return out;
  }
  out.status = DRStatus::Unknown;
  out.note = one == TriState::Yes ? "face core is nonempty; no sphere within budget"
                                  : "not certified one-connected; no sphere within budget";
  return out;
}

std::map<std::string, std::map<int, long>> fineness_profile(const Complex2& g,
                                                            int max_len) {
  if (g.face_count() != 0)
    throw std::invalid_argument("fineness profile needs a complex with no faces");
  if (max_len < 1) throw std::invalid_argument("fineness profile needs max_len >= 1");
  std::map<std::string, std::map<int, long>> out;
  for (const auto& e : g.edge_ids())
    for (int n = 1; n <= max_len; ++n) out[e][n] = 0;

  std::set<std::set<std::string>> seen;  // circuits as edge sets
  for (const auto& start : g.vertices) {
    DartPath path;
    std::set<std::string> used_edges;
    std::set<std::string> used_verts{start};
    auto dfs = [&](auto&& self, const std::string& cur) -> void {
      for (const Dart& d : g.darts_at(cur)) {
        const std::string e = dart_edge(d);
        if (used_edges.count(e)) continue;
        const std::string& nxt = g.dst(d);
        if (nxt == start) {
          std::set<std::string> eset = used_edges;
          eset.insert(e);
          if (seen.insert(eset).second) {
            const int n = static_cast<int>(path.size()) + 1;
            if (n <= max_len)
              for (const auto& ee : eset) out[ee][n] += 1;
          }
          continue;
        }
        if (used_verts.count(nxt)) continue;
        if (static_cast<int>(path.size()) + 1 >= max_len) continue;
        path.push_back(d);
        used_edges.insert(e);
        used_verts.insert(nxt);
        self(self, nxt);
        path.pop_back();
        used_edges.erase(e);
        used_verts.erase(nxt);
      }
    };
    dfs(dfs, start);
  }
  return out;
}

}  // namespace towerkit
