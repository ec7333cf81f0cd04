#include "towerkit/actions.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace towerkit {

FinGroup FinGroup::from_table(std::vector<std::string> elements,
                              std::map<std::pair<std::string, std::string>, std::string> table) {
  FinGroup g;
  g.elements = std::move(elements);
  g.table = std::move(table);
  for (const auto& e : g.elements) {
    bool ident = true;
    for (const auto& x : g.elements) {
      auto l = g.table.find({e, x});
      auto r = g.table.find({x, e});
      if (l == g.table.end() || r == g.table.end() || l->second != x || r->second != x) {
        ident = false;
        break;
      }
    }
    if (ident) {
      g.id = e;
      break;
    }
  }
  return g;
}

namespace {

using Perm = std::map<std::string, std::string>;

Perm complete_perm(const Perm& p, const std::set<std::string>& points) {
  Perm q = p;
  for (const auto& x : points)
    if (!q.count(x)) q[x] = x;
  return q;
}

Perm perm_mul(const Perm& a, const Perm& b) {
  // apply b, then a
  Perm c;
  for (const auto& [x, y] : b) c[x] = a.at(y);
  return c;
}

}  // namespace

FinGroup FinGroup::from_permgens(const std::map<std::string, Perm>& gens, std::size_t max_order) {
  std::set<std::string> points;
  for (const auto& [name, p] : gens) {
    if (name.empty() || name.find('*') != std::string::npos)
      throw std::invalid_argument("bad generator name: '" + name + "'");
    for (const auto& [x, y] : p) {
      points.insert(x);
      points.insert(y);
    }
  }
  std::map<std::string, Perm> full;
  for (const auto& [name, p] : gens) {
    Perm q = complete_perm(p, points);
    std::set<std::string> hit;
    for (const auto& [x, y] : q)
      if (!hit.insert(y).second) throw std::invalid_argument("generator " + name + " is not a permutation");
    full[name] = q;
  }
  Perm ident = complete_perm({}, points);
  for (const auto& [name, p] : full)
    if (name == "e" && p != ident)
      throw std::invalid_argument("generator name 'e' is reserved for the identity");

  std::map<Perm, std::string> names;
  names[ident] = "e";
  std::deque<Perm> queue{ident};
  while (!queue.empty()) {
    Perm p = queue.front();
    queue.pop_front();
    const std::string& pname = names.at(p);
    for (const auto& [gname, gp] : full) {
      Perm q = perm_mul(gp, p);  // p, then the generator
      if (names.count(q)) continue;
      names[q] = (pname == "e") ? gname : pname + "*" + gname;
      if (names.size() > max_order)
        throw std::invalid_argument("permutation closure exceeds " + std::to_string(max_order) +
                                    " elements");
      queue.push_back(q);
    }
  }

  FinGroup g;
  g.id = "e";
  for (const auto& [p, name] : names) g.elements.push_back(name);
  std::sort(g.elements.begin(), g.elements.end());
  for (const auto& [pa, na] : names)
    for (const auto& [pb, nb] : names) g.table[{na, nb}] = names.at(perm_mul(pa, pb));
  return g;
}

bool FinGroup::has(const std::string& g) const {
  return std::find(elements.begin(), elements.end(), g) != elements.end();
}

std::string FinGroup::mul(const std::string& a, const std::string& b) const {
  auto it = table.find({a, b});
  if (it == table.end()) throw std::invalid_argument("no product for (" + a + ", " + b + ")");
  return it->second;
}

std::string FinGroup::inv(const std::string& a) const {
  for (const auto& b : elements)
    if (mul(a, b) == id && mul(b, a) == id) return b;
  throw std::invalid_argument("no inverse for " + a);
}

ValidationReport validate_group(const FinGroup& g) {
  ValidationReport r;
  if (g.elements.empty()) {
    r.add("empty-group", "group has no elements");
    return r;
  }
  std::set<std::string> elems(g.elements.begin(), g.elements.end());
  if (elems.size() != g.elements.size()) r.add("duplicate-element", "element list has duplicates");
  for (const auto& e : g.elements)
    if (e.empty()) r.add("empty-id", "empty element name");

  bool total = true;
  for (const auto& a : g.elements)
    for (const auto& b : g.elements) {
      auto it = g.table.find({a, b});
      if (it == g.table.end()) {
        r.add("table-incomplete", "no product for (" + a + ", " + b + ")");
        total = false;
      } else if (!elems.count(it->second)) {
        r.add("table-range", "product of (" + a + ", " + b + ") is not an element");
        total = false;
      }
    }
  for (const auto& [key, val] : g.table)
    if (!elems.count(key.first) || !elems.count(key.second))
      r.add("table-domain", "table mentions unknown element in (" + key.first + ", " + key.second + ")");
  if (!total) return r;

  if (!elems.count(g.id)) {
    r.add("no-identity", "no two-sided identity found");
    return r;
  }
  for (const auto& x : g.elements)
    if (g.mul(g.id, x) != x || g.mul(x, g.id) != x) {
      r.add("no-identity", "stored identity fails on " + x);
      return r;
    }

  for (const auto& a : g.elements) {
    bool found = false;
    for (const auto& b : g.elements)
      if (g.mul(a, b) == g.id && g.mul(b, a) == g.id) {
        found = true;
        break;
      }
    if (!found) r.add("no-inverse", "element " + a + " has no inverse");
  }

  for (const auto& a : g.elements)
    for (const auto& b : g.elements)
      for (const auto& c : g.elements)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
          r.add("not-associative",
                "(" + a + " " + b + ") " + c + " differs from " + a + " (" + b + " " + c + ")");
          return r;
        }
  return r;
}

FinGroup trivial_group() {
  FinGroup g;
  g.elements = {"e"};
  g.id = "e";
  g.table[{"e", "e"}] = "e";
  return g;
}

FinGroup cyclic_table(std::size_t n, const std::string& gen) {
  if (n == 0) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::string> names(n);
  names[0] = "e";
  for (std::size_t i = 1; i < n; ++i) names[i] = i == 1 ? gen : names[i - 1] + "*" + gen;
  FinGroup g;
  g.elements = names;
  std::sort(g.elements.begin(), g.elements.end());
  g.id = "e";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.table[{names[i], names[j]}] = names[(i + j) % n];
  return g;
}

std::set<std::string> subgroup_generated(const FinGroup& g, const std::set<std::string>& gens) {
  std::set<std::string> h{g.id};
  std::deque<std::string> queue(gens.begin(), gens.end());
  for (const auto& x : gens)
    if (!g.has(x)) throw std::invalid_argument("unknown element " + x);
  h.insert(gens.begin(), gens.end());
  while (!queue.empty()) {
    std::string x = queue.front();
    queue.pop_front();
    std::vector<std::string> next;
    for (const auto& y : h) {
      next.push_back(g.mul(x, y));
      next.push_back(g.mul(y, x));
    }
    next.push_back(g.inv(x));
    for (const auto& z : next)
      if (h.insert(z).second) queue.push_back(z);
  }
  return h;
}

bool is_subgroup(const FinGroup& g, const std::set<std::string>& h) {
  if (!h.count(g.id)) return false;
  for (const auto& a : h) {
    if (!g.has(a)) return false;
    if (!h.count(g.inv(a))) return false;
    for (const auto& b : h)
      if (!h.count(g.mul(a, b))) return false;
  }
  return true;
}

bool is_normal_subgroup(const FinGroup& g, const std::set<std::string>& h) {
  if (!is_subgroup(g, h)) return false;
  for (const auto& x : g.elements)
    for (const auto& a : h)
      if (!h.count(g.mul(g.mul(x, a), g.inv(x)))) return false;
  return true;
}

FinGroup subgroup_as_group(const FinGroup& g, const std::set<std::string>& h) {
  if (!is_subgroup(g, h)) throw std::invalid_argument("not a subgroup");
  FinGroup s;
  s.elements.assign(h.begin(), h.end());
  s.id = g.id;
  for (const auto& a : h)
    for (const auto& b : h) s.table[{a, b}] = g.mul(a, b);
  return s;
}

std::pair<FinGroup, std::map<std::string, std::string>> quotient_group(
    const FinGroup& g, const std::set<std::string>& n) {
  if (!is_normal_subgroup(g, n)) throw std::invalid_argument("not a normal subgroup");
  std::map<std::string, std::string> proj;
  for (const auto& x : g.elements) {
    std::string rep = x;
    for (const auto& a : n) rep = std::min(rep, g.mul(x, a));
    proj[x] = rep;
  }
  std::set<std::string> reps;
  for (const auto& [x, rep] : proj) reps.insert(rep);
  FinGroup q;
  q.elements.assign(reps.begin(), reps.end());
  q.id = proj.at(g.id);
  for (const auto& a : reps)
    for (const auto& b : reps) q.table[{a, b}] = proj.at(g.mul(a, b));
  return {q, proj};
}

bool is_homomorphism(const FinGroup& g, const FinGroup& h,
                     const std::map<std::string, std::string>& phi) {
  for (const auto& x : g.elements) {
    auto it = phi.find(x);
    if (it == phi.end() || !h.has(it->second)) return false;
  }
  for (const auto& a : g.elements)
    for (const auto& b : g.elements)
      if (phi.at(g.mul(a, b)) != h.mul(phi.at(a), phi.at(b))) return false;
  return true;
}

const CombMap& FinAction::act(const std::string& g) const {
  auto it = maps.find(g);
  if (it == maps.end()) throw std::invalid_argument("no map for element " + g);
  return it->second;
}

std::string FinAction::vertex_image(const std::string& g, const std::string& v) const {
  return act(g).vertex_image(v);
}

Dart FinAction::dart_image(const std::string& g, const Dart& d) const {
  return act(g).dart_image(d);
}

std::string FinAction::face_image_of(const std::string& g, const std::string& f) const {
  return act(g).face_image(f).face;
}

bool FinAction::operator==(const FinAction& o) const {
  return group == o.group && *space == *o.space && maps == o.maps;
}

ValidationReport validate_action(const FinAction& a) {
  ValidationReport r = validate_group(a.group);
  if (!a.space) {
    r.add("null-complex", "action has no space");
    return r;
  }
  if (!r.ok()) return r;

  for (const auto& g : a.group.elements)
    if (!a.maps.count(g)) r.add("element-unmapped", "no map for element " + g);
  for (const auto& [g, m] : a.maps) {
    if (!a.group.has(g)) {
      r.add("unknown-element", "map given for unknown element " + g);
      continue;
    }
    if (!m.source || !m.target || !(*m.source == *a.space) || !(*m.target == *a.space)) {
      r.add("wrong-space", "map for " + g + " is not an endomap of the space");
      continue;
    }
    ValidationReport mr = validate_map(m);
    if (!mr.ok()) {
      r.add("invalid-map", "map for " + g + " is invalid: " + mr.to_string());
      continue;
    }
    if (!is_injective(m)) r.add("not-automorphism", "map for " + g + " is not injective");
  }
  if (!r.ok()) return r;

  if (!(a.act(a.group.identity()) == identity_map(a.space)))
    r.add("identity-map", "identity element does not act as the identity");
  for (const auto& g : a.group.elements)
    for (const auto& h : a.group.elements) {
      // (g h).x = g.(h.x): apply h first, then g
      CombMap gh = compose(a.act(h), a.act(g));
      if (!(gh == a.act(a.group.mul(g, h)))) {
        r.add("not-homomorphism", "maps of " + g + " and " + h + " do not compose to their product");
        return r;
      }
    }
  return r;
}

FinAction trivial_action(const ComplexPtr& c) {
  FinAction a;
  a.group = trivial_group();
  a.space = c;
  a.maps["e"] = identity_map(c);
  return a;
}

FinAction action_from_generators(const FinGroup& g, const ComplexPtr& space,
                                 const std::map<std::string, CombMap>& genmaps) {
  for (const auto& [name, m] : genmaps)
    if (!g.has(name)) throw std::invalid_argument("generator " + name + " not in group");
  FinAction a;
  a.group = g;
  a.space = space;
  a.maps[g.identity()] = identity_map(space);
  std::deque<std::string> queue{g.identity()};
  while (!queue.empty()) {
    std::string x = queue.front();
    queue.pop_front();
    for (const auto& [s, sm] : genmaps) {
      std::string y = g.mul(s, x);  // act by x, then by s
      if (a.maps.count(y)) continue;
      a.maps[y] = compose(a.maps.at(x), sm);
      queue.push_back(y);
    }
  }
  if (a.maps.size() != g.order())
    throw std::invalid_argument("generators do not generate the group");
  return a;
}

namespace {

std::vector<std::set<std::string>> orbits_of(
    const std::vector<std::string>& cells,
    const std::function<std::string(const std::string&, const std::string&)>& image,
    const std::vector<std::string>& elements) {
  std::map<std::string, std::string> root;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    if (root.at(x) == x) return x;
    return root[x] = find(root.at(x));
  };
  for (const auto& c : cells) root[c] = c;
  for (const auto& c : cells)
    for (const auto& g : elements) {
      std::string a = find(c), b = find(image(g, c));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::string, std::set<std::string>> classes;
  for (const auto& c : cells) classes[find(c)].insert(c);
  std::vector<std::set<std::string>> out;
  for (auto& [rep, cls] : classes) out.push_back(std::move(cls));
  return out;
}

}  // namespace

std::vector<std::set<std::string>> vertex_orbits(const FinAction& a) {
  std::vector<std::string> cells(a.space->vertices.begin(), a.space->vertices.end());
  return orbits_of(
      cells, [&](const std::string& g, const std::string& v) { return a.vertex_image(g, v); },
      a.group.elements);
}

std::vector<std::set<std::string>> edge_orbits(const FinAction& a) {
  auto ids = a.space->edge_ids();
  std::vector<std::string> cells(ids.begin(), ids.end());
  return orbits_of(
      cells,
      [&](const std::string& g, const std::string& e) {
        return a.space->edge_of(a.dart_image(g, e));
      },
      a.group.elements);
}

std::vector<std::set<std::string>> face_orbits(const FinAction& a) {
  std::vector<std::string> cells;
  for (const auto& [f, w] : a.space->faces) cells.push_back(f);
  return orbits_of(
      cells, [&](const std::string& g, const std::string& f) { return a.face_image_of(g, f); },
      a.group.elements);
}

std::pair<std::size_t, std::size_t> orbit_counts(const FinAction& a) {
  return {vertex_orbits(a).size(), edge_orbits(a).size()};
}

std::set<std::string> stabilizer(const FinAction& a, CellKind kind, const std::string& cell) {
  std::set<std::string> out;
  switch (kind) {
    case CellKind::Vertex:
      if (!a.space->has_vertex(cell)) throw std::invalid_argument("unknown vertex " + cell);
      for (const auto& g : a.group.elements)
        if (a.vertex_image(g, cell) == cell) out.insert(g);
      break;
    case CellKind::Edge: {
      if (!a.space->has_dart(cell)) throw std::invalid_argument("unknown edge " + cell);
      for (const auto& g : a.group.elements)
        if (a.dart_image(g, cell) == cell) out.insert(g);
      break;
    }
    case CellKind::Face:
      if (!a.space->has_face(cell)) throw std::invalid_argument("unknown face " + cell);
      for (const auto& g : a.group.elements) {
        FaceImage img = a.act(g).face_image(cell);
        if (img == FaceImage{cell, 0, false}) out.insert(g);
      }
      break;
  }
  return out;
}

bool is_without_inversions(const FinAction& a) {
  for (const auto& g : a.group.elements) {
    const CombMap& m = a.act(g);
    for (const auto& e : a.space->edge_ids())
      if (m.dart_image(e) == a.space->rev(e)) return false;
    for (const auto& [f, w] : a.space->faces) {
      FaceImage img = m.face_image(f);
      if (img.face == f && !(img.rot == 0 && !img.flip)) return false;
    }
  }
  return true;
}

bool is_invariant(const FinAction& a, const Subcomplex& k) {
  for (const auto& g : a.group.elements) {
    const CombMap& m = a.act(g);
    for (const auto& v : k.vertices)
      if (!k.vertices.count(m.vertex_image(v))) return false;
    for (const auto& d : k.darts)
      if (!k.darts.count(m.dart_image(d))) return false;
    for (const auto& f : k.faces)
      if (!k.faces.count(m.face_image(f).face)) return false;
  }
  return true;
}

Subcomplex fixed_subcomplex(const FinAction& a, const std::set<std::string>& f) {
  if (!is_without_inversions(a))
    throw std::invalid_argument("fixed_subcomplex requires an action without inversions");
  for (const auto& g : f)
    if (!a.group.has(g)) throw std::invalid_argument("unknown element " + g);
  Subcomplex k;
  for (const auto& v : a.space->vertices) {
    bool fixed = true;
    for (const auto& g : f) fixed = fixed && a.vertex_image(g, v) == v;
    if (fixed) k.vertices.insert(v);
  }
  for (const auto& [d, info] : a.space->darts) {
    bool fixed = true;
    for (const auto& g : f) fixed = fixed && a.dart_image(g, d) == d;
    if (fixed) k.darts.insert(d);
  }
  for (const auto& [fc, w] : a.space->faces) {
    bool fixed = true;
    for (const auto& g : f) fixed = fixed && a.act(g).face_image(fc) == FaceImage{fc, 0, false};
    if (fixed) k.faces.insert(fc);
  }
  return k;
}

Subcomplex equivariant_collapse(const FinAction& a, const Subcomplex& z) {
  if (!is_without_inversions(a))
    throw std::invalid_argument("equivariant_collapse requires an action without inversions");
  auto rep = validate_subcomplex(*a.space, z);
  if (!rep.ok()) throw std::invalid_argument("equivariant_collapse: " + rep.to_string());
  if (!is_invariant(a, z)) throw std::invalid_argument("subcomplex is not invariant");

  Subcomplex cur = z;
  while (true) {
    // edge multiplicities across retained face boundaries
    std::map<std::string, std::size_t> mult;
    std::map<std::string, std::string> face_of;
    for (const auto& f : cur.faces)
      for (const auto& d : a.space->boundary(f)) {
        std::string e = a.space->edge_of(d);
        ++mult[e];
        face_of[e] = f;
      }
    std::string free_edge;
    for (const auto& d : cur.darts) {
      if (!dart_is_forward(d)) continue;
      std::string e = a.space->edge_of(d);
      auto it = mult.find(e);
      if (it != mult.end() && it->second == 1) {
        free_edge = e;
        break;  // darts are sorted, so this is the smallest free edge
      }
    }
    if (free_edge.empty()) break;

    std::set<std::string> edge_orbit;
    for (const auto& g : a.group.elements)
      edge_orbit.insert(a.space->edge_of(a.dart_image(g, free_edge)));
    for (const auto& e : edge_orbit) {
      auto it = mult.find(e);
      if (it == mult.end() || it->second != 1)
        throw std::logic_error("orbit of a free edge contains a non-free edge");
      cur.faces.erase(face_of.at(e));
      cur.darts.erase(e);
      cur.darts.erase(a.space->rev(e));
    }
  }
  return cur;
}

FinAction restrict_action(const FinAction& a, const std::set<std::string>& h) {
  FinAction out;
  out.group = subgroup_as_group(a.group, h);
  out.space = a.space;
  for (const auto& g : h) out.maps[g] = a.act(g);
  return out;
}

ValidationReport validate_eq_map(const EqMap& m) {
  ValidationReport r;
  r.merge(validate_action(m.source_action));
  r.merge(validate_action(m.target_action));
  r.merge(validate_map(m.f));
  if (!r.ok()) return r;
  if (!m.f.source || !(*m.f.source == *m.source_action.space))
    r.add("wrong-space", "map source is not the source action's space");
  if (!m.f.target || !(*m.f.target == *m.target_action.space))
    r.add("wrong-space", "map target is not the target action's space");
  if (!r.ok()) return r;

  const FinGroup& G = m.source_action.group;
  const FinGroup& H = m.target_action.group;
  if (!is_homomorphism(G, H, m.fsharp)) {
    r.add("not-homomorphism", "group part is not a homomorphism");
    return r;
  }

  for (const auto& g : G.elements) {
    CombMap lhs = compose(m.source_action.act(g), m.f);
    CombMap rhs = compose(m.f, m.target_action.act(m.fsharp.at(g)));
    if (!(lhs == rhs)) {
      r.add("not-equivariant", "map does not intertwine the actions at element " + g);
      return r;
    }
  }

  EqMapClass cls = classify_eq_map(m);
  if (cls.inclusion) r.note("inclusion", "map and group part are both injective");
  if (cls.zero_surjective) r.note("zero-surjective", "every target vertex is hit");
  if (cls.stabilizer_preserving)
    r.note("stabilizer-preserving", "stabilizers map isomorphically onto image stabilizers");
  return r;
}

namespace {

bool phi_restricts_to_iso(const FinGroup& g, const FinGroup& h,
                          const std::map<std::string, std::string>& phi,
                          const std::set<std::string>& dom, const std::set<std::string>& cod) {
  std::set<std::string> image;
  for (const auto& x : dom) {
    const std::string& y = phi.at(x);
    if (!cod.count(y)) return false;
    if (!image.insert(y).second) return false;
  }
  return image.size() == cod.size();
}

}  // namespace

EqMapClass classify_eq_map(const EqMap& m) {
  EqMapClass cls;
  const FinGroup& G = m.source_action.group;
  const FinGroup& H = m.target_action.group;

  std::set<std::string> fsharp_image;
  bool fsharp_injective = true;
  for (const auto& g : G.elements)
    if (!fsharp_image.insert(m.fsharp.at(g)).second) fsharp_injective = false;
  cls.inclusion = fsharp_injective && is_injective(m.f);
  cls.zero_surjective = is_zero_surjective(m.f);

  cls.stabilizer_preserving = true;
  const Complex2& S = *m.f.source;
  for (const auto& v : S.vertices) {
    auto gs = stabilizer(m.source_action, CellKind::Vertex, v);
    auto hs = stabilizer(m.target_action, CellKind::Vertex, m.f.vertex_image(v));
    if (!phi_restricts_to_iso(G, H, m.fsharp, gs, hs)) cls.stabilizer_preserving = false;
  }
  for (const auto& e : S.edge_ids()) {
    auto gs = stabilizer(m.source_action, CellKind::Edge, e);
    auto hs = stabilizer(m.target_action, CellKind::Edge, m.f.dart_image(e));
    if (!phi_restricts_to_iso(G, H, m.fsharp, gs, hs)) cls.stabilizer_preserving = false;
  }
  for (const auto& [f, w] : S.faces) {
    auto gs = stabilizer(m.source_action, CellKind::Face, f);
    auto hs = stabilizer(m.target_action, CellKind::Face, m.f.face_image(f).face);
    if (!phi_restricts_to_iso(G, H, m.fsharp, gs, hs)) cls.stabilizer_preserving = false;
  }
  return cls;
}

EqMap identity_eq_map(const FinAction& a) {
  EqMap m;
  m.f = identity_map(a.space);
  m.source_action = a;
  m.target_action = a;
  for (const auto& g : a.group.elements) m.fsharp[g] = g;
  return m;
}

EqMap compose(const EqMap& m1, const EqMap& m2) {
  if (!(m1.target_action == m2.source_action))
    throw std::invalid_argument("compose: middle actions differ");
  EqMap m;
  m.f = compose(m1.f, m2.f);
  m.source_action = m1.source_action;
  m.target_action = m2.target_action;
  for (const auto& [g, h] : m1.fsharp) m.fsharp[g] = m2.fsharp.at(h);
  return m;
}

}  // namespace towerkit
