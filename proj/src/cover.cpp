#include "towerkit/cover.hpp"

#include <deque>
#include <stdexcept>
#include <utility>

namespace towerkit {

namespace {

std::string sheet_name(int k, const std::string& cell) {
  return std::to_string(k) + "|" + cell;
}

// Sheet prefix of a cover cell named "<sheet>|<base cell>".
int sheet_of(const std::string& cell) {
  return std::stoi(cell.substr(0, cell.find('|')));
}

// Sheet reached by traversing d from sheet k: tree edges stay on their
// sheet, generator edges follow the coset table.
int sheet_after(const Presentation& pres, const CosetTable& table, int k, const Dart& d) {
  if (pres.tree.count(dart_edge(d))) return k;
  return table.follow(k, d);
}

// (cover vertex, base dart) -> the unique cover dart over it starting there.
std::map<std::pair<std::string, Dart>, Dart> lift_index(const Complex2& cover,
                                                        const CombMap& proj) {
  std::map<std::pair<std::string, Dart>, Dart> idx;
  for (const auto& [d, info] : cover.darts) idx[{info.src, proj.dart_image(d)}] = d;
  return idx;
}

struct LiftedCells {
  std::map<std::string, std::string> vmap;
  std::map<Dart, Dart> dimg;  // image of every dart, both orientations
};

// BFS-lifts a cell map into the cover: base_dart gives the base-complex
// image of each source dart, idx turns it into the cover dart at the current
// image vertex.  Disagreements between arrival paths mean the map does not
// lift; on certified one-connected sources that cannot happen.
template <typename BaseDart>
LiftedCells lift_cells(const Complex2& s,
                       const std::map<std::pair<std::string, Dart>, Dart>& idx,
                       const Complex2& cover, const std::string& start,
                       const std::string& start_image, BaseDart base_dart) {
  LiftedCells out;
  out.vmap.emplace(start, start_image);
  std::deque<std::string> q{start};
  while (!q.empty()) {
    std::string v = q.front();
    q.pop_front();
    const std::string iv = out.vmap.at(v);
    for (const Dart& d : s.darts_at(v)) {
      const Dart& img = idx.at({iv, base_dart(d)});
      auto [it, fresh] = out.dimg.emplace(d, img);
      if (!fresh && it->second != img) throw std::logic_error("map lift disagrees across a loop");
      const Dart& rimg = cover.rev(img);
      auto [rit, rfresh] = out.dimg.emplace(s.rev(d), rimg);
      if (!rfresh && rit->second != rimg)
        throw std::logic_error("map lift disagrees across a loop");
      const std::string& w = s.dst(d);
      auto [vit, vfresh] = out.vmap.emplace(w, cover.dst(img));
      if (vfresh) q.push_back(w);
      else if (vit->second != cover.dst(img))
        throw std::logic_error("map lift disagrees across a loop");
    }
  }
  return out;
}

// The cover face over bi.face whose boundary holds `anchored` (a cover dart,
// already un-flipped) at position bi.rot: walks the base boundary backwards
// from that position to recover the face's starting sheet.
FaceImage lift_face_image(const Complex2& base, const Presentation& pres,
                          const CosetTable& table, const FaceImage& bi, const Dart& anchored) {
  const DartPath& u = base.boundary(bi.face);
  const Dart& rb = u[bi.rot];
  int cur;
  if (dart_is_forward(rb)) {
    cur = sheet_of(anchored);
  } else {
    // a reverse lift "-t|e" is traversed from sheet_after(t, e)
    int t = sheet_of(dart_edge(anchored));
    cur = sheet_after(pres, table, t, dart_flip(rb));
  }
  for (std::size_t j = bi.rot; j-- > 0;) cur = sheet_after(pres, table, cur, dart_flip(u[j]));
  return {sheet_name(cur, bi.face), bi.rot, bi.flip};
}

// Deck translates, as lifted-group elements, of the subgroup the given
// basepoint loops generate.
std::set<std::string> deck_subgroup(const LiftedGroup& lg, const std::string& base_id,
                                    const std::vector<DartPath>& subgroup) {
  std::set<std::string> gens;
  for (const DartPath& w : subgroup) {
    DartPath word = loop_word(lg.cover.pres, w);
    int k = lg.cover.table.follow(0, word);
    gens.insert(base_id + "#" + std::to_string(k));
  }
  return subgroup_generated(lg.action.group, gens);
}

}  // namespace

bool collapses_to_point(const Complex2& c) {
  auto ptr = std::make_shared<const Complex2>(c);
  Subcomplex rem = equivariant_collapse(trivial_action(ptr), whole_subcomplex(c));
  if (!rem.faces.empty()) return false;
  Complex2 g = restrict_complex(c, rem);
  return g.vertex_count() >= 1 && is_connected(g) && g.edge_count() + 1 == g.vertex_count();
}

TriState is_simply_connected(const ComplexPtr& c, long coset_limit) {
  if (!c) throw std::invalid_argument("complex is null");
  if (c->vertex_count() == 0 || !is_connected(*c))
    throw std::invalid_argument("complex must be connected");
  Presentation pres = presentation(c);
  if (pres.generators.empty()) return TriState::Yes;
  if (c->face_count() == 0) return TriState::No;  // essential non-tree edge
  if (collapses_to_point(*c)) return TriState::Yes;
  if (coset_limit >= 1) {
    auto table = coset_enumerate(pres, {}, coset_limit);
    if (table) return table->index() == 1 ? TriState::Yes : TriState::No;
  }
  return TriState::Unknown;
}

std::optional<CoverData> universal_cover_finite(const ComplexPtr& c, long limit) {
  if (!c) throw std::invalid_argument("complex is null");
  if (c->vertex_count() == 0 || !is_connected(*c))
    throw std::invalid_argument("complex must be connected");
  Presentation pres = presentation(c);
  if (limit < 1) return std::nullopt;
  auto table = coset_enumerate(pres, {}, limit);
  if (!table) return std::nullopt;
  const int n = static_cast<int>(table->index());

  std::vector<std::string> vs;
  std::vector<EdgeSpec> es;
  std::vector<FaceSpec> fs;
  for (int k = 0; k < n; ++k) {
    for (const auto& v : c->vertices) vs.push_back(sheet_name(k, v));
    for (const auto& e : c->edge_ids()) {
      int t = sheet_after(pres, *table, k, e);
      es.push_back({sheet_name(k, e), sheet_name(k, c->src(e)), sheet_name(t, c->dst(e))});
    }
    for (const auto& [f, w] : c->faces) {
      DartPath bnd;
      int s = k;
      for (const Dart& d : w) {
        int t = sheet_after(pres, *table, s, d);
        bnd.push_back(dart_is_forward(d) ? sheet_name(s, d) : "-" + sheet_name(t, dart_edge(d)));
        s = t;
      }
      if (s != k) throw std::logic_error("face lift does not close");
      fs.push_back({sheet_name(k, f), bnd});
    }
  }
  auto cover = std::make_shared<const Complex2>(Complex2::from_edges(vs, es, fs));

  CombMap proj;
  proj.source = cover;
  proj.target = c;
  for (int k = 0; k < n; ++k) {
    for (const auto& v : c->vertices) proj.vmap[sheet_name(k, v)] = v;
    for (const auto& e : c->edge_ids()) proj.dmap[sheet_name(k, e)] = e;
    for (const auto& [f, w] : c->faces) proj.fmap[sheet_name(k, f)] = {f, 0, false};
  }

  // deck transformations: left multiplication on sheets, via BFS rep words
  std::vector<DartPath> rep(n);
  {
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::deque<int> q{0};
    while (!q.empty()) {
      int k = q.front();
      q.pop_front();
      for (const auto& [d, j] : table->rows[k]) {
        if (!seen[j]) {
          seen[j] = true;
          rep[j] = rep[k];
          rep[j].push_back(d);
          q.push_back(j);
        }
      }
    }
  }
  auto mul_sheet = [&](int i, int j) { return table->follow(i, rep[j]); };
  std::vector<std::string> names(n);
  for (int k = 0; k < n; ++k) names[k] = "g" + std::to_string(k);
  std::map<std::pair<std::string, std::string>, std::string> gt;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gt[{names[i], names[j]}] = names[mul_sheet(i, j)];

  FinAction deck;
  deck.group = FinGroup::from_table(names, gt);
  deck.space = cover;
  for (int j = 0; j < n; ++j) {
    CombMap m;
    m.source = cover;
    m.target = cover;
    for (int k = 0; k < n; ++k) {
      int t = mul_sheet(j, k);
      for (const auto& v : c->vertices) m.vmap[sheet_name(k, v)] = sheet_name(t, v);
      for (const auto& e : c->edge_ids()) m.dmap[sheet_name(k, e)] = sheet_name(t, e);
      for (const auto& [f, w] : c->faces) m.fmap[sheet_name(k, f)] = {sheet_name(t, f), 0, false};
    }
    deck.maps[names[j]] = std::move(m);
  }

  if (!validate_complex(*cover).ok())
    throw std::logic_error("universal cover is not a valid complex");
  if (!validate_map(proj).ok() || !is_covering_map(proj))
    throw std::logic_error("universal cover projection is not a covering");
  if (!validate_action(deck).ok()) throw std::logic_error("deck action failed validation");
  if (is_simply_connected(cover, limit) == TriState::No)
    throw std::logic_error("universal cover failed its one-connectedness check");

  return CoverData{cover, std::move(proj), std::move(deck), std::move(pres), std::move(*table)};
}

std::optional<LiftedGroup> lifted_group(const FinAction& a, long limit) {
  if (!validate_action(a).ok()) throw std::invalid_argument("action is not valid");
  auto ucf = universal_cover_finite(a.space, limit);
  if (!ucf) return std::nullopt;
  const Complex2& cover = *ucf->cover;
  const Complex2& base = *a.space;
  const int n = static_cast<int>(ucf->table.index());
  auto idx = lift_index(cover, ucf->projection);
  const std::string& b0 = ucf->pres.basepoint;
  const std::string x0 = sheet_name(0, b0);
  auto name = [](const std::string& h, int k) { return h + "#" + std::to_string(k); };

  // one lift of act(h) per choice of basepoint sheet
  FinAction lifted;
  lifted.space = ucf->cover;
  std::vector<std::string> elems;
  for (const auto& h : a.group.elements) {
    for (int k = 0; k < n; ++k) {
      LiftedCells cells =
          lift_cells(cover, idx, cover, x0, sheet_name(k, a.vertex_image(h, b0)),
                     [&](const Dart& d) { return a.dart_image(h, ucf->projection.dart_image(d)); });
      CombMap L;
      L.source = ucf->cover;
      L.target = ucf->cover;
      L.vmap = std::move(cells.vmap);
      for (const auto& [d, img] : cells.dimg)
        if (dart_is_forward(d)) L.dmap[d] = img;
      for (const auto& [ff, w] : cover.faces) {
        FaceImage bi = a.act(h).face_image(ucf->projection.fmap.at(ff).face);
        const Dart& D = cells.dimg.at(w.front());
        L.fmap[ff] = lift_face_image(base, ucf->pres, ucf->table, bi, bi.flip ? cover.rev(D) : D);
      }
      lifted.maps[name(h, k)] = std::move(L);
      elems.push_back(name(h, k));
    }
  }

  // multiplication: compose the two lifts and read off the basepoint sheet
  std::map<std::pair<std::string, std::string>, std::string> mt;
  for (const auto& e1 : elems) {
    const std::string h1 = e1.substr(0, e1.rfind('#'));
    for (const auto& e2 : elems) {
      const std::string h2 = e2.substr(0, e2.rfind('#'));
      const std::string& mid = lifted.maps.at(e2).vmap.at(x0);
      const std::string& end = lifted.maps.at(e1).vmap.at(mid);
      mt[{e1, e2}] = name(a.group.mul(h1, h2), sheet_of(end));
    }
  }
  lifted.group = FinGroup::from_table(elems, mt);

  if (!validate_group(lifted.group).ok())
    throw std::logic_error("lifted group table failed validation");
  if (!validate_action(lifted).ok()) throw std::logic_error("lifted action failed validation");
  for (int k = 0; k < n; ++k)
    if (!(lifted.maps.at(name(a.group.id, k)) == ucf->deck.maps.at("g" + std::to_string(k))))
      throw std::logic_error("kernel lifts do not act as the deck group");

  EqMap P;
  P.f = ucf->projection;
  P.source_action = lifted;
  P.target_action = a;
  for (const auto& h : a.group.elements)
    for (int k = 0; k < n; ++k) P.fsharp[name(h, k)] = h;
  auto rep = validate_eq_map(P);
  if (!rep.ok()) throw std::logic_error("lifted projection failed validation: " + rep.to_string());
  if (!classify_eq_map(P).stabilizer_preserving)
    throw std::logic_error("lifted projection is not stabilizer-preserving");

  return LiftedGroup{std::move(*ucf), std::move(lifted), std::move(P)};
}

std::optional<bool> is_h_regular(const std::vector<DartPath>& subgroup, const FinAction& a,
                                 long limit) {
  auto lg = lifted_group(a, limit);
  if (!lg) return std::nullopt;
  std::set<std::string> K = deck_subgroup(*lg, a.group.id, subgroup);
  return is_normal_subgroup(lg->action.group, K);
}

std::optional<IntermediateCover> intermediate_lift(const std::vector<DartPath>& subgroup,
                                                   const FinAction& a, long limit) {
  auto lg = lifted_group(a, limit);
  if (!lg) return std::nullopt;
  std::set<std::string> K = deck_subgroup(*lg, a.group.id, subgroup);
  if (!is_normal_subgroup(lg->action.group, K))
    throw std::invalid_argument("subgroup is not regular for this action");

  const Complex2& cover = *lg->cover.cover;
  // each cell's class: the smallest member of its orbit under K
  std::map<std::string, std::string> cv, ce, cf;
  for (const auto& v : cover.vertices) cv[v] = v;
  for (const auto& e : cover.edge_ids()) ce[e] = e;
  for (const auto& [f, w] : cover.faces) cf[f] = f;
  for (const auto& kappa : K) {
    const CombMap& m = lg->action.act(kappa);
    for (auto& [v, r] : cv) r = std::min(r, m.vertex_image(v));
    for (auto& [e, r] : ce) r = std::min(r, dart_edge(m.dart_image(e)));
    for (auto& [f, r] : cf) r = std::min(r, m.face_image(f).face);
  }
  auto qdart = [&](const Dart& d) -> Dart {
    const std::string& r = ce.at(dart_edge(d));
    return dart_is_forward(d) ? r : "-" + r;
  };

  std::vector<std::string> vs;
  std::vector<EdgeSpec> es;
  std::vector<FaceSpec> fs;
  for (const auto& [v, r] : cv)
    if (v == r) vs.push_back(v);
  for (const auto& [e, r] : ce)
    if (e == r) es.push_back({e, cv.at(cover.src(e)), cv.at(cover.dst(e))});
  for (const auto& [f, r] : cf) {
    if (f != r) continue;
    DartPath bnd;
    for (const Dart& d : cover.boundary(f)) bnd.push_back(qdart(d));
    fs.push_back({f, bnd});
  }
  auto qc = std::make_shared<const Complex2>(Complex2::from_edges(vs, es, fs));
  if (!validate_complex(*qc).ok())
    throw std::logic_error("intermediate cover is not a valid complex");

  CombMap qproj;
  qproj.source = qc;
  qproj.target = a.space;
  const CombMap& proj = lg->cover.projection;
  for (const auto& v : vs) qproj.vmap[v] = proj.vertex_image(v);
  for (const auto& e : qc->edge_ids()) qproj.dmap[e] = proj.dart_image(e);
  for (const auto& [f, w] : qc->faces) qproj.fmap[f] = {proj.fmap.at(f).face, 0, false};
  if (!validate_map(qproj).ok() || !is_covering_map(qproj))
    throw std::logic_error("intermediate projection is not a covering");

  FinGroup qg = quotient_group(lg->action.group, K).first;
  FinAction qact;
  qact.group = qg;
  qact.space = qc;
  for (const auto& cn : qg.elements) {
    const CombMap& L = lg->action.act(cn);  // coset rep: the smallest member
    CombMap qm;
    qm.source = qc;
    qm.target = qc;
    for (const auto& v : vs) qm.vmap[v] = cv.at(L.vertex_image(v));
    for (const auto& e : qc->edge_ids()) qm.dmap[e] = qdart(L.dart_image(e));
    for (const auto& [f, w] : qc->faces) {
      FaceImage fi = L.face_image(f);
      qm.fmap[f] = {cf.at(fi.face), fi.rot, fi.flip};
    }
    qact.maps[cn] = std::move(qm);
  }
  if (!validate_action(qact).ok()) throw std::logic_error("intermediate action failed validation");

  EqMap to_base;
  to_base.f = qproj;
  to_base.source_action = qact;
  to_base.target_action = a;
  for (const auto& cn : qg.elements) to_base.fsharp[cn] = cn.substr(0, cn.rfind('#'));
  auto r = validate_eq_map(to_base);
  if (!r.ok())
    throw std::logic_error("intermediate projection failed validation: " + r.to_string());
  if (!classify_eq_map(to_base).stabilizer_preserving)
    throw std::logic_error("intermediate projection is not stabilizer-preserving");

  return IntermediateCover{qc, std::move(qproj), std::move(qact), std::move(to_base)};
}

EqMap lift_eq_map(const EqMap& m, const LiftedGroup& lifted, long coset_limit) {
  if (!(m.target_action == lifted.projection.target_action))
    throw std::invalid_argument("map target is not the lifted action's base");
  if (!validate_eq_map(m).ok())
    throw std::invalid_argument("map to lift is not a valid equivariant map");
  TriState sc = is_simply_connected(m.f.source, coset_limit);
  if (sc == TriState::No) throw std::invalid_argument("source is not one-connected");
  if (sc == TriState::Unknown) throw OracleUnknown("source is not certified one-connected");

  const Complex2& X = *m.f.source;
  const Complex2& cover = *lifted.cover.cover;
  auto idx = lift_index(cover, lifted.cover.projection);
  const std::string x0 = *X.vertices.begin();
  LiftedCells cells = lift_cells(X, idx, cover, x0, sheet_name(0, m.f.vertex_image(x0)),
                                 [&](const Dart& d) { return m.f.dart_image(d); });
  EqMap out;
  out.f.source = m.f.source;
  out.f.target = lifted.cover.cover;
  out.f.vmap = std::move(cells.vmap);
  for (const auto& [d, img] : cells.dimg)
    if (dart_is_forward(d)) out.f.dmap[d] = img;
  for (const auto& [f, w] : X.faces) {
    FaceImage bi = m.f.face_image(f);
    const Dart& D = cells.dimg.at(w.front());
    out.f.fmap[f] = lift_face_image(*m.f.target, lifted.cover.pres, lifted.cover.table, bi,
                                    bi.flip ? cover.rev(D) : D);
  }

  out.source_action = m.source_action;
  out.target_action = lifted.action;
  const int n = static_cast<int>(lifted.cover.table.index());
  const std::string& fx0 = out.f.vmap.at(x0);
  for (const auto& g : m.source_action.group.elements) {
    const std::string& h = m.fsharp.at(g);
    const std::string& want = out.f.vmap.at(m.source_action.vertex_image(g, x0));
    std::optional<std::string> pick;
    for (int k = 0; k < n; ++k) {
      std::string cand = h + "#" + std::to_string(k);
      if (lifted.action.act(cand).vertex_image(fx0) == want) {
        if (pick) throw std::logic_error("equivariant lift is ambiguous");
        pick = cand;
      }
    }
    if (!pick) throw std::logic_error("no equivariant lift over " + g);
    out.fsharp[g] = *pick;
  }

  auto r = validate_eq_map(out);
  if (!r.ok()) throw std::logic_error("lifted map failed validation: " + r.to_string());
  if (!(compose(out.f, lifted.cover.projection) == m.f))
    throw std::logic_error("lifted map does not project back");
  return out;
}

}  // namespace towerkit
