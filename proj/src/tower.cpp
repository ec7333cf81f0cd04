#include "towerkit/tower.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "towerkit/diagrams.hpp"
#include "towerkit/lazy_cover.hpp"
#include "towerkit/presentation.hpp"

namespace towerkit {

namespace {

std::string first_issue(const ValidationReport& r) {
  return r.issues.empty() ? std::string("valid") : r.issues.front().message;
}

std::set<std::string> fsharp_image(const EqMap& m) {
  std::set<std::string> out;
  for (const auto& [g, h] : m.fsharp) out.insert(h);
  return out;
}

DartPath path_image(const CombMap& m, const DartPath& p) {
  DartPath out;
  out.reserve(p.size());
  for (const auto& d : p) out.push_back(m.dart_image(d));
  return out;
}

// Lexicographically smallest shortest dart path between two vertices:
// distances to the target first, then a greedy walk taking the smallest
// usable dart at each step.
DartPath shortest_lex_path(const Complex2& c, const std::string& from, const std::string& to) {
  if (from == to) return {};
  std::map<std::string, long> dist;
  dist[to] = 0;
  std::queue<std::string> q;
  q.push(to);
  while (!q.empty()) {
    std::string v = q.front();
    q.pop();
    for (const auto& d : c.darts_at(v)) {
      const std::string& w = c.dst(d);
      if (dist.count(w)) continue;
      dist[w] = dist.at(v) + 1;
      q.push(w);
    }
  }
  if (!dist.count(from)) throw std::invalid_argument("no path joins " + from + " and " + to);
  DartPath path;
  std::string cur = from;
  while (cur != to) {
    const long need = dist.at(cur) - 1;
    bool found = false;
    for (const auto& d : c.darts_at(cur)) {  // sorted, so the first hit is smallest
      auto it = dist.find(c.dst(d));
      if (it == dist.end() || it->second != need) continue;
      path.push_back(d);
      cur = c.dst(d);
      found = true;
      break;
    }
    if (!found) throw std::logic_error("distance table lost its gradient");
  }
  return path;
}

long orbit_count_under(const FinAction& a, const std::set<std::string>& elements,
                       const std::set<std::string>& seeds) {
  std::map<std::string, std::string> root;
  for (const auto& v : seeds) root[v] = v;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) {
    std::string r = v;
    while (root.at(r) != r) r = root.at(r);
    root[v] = r;
    return r;
  };
  for (const auto& v : seeds)
    for (const auto& h : elements) {
      const std::string w = a.vertex_image(h, v);
      if (!root.count(w)) throw std::logic_error("image vertices drift outside their orbit set");
      const std::string rv = find(v), rw = find(w);
      if (rv != rw) root[std::max(rv, rw)] = std::min(rv, rw);
    }
  std::set<std::string> roots;
  for (const auto& v : seeds) roots.insert(find(v));
  return static_cast<long>(roots.size());
}

// Identity-on-cells embedding of a restricted complex into its ambient one.
CombMap inclusion_map(const ComplexPtr& sub, const ComplexPtr& ambient) {
  CombMap m;
  m.source = sub;
  m.target = ambient;
  for (const auto& v : sub->vertices) m.vmap[v] = v;
  for (const auto& e : sub->edge_ids()) m.dmap[e] = e;
  for (const auto& [f, w] : sub->faces) m.fmap[f] = {f, 0, false};
  return m;
}

// The named subgroup acting on an invariant closed subcomplex.
FinAction action_on(const FinAction& a, const FinGroup& sub, const ComplexPtr& subc,
                    const Subcomplex& k) {
  FinAction out;
  out.group = sub;
  out.space = subc;
  for (const auto& h : sub.elements) {
    const CombMap& big = a.act(h);
    CombMap m;
    m.source = subc;
    m.target = subc;
    for (const auto& v : k.vertices) {
      const std::string w = big.vertex_image(v);
      if (!k.vertices.count(w)) throw std::logic_error("stage subcomplex moves off itself");
      m.vmap[v] = w;
    }
    for (const auto& d : k.darts) {
      if (!dart_is_forward(d)) continue;
      const Dart w = big.dart_image(d);
      if (!k.darts.count(w)) throw std::logic_error("stage subcomplex moves off itself");
      m.dmap[d] = w;
    }
    for (const auto& f : k.faces) {
      const FaceImage fi = big.face_image(f);
      if (!k.faces.count(fi.face)) throw std::logic_error("stage subcomplex moves off itself");
      m.fmap[f] = fi;
    }
    out.maps[h] = std::move(m);
  }
  return out;
}

std::map<std::string, std::string> identity_names(const FinGroup& g) {
  std::map<std::string, std::string> out;
  for (const auto& e : g.elements) out[e] = e;
  return out;
}

struct Stage {
  EqMap next;
  TowerStep step;
};

// Restrict a lift to the span (or plain closure) of its image, carried by
// the image subgroup; returns the tightened lift and the inclusion stage.
Stage restrict_stage(const EqMap& g, bool full) {
  const ComplexPtr& c = g.f.target;
  const Subcomplex img = image_subcomplex(g.f);
  const Subcomplex sub = full ? span(*c, img) : closure(*c, img);
  const FinGroup s = subgroup_as_group(g.target_action.group, fsharp_image(g));
  ComplexPtr subc = std::make_shared<const Complex2>(restrict_complex(*c, sub));
  FinAction level = action_on(g.target_action, s, subc, sub);

  Stage out;
  out.next.f.source = g.f.source;
  out.next.f.target = subc;
  out.next.f.vmap = g.f.vmap;
  out.next.f.dmap = g.f.dmap;
  out.next.f.fmap = g.f.fmap;
  out.next.source_action = g.source_action;
  out.next.target_action = level;
  out.next.fsharp = g.fsharp;

  out.step.kind = full ? StepKind::FullInclusion : StepKind::Inclusion;
  out.step.map.f = inclusion_map(subc, c);
  out.step.map.source_action = level;
  out.step.map.target_action = g.target_action;
  out.step.map.fsharp = identity_names(s);
  return out;
}

struct StagePair {
  EqMap next;
  TowerStep inc;
  TowerStep cov;
};

// When an embedded cover stage claims no orbit defect with a bijective
// group projection that preserves stabilizers, the stage map must embed;
// anything else is an engine defect, not an input defect.
void check_embedding_stall(const TowerStep& cov) {
  const EqMap& m = cov.map;
  const std::set<std::string> img = fsharp_image(m);
  bool bijective = img.size() == m.target_action.group.elements.size() &&
                   m.fsharp.size() == m.source_action.group.elements.size() &&
                   img.size() == m.fsharp.size();
  if (!bijective) return;
  if (complexity(m).defect != 0) return;
  if (!classify_eq_map(m).stabilizer_preserving) return;
  std::set<std::string> vimg;
  for (const auto& [v, w] : m.f.vmap) vimg.insert(w);
  if (!is_injective(m.f) || vimg.size() != m.f.target->vertices.size())
    throw std::logic_error("stalled cover stage fails to embed");
}

// Lift one stage through the one-connected cover materialized lazily: the
// lift of the map, a window closed under the transported group, and the
// truncated cover stage.  nullopt when the word oracle cannot settle an
// identification.
std::optional<StagePair> lazy_stage(const EqMap& f, bool full, const TowerBudgets& b) {
  const ComplexPtr& y = f.f.target;
  const FinAction& base_action = f.target_action;
  const FinGroup& g = f.source_action.group;
  const ComplexPtr& x = f.f.source;
  try {
    LazyCover lc(y, WordOracle::standard(y, b.coset_limit, b.area_limit));
    const std::string b0 = *y->vertices.begin();

    // Anchor the lift at the tree basepoint of the source.
    Presentation xp = presentation(x);
    const std::string& x0 = xp.basepoint;
    const std::string anchor = lc.lift_vertex(shortest_lex_path(*y, b0, f.f.vertex_image(x0)));

    auto end_of = [&](const std::string& at, const DartPath& lifted) {
      return lifted.empty() ? at : lc.dart_head(lifted.back());
    };

    // Vertices lift along spanning-tree paths, edges by one dart each, and
    // faces at the window vertex matching the start of the image boundary.
    std::map<std::string, std::string> vt;
    for (const auto& v : x->vertices) {
      const DartPath img = path_image(f.f, tree_path(xp, v));
      vt[v] = end_of(anchor, lc.lift_path(anchor, img));
    }
    std::map<Dart, Dart> dt;
    for (const auto& e : x->edge_ids()) {
      const Dart ld = lc.lift_dart(vt.at(x->src(e)), f.f.dart_image(e));
      if (lc.dart_head(ld) != vt.at(x->dst(e)))
        throw std::logic_error("edge lift disagrees with its endpoint lifts");
      dt[e] = ld;
    }
    auto face_anchor_pos = [](const FaceImage& fi, std::size_t n) {
      return fi.flip ? (fi.rot + 1) % n : (n - fi.rot % n) % n;
    };
    std::map<std::string, FaceImage> ft;
    for (const auto& [face, w] : x->faces) {
      const FaceImage fi = f.f.face_image(face);
      const std::size_t j0 = face_anchor_pos(fi, w.size());
      const std::string at = vt.at(x->src(w[j0]));
      ft[face] = {lc.lift_face(at, fi.face), fi.rot, fi.flip};
    }

    auto base_of = [&](const std::string& cv) -> std::string {
      const DartPath& rep = lc.representative(cv);
      return rep.empty() ? b0 : y->dst(rep.back());
    };

    // Probe every dart and face around the image vertices so that the span
    // computed inside the window agrees with the span inside the full cover.
    std::set<std::string> sv;
    for (const auto& [v, cv] : vt) sv.insert(cv);
    if (full) {
      for (const auto& cv : sv)
        for (const auto& d : y->darts_at(base_of(cv))) lc.lift_dart(cv, d);
      for (const auto& [bf, w] : y->faces)
        for (const auto& cv : sv) {
          if (base_of(cv) != y->src(w.front())) continue;
          std::string cur = cv;
          bool inside = true;
          for (const auto& d : w) {
            cur = lc.dart_head(lc.lift_dart(cur, d));
            if (!sv.count(cur)) {
              inside = false;
              break;
            }
          }
          if (inside && cur == cv) lc.lift_face(cv, bf);
        }
    }

    // Transport of the source group across the cover: each element moves a
    // window vertex by lifting the moved base path from the moved anchor.
    std::map<std::string, std::string> anchor_of;
    for (const auto& ge : g.elements)
      anchor_of[ge] = vt.at(f.source_action.vertex_image(ge, x0));
    const DartPath anchor_rep = lc.representative(anchor);
    std::map<std::pair<std::string, std::string>, std::string> tv;
    auto transport_vertex = [&](const std::string& ge, const std::string& cv) {
      const auto key = std::make_pair(ge, cv);
      auto it = tv.find(key);
      if (it != tv.end()) return it->second;
      const DartPath delta = concat_paths(reversed_path(anchor_rep), lc.representative(cv));
      const DartPath moved = path_image(base_action.act(f.fsharp.at(ge)), delta);
      const std::string out = end_of(anchor_of.at(ge), lc.lift_path(anchor_of.at(ge), moved));
      tv[key] = out;
      return out;
    };
    auto transport_dart = [&](const std::string& ge, const std::string& tail, const Dart& base) {
      return lc.lift_dart(transport_vertex(ge, tail),
                          base_action.act(f.fsharp.at(ge)).dart_image(base));
    };
    auto transport_face = [&](const std::string& ge, const std::string& cf,
                              const Complex2& window, const CombMap& proj) {
      const std::string bf = proj.face_image(cf).face;
      const FaceImage gi = base_action.act(f.fsharp.at(ge)).face_image(bf);
      const DartPath& w = window.boundary(cf);
      const std::size_t j0 = face_anchor_pos(gi, w.size());
      const std::string at = transport_vertex(ge, window.src(w[j0]));
      return std::make_pair(lc.lift_face(at, gi.face), gi);
    };

    // Saturate the window under the transported group.
    std::size_t before = 0;
    for (;;) {
      LazySnapshot snap = lc.materialized();
      const std::size_t count =
          snap.complex->vertex_count() + snap.complex->edge_count() + snap.complex->face_count();
      if (count == before) break;
      before = count;
      for (const auto& ge : g.elements) {
        for (const auto& v : snap.complex->vertices) transport_vertex(ge, v);
        for (const auto& e : snap.complex->edge_ids())
          transport_dart(ge, snap.complex->src(e), snap.projection.dart_image(e));
        for (const auto& [cf, w] : snap.complex->faces)
          transport_face(ge, cf, *snap.complex, snap.projection);
      }
    }
    const LazySnapshot snap = lc.materialized();

    // Group the transports: elements that move the window identically over
    // the same base element collapse to one stage element, named by their
    // first preimage.
    using Signature = std::tuple<std::string, std::map<std::string, std::string>,
                                 std::map<Dart, Dart>, std::map<std::string, std::string>>;
    std::map<Signature, std::string> by_sig;
    std::vector<std::string> wnames;
    std::map<std::string, std::string> rep_of;
    std::map<std::string, CombMap> wmaps;
    for (const auto& ge : g.elements) {
      Signature sig;
      std::get<0>(sig) = f.fsharp.at(ge);
      CombMap t;
      t.source = snap.complex;
      t.target = snap.complex;
      for (const auto& v : snap.complex->vertices) t.vmap[v] = transport_vertex(ge, v);
      for (const auto& e : snap.complex->edge_ids())
        t.dmap[e] = transport_dart(ge, snap.complex->src(e), snap.projection.dart_image(e));
      for (const auto& [cf, w] : snap.complex->faces) {
        auto [tf, gi] = transport_face(ge, cf, *snap.complex, snap.projection);
        t.fmap[cf] = {tf, gi.rot, gi.flip};
        std::get<3>(sig)[cf] = tf;
      }
      std::get<1>(sig) = t.vmap;
      std::get<2>(sig) = t.dmap;
      auto [it, fresh] = by_sig.emplace(sig, ge);
      if (fresh) {
        wnames.push_back(ge);
        wmaps[ge] = std::move(t);
      }
      rep_of[ge] = it->second;
    }
    std::map<std::pair<std::string, std::string>, std::string> table;
    for (const auto& a : wnames)
      for (const auto& c : wnames) table[{a, c}] = rep_of.at(g.mul(a, c));
    FinAction window_action;
    window_action.group = FinGroup::from_table(wnames, table);
    window_action.space = snap.complex;
    window_action.maps = std::move(wmaps);
    {
      auto rep = validate_action(window_action);
      if (!rep.ok())
        throw std::logic_error("transported window action is invalid: " + first_issue(rep));
    }

    TowerStep cov;
    cov.kind = StepKind::Cover;
    cov.map.f = snap.projection;
    cov.map.source_action = window_action;
    cov.map.target_action = base_action;
    for (const auto& wn : wnames) cov.map.fsharp[wn] = f.fsharp.at(wn);
    cov.cover_truncated = true;
    cov.cover_note = "window of the one-connected cover; a covering over the retained stage";
    {
      auto rep = validate_eq_map(cov.map);
      if (!rep.ok()) throw std::logic_error("window projection is not equivariant: " + first_issue(rep));
    }

    EqMap ftil;
    ftil.f.source = x;
    ftil.f.target = snap.complex;
    ftil.f.vmap = vt;
    ftil.f.dmap = dt;
    ftil.f.fmap = ft;
    ftil.source_action = f.source_action;
    ftil.target_action = window_action;
    ftil.fsharp = rep_of;
    {
      auto rep = validate_eq_map(ftil);
      if (!rep.ok()) throw std::logic_error("window lift is not equivariant: " + first_issue(rep));
    }

    Stage s = restrict_stage(ftil, full);
    return StagePair{std::move(s.next), std::move(s.step), std::move(cov)};
  } catch (const OracleUnknown&) {
    return std::nullopt;
  }
}

bool eq_maps_equal(const EqMap& a, const EqMap& b) {
  return a.f == b.f && a.fsharp == b.fsharp && a.source_action == b.source_action &&
         a.target_action == b.target_action;
}

// The stages must reproduce the original map on every cell and element.
void check_factorization(const EqMap& m, const EqMap& lift, const EqMap& composite) {
  EqMap whole = compose(lift, composite);
  bool ok = whole.f.vmap == m.f.vmap && whole.f.dmap == m.f.dmap &&
            whole.fsharp == m.fsharp && whole.source_action == m.source_action &&
            whole.target_action == m.target_action && validate_map(whole.f).ok();
  if (ok)
    for (const auto& [face, fi] : m.f.fmap) ok = ok && whole.f.fmap.at(face).face == fi.face;
  if (!ok) throw std::logic_error("tower fails to factor the map");
}

std::optional<TowerLift> run_engine(const EqMap& m, bool full, const TowerBudgets& b) {
  {
    auto rep = validate_eq_map(m);
    if (!rep.ok())
      throw std::invalid_argument("not a valid equivariant map: " + first_issue(rep));
  }
  const TriState src = is_simply_connected(m.f.source, b.coset_limit);
  if (src == TriState::No) throw std::invalid_argument("source is not one-connected");
  if (src == TriState::Unknown) return std::nullopt;

  const long d0 = static_cast<long>(orbit_counts(m.source_action).first);
  Stage first = restrict_stage(m, full);
  std::vector<TowerStep> steps{first.step};
  EqMap f = std::move(first.next);
  std::vector<Complexity> ledger{complexity(f)};

  for (;;) {
    std::optional<StagePair> next;
    if (auto lg = lifted_group(f.target_action, b.coset_limit)) {
      EqMap lifted;
      try {
        lifted = lift_eq_map(f, *lg, b.coset_limit);
      } catch (const OracleUnknown&) {
        return std::nullopt;
      }
      Stage s = restrict_stage(lifted, full);
      TowerStep cov;
      cov.kind = StepKind::Cover;
      cov.map = lg->projection;
      cov.cover_note = "one-connected cover; deck moves are the kernel of the stage projection";
      next = StagePair{std::move(s.next), std::move(s.step), std::move(cov)};
    } else {
      next = lazy_stage(f, full, b);
      if (!next) return std::nullopt;
    }
    const Complexity c = complexity(next->next);
    if (ledger.back() < c) throw std::logic_error("lift complexity increased");
    if (c == ledger.back()) {
      ledger.push_back(c);
      break;
    }
    ledger.push_back(c);
    if (!next->cov.cover_truncated) check_embedding_stall(next->cov);
    steps.insert(steps.begin(), {std::move(next->inc), std::move(next->cov)});
    f = std::move(next->next);
    if (static_cast<long>(orbit_counts(f.source_action).first) != d0)
      throw std::logic_error("source orbit count drifted");
  }

  const TriState top = is_simply_connected(f.f.target, b.coset_limit);
  if (top == TriState::No) throw std::logic_error("stalled stage is not one-connected");
  if (top == TriState::Unknown) return std::nullopt;

  TowerCert cert;
  cert.steps = steps;
  cert.length = steps.size();
  cert.ledger = std::move(ledger);
  cert.composite = steps.front().map;
  for (std::size_t i = 1; i < steps.size(); ++i)
    cert.composite = compose(cert.composite, steps[i].map);
  check_factorization(m, f, cert.composite);
  return TowerLift{std::move(f), std::move(cert)};
}

}  // namespace

std::string to_string(const Complexity& c) {
  return "(" + std::to_string(c.defect) + ", " + std::to_string(c.edges) + ")";
}

Complexity complexity(const EqMap& m) {
  const long d = static_cast<long>(orbit_counts(m.source_action).first);
  std::set<std::string> seeds;
  for (const auto& [v, w] : m.f.vmap) seeds.insert(w);
  const long r = orbit_count_under(m.target_action, fsharp_image(m), seeds);
  const long e = static_cast<long>(orbit_counts(m.target_action).second);
  return {d - r, e};
}

ValidationReport validate_tower(const TowerCert& t) {
  ValidationReport r;
  if (t.steps.empty()) {
    r.add("empty", "a tower needs at least one stage");
    return r;
  }
  if (t.length > t.steps.size())
    r.add("length", "recorded length exceeds the stage count");

  bool all_inclusions_full = true;
  bool any_truncated = false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TowerStep& st = t.steps[i];
    const std::string where = "stage " + std::to_string(i);
    try {
    auto mr = validate_eq_map(st.map);
    if (!mr.ok()) {
      r.add("step-map", where + " carries an invalid map: " + first_issue(mr));
      continue;
    }
    switch (st.kind) {
      case StepKind::Inclusion:
      case StepKind::FullInclusion: {
        std::set<std::string> felems = fsharp_image(st.map);
        if (!is_injective(st.map.f) || felems.size() != st.map.fsharp.size())
          r.add("inclusion-injective", where + " does not embed its stage");
        if (st.kind == StepKind::FullInclusion) {
          if (!is_full(*st.map.f.target, image_subcomplex(st.map.f)))
            r.add("full-inclusion-span", where + " is not spanned inside its target");
        } else {
          all_inclusions_full = false;
        }
        break;
      }
      case StepKind::Cover: {
        if (st.cover_truncated) {
          any_truncated = true;
          if (!is_immersion(st.map.f)) {
            r.add("cover-map", where + " window does not immerse");
            break;
          }
          if (i > 0) {
            for (const auto& [v, w] : t.steps[i - 1].map.f.vmap)
              if (!st.map.f.source->has_vertex(w) || !is_covering_at(st.map.f, w)) {
                r.add("cover-window", where + " is not a covering over retained vertex " + w);
                break;
              }
          }
        } else {
          if (!is_covering_map(st.map.f)) {
            r.add("cover-map", where + " is not a covering projection");
            break;
          }
          const std::string& tid = st.map.target_action.group.identity();
          std::vector<std::string> kernel;
          for (const auto& [h, im] : st.map.fsharp)
            if (im == tid) kernel.push_back(h);
          std::map<std::string, std::vector<std::string>> fibers;
          for (const auto& [v, w] : st.map.f.vmap) fibers[w].push_back(v);
          for (const auto& [base, fiber] : fibers) {
            for (const auto& v : fiber) {
              bool reached = false;
              for (const auto& k : kernel)
                if (st.map.source_action.vertex_image(k, fiber.front()) == v) {
                  reached = true;
                  break;
                }
              if (!reached) {
                r.add("cover-regular",
                      where + " kernel misses " + v + " in the fiber over " + base);
                break;
              }
            }
          }
        }
        break;
      }
    }
    } catch (const std::exception& e) {
      r.add("step-map", where + " cannot be checked: " + std::string(e.what()));
    }
  }

  bool chain_ok = true;
  for (std::size_t i = 0; i + 1 < t.steps.size(); ++i)
    if (!(t.steps[i].map.target_action == t.steps[i + 1].map.source_action)) {
      r.add("compose-chain", "stage " + std::to_string(i) + " does not feed stage " +
                                 std::to_string(i + 1));
      chain_ok = false;
    }
  if (chain_ok) {
    try {
      EqMap whole = t.steps.front().map;
      for (std::size_t i = 1; i < t.steps.size(); ++i) whole = compose(whole, t.steps[i].map);
      if (!eq_maps_equal(whole, t.composite))
        r.add("composite", "stored composite differs from the stage composition");
    } catch (const std::exception& e) {
      r.add("composite", "stages do not compose: " + std::string(e.what()));
    }
  }

  if (r.ok()) {
    if (all_inclusions_full) r.note("f-tower", "every inclusion stage is a full inclusion");
    if (is_immersion(t.composite.f)) r.note("immersion", "the composite map is an immersion");
    if (any_truncated) r.note("truncated-cover", "a cover stage is a finite window");
  }
  return r;
}

bool is_maximal_lift(const EqMap& m, LiftMode mode, long coset_limit) {
  {
    auto rep = validate_eq_map(m);
    if (!rep.ok())
      throw std::invalid_argument("not a valid equivariant map: " + first_issue(rep));
  }
  const TriState src = is_simply_connected(m.f.source, coset_limit);
  if (src == TriState::No) throw std::invalid_argument("source is not one-connected");
  if (src == TriState::Unknown)
    throw OracleUnknown("source one-connectedness is undecided at this budget");

  const bool onto = mode == LiftMode::FTower
                        ? is_zero_surjective(m.f)
                        : image_subcomplex(m.f) == whole_subcomplex(*m.f.target);
  if (!onto) return false;
  if (fsharp_image(m).size() != m.target_action.group.elements.size()) return false;

  const TriState target = is_simply_connected(m.f.target, coset_limit);
  if (target == TriState::Unknown)
    throw OracleUnknown("target one-connectedness is undecided at this budget");
  return target == TriState::Yes;
}

std::optional<TowerLift> max_f_tower_lift(const EqMap& m, const TowerBudgets& budgets) {
  return run_engine(m, true, budgets);
}

std::optional<TowerLift> max_tower_lift(const EqMap& m, const TowerBudgets& budgets) {
  return run_engine(m, false, budgets);
}

namespace {

// Union-find over edges that remembers orientation, so gluing a dart onto a
// dart also glues the reverses consistently.
class SignedUnion {
 public:
  void add(const std::string& e) { up_.emplace(e, std::make_pair(e, false)); }
  std::pair<std::string, bool> find(const std::string& e) {
    auto& link = up_.at(e);
    if (link.first == e) return {e, link.second};
    auto root = find(link.first);
    root.second = root.second != link.second;
    link = root;
    return root;
  }
  // Declare dart (ea, sa) equal to dart (eb, sb).
  void unite(const std::string& ea, bool sa, const std::string& eb, bool sb,
             const std::function<bool(const std::string&, const std::string&)>& prefer) {
    auto ra = find(ea);
    auto rb = find(eb);
    const bool rel = (sa != ra.second) != (sb != rb.second);
    if (ra.first == rb.first) {
      if (rel) throw std::logic_error("edge glued onto its own reverse");
      return;
    }
    if (prefer(rb.first, ra.first)) std::swap(ra, rb);
    up_.at(rb.first) = {ra.first, rel};
  }

 private:
  std::map<std::string, std::pair<std::string, bool>> up_;
};

class PlainUnion {
 public:
  void add(const std::string& v) { up_.emplace(v, v); }
  std::string find(const std::string& v) {
    std::string r = v;
    while (up_.at(r) != r) r = up_.at(r);
    up_[v] = r;
    return r;
  }
  void unite(const std::string& a, const std::string& b,
             const std::function<bool(const std::string&, const std::string&)>& prefer) {
    const std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (prefer(rb, ra)) up_[ra] = rb;
    else up_[rb] = ra;
  }

 private:
  std::map<std::string, std::string> up_;
};

}  // namespace

std::optional<SubgroupCore> subgroup_core(const FinAction& y, const std::set<std::string>& gens,
                                          const TowerBudgets& budgets) {
  {
    auto rep = validate_action(y);
    if (!rep.ok()) throw std::invalid_argument("not a valid action: " + first_issue(rep));
  }
  for (const auto& ge : gens)
    if (!y.group.has(ge)) throw std::invalid_argument("unknown group element: " + ge);
  const TriState sc = is_simply_connected(y.space, budgets.coset_limit);
  if (sc == TriState::No) throw std::invalid_argument("space is not certified one-connected");
  if (sc == TriState::Unknown) return std::nullopt;

  const ComplexPtr& space = y.space;
  const std::set<std::string> members = subgroup_generated(y.group, gens);
  const FinGroup sub = subgroup_as_group(y.group, members);
  const std::string& id = sub.identity();

  // Basepoint: the smallest vertex the subgroup moves freely, else the
  // smallest vertex outright.
  std::string y0 = *space->vertices.begin();
  for (const auto& v : space->vertices) {
    bool free_vertex = true;
    for (const auto& ge : members)
      if (ge != id && y.vertex_image(ge, v) == v) {
        free_vertex = false;
        break;
      }
    if (free_vertex) {
      y0 = v;
      break;
    }
  }

  // Shortest paths from the basepoint to each generator translate, spread
  // over the whole subgroup, give the one-skeleton.
  Subcomplex skel;
  skel.vertices.insert(y0);
  for (const auto& ge : gens) {
    const DartPath path = shortest_lex_path(*space, y0, y.vertex_image(ge, y0));
    for (const auto& d : path) {
      skel.vertices.insert(space->src(d));
      skel.vertices.insert(space->dst(d));
      skel.darts.insert(d);
      skel.darts.insert(space->rev(d));
    }
  }
  Subcomplex orbit;
  for (const auto& ge : members) {
    const CombMap& mv = y.act(ge);
    for (const auto& v : skel.vertices) orbit.vertices.insert(mv.vertex_image(v));
    for (const auto& d : skel.darts) orbit.darts.insert(mv.dart_image(d));
  }
  ComplexPtr skeleton = std::make_shared<const Complex2>(restrict_complex(*space, orbit));

  // Fill each independent loop of the skeleton with a disk in the ambient
  // space; out-of-budget fillings leave the core undecided.
  Presentation pres = presentation(skeleton, y0);
  std::vector<DartPath> loops;
  std::vector<DiskDiagram> disks;
  for (const auto& gen : pres.generators) {
    loops.push_back(generator_loop(pres, gen));
    auto disk = search_disk(space, loops.back(), budgets.area_limit);
    if (!disk) return std::nullopt;
    disks.push_back(std::move(*disk));
  }

  // Assemble: the skeleton, plus one copy of each disk per subgroup element,
  // glued along the translated loop.
  std::set<std::string> base_cells;
  for (const auto& v : skeleton->vertices) base_cells.insert(v);
  for (const auto& e : skeleton->edge_ids()) base_cells.insert(e);
  auto prefer = [&](const std::string& a, const std::string& b) {
    const bool ba = base_cells.count(a) > 0, bb = base_cells.count(b) > 0;
    if (ba != bb) return ba;
    return a < b;
  };
  auto copy_name = [&](const std::string& ge, std::size_t i, const std::string& cell) {
    std::string n = ge + "|" + std::to_string(i) + "|" + cell;
    while (base_cells.count(n)) n = "+" + n;
    return n;
  };

  PlainUnion verts;
  SignedUnion edges;
  for (const auto& v : skeleton->vertices) verts.add(v);
  for (const auto& e : skeleton->edge_ids()) edges.add(e);
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i) {
      for (const auto& v : disks[i].disk->vertices) verts.add(copy_name(ge, i, v));
      for (const auto& e : disks[i].disk->edge_ids()) edges.add(copy_name(ge, i, e));
    }
  for (const auto& ge : members) {
    const CombMap& mv = y.act(ge);
    for (std::size_t i = 0; i < disks.size(); ++i) {
      const DiskDiagram& dd = disks[i];
      const DartPath moved = path_image(mv, loops[i]);
      for (std::size_t j = 0; j < dd.boundary.size(); ++j) {
        const Dart& bd = dd.boundary[j];
        const Dart& td = moved[j];
        verts.unite(copy_name(ge, i, dd.disk->src(bd)), space->src(td), prefer);
        edges.unite(copy_name(ge, i, dart_edge(bd)), !dart_is_forward(bd), dart_edge(td),
                    !dart_is_forward(td), prefer);
      }
    }
  }
  auto canon_dart = [&](const std::string& edge, bool reversed) -> Dart {
    auto root = edges.find(edge);
    const bool back = root.second != reversed;
    return back ? dart_flip(root.first) : root.first;
  };

  struct CopyCell {
    std::string element;
    std::size_t disk;
    std::string cell;
  };
  std::set<std::string> vertex_set;
  for (const auto& v : skeleton->vertices) vertex_set.insert(verts.find(v));
  std::vector<EdgeSpec> edge_specs;
  std::map<std::string, CopyCell> copy_edge_owner;
  for (const auto& e : skeleton->edge_ids())
    if (edges.find(e).first == e)
      edge_specs.push_back({e, verts.find(space->src(e)), verts.find(space->dst(e))});
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i) {
      const DiskDiagram& dd = disks[i];
      for (const auto& v : dd.disk->vertices) vertex_set.insert(verts.find(copy_name(ge, i, v)));
      for (const auto& e : dd.disk->edge_ids()) {
        const std::string ce = copy_name(ge, i, e);
        if (edges.find(ce).first != ce) continue;
        copy_edge_owner[ce] = {ge, i, e};
        edge_specs.push_back({ce, verts.find(copy_name(ge, i, dd.disk->src(e))),
                              verts.find(copy_name(ge, i, dd.disk->dst(e)))});
      }
    }
  std::vector<FaceSpec> face_specs;
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i)
      for (const auto& [df, w] : disks[i].disk->faces) {
        DartPath bnd;
        for (const auto& d : w) bnd.push_back(canon_dart(copy_name(ge, i, dart_edge(d)),
                                                         !dart_is_forward(d)));
        face_specs.push_back({copy_name(ge, i, df), bnd});
      }
  ComplexPtr core = std::make_shared<const Complex2>(Complex2::from_edges(
      std::vector<std::string>(vertex_set.begin(), vertex_set.end()), edge_specs, face_specs));

  // The map down to the ambient space and the subgroup action on the core.
  std::map<std::pair<std::string, std::size_t>, CombMap> down;
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i)
      down[{ge, i}] = compose(disks[i].to_target, y.act(ge));
  CombMap psi;
  psi.source = core;
  psi.target = space;
  for (const auto& v : core->vertices) {
    if (base_cells.count(v)) psi.vmap[v] = v;
  }
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i)
      for (const auto& v : disks[i].disk->vertices) {
        const std::string rv = verts.find(copy_name(ge, i, v));
        if (!psi.vmap.count(rv)) psi.vmap[rv] = down.at({ge, i}).vertex_image(v);
      }
  for (const auto& e : core->edge_ids()) {
    if (base_cells.count(e)) {
      psi.dmap[e] = e;
    } else {
      const CopyCell& owner = copy_edge_owner.at(e);
      psi.dmap[e] = down.at({owner.element, owner.disk}).dart_image(owner.cell);
    }
  }
  for (const auto& ge : members)
    for (std::size_t i = 0; i < disks.size(); ++i)
      for (const auto& [df, w] : disks[i].disk->faces)
        psi.fmap[copy_name(ge, i, df)] = down.at({ge, i}).face_image(df);

  FinAction core_action;
  core_action.group = sub;
  core_action.space = core;
  for (const auto& h : sub.elements) {
    const CombMap& mv = y.act(h);
    CombMap t;
    t.source = core;
    t.target = core;
    for (const auto& v : skeleton->vertices) {
      const std::string rv = verts.find(v);
      if (!t.vmap.count(rv)) t.vmap[rv] = verts.find(mv.vertex_image(v));
    }
    for (const auto& ge : members)
      for (std::size_t i = 0; i < disks.size(); ++i) {
        const std::string moved = sub.mul(h, ge);
        for (const auto& v : disks[i].disk->vertices) {
          const std::string rv = verts.find(copy_name(ge, i, v));
          if (!t.vmap.count(rv)) t.vmap[rv] = verts.find(copy_name(moved, i, v));
        }
      }
    for (const auto& e : skeleton->edge_ids()) {
      const Dart re = canon_dart(e, false);
      if (dart_is_forward(re) && !t.dmap.count(re)) {
        const Dart im = mv.dart_image(e);
        t.dmap[re] = canon_dart(dart_edge(im), !dart_is_forward(im));
      }
    }
    for (const auto& ge : members)
      for (std::size_t i = 0; i < disks.size(); ++i) {
        const std::string moved = sub.mul(h, ge);
        for (const auto& e : disks[i].disk->edge_ids()) {
          const Dart re = canon_dart(copy_name(ge, i, e), false);
          if (dart_is_forward(re) && !t.dmap.count(re))
            t.dmap[re] = canon_dart(copy_name(moved, i, e), false);
        }
      }
    for (const auto& ge : members)
      for (std::size_t i = 0; i < disks.size(); ++i) {
        const std::string moved = sub.mul(h, ge);
        for (const auto& [df, w] : disks[i].disk->faces)
          t.fmap[copy_name(ge, i, df)] = {copy_name(moved, i, df), 0, false};
      }
    core_action.maps[h] = std::move(t);
  }

  EqMap seed;
  seed.f = std::move(psi);
  seed.source_action = core_action;
  seed.target_action = y;
  seed.fsharp = identity_names(sub);
  {
    auto rep = validate_eq_map(seed);
    if (!rep.ok())
      throw std::logic_error("assembled core map is not equivariant: " + first_issue(rep));
  }

  std::optional<TowerLift> lifted;
  try {
    lifted = max_f_tower_lift(seed, budgets);
  } catch (const std::invalid_argument& e) {
    throw std::logic_error(std::string("assembled core rejected by the lift engine: ") +
                           e.what());
  }
  if (!lifted) return std::nullopt;

  FinAction top;
  top.group = sub;
  top.space = lifted->lift.f.target;
  for (const auto& h : sub.elements)
    top.maps[h] = lifted->lift.target_action.act(lifted->lift.fsharp.at(h));
  {
    auto rep = validate_action(top);
    if (!rep.ok()) throw std::logic_error("core action is invalid: " + first_issue(rep));
  }
  for (const auto& h : sub.elements)
    if (lifted->tower.composite.fsharp.at(lifted->lift.fsharp.at(h)) != h)
      throw std::logic_error("tower projection does not restore the subgroup");
  EqMap embed;
  embed.f = lifted->tower.composite.f;
  embed.source_action = top;
  embed.target_action = y;
  embed.fsharp = identity_names(sub);
  {
    auto rep = validate_eq_map(embed);
    if (!rep.ok())
      throw std::logic_error("core embedding is not equivariant: " + first_issue(rep));
  }
  return SubgroupCore{std::move(top), std::move(lifted->tower)};
}

}  // namespace towerkit
