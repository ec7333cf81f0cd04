#include "towerkit/diagrams.hpp"

#include <algorithm>
#include <stdexcept>

#include "towerkit/coset.hpp"
#include "towerkit/presentation.hpp"

namespace towerkit {
namespace {

void check_closed_loop(const Complex2& c, const DartPath& loop) {
  if (loop.empty()) throw std::invalid_argument("loop is empty");
  for (const auto& d : loop)
    if (!c.has_dart(d)) throw std::invalid_argument("loop uses unknown dart " + d);
  for (size_t i = 0; i + 1 < loop.size(); ++i)
    if (c.dst(loop[i]) != c.src(loop[i + 1]))
      throw std::invalid_argument("loop breaks at dart " + loop[i + 1]);
  if (c.dst(loop.back()) != c.src(loop.front()))
    throw std::invalid_argument("loop is not closed");
}

DartPath rotate_word(const DartPath& w, size_t r) {
  DartPath out;
  out.reserve(w.size());
  for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + r) % w.size()]);
  return out;
}

DartPath canon_cyclic(const DartPath& w) { return canonical_cyclic_word(w); }

// Boundary word of a face copy: as stored, or reversed for a flipped copy.
DartPath face_word(const Complex2& c, const std::string& f, bool flip) {
  const DartPath& w = c.boundary(f);
  return flip ? reversed_path(w) : w;
}

// One face peeled off a region boundary word v.  The face copy is glued along
// k disjoint arcs of v, matching arcs of its own boundary in the same cyclic
// order; the region splits into one piece per gap.
struct Arc {
  size_t pos_v = 0, pos_u = 0, len = 0;
};

struct Move {
  std::string face;
  bool flip = false;
  std::vector<Arc> arcs;  // cyclic order; arcs[0] holds the smallest pos_v
};

bool arc_matches(const DartPath& v, const DartPath& u, const Arc& a) {
  for (size_t j = 0; j < a.len; ++j)
    if (v[(a.pos_v + j) % v.size()] != u[(a.pos_u + j) % u.size()]) return false;
  return true;
}

// Extends a partial arc system.  Both words are cut open after arcs[0], so
// later arcs live in linear windows: v positions in (ve, v0 + m), u positions
// in (ue, u0 + n), where ve/ue are the ends of the previous arc (unwrapped).
void extend_arcs(const DartPath& v, const DartPath& u, std::vector<Arc>& arcs, size_t ve,
                 size_t ue, size_t v_limit, size_t u_limit, std::vector<Move>& out,
                 const std::string& face, bool flip) {
  const size_t m = v.size(), n = u.size();
  // Close the system: final gaps back to arcs[0] (may be empty on either side).
  out.push_back({face, flip, arcs});
  for (size_t sv = ve; sv < v_limit; ++sv) {
    for (size_t su = ue; su < u_limit; ++su) {
      if (sv == ve && su == ue && !arcs.empty()) continue;  // both gaps empty: merge instead
      const size_t max_len = std::min(v_limit - sv, u_limit - su);
      for (size_t len = 1; len <= max_len; ++len) {
        Arc a{sv % m, su % n, len};
        if (!arc_matches(v, u, a)) break;  // longer arcs share the failing position
        arcs.push_back(a);
        extend_arcs(v, u, arcs, sv + len, su + len, v_limit, u_limit, out, face, flip);
        arcs.pop_back();
      }
    }
  }
}

std::vector<Move> enumerate_moves(const Complex2& c, const DartPath& v) {
  std::vector<Move> out;
  const size_t m = v.size();
  for (const auto& [f, w] : c.faces) {
    (void)w;
    for (bool flip : {false, true}) {
      const DartPath u = face_word(c, f, flip);
      const size_t n = u.size();
      for (size_t pv = 0; pv < m; ++pv) {
        for (size_t pu = 0; pu < n; ++pu) {
          for (size_t len = 1; len <= std::min(m, n); ++len) {
            if (len == m && pv != 0) break;  // a full wrap of v has no start
            Arc a{pv, pu, len};
            if (!arc_matches(v, u, a)) break;
            std::vector<Arc> arcs{a};
            // Later arcs live strictly after this one and before it wraps.
            extend_arcs(v, u, arcs, pv + len, pu + len, pv + m, pu + n, out, f, flip);
          }
        }
      }
    }
  }
  // Keep only systems whose first arc holds the smallest v position.
  std::vector<Move> canon;
  for (auto& mv : out) {
    bool least = true;
    for (size_t i = 1; i < mv.arcs.size(); ++i)
      if (mv.arcs[i].pos_v < mv.arcs[0].pos_v) least = false;
    if (least) canon.push_back(std::move(mv));
  }
  return canon;
}

// Unreduced gap words y_i . rev(t_i), one per arc, in arc order; empty gaps
// are dropped.
std::vector<DartPath> move_pieces(const Complex2& c, const DartPath& v, const Move& mv) {
  const DartPath u = face_word(c, mv.face, mv.flip);
  const size_t m = v.size(), n = u.size();
  const auto& arcs = mv.arcs;
  std::vector<DartPath> pieces;
  for (size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    const Arc& b = arcs[(i + 1) % arcs.size()];
    const size_t ylen = (b.pos_v + m - (a.pos_v + a.len) % m) % m;
    const size_t tlen = (b.pos_u + n - (a.pos_u + a.len) % n) % n;
    // A single arc covering all of v (or all of u) leaves no gap there.
    const size_t yl = (arcs.size() == 1 && a.len == m) ? 0 : ylen;
    const size_t tl = (arcs.size() == 1 && a.len == n) ? 0 : tlen;
    DartPath y, t;
    for (size_t j = 0; j < yl; ++j) y.push_back(v[(a.pos_v + a.len + j) % m]);
    for (size_t j = 0; j < tl; ++j) t.push_back(u[(a.pos_u + a.len + j) % n]);
    DartPath piece = concat_paths(y, reversed_path(t));
    if (!piece.empty()) pieces.push_back(std::move(piece));
  }
  return pieces;
}

// Mutable complex under construction: union-find over vertex nodes and dart
// nodes (darts created in reverse pairs 2k, 2k + 1), every node carrying its
// image in the target.
struct Builder {
  const Complex2& target;

  std::vector<int> vpar;
  std::vector<std::string> vimg;

  std::vector<int> dpar;
  std::vector<Dart> dimg;
  std::vector<std::pair<int, int>> dends;  // (src node, dst node) per dart node

  struct BFace {
    std::vector<int> bnd;  // dart nodes in boundary order
    std::string img;
    size_t rot = 0;
    bool flip = false;
  };
  std::vector<BFace> faces;

  explicit Builder(const Complex2& t) : target(t) {}

  int vfind(int a) {
    while (vpar[a] != a) a = vpar[a] = vpar[vpar[a]];
    return a;
  }
  int dfind(int a) {
    while (dpar[a] != a) a = dpar[a] = dpar[dpar[a]];
    return a;
  }

  int new_vertex(const std::string& img) {
    vpar.push_back(static_cast<int>(vpar.size()));
    vimg.push_back(img);
    return static_cast<int>(vpar.size()) - 1;
  }

  // Creates the dart and its reverse; returns the forward node.
  int new_dart(const Dart& img, int s, int t) {
    const int d = static_cast<int>(dpar.size());
    dpar.push_back(d);
    dpar.push_back(d + 1);
    dimg.push_back(img);
    dimg.push_back(dart_flip(img));
    dends.push_back({s, t});
    dends.push_back({t, s});
    return d;
  }

  void unite_vertices(int a, int b) {
    a = vfind(a);
    b = vfind(b);
    if (a == b) return;
    if (vimg[a] != vimg[b]) throw std::logic_error("vertex image mismatch while gluing");
    vpar[b] = a;
  }

  void unite_darts(int x, int y) {
    const int a = dfind(x), b = dfind(y);
    if (a == b) return;
    if (dfind(x ^ 1) == b) throw std::logic_error("dart glued onto its own reverse");
    if (dimg[a] != dimg[b]) throw std::logic_error("dart image mismatch while gluing");
    unite_vertices(dends[x].first, dends[y].first);
    unite_vertices(dends[x].second, dends[y].second);
    const int pa = dfind(x ^ 1), pb = dfind(y ^ 1);
    dpar[b] = a;
    if (pa != pb) dpar[pb] = pa;
  }
};

struct Extracted {
  ComplexPtr complex;
  DartPath boundary;
  CombMap map;
};

// Quotients the builder into a named complex.  Cells are named in first-visit
// order along the boundary cycle and then along face boundaries, so output is
// reproducible.
Extracted extract(Builder& b, const std::vector<int>& boundary, const ComplexPtr& target) {
  std::vector<int> seeds = boundary;
  for (const auto& f : b.faces) seeds.insert(seeds.end(), f.bnd.begin(), f.bnd.end());

  std::map<int, std::string> vname;
  std::map<int, std::pair<std::string, int>> ename;  // dart class -> (edge id, forward node)
  auto visit_vertex = [&](int node) {
    const int r = b.vfind(node);
    if (!vname.count(r)) vname[r] = "v" + std::to_string(vname.size());
  };
  for (int d : seeds) {
    const int r = b.dfind(d);
    if (!ename.count(r) && !ename.count(b.dfind(d ^ 1)))
      ename[r] = {"e" + std::to_string(ename.size()), d};
    visit_vertex(b.dends[d].first);
    visit_vertex(b.dends[d].second);
  }

  auto dart_name = [&](int node) -> Dart {
    const int r = b.dfind(node);
    if (auto it = ename.find(r); it != ename.end()) return it->second.first;
    const auto& e = ename.at(b.dfind(node ^ 1));
    return "-" + e.first;
  };

  auto disk = std::make_shared<Complex2>();
  std::map<std::string, std::string> vmap;
  for (const auto& [r, name] : vname) {
    disk->vertices.insert(name);
    vmap[name] = b.vimg[r];
  }
  std::map<Dart, Dart> dmap;
  for (const auto& [r, e] : ename) {
    (void)r;
    const auto& [id, fwd] = e;
    const std::string s = vname.at(b.vfind(b.dends[fwd].first));
    const std::string t = vname.at(b.vfind(b.dends[fwd].second));
    disk->darts[id] = DartInfo{"-" + id, s, t};
    disk->darts["-" + id] = DartInfo{id, t, s};
    dmap[id] = b.dimg[b.dfind(fwd)];
  }
  std::map<std::string, FaceImage> fmap;
  for (size_t i = 0; i < b.faces.size(); ++i) {
    const std::string id = "f" + std::to_string(i);
    DartPath w;
    for (int d : b.faces[i].bnd) w.push_back(dart_name(d));
    disk->faces[id] = w;
    fmap[id] = FaceImage{b.faces[i].img, b.faces[i].rot, b.faces[i].flip};
  }

  Extracted out;
  out.complex = disk;
  for (int d : boundary) out.boundary.push_back(dart_name(d));
  out.map = CombMap{disk, target, std::move(vmap), std::move(dmap), std::move(fmap)};
  return out;
}

}  // namespace

// Replays the minimizing decomposition recorded in the filler's memo into an
// explicit complex.  realize() handles free cancellations of a closed word by
// hanging trees of fresh edges; build_faces() glues one face copy and recurs
// into the gap pieces.
struct DiskRebuilder {
  DiskFiller& filler;
  const Complex2& c;
  Builder b;

  DiskRebuilder(DiskFiller& fl, const Complex2& target) : filler(fl), c(target), b(target) {}

  std::vector<int> realize(const DartPath& w) {
    const size_t n = w.size();
    std::vector<size_t> partner(n, SIZE_MAX);
    std::vector<int> out(n, -1);
    std::vector<size_t> stack;
    for (size_t i = 0; i < n; ++i) {
      if (!stack.empty() && w[stack.back()] == dart_flip(w[i])) {
        partner[i] = stack.back();
        partner[stack.back()] = i;
        stack.pop_back();
      } else {
        stack.push_back(i);
      }
    }
    size_t lo = 0, hi = stack.size();
    while (hi - lo >= 2 && w[stack[lo]] == dart_flip(w[stack[hi - 1]])) {
      partner[stack[lo]] = stack[hi - 1];
      partner[stack[hi - 1]] = stack[lo];
      ++lo;
      --hi;
    }
    const std::vector<size_t> core(stack.begin() + lo, stack.begin() + hi);

    size_t start = 0;
    if (!core.empty()) {
      DartPath labels;
      for (size_t k : core) labels.push_back(w[k]);
      const size_t shift = labels.size() < 2 ? 0 : canonical_shift(labels);
      const std::vector<int> nodes = build_faces(rotate_word(labels, shift));
      for (size_t y = 0; y < core.size(); ++y)
        out[core[y]] = nodes[(y + core.size() - shift) % core.size()];
      start = core[0];
    }

    int cur = -1;
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
      const size_t i = (start + step) % n;
      if (out[i] >= 0) {  // core position
        if (cur >= 0 && b.vfind(cur) != b.vfind(b.dends[out[i]].first))
          throw std::logic_error("boundary walk lost its vertex");
        cur = b.dends[out[i]].second;
      } else if (!done[partner[i]]) {  // first of a cancelling pair: fresh edge out
        if (cur < 0) cur = b.new_vertex(c.src(w[i]));
        const int d = b.new_dart(w[i], cur, b.new_vertex(c.dst(w[i])));
        out[i] = d;
        cur = b.dends[d].second;
      } else {  // second of the pair: walk the same edge back
        out[i] = out[partner[i]] ^ 1;
        if (b.vfind(cur) != b.vfind(b.dends[out[i]].first))
          throw std::logic_error("boundary walk lost its vertex");
        cur = b.dends[out[i]].second;
      }
      done[i] = true;
    }
    return out;
  }

  std::vector<int> build_faces(const DartPath& v) {
    const auto it = filler.memo_.find(v);
    if (it == filler.memo_.end() || !it->second.exact)
      throw std::logic_error("rebuild requested for an unfilled word");
    const int area = *it->second.exact;

    for (const Move& mv : enumerate_moves(c, v)) {
      const auto pieces = move_pieces(c, v, mv);
      int total = 1;
      bool ok = true;
      for (const auto& p : pieces) {
        const auto sub = filler.word_area(canon_cyclic(p), area - 1);
        if (!sub) {
          ok = false;
          break;
        }
        total += *sub;
      }
      if (!ok || total != area) continue;

      const DartPath u = face_word(c, mv.face, mv.flip);
      const size_t m = v.size(), n = u.size();
      std::vector<int> corners;
      for (size_t i = 0; i < n; ++i) corners.push_back(b.new_vertex(c.src(u[i])));
      std::vector<int> fd;
      for (size_t i = 0; i < n; ++i)
        fd.push_back(b.new_dart(u[i], corners[i], corners[(i + 1) % n]));
      b.faces.push_back({fd, mv.face, mv.flip ? n - 1 : size_t{0}, mv.flip});

      std::vector<int> out(m, -1);
      for (const Arc& a : mv.arcs)
        for (size_t j = 0; j < a.len; ++j)
          out[(a.pos_v + j) % m] = fd[(a.pos_u + j) % n];

      const auto& arcs = mv.arcs;
      for (size_t i = 0; i < arcs.size(); ++i) {
        const Arc& a = arcs[i];
        const Arc& nx = arcs[(i + 1) % arcs.size()];
        size_t ylen = (nx.pos_v + m - (a.pos_v + a.len) % m) % m;
        size_t tlen = (nx.pos_u + n - (a.pos_u + a.len) % n) % n;
        if (arcs.size() == 1 && a.len == m) ylen = 0;
        if (arcs.size() == 1 && a.len == n) tlen = 0;
        if (ylen + tlen == 0) continue;
        DartPath piece;
        for (size_t j = 0; j < ylen; ++j) piece.push_back(v[(a.pos_v + a.len + j) % m]);
        for (size_t j = 0; j < tlen; ++j)
          piece.push_back(dart_flip(u[(a.pos_u + a.len + tlen - 1 - j) % n]));
        const std::vector<int> sub = realize(piece);
        const size_t tstart = (a.pos_u + a.len) % n;
        for (size_t j = 0; j < tlen; ++j)
          b.unite_darts(sub[ylen + j], fd[(tstart + tlen - 1 - j) % n] ^ 1);
        if (tlen == 0)  // piece touches the polygon only at one corner
          b.unite_vertices(b.dends[sub[0]].first, corners[tstart]);
        for (size_t j = 0; j < ylen; ++j) out[(a.pos_v + a.len + j) % m] = sub[j];
      }
      return out;
    }
    throw std::logic_error("no move reproduces the recorded filling area");
  }
};

DiskFiller::DiskFiller(ComplexPtr target) : target_(std::move(target)) {
  if (!target_) throw std::invalid_argument("target complex is null");
}

std::optional<int> DiskFiller::min_area(const DartPath& loop, int max_area) {
  check_closed_loop(*target_, loop);
  return word_area(loop, max_area);
}

std::optional<int> DiskFiller::word_area(const DartPath& closed_word, int max_area) {
  if (max_area < 0) return std::nullopt;
  return fill_word(canon_cyclic(closed_word), max_area);
}

std::optional<int> DiskFiller::fill_word(const DartPath& v, int budget) {
  if (v.empty()) return 0;
  if (budget <= 0) return std::nullopt;
  {
    const auto& e = memo_[v];
    if (e.exact) return *e.exact <= budget ? e.exact : std::nullopt;
    if (e.floor > budget) return std::nullopt;
  }
  std::optional<int> best;
  for (const Move& mv : enumerate_moves(*target_, v)) {
    const auto pieces = move_pieces(*target_, v, mv);
    int total = 1;
    bool ok = true;
    for (const auto& p : pieces) {
      const auto sub = fill_word(canon_cyclic(p), budget - 1);
      if (!sub) {
        ok = false;
        break;
      }
      total += *sub;
    }
    if (ok && (!best || total < *best)) best = total;
    if (best && *best == 1) break;  // nothing beats a single face
  }
  auto& e = memo_[v];
  if (best && *best <= budget) {
    e.exact = best;
    return best;
  }
  e.floor = std::max(e.floor, budget + 1);
  return std::nullopt;
}

std::optional<DiskDiagram> DiskFiller::fill(const DartPath& loop, int max_area) {
  const auto area = min_area(loop, max_area);
  if (!area) return std::nullopt;
  DiskRebuilder rb(*this, *target_);
  const std::vector<int> boundary = rb.realize(loop);
  Extracted ex = extract(rb.b, boundary, target_);
  DiskDiagram d{ex.complex, std::move(ex.boundary), std::move(ex.map),
                static_cast<int>(ex.complex->face_count())};
  if (d.area != *area) throw std::logic_error("rebuilt diagram has the wrong area");
  if (const auto rep = validate_disk_diagram(d, target_, loop); !rep.ok())
    throw std::logic_error("rebuilt diagram is invalid: " + rep.to_string());
  return d;
}

std::optional<DiskDiagram> search_disk(const ComplexPtr& c, const DartPath& loop, int max_area) {
  DiskFiller filler(c);
  return filler.fill(loop, max_area);
}

namespace {

// Mirror pair: faces g, h glued across dart d of the disk so that their
// images fold onto the same target face with reflected alignment.
bool has_mirror_pair(const DiskDiagram& d) {
  const Complex2& disk = *d.disk;
  struct Side {
    std::string face;
    size_t pos;
  };
  std::map<Dart, std::vector<Side>> at;  // dart -> face positions carrying it
  for (const auto& [f, w] : disk.faces)
    for (size_t i = 0; i < w.size(); ++i) at[w[i]].push_back({f, i});
  for (const auto& [dart, sides] : at) {
    if (!dart_is_forward(dart)) continue;
    const auto rev = at.find(dart_flip(dart));
    if (rev == at.end()) continue;
    for (const Side& s : sides) {
      for (const Side& t : rev->second) {
        const DartPath& wf = disk.boundary(s.face);
        const DartPath& wg = disk.boundary(t.face);
        if (wf.size() != wg.size()) continue;
        const size_t n = wf.size();
        bool mirror = true;
        for (size_t k = 0; k < n && mirror; ++k) {
          const Dart a = d.to_target.dart_image(wg[(t.pos + k) % n]);
          const Dart bb = d.to_target.dart_image(wf[(s.pos + n - k) % n]);
          if (a != dart_flip(bb)) mirror = false;
        }
        if (mirror) return true;
      }
    }
  }
  return false;
}

}  // namespace

ValidationReport validate_disk_diagram(const DiskDiagram& d, const ComplexPtr& target,
                                       const DartPath& loop) {
  ValidationReport rep;
  if (!d.disk || !target) {
    rep.add("no-complex", "diagram or target complex is missing");
    return rep;
  }
  rep.merge(validate_complex(*d.disk));
  if (!rep.ok()) return rep;
  if (!d.to_target.source || *d.to_target.source != *d.disk)
    rep.add("map-source", "map source is not the disk");
  if (!d.to_target.target || *d.to_target.target != *target)
    rep.add("map-target", "map target is not the filled complex");
  rep.merge(validate_map(d.to_target));
  if (!rep.ok()) return rep;

  if (!is_connected(*d.disk)) rep.add("disk-disconnected", "diagram is not connected");
  const long chi = euler_characteristic(*d.disk);
  if (chi != 1)
    rep.add("disk-euler", "V - E + F = " + std::to_string(chi) + ", expected 1");
  if (d.area != static_cast<int>(d.disk->face_count()))
    rep.add("area-mismatch", "area field disagrees with the face count");

  if (d.boundary.empty()) {
    rep.add("boundary-empty", "boundary cycle is empty");
    return rep;
  }
  for (const auto& dt : d.boundary)
    if (!d.disk->has_dart(dt)) {
      rep.add("boundary-dart-missing", "boundary uses unknown dart " + dt);
      return rep;
    }
  for (size_t i = 0; i < d.boundary.size(); ++i) {
    const auto& nx = d.boundary[(i + 1) % d.boundary.size()];
    if (d.disk->dst(d.boundary[i]) != d.disk->src(nx)) {
      rep.add("boundary-not-closed", "boundary cycle breaks at position " + std::to_string(i));
      return rep;
    }
  }
  if (d.boundary.size() != loop.size()) {
    rep.add("boundary-image", "boundary length differs from the loop");
  } else {
    for (size_t i = 0; i < loop.size(); ++i)
      if (d.to_target.dart_image(d.boundary[i]) != loop[i]) {
        rep.add("boundary-image",
                "boundary image disagrees with the loop at position " + std::to_string(i));
        break;
      }
  }
  if (has_mirror_pair(d))
    rep.add("mirror-pair", "two faces fold onto the same image across an edge");
  return rep;
}

std::optional<std::map<int, int>> dehn_estimate(const ComplexPtr& c, int n, int max_area,
                                                std::size_t coset_limit) {
  std::map<int, int> by_len;
  if (n < 1) return by_len;
  DiskFiller filler(c);

  // Distances for pruning the closed-path enumeration.
  std::map<std::string, std::map<std::string, int>> dist;
  for (const auto& v : c->vertices) {
    auto& dv = dist[v];
    dv[v] = 0;
    std::vector<std::string> frontier{v};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& u : frontier)
        for (const auto& dt : c->darts_at(u))
          if (!dv.count(c->dst(dt))) {
            dv[c->dst(dt)] = dv[u] + 1;
            next.push_back(c->dst(dt));
          }
      frontier = std::move(next);
    }
  }

  std::set<DartPath> loops;  // canonical rotations
  DartPath path;
  for (const auto& start : c->vertices) {
    const auto& back = dist.at(start);
    auto dfs = [&](auto&& self, const std::string& cur) -> void {
      if (cur == start && !path.empty())
        loops.insert(rotate_word(path, canonical_shift(path)));
      if (path.size() >= static_cast<size_t>(n)) return;
      for (const auto& dt : c->darts_at(cur)) {
        const auto it = back.find(c->dst(dt));
        if (it == back.end()) continue;
        if (path.size() + 1 + it->second > static_cast<size_t>(n)) continue;
        path.push_back(dt);
        self(self, c->dst(dt));
        path.pop_back();
      }
    };
    dfs(dfs, start);
  }

  // Null-homotopy certification, cached per connected component.
  std::map<std::string, std::string> comp_base;
  for (const auto& comp : connected_components(*c)) {
    const std::string base = *comp.begin();
    for (const auto& v : comp) comp_base[v] = base;
  }
  struct Cert {
    std::optional<Presentation> pres;
    std::optional<CosetTable> table;
    bool tried = false;
  };
  std::map<std::string, Cert> certs;

  for (const auto& loop : loops) {
    const int len = static_cast<int>(loop.size());
    if (const auto area = filler.min_area(loop, max_area)) {
      auto& cell = by_len[len];
      cell = std::max(cell, *area);
      continue;
    }
    const std::string base = comp_base.at(c->src(loop.front()));
    Cert& cert = certs[base];
    if (!cert.tried) {
      cert.tried = true;
      cert.pres = presentation(c, base);
      cert.table = coset_enumerate(*cert.pres, {}, coset_limit);
    }
    if (!cert.table) continue;  // homotopy class not certified; skip the loop
    const DartPath word = loop_word_at(*cert.pres, c->src(loop.front()), loop);
    if (cert.table->follow(0, word) == 0) return std::nullopt;  // null-homotopic, unfillable
  }

  std::map<int, int> table;
  int running = 0;
  for (int l = 1; l <= n; ++l) {
    if (const auto it = by_len.find(l); it != by_len.end()) running = std::max(running, it->second);
    table[l] = running;
  }
  return table;
}

ValidationReport validate_sphere_diagram(const SphereDiagram& s, const ComplexPtr& target) {
  ValidationReport rep;
  if (!s.sphere || !target) {
    rep.add("no-complex", "sphere or target complex is missing");
    return rep;
  }
  rep.merge(validate_complex(*s.sphere));
  if (!rep.ok()) return rep;
  if (!s.to_target.source || *s.to_target.source != *s.sphere)
    rep.add("map-source", "map source is not the sphere");
  if (!s.to_target.target || *s.to_target.target != *target)
    rep.add("map-target", "map target mismatch");
  rep.merge(validate_map(s.to_target));
  if (!rep.ok()) return rep;

  if (!is_connected(*s.sphere)) rep.add("sphere-disconnected", "sphere is not connected");
  const long chi = euler_characteristic(*s.sphere);
  if (chi != 2)
    rep.add("sphere-euler", "V - E + F = " + std::to_string(chi) + ", expected 2");

  std::map<std::string, int> sides;
  for (const auto& [f, w] : s.sphere->faces) {
    (void)f;
    for (const auto& dt : w) ++sides[s.sphere->edge_of(dt)];
  }
  for (const auto& e : s.sphere->edge_ids())
    if (sides[e] != 2)
      rep.add("edge-sides", "edge " + e + " lies on " + std::to_string(sides[e]) +
                                " face sides, expected 2");

  for (const auto& [f, w] : s.sphere->faces) {
    std::set<std::string> vs, es;
    bool embedded = true;
    for (const auto& dt : w) {
      if (!vs.insert(s.sphere->src(dt)).second) embedded = false;
      if (!es.insert(s.sphere->edge_of(dt)).second) embedded = false;
    }
    if (!embedded)
      rep.add("face-boundary-embedded",
              "boundary of " + f + " repeats a cell even after subdivision");
  }
  return rep;
}

namespace {

// One polygon type per (target face, orientation); sides carry target darts.
struct PolyType {
  std::string face;
  bool flip = false;
  DartPath labels;
};

struct SphereCandidate {
  std::vector<size_t> types;  // nondecreasing type indices, one per polygon
};

std::optional<SphereDiagram> assemble_sphere(const ComplexPtr& target,
                                             const std::vector<PolyType>& types,
                                             const std::vector<size_t>& polys,
                                             const std::vector<std::pair<size_t, size_t>>& sides,
                                             const std::vector<int>& match) {
  const Complex2& c = *target;
  // Corner nodes: (poly, pos) flattened alongside sides.
  std::vector<int> vpar(sides.size());
  for (size_t i = 0; i < vpar.size(); ++i) vpar[i] = static_cast<int>(i);
  auto vfind = [&](int a) {
    while (vpar[a] != a) a = vpar[a] = vpar[vpar[a]];
    return a;
  };
  auto vunion = [&](int a, int b) {
    a = vfind(a);
    b = vfind(b);
    if (a != b) vpar[std::max(a, b)] = std::min(a, b);
  };
  std::map<std::pair<size_t, size_t>, size_t> side_index;
  for (size_t i = 0; i < sides.size(); ++i) side_index[sides[i]] = i;
  auto corner = [&](size_t poly, size_t pos) {
    const size_t n = types[polys[poly]].labels.size();
    return static_cast<int>(side_index.at({poly, pos % n}));
  };

  for (size_t i = 0; i < sides.size(); ++i) {
    const size_t j = static_cast<size_t>(match[i]);
    if (j < i) continue;
    const auto [p, a] = sides[i];
    const auto [q, bq] = sides[j];
    const Dart la = types[polys[p]].labels[a];
    const Dart lb = types[polys[q]].labels[bq];
    if (lb == la) {  // same traversal
      vunion(corner(p, a), corner(q, bq));
      vunion(corner(p, a + 1), corner(q, bq + 1));
    } else {  // opposite traversal
      vunion(corner(p, a), corner(q, bq + 1));
      vunion(corner(p, a + 1), corner(q, bq));
    }
  }

  // Vertex names by smallest corner; images must agree across each class.
  std::map<int, std::string> vname;
  std::map<int, std::string> vimage;
  for (size_t i = 0; i < sides.size(); ++i) {
    const auto [p, a] = sides[i];
    const int r = vfind(static_cast<int>(i));
    const std::string img = c.src(types[polys[p]].labels[a]);
    if (auto it = vimage.find(r); it != vimage.end()) {
      if (it->second != img) return std::nullopt;  // inconsistent gluing
    } else {
      vimage[r] = img;
      vname[r] = "v" + std::to_string(vname.size());
    }
  }

  auto sphere = std::make_shared<Complex2>();
  std::map<std::string, std::string> vmap;
  for (const auto& [r, name] : vname) {
    sphere->vertices.insert(name);
    vmap[name] = vimage.at(r);
  }

  // One edge per matched pair; the forward dart follows the smaller side.
  std::map<size_t, Dart> side_dart;
  std::map<Dart, Dart> dmap;
  size_t edges = 0;
  for (size_t i = 0; i < sides.size(); ++i) {
    const size_t j = static_cast<size_t>(match[i]);
    if (j < i) continue;
    const std::string id = "e" + std::to_string(edges++);
    const auto [p, a] = sides[i];
    const auto [q, bq] = sides[j];
    const Dart la = types[polys[p]].labels[a];
    const Dart lb = types[polys[q]].labels[bq];
    const std::string s = vname.at(vfind(corner(p, a)));
    const std::string t = vname.at(vfind(corner(p, a + 1)));
    sphere->darts[id] = DartInfo{"-" + id, s, t};
    sphere->darts["-" + id] = DartInfo{id, t, s};
    dmap[id] = la;
    side_dart[i] = id;
    side_dart[j] = (lb == la) ? id : "-" + id;
  }

  std::map<std::string, FaceImage> fmap;
  for (size_t p = 0; p < polys.size(); ++p) {
    const PolyType& ty = types[polys[p]];
    const std::string id = "f" + std::to_string(p);
    DartPath w;
    for (size_t a = 0; a < ty.labels.size(); ++a)
      w.push_back(side_dart.at(side_index.at({p, a})));
    sphere->faces[id] = w;
    fmap[id] = FaceImage{ty.face, ty.flip ? ty.labels.size() - 1 : size_t{0}, ty.flip};
  }

  SphereDiagram cand{sphere, CombMap{sphere, target, std::move(vmap), std::move(dmap),
                                     std::move(fmap)}};
  if (!validate_sphere_diagram(cand, target).ok()) return std::nullopt;
  if (!is_near_immersion(cand.to_target)) return std::nullopt;
  return cand;
}

}  // namespace

std::optional<SphereDiagram> sphere_search(const ComplexPtr& c, int max_faces) {
  std::vector<PolyType> types;
  for (const auto& [f, w] : c->faces) {
    (void)w;
    for (bool flip : {false, true}) types.push_back({f, flip, face_word(*c, f, flip)});
  }
  if (types.empty() || max_faces < 1) return std::nullopt;

  std::optional<SphereDiagram> found;

  // Polygon multisets of size k, as nondecreasing type index sequences.
  std::vector<size_t> polys;
  auto try_matchings = [&]() -> bool {
    std::vector<std::pair<size_t, size_t>> sides;
    for (size_t p = 0; p < polys.size(); ++p)
      for (size_t a = 0; a < types[polys[p]].labels.size(); ++a) sides.push_back({p, a});
    if (sides.size() % 2 != 0) return false;
    std::vector<int> match(sides.size(), -1);
    std::vector<bool> touched(polys.size(), false);

    auto label_of = [&](size_t s) {
      return types[polys[sides[s].first]].labels[sides[s].second];
    };
    auto rec = [&](auto&& self) -> bool {
      size_t i = 0;
      while (i < match.size() && match[i] >= 0) ++i;
      if (i == match.size())
        if (auto cand = assemble_sphere(c, types, polys, sides, match)) {
          found = std::move(cand);
          return true;
        } else {
          return false;
        }
      const Dart li = label_of(i);
      for (size_t j = i + 1; j < match.size(); ++j) {
        if (match[j] >= 0) continue;
        const Dart lj = label_of(j);
        if (lj != li && lj != dart_flip(li)) continue;
        const size_t pj = sides[j].first;
        if (!touched[pj]) {
          // Identical untouched polygons are interchangeable: use the first.
          bool skip = false;
          for (size_t q = 0; q < pj; ++q)
            if (!touched[q] && polys[q] == polys[pj]) skip = true;
          if (skip) continue;
        }
        const bool was = touched[pj];
        const bool was_i = touched[sides[i].first];
        touched[pj] = touched[sides[i].first] = true;
        match[i] = static_cast<int>(j);
        match[j] = static_cast<int>(i);
        if (self(self)) return true;
        match[i] = match[j] = -1;
        touched[pj] = was;
        touched[sides[i].first] = was_i;
      }
      return false;
    };
    return rec(rec);
  };

  auto grow = [&](auto&& self, size_t min_type, int remaining) -> bool {
    if (!polys.empty() && try_matchings()) return true;
    if (remaining == 0) return false;
    for (size_t t = min_type; t < types.size(); ++t) {
      polys.push_back(t);
      if (self(self, t, remaining - 1)) return true;
      polys.pop_back();
    }
    return false;
  };
  grow(grow, 0, max_faces);
  return found;
}

}  // namespace towerkit
