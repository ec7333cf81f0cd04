#include "towerkit/lazy_cover.hpp"

#include <memory>
#include <stdexcept>

namespace towerkit {

namespace {

// Checks that p is a dart path in c starting at `at`; returns its endpoint.
std::string walk_base_path(const Complex2& c, const std::string& at,
                           const DartPath& p) {
  std::string cur = at;
  for (const Dart& d : p) {
    if (!c.has_dart(d)) throw std::invalid_argument("path uses unknown dart " + d);
    if (c.src(d) != cur) throw std::invalid_argument("path breaks at dart " + d);
    cur = c.dst(d);
  }
  return cur;
}

}  // namespace

LazyCover::LazyCover(ComplexPtr base, WordOracle oracle)
    : base_(std::move(base)), oracle_(std::move(oracle)) {
  if (!base_) throw std::invalid_argument("lazy cover needs a base complex");
  if (base_->vertices.empty() || !is_connected(*base_))
    throw std::invalid_argument("lazy cover needs a connected base");
  if (oracle_.space() != base_ && !(*oracle_.space() == *base_))
    throw std::invalid_argument("oracle is bound to a different complex");
  base_basepoint_ = *base_->vertices.begin();
  basepoint_ = new_vertex(base_basepoint_, {});
}

std::string LazyCover::new_vertex(const std::string& base_vertex, DartPath rep) {
  std::string id = base_vertex + "@" + std::to_string(vseq_[base_vertex]++);
  verts_.emplace(id, CoverVertex{base_vertex, std::move(rep)});
  over_[base_vertex].push_back(id);
  return id;
}

const DartPath& LazyCover::representative(const std::string& vertex) const {
  auto it = verts_.find(vertex);
  if (it == verts_.end())
    throw std::invalid_argument("unknown cover vertex " + vertex);
  return it->second.rep;
}

LoopAnswer LazyCover::identify(const DartPath& p, const DartPath& q) const {
  const std::string pe = walk_base_path(*base_, base_basepoint_, p);
  const std::string qe = walk_base_path(*base_, base_basepoint_, q);
  if (pe != qe) return LoopAnswer::Nontrivial;
  return oracle_.ask(concat_paths(p, reversed_path(q)));
}

Dart LazyCover::lift_dart(const std::string& at, const Dart& d) {
  auto vit = verts_.find(at);
  if (vit == verts_.end())
    throw std::invalid_argument("unknown cover vertex " + at);
  if (!base_->has_dart(d)) throw std::invalid_argument("unknown dart " + d);
  if (base_->src(d) != vit->second.base)
    throw std::invalid_argument("dart " + d + " does not leave the image of " + at);

  const auto key = std::make_pair(at, d);
  if (auto it = dlift_.find(key); it != dlift_.end()) return it->second;

  const std::string& w = base_->dst(d);
  DartPath cand = vit->second.rep;
  cand.push_back(d);
  cand = reduced_path(cand);

  // One identification query: compare the candidate path class against every
  // vertex already lying over w.  A Trivial verdict settles it; otherwise any
  // Unknown means the far vertex cannot be placed soundly.
  std::string head;
  bool undecided = false;
  for (const std::string& cid : over_[w]) {
    const LoopAnswer ans =
        oracle_.ask(concat_paths(cand, reversed_path(verts_.at(cid).rep)));
    if (ans == LoopAnswer::Trivial) {
      if (!head.empty())
        throw std::logic_error("oracle identifies two distinct cover vertices over " + w);
      head = cid;
    } else if (ans == LoopAnswer::Unknown) {
      undecided = true;
    }
  }
  if (head.empty()) {
    if (undecided)
      throw OracleUnknown("vertex identification is undecided over " + w);
    head = new_vertex(w, std::move(cand));
  }

  const std::string be = dart_edge(d);
  const std::string eid = be + "@" + std::to_string(eseq_[be]++);
  Dart lifted;
  if (dart_is_forward(d)) {
    edges_.emplace(eid, CoverEdge{be, at, head});
    lifted = eid;
  } else {
    edges_.emplace(eid, CoverEdge{be, head, at});
    lifted = "-" + eid;
  }
  dlift_[key] = lifted;
  const bool fresh =
      dlift_.emplace(std::make_pair(head, dart_flip(d)), dart_flip(lifted)).second;
  if (!fresh) throw std::logic_error("dart lift collides at " + head);
  return dlift_.at(key);
}

DartPath LazyCover::lift_path(const std::string& at, const DartPath& p) {
  DartPath out;
  std::string cur = at;
  for (const Dart& d : p) {
    out.push_back(lift_dart(cur, d));
    cur = dart_head(out.back());
  }
  return out;
}

std::string LazyCover::lift_vertex(const DartPath& path_from_basepoint) {
  const DartPath lifted = lift_path(basepoint_, path_from_basepoint);
  return lifted.empty() ? basepoint_ : dart_head(lifted.back());
}

std::string LazyCover::lift_face(const std::string& at, const std::string& base_face) {
  auto vit = verts_.find(at);
  if (vit == verts_.end())
    throw std::invalid_argument("unknown cover vertex " + at);
  if (!base_->has_face(base_face))
    throw std::invalid_argument("unknown face " + base_face);
  const DartPath& bnd = base_->boundary(base_face);
  if (bnd.empty()) throw std::invalid_argument("face " + base_face + " has no boundary");
  if (base_->src(bnd.front()) != vit->second.base)
    throw std::invalid_argument("face " + base_face +
                                " does not start at the image of " + at);

  const auto key = std::make_pair(at, base_face);
  if (auto it = flift_.find(key); it != flift_.end()) return it->second;

  const DartPath lifted = lift_path(at, bnd);
  if (dart_head(lifted.back()) != at)
    throw std::logic_error("face lift does not close at " + at);

  std::string id = base_face + "@" + std::to_string(fseq_[base_face]++);
  faces_.emplace(id, CoverFace{base_face, lifted});
  flift_.emplace(key, id);
  return id;
}

const LazyCover::CoverEdge& LazyCover::edge_rec(const Dart& d) const {
  auto it = edges_.find(dart_edge(d));
  if (it == edges_.end()) throw std::invalid_argument("unknown cover dart " + d);
  return it->second;
}

const std::string& LazyCover::dart_tail(const Dart& d) const {
  const CoverEdge& e = edge_rec(d);
  return dart_is_forward(d) ? e.src : e.dst;
}

const std::string& LazyCover::dart_head(const Dart& d) const {
  const CoverEdge& e = edge_rec(d);
  return dart_is_forward(d) ? e.dst : e.src;
}

LazySnapshot LazyCover::materialized() const {
  std::vector<std::string> vs;
  std::vector<EdgeSpec> es;
  std::vector<FaceSpec> fs;
  for (const auto& [id, v] : verts_) {
    (void)v;
    vs.push_back(id);
  }
  for (const auto& [id, e] : edges_) es.push_back({id, e.src, e.dst});
  for (const auto& [id, f] : faces_) fs.push_back({id, f.boundary});
  auto c = std::make_shared<const Complex2>(Complex2::from_edges(vs, es, fs));
  if (!validate_complex(*c).ok())
    throw std::logic_error("materialized region is not a complex");

  CombMap proj;
  proj.source = c;
  proj.target = base_;
  for (const auto& [id, v] : verts_) proj.vmap[id] = v.base;
  for (const auto& [id, e] : edges_) proj.dmap[id] = e.base;
  for (const auto& [id, f] : faces_) proj.fmap[id] = FaceImage{f.base, 0, false};
  if (!validate_map(proj).ok())
    throw std::logic_error("materialized region fails to project");
  return {c, proj};
}

}  // namespace towerkit
