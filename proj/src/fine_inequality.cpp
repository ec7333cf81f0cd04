#include <algorithm>
#include <deque>
#include <stdexcept>

#include "towerkit/checkers.hpp"
#include "towerkit/diagrams.hpp"

namespace towerkit {

namespace {

// Breadth-first distances in the 1-skeleton with one vertex removed.
std::map<std::string, int> punctured_distances(const Complex2& c, const std::string& from,
                                               const std::string& removed) {
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const Dart& d : c.darts_at(cur)) {
      const std::string& nxt = c.dst(d);
      if (nxt == removed || dist.count(nxt)) continue;
      dist[nxt] = dist.at(cur) + 1;
      queue.push_back(nxt);
    }
  }
  return dist;
}

// Largest pairwise distance within the set, or nullopt when some pair is not
// connected in the punctured 1-skeleton.
std::optional<int> punctured_diameter(const Complex2& c, const std::set<std::string>& pts,
                                      const std::string& removed) {
  int diam = 0;
  for (const auto& p : pts) {
    if (p == removed) return std::nullopt;
    const auto dist = punctured_distances(c, p, removed);
    for (const auto& q : pts) {
      const auto it = dist.find(q);
      if (it == dist.end()) return std::nullopt;
      diam = std::max(diam, it->second);
    }
  }
  return diam;
}

}  // namespace

FineReport fine_inequality_check(const CombMap& m, const std::string& x0,
                                 const std::set<std::string>& a, const FineBudgets& budgets) {
  if (!m.source || !m.target) throw std::invalid_argument("map is missing its complexes");
  if (!m.source->has_vertex(x0)) throw std::invalid_argument("unknown vertex " + x0);
  std::set<std::string> around;
  for (const Dart& d : m.source->darts_at(x0)) around.insert(m.source->dst(d));
  for (const auto& v : a)
    if (v == x0 || !around.count(v))
      throw std::invalid_argument(v + " is not a neighbour of " + x0);
  if (!validate_map(m).ok()) throw std::invalid_argument("map is not valid");

  FineReport rep;
  if (!is_immersion(m)) {
    rep.note = "map is not an immersion";
    return rep;
  }
  if (dr_certify(m.target, {budgets.coset_limit, budgets.sphere_faces}).status !=
      DRStatus::Certified) {
    rep.note = "target is not certified reducible and one-connected";
    return rep;
  }
  for (const auto& [f, w] : m.target->faces) {
    (void)f;
    rep.max_face_len = std::max(rep.max_face_len, static_cast<int>(w.size()));
  }

  const auto diam_a = punctured_diameter(*m.source, a, x0);
  if (!diam_a) {
    rep.note = "neighbours separate in the punctured source";
    return rep;
  }
  rep.diam_a = *diam_a;

  std::set<std::string> images;
  for (const auto& v : a) images.insert(m.vertex_image(v));
  const auto diam_fa = punctured_diameter(*m.target, images, m.vertex_image(x0));
  if (!diam_fa) {
    rep.note = "images separate in the punctured target";
    return rep;
  }
  rep.diam_fa = *diam_fa;

  const auto table =
      dehn_estimate(m.target, rep.diam_a + 2, budgets.max_area, budgets.coset_limit);
  if (!table) {
    rep.note = "filling table undecided at the budget";
    return rep;
  }
  rep.dehn_value = table->at(rep.diam_a + 2);

  if (rep.diam_fa <= rep.max_face_len * rep.dehn_value) {
    rep.result = FineResult::Holds;
  } else {
    rep.result = FineResult::Violated;
    rep.note = "violation on certified inputs indicates an engine defect";
  }
  return rep;
}

}  // namespace towerkit
