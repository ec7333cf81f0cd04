#pragma once

#include <string>
#include <vector>

namespace towerkit {

// Darts are named by strings.  An edge with id "x" contributes the forward
// dart "x" and the reverse dart "-x"; reversal toggles the "-" prefix.
using Dart = std::string;
using DartPath = std::vector<Dart>;

inline bool dart_is_forward(const Dart& d) { return d.empty() || d[0] != '-'; }

inline Dart dart_flip(const Dart& d) {
  if (!d.empty() && d[0] == '-') return d.substr(1);
  return "-" + d;
}

// Canonical edge name of a dart under the sign convention.
inline std::string dart_edge(const Dart& d) {
  if (!d.empty() && d[0] == '-') return d.substr(1);
  return d;
}

inline DartPath reversed_path(const DartPath& p) {
  DartPath out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(dart_flip(*it));
  return out;
}

inline DartPath concat_paths(const DartPath& a, const DartPath& b) {
  DartPath out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Free reduction: cancel adjacent d, flip(d) pairs.
inline DartPath reduced_path(const DartPath& p) {
  DartPath out;
  for (const auto& d : p) {
    if (!out.empty() && out.back() == dart_flip(d)) out.pop_back();
    else out.push_back(d);
  }
  return out;
}

// Cyclic free reduction of a closed path.
inline DartPath cyclically_reduced_path(const DartPath& p) {
  DartPath w = reduced_path(p);
  while (w.size() >= 2 && w.front() == dart_flip(w.back())) {
    w.erase(w.begin());
    w.pop_back();
    w = reduced_path(w);
  }
  return w;
}

// Index of the lexicographically smallest rotation of w (the first one).
inline std::size_t canonical_shift(const DartPath& w) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < w.size(); ++r) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& a = w[(i + r) % w.size()];
      const auto& b = w[(i + best) % w.size()];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  return best;
}

inline DartPath canonical_rotation(const DartPath& w) {
  const std::size_t r = canonical_shift(w);
  DartPath out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + r) % w.size()]);
  return out;
}

// Basepoint-free normal form of a closed word: cyclic reduction, then the
// canonical rotation.  Two loops around the same cycle share this key.
inline DartPath canonical_cyclic_word(const DartPath& w) {
  DartPath r = cyclically_reduced_path(w);
  if (r.size() < 2) return r;
  return canonical_rotation(r);
}

}  // namespace towerkit
