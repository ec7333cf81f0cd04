#include "towerkit/coset.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace towerkit {

int CosetTable::follow(int start, const Dart& d) const {
  if (start < 0 || start >= static_cast<int>(rows.size()))
    throw std::invalid_argument("CosetTable::follow: coset out of range");
  auto it = rows[start].find(d);
  if (it == rows[start].end()) throw std::invalid_argument("CosetTable::follow: unknown dart " + d);
  return it->second;
}

int CosetTable::follow(int start, const DartPath& word) const {
  int at = start;
  for (const auto& d : word) at = follow(at, d);
  return at;
}

ValidationReport validate_coset_table(const CosetTable& t) {
  ValidationReport r;
  const int n = static_cast<int>(t.rows.size());
  if (n == 0) r.add("empty", "a coset table has at least the subgroup's coset");
  for (const auto& g : t.generators) {
    std::vector<int> seen(n, 0);
    for (int k = 0; k < n; ++k) {
      for (const Dart& d : {Dart(g), dart_flip(g)}) {
        auto it = t.rows[k].find(d);
        if (it == t.rows[k].end()) {
          r.add("incomplete", "row " + std::to_string(k) + " lacks " + d);
          continue;
        }
        if (it->second < 0 || it->second >= n)
          r.add("range", "entry out of range in row " + std::to_string(k));
      }
      auto fwd = t.rows[k].find(g);
      if (fwd != t.rows[k].end() && fwd->second >= 0 && fwd->second < n) {
        ++seen[fwd->second];
        auto back = t.rows[fwd->second].find(dart_flip(g));
        if (back == t.rows[fwd->second].end() || back->second != k)
          r.add("not-inverse", "columns " + g + " and " + dart_flip(g) + " do not invert each other");
      }
    }
    for (int k = 0; k < n; ++k)
      if (seen[k] != 1) {
        r.add("not-permutation", "column " + g + " is not a permutation");
        break;
      }
  }
  for (std::size_t k = 0; k < t.rows.size(); ++k)
    for (const auto& [d, img] : t.rows[k]) {
      const std::string e = dart_is_forward(d) ? d : dart_flip(d);
      if (!std::count(t.generators.begin(), t.generators.end(), e))
        r.add("unknown-column", "row " + std::to_string(k) + " mentions non-generator " + d);
    }
  return r;
}

namespace {

// Mutable enumeration state: table entries, union-find over cosets, and the
// queue of pending coincidences.
struct Enumeration {
  std::vector<Dart> alphabet;            // g1, -g1, g2, -g2, ...
  std::map<Dart, int> column;            // dart -> column index
  std::vector<std::vector<int>> table;   // -1 = undefined
  std::vector<int> parent;               // union-find
  std::deque<std::pair<int, int>> pending;
  long defined = 1;
  long limit;

  explicit Enumeration(const std::vector<std::string>& gens, long lim) : limit(lim) {
    for (const auto& g : gens) {
      column[g] = static_cast<int>(alphabet.size());
      alphabet.push_back(g);
      column[dart_flip(g)] = static_cast<int>(alphabet.size());
      alphabet.push_back(dart_flip(g));
    }
    table.push_back(std::vector<int>(alphabet.size(), -1));
    parent.push_back(0);
  }

  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool alive(int a) { return parent[a] == a; }

  int inv_col(int col) const { return col ^ 1; }

  int get(int a, int col) { return table[a][col]; }

  // Record a*alphabet[col] = b together with the inverse entry; conflicting
  // prior entries become coincidences.
  void set(int a, int col, int b) {
    a = find(a);
    b = find(b);
    int& fwd = table[a][col];
    if (fwd == -1)
      fwd = b;
    else if (find(fwd) != b)
      pending.push_back({find(fwd), b});
    int& back = table[b][inv_col(col)];
    if (back == -1)
      back = a;
    else if (find(back) != a)
      pending.push_back({find(back), a});
  }

  bool define(int a, int col, int& out) {
    if (defined >= limit) return false;
    ++defined;
    int b = static_cast<int>(table.size());
    table.push_back(std::vector<int>(alphabet.size(), -1));
    parent.push_back(b);
    set(a, col, b);
    out = b;
    return true;
  }

  void merge_into(int winner, int loser) {
    parent[loser] = winner;
    for (std::size_t col = 0; col < alphabet.size(); ++col) {
      int img = table[loser][col];
      if (img == -1) continue;
      img = find(img);
      int cur = table[winner][col];
      if (cur == -1) {
        // adopt the entry, keeping the inverse direction consistent
        set(winner, static_cast<int>(col), img);
      } else if (find(cur) != img) {
        pending.push_back({find(cur), img});
      }
    }
  }

  void process_coincidences() {
    while (!pending.empty()) {
      auto [a, b] = pending.front();
      pending.pop_front();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      merge_into(a, b);
    }
  }

  // HLT scan of a word at coset a: walk from both ends, bridge the gap with
  // new cosets, close with a deduction.  Returns false on limit exhaustion.
  bool scan_and_fill(int a, const DartPath& word) {
    if (word.empty()) return true;
    std::vector<int> cols;
    cols.reserve(word.size());
    for (const auto& d : word) cols.push_back(column.at(d));

    int f = find(a);
    std::size_t i = 0;
    const std::size_t m = cols.size();
    while (true) {
      while (i < m && get(f, cols[i]) != -1) f = find(get(f, cols[i])), ++i;
      if (i == m) {
        if (f != find(a)) {
          pending.push_back({f, find(a)});
          process_coincidences();
        }
        return true;
      }
      int b = find(a);
      std::size_t j = m;
      while (j > i + 1 && get(b, inv_col(cols[j - 1])) != -1) b = find(get(b, inv_col(cols[j - 1]))), --j;
      if (j == i + 1) {
        set(f, cols[i], b);  // deduction closes the single gap
        process_coincidences();
        return true;
      }
      // bridge one letter and rescan (f may have died in a coincidence)
      int next;
      if (!define(f, cols[i], next)) return false;
      f = find(next);
      ++i;
      if (!alive(a) || !pending.empty()) {
        process_coincidences();
        f = find(a);
        i = 0;
      }
    }
  }
};

}  // namespace

std::optional<CosetTable> coset_enumerate(const Presentation& p,
                                          const std::vector<DartPath>& subgens,
                                          long limit) {
  if (limit < 1) throw std::invalid_argument("coset_enumerate: limit must be >= 1");
  for (const auto& w : subgens)
    for (const auto& d : w)
      if (!p.is_generator(dart_is_forward(d) ? d : dart_flip(d)))
        throw std::invalid_argument("coset_enumerate: subgroup word letter " + d +
                                    " is not a generator dart");

  Enumeration e(p.generators, limit);
  for (const auto& w : subgens)
    if (!e.scan_and_fill(e.find(0), w)) return std::nullopt;

  for (int a = 0; a < static_cast<int>(e.table.size()); ++a) {
    if (!e.alive(a)) continue;
    for (const auto& rel : p.relators) {
      if (!e.scan_and_fill(a, rel)) return std::nullopt;
      if (!e.alive(a)) break;
    }
    if (!e.alive(a)) continue;
    for (std::size_t col = 0; col < e.alphabet.size(); ++col) {
      if (!e.alive(a)) break;
      if (e.get(a, static_cast<int>(col)) == -1) {
        int out;
        if (!e.define(a, static_cast<int>(col), out)) return std::nullopt;
        e.process_coincidences();
      }
    }
  }

  // canonical renumbering: BFS from the subgroup coset over sorted columns
  std::map<int, int> number;
  std::vector<int> order;
  int root = e.find(0);
  number[root] = 0;
  order.push_back(root);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t col = 0; col < e.alphabet.size(); ++col) {
      int img = e.get(order[head], static_cast<int>(col));
      if (img == -1) throw std::logic_error("coset_enumerate: incomplete closed table");
      img = e.find(img);
      if (!number.count(img)) {
        number[img] = static_cast<int>(order.size());
        order.push_back(img);
      }
    }
  }

  CosetTable t;
  t.generators = p.generators;
  t.rows.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    for (std::size_t col = 0; col < e.alphabet.size(); ++col)
      t.rows[k][e.alphabet[col]] = number.at(e.find(e.get(order[k], static_cast<int>(col))));
  return t;
}

}  // namespace towerkit
