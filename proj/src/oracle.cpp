#include "towerkit/oracle.hpp"

#include <stdexcept>

namespace towerkit {

namespace {

// Throws unless the path is a closed loop made of known darts.
void check_loop(const Complex2& c, const DartPath& loop) {
  if (loop.empty()) return;
  for (const Dart& d : loop) {
    if (!c.has_dart(d)) throw std::invalid_argument("loop uses unknown dart " + d);
  }
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    if (c.dst(loop[i]) != c.src(loop[i + 1])) {
      throw std::invalid_argument("loop breaks at dart " + loop[i + 1]);
    }
  }
  if (c.dst(loop.back()) != c.src(loop.front())) {
    throw std::invalid_argument("loop is not closed");
  }
}

}  // namespace

WordOracle::WordOracle(ComplexPtr c, std::vector<OracleStrategy> chain)
    : c_(std::move(c)), chain_(std::move(chain)) {
  if (!c_) throw std::invalid_argument("oracle complex is null");
}

WordOracle WordOracle::standard(ComplexPtr c, long coset_limit, long area_limit) {
  std::vector<OracleStrategy> chain;
  chain.push_back({OracleStrategy::FreeReduction, 0});
  chain.push_back({OracleStrategy::ToddCoxeter, coset_limit});
  chain.push_back({OracleStrategy::DehnSearch, area_limit});
  return WordOracle(std::move(c), std::move(chain));
}

WordOracle::Certificate& WordOracle::certificate(const std::string& vertex, long limit) const {
  if (comp_base_.empty()) {
    for (const auto& comp : connected_components(*c_)) {
      const std::string& base = *comp.begin();
      for (const auto& v : comp) comp_base_[v] = base;
    }
  }
  const std::string& base = comp_base_.at(vertex);
  Certificate& cert = certs_[base];
  if (!cert.pres) {
    Subcomplex seed;
    for (const auto& [v, b] : comp_base_) {
      if (b == base) seed.vertices.insert(v);
    }
    auto comp = std::make_shared<const Complex2>(restrict_complex(*c_, span(*c_, seed)));
    cert.pres = presentation(comp, base);
  }
  if (!cert.table && limit > cert.tried_limit) {
    cert.table = coset_enumerate(*cert.pres, {}, limit);
    cert.tried_limit = limit;
  }
  return cert;
}

LoopAnswer WordOracle::ask_one(const OracleStrategy& s, const DartPath& loop) const {
  check_loop(*c_, loop);
  DartPath canon = canonical_cyclic_word(loop);
  if (canon.empty()) return LoopAnswer::Trivial;
  switch (s.kind) {
    case OracleStrategy::FreeReduction: {
      if (c_->face_count() != 0) return LoopAnswer::Unknown;
      return LoopAnswer::Nontrivial;  // reduced loops in a graph never contract
    }
    case OracleStrategy::ToddCoxeter: {
      if (s.limit < 1) return LoopAnswer::Unknown;
      Certificate& cert = certificate(c_->src(canon.front()), s.limit);
      if (!cert.table) return LoopAnswer::Unknown;
      DartPath word = loop_word_at(*cert.pres, c_->src(canon.front()), canon);
      return cert.table->follow(0, word) == 0 ? LoopAnswer::Trivial : LoopAnswer::Nontrivial;
    }
    case OracleStrategy::DehnSearch: {
      if (!filler_) filler_ = std::make_unique<DiskFiller>(c_);
      auto area = filler_->word_area(canon, static_cast<int>(s.limit));
      return area.has_value() ? LoopAnswer::Trivial : LoopAnswer::Unknown;
    }
  }
  return LoopAnswer::Unknown;
}

LoopAnswer WordOracle::ask(const DartPath& loop) const {
  check_loop(*c_, loop);
  DartPath canon = canonical_cyclic_word(loop);
  if (canon.empty()) return LoopAnswer::Trivial;
  auto it = memo_.find(canon);
  if (it != memo_.end()) return it->second;
  LoopAnswer ans = LoopAnswer::Unknown;
  for (const auto& s : chain_) {
    ans = ask_one(s, canon);
    if (ans != LoopAnswer::Unknown) break;
  }
  memo_.emplace(std::move(canon), ans);
  return ans;
}

}  // namespace towerkit
