#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "towerkit/coset.hpp"
#include "towerkit/diagrams.hpp"

namespace towerkit {

enum class LoopAnswer { Trivial, Nontrivial, Unknown };

// Thrown by constructions that need a definite answer and got Unknown:
// soundness over progress, never a guessed identification.
struct OracleUnknown : std::runtime_error {
  explicit OracleUnknown(const std::string& what) : std::runtime_error(what) {}
};

// One bounded word-problem strategy.
//  - FreeReduction: exact, but only on complexes without faces.
//  - ToddCoxeter: exact whenever the coset table closes within the limit.
//  - DehnSearch: answers Trivial when a filling of area <= limit exists;
//    never answers Nontrivial.
struct OracleStrategy {
  enum Kind { FreeReduction, ToddCoxeter, DehnSearch } kind = FreeReduction;
  long limit = 0;
};

// Decides contractibility of closed loops by running a strategy chain until
// one strategy commits.  Definite answers are always sound; budget shortfalls
// surface as Unknown.  Answers are memoized per loop homotopy-rotation class.
class WordOracle {
 public:
  WordOracle(ComplexPtr c, std::vector<OracleStrategy> chain);

  // FreeReduction, then ToddCoxeter, then DehnSearch with the given budgets.
  static WordOracle standard(ComplexPtr c, long coset_limit = 4000, long area_limit = 8);

  // Loop must be a closed dart path in the complex; the empty loop counts
  // as Trivial.  Throws std::invalid_argument on broken or unclosed paths.
  LoopAnswer ask(const DartPath& loop) const;

  // Single strategy, no chain and no memo; for cross-checking strategies.
  LoopAnswer ask_one(const OracleStrategy& s, const DartPath& loop) const;

  const ComplexPtr& space() const { return c_; }
  const std::vector<OracleStrategy>& chain() const { return chain_; }

 private:
  struct Certificate {  // per connected component, built on first use
    std::optional<Presentation> pres;
    std::optional<CosetTable> table;
    long tried_limit = -1;  // largest enumeration budget attempted so far
  };

  Certificate& certificate(const std::string& vertex, long limit) const;

  ComplexPtr c_;
  std::vector<OracleStrategy> chain_;
  mutable std::map<DartPath, LoopAnswer> memo_;
  mutable std::map<std::string, std::string> comp_base_;  // vertex -> component basepoint
  mutable std::map<std::string, Certificate> certs_;      // basepoint -> cached table
  mutable std::unique_ptr<DiskFiller> filler_;
};

}  // namespace towerkit
