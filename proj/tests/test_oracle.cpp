#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "towerkit/fixtures.hpp"
#include "towerkit/oracle.hpp"

using namespace towerkit;
namespace fx = towerkit::fixtures;

namespace {

void grow_loops(const Complex2& c, const std::string& v0, DartPath& path, const std::string& at,
                std::size_t n, std::vector<DartPath>& out) {
  for (const auto& d : c.darts_at(at)) {
    path.push_back(d);
    if (c.dst(d) == v0) out.push_back(path);
    if (path.size() < n) grow_loops(c, v0, path, c.dst(d), n, out);
    path.pop_back();
  }
}

// every closed dart path of length 1..n
std::vector<DartPath> closed_loops(const Complex2& c, std::size_t n) {
  std::vector<DartPath> out;
  for (const auto& v : c.vertices) {
    DartPath path;
    grow_loops(c, v, path, v, n, out);
  }
  return out;
}

}  // namespace

TEST_CASE("free reduction decides loops in bare graphs") {
  WordOracle o = WordOracle::standard(fx::cyc(3));
  CHECK(o.ask({}) == LoopAnswer::Trivial);
  CHECK(o.ask({"e0", "-e0"}) == LoopAnswer::Trivial);
  CHECK(o.ask({"e0", "e1", "e2"}) == LoopAnswer::Nontrivial);
  CHECK(o.ask({"e0", "e1", "e2", "e0", "e1", "e2"}) == LoopAnswer::Nontrivial);
  CHECK(o.ask({"e0", "e1", "-e1", "-e0"}) == LoopAnswer::Trivial);

  WordOracle t = WordOracle::standard(fx::theta());
  CHECK(t.ask({"a", "-b"}) == LoopAnswer::Nontrivial);
  CHECK(t.ask({"a", "-a"}) == LoopAnswer::Trivial);
  CHECK(t.ask({"a", "-b", "b", "-a"}) == LoopAnswer::Trivial);
}

TEST_CASE("coset enumeration settles torsion loops") {
  WordOracle o = WordOracle::standard(fx::z3pres());
  CHECK(o.ask({"a", "a", "a"}) == LoopAnswer::Trivial);
  CHECK(o.ask({"a"}) == LoopAnswer::Nontrivial);
  CHECK(o.ask({"a", "a"}) == LoopAnswer::Nontrivial);
  CHECK(o.ask({"-a", "-a", "-a"}) == LoopAnswer::Trivial);
  CHECK(o.ask({"a", "a", "a", "a"}) == LoopAnswer::Nontrivial);
  CHECK(o.ask({"a", "a", "a", "a", "-a"}) == LoopAnswer::Trivial);  // conjugate of the relator

  WordOracle s = WordOracle::standard(fx::s3pres());
  CHECK(s.ask({"x", "x"}) == LoopAnswer::Trivial);
  CHECK(s.ask({"y", "y", "y"}) == LoopAnswer::Trivial);
  CHECK(s.ask({"x", "y", "x", "y"}) == LoopAnswer::Trivial);
  CHECK(s.ask({"x", "y"}) == LoopAnswer::Nontrivial);
  CHECK(s.ask({"x", "-y", "x", "y"}) == LoopAnswer::Nontrivial);
}

TEST_CASE("the free strategy stands aside when faces exist") {
  OracleStrategy free_red{OracleStrategy::FreeReduction, 0};
  WordOracle o(fx::z3pres(), {free_red});
  CHECK(o.ask({"a", "a", "a"}) == LoopAnswer::Unknown);
  CHECK(o.ask_one(free_red, {"a"}) == LoopAnswer::Unknown);
  CHECK(o.ask({"a", "-a"}) == LoopAnswer::Trivial);  // reduces to nothing without any strategy
}

TEST_CASE("open enumerations leave loops undecided") {
  OracleStrategy tc{OracleStrategy::ToddCoxeter, 1000};
  WordOracle o(fx::cyc(3), {tc});  // no relators: the table never closes
  CHECK(o.ask({"e0", "e1", "e2"}) == LoopAnswer::Unknown);
  CHECK(WordOracle::standard(fx::cyc(3)).ask({"e0", "e1", "e2"}) == LoopAnswer::Nontrivial);

  WordOracle torus(fx::torus1(), {{OracleStrategy::ToddCoxeter, 300}});
  CHECK(torus.ask({"a"}) == LoopAnswer::Unknown);
  CHECK(torus.ask({"a", "b", "-a", "-b"}) == LoopAnswer::Unknown);
}

TEST_CASE("bounded filling certifies only triviality") {
  OracleStrategy dehn{OracleStrategy::DehnSearch, 4};
  WordOracle o(fx::torus1(), {dehn});
  CHECK(o.ask({"a", "b", "-a", "-b"}) == LoopAnswer::Trivial);
  CHECK(o.ask({"a"}) == LoopAnswer::Unknown);
  CHECK(o.ask({"a", "b"}) == LoopAnswer::Unknown);

  WordOracle s = WordOracle::standard(fx::torus1(), 200, 4);
  CHECK(s.ask({"a", "b", "-a", "-b"}) == LoopAnswer::Trivial);
  CHECK(s.ask({"a"}) == LoopAnswer::Unknown);
}

TEST_CASE("malformed loops are rejected") {
  WordOracle o = WordOracle::standard(fx::disk3());
  CHECK_THROWS_AS(o.ask({"zz"}), std::invalid_argument);
  CHECK_THROWS_AS(o.ask({"a"}), std::invalid_argument);       // open path
  CHECK_THROWS_AS(o.ask({"a", "c"}), std::invalid_argument);  // breaks at c
  CHECK_THROWS_AS(WordOracle::standard(nullptr), std::invalid_argument);
}

TEST_CASE("strategies agree wherever they commit") {
  std::vector<ComplexPtr> corpus = {fx::disk3(), fx::sphere2(), fx::torus1(), fx::z3pres(),
                                    fx::s3pres(), fx::cyc(3),   fx::theta(),  fx::wheel(4)};
  std::vector<OracleStrategy> strategies = {{OracleStrategy::FreeReduction, 0},
                                            {OracleStrategy::ToddCoxeter, 500},
                                            {OracleStrategy::DehnSearch, 5}};
  std::size_t committed = 0;
  for (const auto& c : corpus) {
    WordOracle o(c, strategies);
    for (const auto& loop : closed_loops(*c, 4)) {
      LoopAnswer seen = LoopAnswer::Unknown;
      for (const auto& s : strategies) {
        LoopAnswer a = o.ask_one(s, loop);
        if (a == LoopAnswer::Unknown) continue;
        if (seen == LoopAnswer::Unknown) {
          seen = a;
          ++committed;
        }
        CHECK(a == seen);
      }
      // the chained answer is the first committed one
      CHECK(o.ask(loop) == seen);
    }
  }
  CHECK(committed > 100);
}

TEST_CASE("answers are stable across fresh oracles") {
  auto z = fx::z3pres();
  WordOracle a = WordOracle::standard(z);
  WordOracle b = WordOracle::standard(z);
  for (const auto& loop : closed_loops(*z, 5)) {
    LoopAnswer first = a.ask(loop);
    CHECK(first == b.ask(loop));
    CHECK(first == a.ask(loop));  // memoized re-ask
  }
}
