#include "doctest.h"
#include "support.hpp"
#include "towerkit/fixtures.hpp"
#include "towerkit/presentation.hpp"

using namespace towerkit;
namespace fx = towerkit::fixtures;
namespace ts = towerkit::testsupport;

TEST_CASE("one-vertex one-relator complex presents as a cyclic group") {
  Presentation p = presentation(fx::z3pres());
  CHECK(p.basepoint == "v");
  CHECK(p.tree.empty());
  CHECK(p.generators == std::vector<std::string>{"a"});
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0] == DartPath{"a", "a", "a"});
  CHECK(validate_presentation(p).ok());
}

TEST_CASE("a cycle presents as a free group of rank one") {
  Presentation p = presentation(fx::cyc(3));
  CHECK(p.tree.size() == 2);
  CHECK(p.generators.size() == 1);
  CHECK(p.relators.empty());
  CHECK(validate_presentation(p).ok());
}

TEST_CASE("a disk presents with one generator killed by the face") {
  Presentation p = presentation(fx::disk3());
  // BFS from v0 explores "-c" before "a", so the tree is {a, c}
  CHECK(p.tree == std::set<std::string>{"a", "c"});
  CHECK(p.generators == std::vector<std::string>{"b"});
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0] == DartPath{"b"});
}

TEST_CASE("two faces give two relators") {
  Presentation p = presentation(fx::sphere2());
  CHECK(p.generators == std::vector<std::string>{"b"});
  REQUIRE(p.relators.size() == 2);
  CHECK(p.relators[0] == DartPath{"b"});
  CHECK(p.relators[1] == DartPath{"b"});
}

TEST_CASE("torus presentation keeps the commutator relator") {
  Presentation p = presentation(fx::torus1());
  CHECK(p.generators == std::vector<std::string>{"a", "b"});
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0] == DartPath{"a", "b", "-a", "-b"});
}

TEST_CASE("presentation rejects disconnected complexes and bad basepoints") {
  auto c = std::make_shared<Complex2>(
      Complex2::from_edges({"u0", "u1", "w0"}, {{"a", "u0", "u1"}}, {}));
  CHECK_THROWS(presentation(c));
  CHECK_THROWS(presentation(fx::disk3(), "nope"));
}

TEST_CASE("tree paths walk the tree from the basepoint") {
  Presentation p = presentation(fx::wheel(6));
  CHECK(tree_path(p, p.basepoint).empty());
  for (const auto& v : p.space->vertices) {
    std::string at = p.basepoint;
    for (const auto& d : tree_path(p, v)) {
      CHECK(p.tree.count(p.space->edge_of(d)));
      CHECK(p.space->src(d) == at);
      at = p.space->dst(d);
    }
    CHECK(at == v);
  }
  CHECK(validate_presentation(p).ok());
}

TEST_CASE("loop words delete tree darts and reduce freely") {
  Presentation p = presentation(fx::cyc(3), "v0");
  std::string gen = p.generators[0];
  CHECK(loop_word(p, {"e0", "e1", "e2"}) == DartPath{gen});
  CHECK(loop_word(p, {"e0", "-e0"}).empty());  // backtrack on a tree dart
  CHECK(loop_word(p, {"e0", "e1", "e2", "-e2", "-e1", "-e0"}).empty());
  CHECK(loop_word(p, {}).empty());

  Presentation d = presentation(fx::disk3(), "v0");
  CHECK(loop_word(d, {"a", "b", "c"}) == DartPath{"b"});

  CHECK_THROWS(loop_word(p, {"e0"}));                       // not closed
  CHECK_THROWS(loop_word(p, {"e1"}));                       // not at basepoint
  CHECK_THROWS(loop_word_at(p, "v1", {"e0", "e1", "e2"}));  // breaks immediately
  CHECK(loop_word_at(p, "v1", {"e1", "e2", "e0"}) == DartPath{gen});
}

TEST_CASE("generator loops are closed at the basepoint and carry one generator") {
  for (const auto& c : {fx::cyc(5), fx::wheel(4), fx::theta(), fx::torus1()}) {
    Presentation p = presentation(c);
    for (const auto& g : p.generators) {
      DartPath loop = generator_loop(p, g);
      std::string at = p.basepoint;
      for (const auto& d : loop) at = c->dst(d);
      CHECK(at == p.basepoint);
      CHECK(loop_word(p, loop) == DartPath{g});
    }
  }
}

TEST_CASE("random complexes present cleanly") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    ComplexPtr c = std::make_shared<Complex2>(ts::random_complex(rng));
    if (!is_connected(*c)) continue;
    Presentation p = presentation(c);
    CHECK(validate_presentation(p).ok());
    CHECK(p.generators.size() == c->edge_ids().size() - p.tree.size());
    // every relator letter is a non-tree dart
    for (const auto& rel : p.relators)
      for (const auto& d : rel) CHECK_FALSE(p.tree.count(c->edge_of(d)));
  }
}
