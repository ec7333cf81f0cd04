#include "doctest.h"

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "towerkit/checkers.hpp"
#include "towerkit/cover.hpp"
#include "towerkit/fixtures.hpp"
#include "towerkit/maps.hpp"

using namespace towerkit;
namespace fx = towerkit::fixtures;

namespace {

// All corners of every face of a triangulated wheel: the first corner of each
// face sits at the hub, the other two on the rim.
AngleAssignment wheel_angles(std::size_t n, const Rational& hub, const Rational& rim) {
  AngleAssignment a;
  for (std::size_t i = 0; i < n; ++i)
    a.corners["t" + std::to_string(i)] = {hub, rim, rim};
  return a;
}

std::set<std::string> issue_codes(const ValidationReport& rep) {
  std::set<std::string> out;
  for (const auto& issue : rep.issues) out.insert(issue.code);
  return out;
}

// Deletes free faces in every possible order and checks the results agree.
std::set<std::string> core_every_order(const Complex2& c, const std::set<std::string>& faces,
                                       std::map<std::set<std::string>, std::set<std::string>>& memo) {
  if (const auto it = memo.find(faces); it != memo.end()) return it->second;
  std::map<std::string, int> mult;
  for (const auto& f : faces)
    for (const Dart& d : c.boundary(f)) mult[dart_edge(d)] += 1;
  std::vector<std::string> victims;
  for (const auto& f : faces)
    for (const Dart& d : c.boundary(f))
      if (mult.at(dart_edge(d)) == 1) {
        victims.push_back(f);
        break;
      }
  std::set<std::string> result = faces;
  if (!victims.empty()) {
    bool first = true;
    for (const auto& v : victims) {
      std::set<std::string> rest = faces;
      rest.erase(v);
      const auto got = core_every_order(c, rest, memo);
      if (first) {
        result = got;
        first = false;
      } else {
        CHECK(got == result);
      }
    }
  }
  memo[faces] = result;
  return result;
}

std::set<std::string> face_ids(const Complex2& c) {
  std::set<std::string> out;
  for (const auto& [f, w] : c.faces) {
    (void)w;
    out.insert(f);
  }
  return out;
}

// Two triangles sharing one vertex; one-connected with an empty face core.
ComplexPtr bowtie() {
  return std::make_shared<const Complex2>(Complex2::from_edges(
      {"m", "p0", "p1", "q0", "q1"},
      {{"pa", "m", "p0"},
       {"pb", "p0", "p1"},
       {"pc", "p1", "m"},
       {"qa", "m", "q0"},
       {"qb", "q0", "q1"},
       {"qc", "q1", "m"}},
      {{"fp", {"pa", "pb", "pc"}}, {"fq", {"qa", "qb", "qc"}}}));
}

// A hexagon wrapping once around each bowtie triangle; an immersion whose two
// hub preimages are distinct.
CombMap hexagon_over_bowtie() {
  CombMap m;
  m.source = std::make_shared<const Complex2>(Complex2::from_edges(
      {"m1", "P0", "P1", "m2", "Q0", "Q1"}, {{"u0", "m1", "P0"},
                                             {"u1", "P0", "P1"},
                                             {"u2", "P1", "m2"},
                                             {"u3", "m2", "Q0"},
                                             {"u4", "Q0", "Q1"},
                                             {"u5", "Q1", "m1"}}));
  m.target = bowtie();
  m.vmap = {{"m1", "m"}, {"m2", "m"}, {"P0", "p0"}, {"P1", "p1"},
            {"Q0", "q0"}, {"Q1", "q1"}};
  m.dmap = {{"u0", "pa"}, {"u1", "pb"}, {"u2", "pc"},
            {"u3", "qa"}, {"u4", "qb"}, {"u5", "qc"}};
  return m;
}

}  // namespace

TEST_CASE("flag detection fills in empty triangles") {
  CHECK(is_flag(fx::cycle_simp(5)).ok);
  CHECK(is_flag(fx::oct()).ok);
  CHECK(is_flag(fx::oct()).four_cliques.empty());

  // an empty triangle: three mutually adjacent vertices without a 2-simplex
  const auto hollow = SimpComplex::from_maximal(
      {"w0", "w1", "w2"}, {{"w0", "w1"}, {"w1", "w2"}, {"w0", "w2"}});
  const auto bad = is_flag(hollow);
  CHECK_FALSE(bad.ok);
  CHECK(bad.violating_clique == std::vector<std::string>{"w0", "w1", "w2"});

  // boundary of the 3-simplex: flag, but its 4-clique spans a hollow ball
  const auto tetra = SimpComplex::from_maximal(
      {"a", "b", "c", "d"},
      {{"a", "b", "c"}, {"a", "b", "d"}, {"a", "c", "d"}, {"b", "c", "d"}});
  const auto warn = is_flag(tetra);
  CHECK(warn.ok);
  REQUIRE(warn.four_cliques.size() == 1);
  CHECK(warn.four_cliques[0] == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("largeness finds the shortest full cycle") {
  CHECK(is_k_large(fx::cycle_simp(6), 6).ok);

  const auto oct = is_k_large(fx::oct(), 6);
  CHECK_FALSE(oct.ok);
  CHECK(oct.reason == "cycle");
  CHECK(oct.witness == std::vector<std::string>{"x0", "y0", "x1", "y1"});
  CHECK(oct.four_cliques.empty());

  const auto penta = is_k_large(fx::cycle_simp(5), 6);
  CHECK_FALSE(penta.ok);
  CHECK(penta.reason == "cycle");
  CHECK(penta.witness == std::vector<std::string>{"w0", "w1", "w2", "w3", "w4"});

  const auto hex7 = is_k_large(fx::cycle_simp(6), 7);
  CHECK_FALSE(hex7.ok);
  CHECK(hex7.reason == "cycle");
  CHECK(hex7.witness.size() == 6);

  const auto hollow = SimpComplex::from_maximal(
      {"w0", "w1", "w2"}, {{"w0", "w1"}, {"w1", "w2"}, {"w0", "w2"}});
  const auto clique = is_k_large(hollow, 6);
  CHECK_FALSE(clique.ok);
  CHECK(clique.reason == "clique");
  CHECK(clique.witness == std::vector<std::string>{"w0", "w1", "w2"});

  CHECK_THROWS_AS(is_k_large(fx::cycle_simp(6), 5), std::invalid_argument);
}

TEST_CASE("local largeness inspects every simplex link") {
  CHECK(is_locally_k_large(fx::wheel_simp(6), 6).ok);
  CHECK(is_locally_k_large(fx::cycle_simp(6), 6).ok);

  // octahedron vertex links are hollow squares
  const auto oct = is_locally_k_large(fx::oct(), 6);
  CHECK_FALSE(oct.ok);
  CHECK(oct.simplex == std::vector<std::string>{"x0"});
  CHECK(oct.link_check.reason == "cycle");
  CHECK(oct.link_check.witness == std::vector<std::string>{"y0", "z0", "y1", "z1"});

  // a short rim makes the hub link a short full cycle
  const auto small = is_locally_k_large(fx::wheel_simp(4), 6);
  CHECK_FALSE(small.ok);
  CHECK(small.simplex == std::vector<std::string>{"c"});
  CHECK(small.link_check.witness.size() == 4);

  CHECK_THROWS_AS(is_locally_k_large(fx::oct(), 4), std::invalid_argument);
}

TEST_CASE("angle assignments are validated corner by corner") {
  const auto c = fx::wheel(4);
  auto good = wheel_angles(4, Rational(1, 2), Rational(1, 4));
  CHECK(validate_angles(*c, good).ok());

  auto missing = good;
  missing.corners.erase("t0");
  CHECK(issue_codes(validate_angles(*c, missing)) == std::set<std::string>{"missing-face"});

  auto short_face = good;
  short_face.corners["t1"] = {Rational(1, 2), Rational(1, 4)};
  CHECK(issue_codes(validate_angles(*c, short_face)) == std::set<std::string>{"corner-count"});

  auto negative = good;
  negative.corners["t2"][1] = Rational(-1, 4);
  CHECK(issue_codes(validate_angles(*c, negative)) == std::set<std::string>{"negative-angle"});

  auto extra = good;
  extra.corners["zz"] = {Rational(1)};
  CHECK(issue_codes(validate_angles(*c, extra)) == std::set<std::string>{"unknown-face"});

  // a graph carries the empty assignment
  CHECK(validate_angles(*fx::cyc(3), AngleAssignment{}).ok());
}

TEST_CASE("negative curvature weighs faces and vertex circuits") {
  // hub angle 2/7 of pi: face sums 11/14 < 1 and the hub circuit is exactly 2
  const auto w7 = fx::wheel(7);
  const auto ok = check_negative_curvature(*w7, wheel_angles(7, Rational(2, 7), Rational(1, 4)));
  CHECK(ok.ok);
  CHECK(ok.face.empty());
  CHECK(ok.vertex.empty());

  // equilateral euclidean triangles: face sums hit 1 exactly
  const auto w6 = fx::wheel(6);
  const auto flat = check_negative_curvature(*w6, wheel_angles(6, Rational(1, 3), Rational(1, 3)));
  CHECK_FALSE(flat.ok);
  CHECK(flat.face == "t0");
  CHECK(flat.vertex.empty());
  CHECK(flat.measure == Rational(1));

  // skinny triangles pass the face test but focus the hub to 3/2 < 2
  const auto sharp = check_negative_curvature(*w6, wheel_angles(6, Rational(1, 4), Rational(1, 4)));
  CHECK_FALSE(sharp.ok);
  CHECK(sharp.face.empty());
  CHECK(sharp.vertex == "c");
  CHECK(sharp.measure == Rational(3, 2));
  REQUIRE(sharp.circuit.size() == 6);
  std::set<Dart> nodes(sharp.circuit.begin(), sharp.circuit.end());
  CHECK(nodes == std::set<Dart>{"s0", "s1", "s2", "s3", "s4", "s5"});

  // exact arithmetic keeps a hub of 27/100 strictly under the threshold
  const auto close = check_negative_curvature(
      *w7, wheel_angles(7, Rational(27, 100), Rational(1, 4)));
  CHECK_FALSE(close.ok);
  CHECK(close.vertex == "c");
  CHECK(close.measure == Rational(189, 100));

  // a complex with no faces has nothing to weigh
  const auto vac = check_negative_curvature(*fx::cyc(3), AngleAssignment{});
  CHECK(vac.ok);

  CHECK_THROWS_AS(check_negative_curvature(*w6, AngleAssignment{}), std::invalid_argument);
}

TEST_CASE("the face core survives exactly the faces with no free edge") {
  CHECK(dr_core(*fx::disk3()).empty);
  CHECK(dr_core(*fx::wheel(6)).empty);
  CHECK(dr_core(*fx::disk3()).core.faces.empty());
  CHECK(dr_core(*fx::disk3()).core.vertices.empty());

  const auto sphere = dr_core(*fx::sphere2());
  CHECK_FALSE(sphere.empty);
  CHECK(sphere.core.faces == std::set<std::string>{"f1", "f2"});
  CHECK(sphere.core.vertices == std::set<std::string>{"v0", "v1", "v2"});

  CHECK(dr_core(*fx::torus1()).core.faces == std::set<std::string>{"f"});
  CHECK(dr_core(*fx::z3pres()).core.faces == std::set<std::string>{"f"});
  CHECK(dr_core(*fx::s3pres()).core.faces == std::set<std::string>{"r1", "r2", "r3"});

  // restricting to part of the wheel still cascades to nothing
  const auto w6 = fx::wheel(6);
  Subcomplex seed;
  seed.faces = {"t0", "t1"};
  CHECK(dr_core(*w6, closure(*w6, seed)).empty);
}

TEST_CASE("the face core is monotone and order-independent") {
  std::mt19937 rng(20250816);
  for (const auto& c : {fx::wheel(6), fx::sphere2(), fx::s3pres(), fx::torus1()}) {
    const auto all = face_ids(*c);
    const auto whole = dr_core(*c).core.faces;

    std::map<std::set<std::string>, std::set<std::string>> memo;
    CHECK(core_every_order(*c, all, memo) == whole);

    std::vector<std::string> pool(all.begin(), all.end());
    for (int trial = 0; trial < 25; ++trial) {
      Subcomplex seed;
      for (const auto& f : pool)
        if (std::uniform_int_distribution<int>(0, 1)(rng)) seed.faces.insert(f);
      const auto part = dr_core(*c, closure(*c, seed)).core.faces;
      for (const auto& f : part) {
        CHECK(seed.faces.count(f) == 1);
        CHECK(whole.count(f) == 1);
      }
      // the core is already reduced
      Subcomplex again;
      again.faces = part;
      CHECK(dr_core(*c, closure(*c, again)).core.faces == part);
    }
  }
}

TEST_CASE("reducibility certificates split into certified, refuted, unknown") {
  const auto disk = dr_certify(fx::disk3());
  CHECK(disk.status == DRStatus::Certified);
  CHECK_FALSE(disk.sphere.has_value());

  CHECK(dr_certify(fx::wheel(6)).status == DRStatus::Certified);
  CHECK(dr_certify(fx::path2()).status == DRStatus::Certified);
  CHECK(dr_certify(bowtie()).status == DRStatus::Certified);

  const auto sphere = dr_certify(fx::sphere2());
  CHECK(sphere.status == DRStatus::Refuted);
  CHECK(sphere.note == "near-immersed sphere found");
  REQUIRE(sphere.sphere.has_value());
  CHECK(validate_sphere_diagram(*sphere.sphere, fx::sphere2()).ok());

  // a torsion presentation is refuted by its own pillow sphere
  CHECK(dr_certify(fx::z3pres()).status == DRStatus::Refuted);

  // one-connected with a nonempty core, but no sphere small enough to see
  const auto tight = dr_certify(fx::sphere2(), DRBudgets{4000, 1});
  CHECK(tight.status == DRStatus::Unknown);
  CHECK(tight.note == "face core is nonempty; no sphere within budget");

  const auto torus = dr_certify(fx::torus1());
  CHECK(torus.status == DRStatus::Unknown);
  CHECK(torus.note == "not certified one-connected; no sphere within budget");

  // an aspherical circle is not one-connected, so its empty core proves nothing
  const auto circle = dr_certify(fx::cyc(3));
  CHECK(circle.status == DRStatus::Unknown);
  CHECK(circle.note == "not certified one-connected; no sphere within budget");

  CHECK_THROWS_AS(dr_certify(ComplexPtr{}), std::invalid_argument);
}

TEST_CASE("fineness profiles count embedded circuits through each edge") {
  const auto hex = fineness_profile(*fx::cyc(6), 6);
  for (const auto& e : fx::cyc(6)->edge_ids()) {
    for (int n = 1; n <= 5; ++n) CHECK(hex.at(e).at(n) == 0);
    CHECK(hex.at(e).at(6) == 1);
  }

  // stopping short of the circuit length sees nothing
  const auto blind = fineness_profile(*fx::cyc(6), 5);
  for (const auto& e : fx::cyc(6)->edge_ids())
    for (int n = 1; n <= 5; ++n) CHECK(blind.at(e).at(n) == 0);

  // each theta edge lies on two of the three short circuits
  const auto th = fineness_profile(*fx::theta(), 3);
  for (const auto& e : fx::theta()->edge_ids()) {
    CHECK(th.at(e).at(1) == 0);
    CHECK(th.at(e).at(2) == 2);
    CHECK(th.at(e).at(3) == 0);
  }

  const auto path = fineness_profile(*fx::path2(), 3);
  for (const auto& e : fx::path2()->edge_ids())
    for (int n = 1; n <= 3; ++n) CHECK(path.at(e).at(n) == 0);

  const auto loop = Complex2::from_edges({"p"}, {{"a", "p", "p"}});
  const auto single = fineness_profile(loop, 2);
  CHECK(single.at("a").at(1) == 1);
  CHECK(single.at("a").at(2) == 0);

  CHECK_THROWS_AS(fineness_profile(*fx::wheel(6), 3), std::invalid_argument);
  CHECK_THROWS_AS(fineness_profile(*fx::cyc(3), 0), std::invalid_argument);
}

TEST_CASE("the contraction inequality holds on the wheel") {
  const auto w6 = fx::wheel(6);
  const auto id = identity_map(w6);

  const auto full = fine_inequality_check(
      id, "c", {"r0", "r1", "r2", "r3", "r4", "r5"}, FineBudgets{});
  CHECK(full.result == FineResult::Holds);
  CHECK(full.diam_a == 3);
  CHECK(full.diam_fa == 3);
  CHECK(full.max_face_len == 3);
  CHECK(full.dehn_value == 3);
  CHECK(full.note.empty());

  const auto pair = fine_inequality_check(id, "c", {"r0", "r1"}, FineBudgets{});
  CHECK(pair.result == FineResult::Holds);
  CHECK(pair.diam_a == 1);
  CHECK(pair.diam_fa == 1);
  CHECK(pair.dehn_value == 1);

  const auto lone = fine_inequality_check(id, "c", {"r0"}, FineBudgets{});
  CHECK(lone.result == FineResult::Holds);
  CHECK(lone.diam_a == 0);
  CHECK(lone.diam_fa == 0);
  CHECK(lone.dehn_value == 0);

  // a rim vertex sees its two rim neighbours meet again through the hub
  const auto rim = fine_inequality_check(id, "r0", {"c", "r1", "r5"}, FineBudgets{});
  CHECK(rim.result == FineResult::Holds);
  CHECK(rim.diam_a == 2);
  CHECK(rim.dehn_value == 2);
}

TEST_CASE("the contraction check reports why it cannot decide") {
  const auto w6 = fx::wheel(6);
  const auto id = identity_map(w6);

  // an uncertified target stops the check before any diameter is measured
  const auto torus = fine_inequality_check(identity_map(fx::torus1()), "v", {}, FineBudgets{});
  CHECK(torus.result == FineResult::Undecided);
  CHECK(torus.note == "target is not certified reducible and one-connected");
  CHECK(torus.diam_a == -1);

  const auto sphere = fine_inequality_check(identity_map(fx::sphere2()), "v0", {"v1", "v2"},
                                            FineBudgets{});
  CHECK(sphere.result == FineResult::Undecided);
  CHECK(sphere.note == "target is not certified reducible and one-connected");

  const auto folded = fine_inequality_check(fx::wheel6_to_wheel3(), "c", {"r0"}, FineBudgets{});
  CHECK(folded.result == FineResult::Undecided);
  CHECK(folded.note == "map is not an immersion");

  // cutting the middle vertex out of a path separates its ends
  const auto cut = fine_inequality_check(identity_map(fx::path2()), "p1", {"p0", "p2"},
                                         FineBudgets{});
  CHECK(cut.result == FineResult::Undecided);
  CHECK(cut.note == "neighbours separate in the punctured source");
  CHECK(cut.max_face_len == 0);

  // distinct hub preimages keep the source connected while the images separate
  const auto wrap = fine_inequality_check(hexagon_over_bowtie(), "m1", {"P0", "Q1"},
                                          FineBudgets{});
  CHECK(wrap.result == FineResult::Undecided);
  CHECK(wrap.note == "images separate in the punctured target");
  CHECK(wrap.diam_a == 4);
  CHECK(wrap.diam_fa == -1);

  // a filling budget too small to fill the needed loops gives no estimate
  const auto starved = fine_inequality_check(id, "c", {"r0", "r3"},
                                             FineBudgets{4000, 2, 4});
  CHECK(starved.result == FineResult::Undecided);
  CHECK(starved.note == "filling table undecided at the budget");
  CHECK(starved.diam_a == 3);
  CHECK(starved.dehn_value == -1);

  CHECK_THROWS_AS(fine_inequality_check(id, "zz", {}, FineBudgets{}), std::invalid_argument);
  CHECK_THROWS_AS(fine_inequality_check(id, "c", {"c"}, FineBudgets{}), std::invalid_argument);
  CHECK_THROWS_AS(fine_inequality_check(id, "c", {"r0", "zz"}, FineBudgets{}),
                  std::invalid_argument);
  // rim vertices two steps apart are not neighbours
  CHECK_THROWS_AS(fine_inequality_check(id, "r0", {"r2"}, FineBudgets{}), std::invalid_argument);
}
