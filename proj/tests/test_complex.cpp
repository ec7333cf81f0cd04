#include "doctest.h"
#include "support.hpp"
#include "towerkit/complex.hpp"
#include "towerkit/fixtures.hpp"

using namespace towerkit;
namespace fx = towerkit::fixtures;
namespace ts = towerkit::testsupport;

TEST_CASE("building from edges populates darts and reversals") {
  ComplexPtr d = fx::disk3();
  CHECK(d->vertex_count() == 3);
  CHECK(d->edge_count() == 3);
  CHECK(d->face_count() == 1);
  CHECK(d->rev("a") == "-a");
  CHECK(d->rev("-a") == "a");
  CHECK(d->src("a") == "v0");
  CHECK(d->dst("a") == "v1");
  CHECK(d->src("-a") == "v1");
  CHECK(d->dst("-a") == "v0");
  CHECK(d->edge_of("-c") == "c");
  CHECK(d->edge_ids() == std::set<std::string>{"a", "b", "c"});
  CHECK(d->darts_at("v0") == std::vector<Dart>{"-c", "a"});
}

TEST_CASE("validation accepts all catalog complexes") {
  for (const auto& name : {"disk3", "sphere2", "torus1", "z3pres", "s3pres", "path2", "theta"}) {
    auto c = std::get<ComplexPtr>(fx::fixture(name));
    CHECK_MESSAGE(validate_complex(*c).ok(), name);
  }
  CHECK(validate_complex(*fx::cyc(5)).ok());
  CHECK(validate_complex(*fx::wheel(6)).ok());
  CHECK(validate_complex(*fx::wheel(7)).ok());
}

TEST_CASE("validation flags a reversal fixed point") {
  Complex2 c;
  c.vertices = {"v"};
  c.darts["a"] = {"a", "v", "v"};
  auto rep = validate_complex(c);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (const auto& i : rep.issues) found = found || i.code == "rev-fixed-point";
  CHECK(found);
}

TEST_CASE("validation flags a boundary word that does not close up") {
  Complex2 c = Complex2::from_edges({"v0", "v1", "v2"},
                                    {{"a", "v0", "v1"}, {"b", "v1", "v2"}},
                                    {{"f", {"a", "b"}}});
  auto rep = validate_complex(c);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (const auto& i : rep.issues) found = found || i.code == "face-not-closed";
  CHECK(found);
}

TEST_CASE("validation flags broken reversal endpoint relations") {
  Complex2 c;
  c.vertices = {"u", "w"};
  c.darts["a"] = {"-a", "u", "w"};
  c.darts["-a"] = {"a", "u", "w"};  // should run w -> u
  auto rep = validate_complex(c);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("link of the wheel center is a cycle through the spokes") {
  ComplexPtr w = fx::wheel(6);
  LinkGraph l = link(*w, "c");
  CHECK(l.nodes == std::set<Dart>{"s0", "s1", "s2", "s3", "s4", "s5"});
  REQUIRE(l.arcs.size() == 6);
  std::set<std::set<Dart>> pairs;
  for (const auto& arc : l.arcs) pairs.insert({arc.a, arc.b});
  std::set<std::set<Dart>> expect;
  for (int i = 0; i < 6; ++i)
    expect.insert({"s" + std::to_string(i), "s" + std::to_string((i + 1) % 6)});
  CHECK(pairs == expect);
}

TEST_CASE("link of a disk corner is a single arc") {
  ComplexPtr d = fx::disk3();
  LinkGraph l = link(*d, "v0");
  CHECK(l.nodes == std::set<Dart>{"-c", "a"});
  REQUIRE(l.arcs.size() == 1);
  CHECK(std::set<Dart>{l.arcs[0].a, l.arcs[0].b} == std::set<Dart>{"a", "-c"});
}

TEST_CASE("link in a bare graph has nodes but no arcs") {
  ComplexPtr c = fx::cyc(3);
  LinkGraph l = link(*c, "v0");
  CHECK(l.nodes == std::set<Dart>{"-e2", "e0"});
  CHECK(l.arcs.empty());
}

TEST_CASE("link arc count equals the number of face corners at the vertex") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Complex2 c = ts::random_complex(rng);
    std::map<std::string, size_t> corners;
    for (const auto& [f, w] : c.faces)
      for (const auto& d : w) ++corners[c.src(d)];
    for (const auto& v : c.vertices) {
      LinkGraph l = link(c, v);
      CHECK(l.arcs.size() == corners[v]);
      CHECK(l.nodes.size() == c.darts_at(v).size());
    }
  }
}

TEST_CASE("subdividing the disk yields seven vertices and six triangles") {
  Complex2 bc = barycentric_subdivision(*fx::disk3());
  CHECK(bc.vertex_count() == 7);
  CHECK(bc.edge_count() == 12);
  CHECK(bc.face_count() == 6);
  CHECK(euler_characteristic(bc) == 1);
  CHECK(validate_complex(bc).ok());
  for (const auto& [f, w] : bc.faces) CHECK(w.size() == 3);
}

TEST_CASE("subdividing the one-vertex torus keeps its Euler characteristic") {
  Complex2 bc = barycentric_subdivision(*fx::torus1());
  // one original vertex, two edge midpoints, one face center
  CHECK(bc.vertex_count() == 4);
  CHECK(bc.face_count() == 8);
  CHECK(bc.edge_count() == 12);
  CHECK(euler_characteristic(bc) == 0);
  CHECK(validate_complex(bc).ok());
}

TEST_CASE("subdividing a graph only adds midpoints") {
  Complex2 bc = barycentric_subdivision(*fx::cyc(3));
  CHECK(bc.vertex_count() == 6);
  CHECK(bc.edge_count() == 6);
  CHECK(bc.face_count() == 0);
}

TEST_CASE("subdivision output is valid with embedded triangle boundaries") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    Complex2 c = ts::random_complex(rng);
    Complex2 bc = barycentric_subdivision(c);
    CHECK(validate_complex(bc).ok());
    for (const auto& [f, w] : bc.faces) {
      std::set<std::string> vs;
      std::set<std::string> es;
      for (const auto& d : w) {
        vs.insert(bc.src(d));
        es.insert(bc.edge_of(d));
      }
      CHECK(vs.size() == w.size());
      CHECK(es.size() == w.size());
    }
  }
}

TEST_CASE("span grows a cycle's arc to the whole cycle") {
  ComplexPtr c = fx::cyc(3);
  Subcomplex k;
  k.vertices = {"v0", "v1", "v2"};
  k.darts = {"e0", "-e0", "e1", "-e1"};
  CHECK(span(*c, k) == whole_subcomplex(*c));
}

TEST_CASE("span forces every edge whose endpoints are present") {
  // two opposite edges of a square carry all four vertices, so the other
  // two edges are forced in as well
  ComplexPtr c = fx::cyc(4);
  Subcomplex k;
  k.vertices = {"v0", "v1", "v2", "v3"};
  k.darts = {"e0", "-e0", "e2", "-e2"};
  CHECK(span(*c, k) == whole_subcomplex(*c));
  CHECK_FALSE(is_full(*c, k));
}

TEST_CASE("opposite edges of a hexagon are already full") {
  ComplexPtr c = fx::cyc(6);
  Subcomplex k;
  k.vertices = {"v0", "v1", "v3", "v4"};
  k.darts = {"e0", "-e0", "e3", "-e3"};
  CHECK(span(*c, k) == k);
  CHECK(is_full(*c, k));
}

TEST_CASE("span adds a face whose boundary is present") {
  ComplexPtr d = fx::disk3();
  Subcomplex k = whole_subcomplex(*d);
  k.faces.clear();
  CHECK(span(*d, k) == whole_subcomplex(*d));
  CHECK_FALSE(is_full(*d, k));
  CHECK(is_full(*d, whole_subcomplex(*d)));
}

TEST_CASE("span is a closure operator") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    Complex2 c = ts::random_complex(rng);
    Subcomplex k = ts::random_subcomplex(rng, c);
    Subcomplex s = span(c, k);
    // extensive
    for (const auto& v : k.vertices) CHECK(s.vertices.count(v));
    for (const auto& d : k.darts) CHECK(s.darts.count(d));
    for (const auto& f : k.faces) CHECK(s.faces.count(f));
    // idempotent
    CHECK(span(c, s) == s);
    CHECK(is_full(c, s));
    // monotone: enlarge k by another random subcomplex
    Subcomplex k2 = ts::random_subcomplex(rng, c);
    k2.vertices.insert(k.vertices.begin(), k.vertices.end());
    k2.darts.insert(k.darts.begin(), k.darts.end());
    k2.faces.insert(k.faces.begin(), k.faces.end());
    Subcomplex s2 = span(c, k2);
    for (const auto& v : s.vertices) CHECK(s2.vertices.count(v));
    for (const auto& d : s.darts) CHECK(s2.darts.count(d));
    for (const auto& f : s.faces) CHECK(s2.faces.count(f));
  }
}

TEST_CASE("subcomplex validation catches missing boundary cells") {
  ComplexPtr d = fx::disk3();
  Subcomplex k;
  k.faces = {"f"};
  CHECK_FALSE(validate_subcomplex(*d, k).ok());
  Subcomplex cl = closure(*d, k);
  CHECK(validate_subcomplex(*d, cl).ok());
  CHECK(cl == whole_subcomplex(*d));

  Subcomplex half;
  half.darts = {"a"};  // reversal missing
  CHECK_FALSE(validate_subcomplex(*d, half).ok());
}

TEST_CASE("restricting to a closed subcomplex keeps validity") {
  ComplexPtr w = fx::wheel(6);
  Subcomplex k;
  k.darts = {"e0", "-e0", "e1", "-e1"};
  k.vertices = {"r0", "r1", "r2"};
  Complex2 c = restrict_complex(*w, k);
  CHECK(validate_complex(c).ok());
  CHECK(c.vertex_count() == 3);
  CHECK(c.edge_count() == 2);
  CHECK(c.face_count() == 0);
}

TEST_CASE("renaming cells is reversible and validity preserving") {
  std::mt19937 rng(14);
  ComplexPtr w = fx::wheel(5);
  ts::Renaming r = ts::random_renaming(rng, *w);
  Complex2 renamed = rename_cells(*w, r.v, r.e, r.f);
  CHECK(validate_complex(renamed).ok());
  CHECK(renamed.vertex_count() == w->vertex_count());
  CHECK(renamed.edge_count() == w->edge_count());
  CHECK(renamed.face_count() == w->face_count());
  std::map<std::string, std::string> vinv, einv, finv;
  for (const auto& [k, v] : r.v) vinv[v] = k;
  for (const auto& [k, v] : r.e) einv[v] = k;
  for (const auto& [k, v] : r.f) finv[v] = k;
  CHECK(rename_cells(renamed, vinv, einv, finv) == *w);
}

TEST_CASE("connected components split disjoint pieces") {
  CHECK(is_connected(*fx::disk3()));
  Complex2 two = Complex2::from_edges({"a0", "a1", "b0", "b1"},
                                      {{"p", "a0", "a1"}, {"q", "b0", "b1"}});
  CHECK(connected_components(two).size() == 2);
  CHECK_FALSE(is_connected(two));
}

TEST_CASE("euler characteristic of the catalog") {
  CHECK(euler_characteristic(*fx::disk3()) == 1);
  CHECK(euler_characteristic(*fx::sphere2()) == 2);
  CHECK(euler_characteristic(*fx::torus1()) == 0);
  CHECK(euler_characteristic(*fx::wheel(6)) == 1);
}

TEST_CASE("maximal simplices close downward") {
  SimpComplex oct = fx::oct();
  CHECK(oct.vertices.size() == 6);
  size_t edges = 0, tris = 0;
  for (const auto& s : oct.simplices) {
    if (s.size() == 2) ++edges;
    if (s.size() == 3) ++tris;
  }
  CHECK(edges == 12);
  CHECK(tris == 8);
  CHECK(oct.has_simplex({"y0", "x0"}));
  CHECK_FALSE(oct.adjacent("x0", "x1"));
  CHECK(oct.adjacent("x0", "z1"));
  CHECK(validate_simp(oct).ok());
}

TEST_CASE("octahedron vertex links are four-cycles") {
  SimpComplex l = simp_vertex_link(fx::oct(), "x0");
  CHECK(l.vertices == std::set<std::string>{"y0", "y1", "z0", "z1"});
  size_t edges = 0;
  for (const auto& s : l.simplices) {
    CHECK(s.size() <= 2);
    if (s.size() == 2) ++edges;
  }
  CHECK(edges == 4);
  CHECK_FALSE(l.adjacent("y0", "y1"));
  CHECK_FALSE(l.adjacent("z0", "z1"));
}

TEST_CASE("simplicial validation catches missing facets") {
  SimpComplex s;
  s.vertices = {"a", "b", "c"};
  s.simplices = {{"a"}, {"b"}, {"c"}, {"a", "b", "c"}};  // edges missing
  CHECK_FALSE(validate_simp(s).ok());
}
