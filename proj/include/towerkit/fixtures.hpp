#pragma once

#include <string>
#include <variant>
#include <vector>

#include "towerkit/actions.hpp"

namespace towerkit {
namespace fixtures {

// Complexes.
ComplexPtr disk3();    // triangle v0 v1 v2 with one face f = [a,b,c]
ComplexPtr sphere2();  // same triangle with two faces f1, f2 = [a,b,c]
ComplexPtr torus1();   // one vertex, edges a,b, face [a,b,-a,-b]
ComplexPtr z3pres();   // one vertex, edge a, face [a,a,a]
ComplexPtr s3pres();   // one vertex, edges x,y, faces [x,x], [y,y,y], [x,y,x,y]
ComplexPtr path2();    // p0 -a- p1 -b- p2
ComplexPtr theta();    // two vertices, three parallel edges a,b,c: u -> v
ComplexPtr cyc(std::size_t n);    // cycle graph, edges ei: vi -> v(i+1)
ComplexPtr wheel(std::size_t n);  // center c, rim r0..r(n-1), rim edges ei,
                                  // spokes si: c -> ri, triangles ti = [si, ei, -s(i+1)]

// Simplicial complexes.
SimpComplex oct();                       // octahedron: three vertex pairs, 8 triangles
SimpComplex cycle_simp(std::size_t n);   // cycle graph on w0..w(n-1)
SimpComplex wheel_simp(std::size_t n);   // triangulated wheel

// Group element name for gen^k in the closure naming scheme ("e", "r", "r*r", ...).
std::string cyc_pow(const std::string& gen, std::size_t k);

// Actions.
FinAction wheel_rot(std::size_t n);             // Z/n rotating wheel(n), generator "r"
FinAction wheel_rot_sub(std::size_t n, std::size_t k);  // subgroup <r^(n/k)> of order k
FinAction sphere2_swap();                       // Z/2 swapping the two faces
FinAction cyc2_flip();                          // Z/2 on cyc(2) inverting both edges

// Maps.
CombMap wheel6_to_wheel3();  // double wrap
CombMap path2_to_cyc3();     // p0 v0, a e0, b e1

// Equivariant maps.
EqMap path2_to_cyc3_eq();      // trivial groups on both sides
EqMap wheel6_to_wheel3_eq();   // Z/3 = <r*r> on wheel6, Z/3 on wheel3

// Name-indexed catalog for the command line.
using Fixture = std::variant<ComplexPtr, SimpComplex, FinAction>;
Fixture fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace fixtures
}  // namespace towerkit
