#include "towerkit/fixtures.hpp"

#include <stdexcept>

namespace towerkit {
namespace fixtures {

namespace {

ComplexPtr make(const std::vector<std::string>& vs, const std::vector<EdgeSpec>& es,
                const std::vector<FaceSpec>& fs = {}) {
  return std::make_shared<Complex2>(Complex2::from_edges(vs, es, fs));
}

std::string num(std::size_t i) { return std::to_string(i); }

}  // namespace

ComplexPtr disk3() {
  return make({"v0", "v1", "v2"},
              {{"a", "v0", "v1"}, {"b", "v1", "v2"}, {"c", "v2", "v0"}},
              {{"f", {"a", "b", "c"}}});
}

ComplexPtr sphere2() {
  return make({"v0", "v1", "v2"},
              {{"a", "v0", "v1"}, {"b", "v1", "v2"}, {"c", "v2", "v0"}},
              {{"f1", {"a", "b", "c"}}, {"f2", {"a", "b", "c"}}});
}

ComplexPtr torus1() {
  return make({"v"}, {{"a", "v", "v"}, {"b", "v", "v"}}, {{"f", {"a", "b", "-a", "-b"}}});
}

ComplexPtr z3pres() {
  return make({"v"}, {{"a", "v", "v"}}, {{"f", {"a", "a", "a"}}});
}

ComplexPtr s3pres() {
  return make({"v"}, {{"x", "v", "v"}, {"y", "v", "v"}},
              {{"r1", {"x", "x"}}, {"r2", {"y", "y", "y"}}, {"r3", {"x", "y", "x", "y"}}});
}

ComplexPtr path2() {
  return make({"p0", "p1", "p2"}, {{"a", "p0", "p1"}, {"b", "p1", "p2"}});
}

ComplexPtr theta() {
  return make({"u", "v"}, {{"a", "u", "v"}, {"b", "u", "v"}, {"c", "u", "v"}});
}

ComplexPtr cyc(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cycle length must be positive");
  std::vector<std::string> vs;
  std::vector<EdgeSpec> es;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("v" + num(i));
  for (std::size_t i = 0; i < n; ++i)
    es.push_back({"e" + num(i), "v" + num(i), "v" + num((i + 1) % n)});
  return make(vs, es);
}

ComplexPtr wheel(std::size_t n) {
  if (n < 3) throw std::invalid_argument("wheel needs at least 3 rim vertices");
  std::vector<std::string> vs{"c"};
  std::vector<EdgeSpec> es;
  std::vector<FaceSpec> fs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("r" + num(i));
  for (std::size_t i = 0; i < n; ++i)
    es.push_back({"e" + num(i), "r" + num(i), "r" + num((i + 1) % n)});
  for (std::size_t i = 0; i < n; ++i) es.push_back({"s" + num(i), "c", "r" + num(i)});
  for (std::size_t i = 0; i < n; ++i)
    fs.push_back({"t" + num(i), {"s" + num(i), "e" + num(i), "-s" + num((i + 1) % n)}});
  return make(vs, es, fs);
}

SimpComplex oct() {
  std::vector<std::string> vs{"x0", "x1", "y0", "y1", "z0", "z1"};
  std::vector<std::vector<std::string>> tris;
  for (const auto& x : {"x0", "x1"})
    for (const auto& y : {"y0", "y1"})
      for (const auto& z : {"z0", "z1"}) tris.push_back({x, y, z});
  return SimpComplex::from_maximal(vs, tris);
}

SimpComplex cycle_simp(std::size_t n) {
  if (n < 3) throw std::invalid_argument("simplicial cycle needs length >= 3");
  std::vector<std::string> vs;
  std::vector<std::vector<std::string>> edges;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("w" + num(i));
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({"w" + num(i), "w" + num((i + 1) % n)});
  return SimpComplex::from_maximal(vs, edges);
}

SimpComplex wheel_simp(std::size_t n) {
  if (n < 4) throw std::invalid_argument("simplicial wheel needs rim length >= 4");
  std::vector<std::string> vs{"c"};
  std::vector<std::vector<std::string>> tris;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("r" + num(i));
  for (std::size_t i = 0; i < n; ++i)
    tris.push_back({"c", "r" + num(i), "r" + num((i + 1) % n)});
  return SimpComplex::from_maximal(vs, tris);
}

std::string cyc_pow(const std::string& gen, std::size_t k) {
  if (k == 0) return "e";
  std::string s = gen;
  for (std::size_t i = 1; i < k; ++i) s += "*" + gen;
  return s;
}

FinAction wheel_rot(std::size_t n) {
  ComplexPtr w = wheel(n);
  CombMap r;
  r.source = w;
  r.target = w;
  r.vmap["c"] = "c";
  for (std::size_t i = 0; i < n; ++i) {
    r.vmap["r" + num(i)] = "r" + num((i + 1) % n);
    r.dmap["e" + num(i)] = "e" + num((i + 1) % n);
    r.dmap["s" + num(i)] = "s" + num((i + 1) % n);
    r.fmap["t" + num(i)] = {"t" + num((i + 1) % n), 0, false};
  }
  return action_from_generators(cyclic_table(n, "r"), w, {{"r", r}});
}

FinAction wheel_rot_sub(std::size_t n, std::size_t k) {
  if (k == 0 || n % k != 0) throw std::invalid_argument("subgroup order must divide n");
  FinAction full = wheel_rot(n);
  std::set<std::string> gens{cyc_pow("r", n / k)};
  return restrict_action(full, subgroup_generated(full.group, gens));
}

FinAction sphere2_swap() {
  ComplexPtr s = sphere2();
  CombMap m;
  m.source = s;
  m.target = s;
  for (const auto& v : s->vertices) m.vmap[v] = v;
  for (const auto& e : s->edge_ids()) m.dmap[e] = e;
  m.fmap["f1"] = {"f2", 0, false};
  m.fmap["f2"] = {"f1", 0, false};
  return action_from_generators(cyclic_table(2, "s"), s, {{"s", m}});
}

FinAction cyc2_flip() {
  ComplexPtr c = cyc(2);
  CombMap m;
  m.source = c;
  m.target = c;
  m.vmap["v0"] = "v1";
  m.vmap["v1"] = "v0";
  m.dmap["e0"] = "-e0";
  m.dmap["e1"] = "-e1";
  return action_from_generators(cyclic_table(2, "s"), c, {{"s", m}});
}

CombMap wheel6_to_wheel3() {
  CombMap m;
  m.source = wheel(6);
  m.target = wheel(3);
  m.vmap["c"] = "c";
  for (std::size_t i = 0; i < 6; ++i) {
    m.vmap["r" + num(i)] = "r" + num(i % 3);
    m.dmap["e" + num(i)] = "e" + num(i % 3);
    m.dmap["s" + num(i)] = "s" + num(i % 3);
    m.fmap["t" + num(i)] = {"t" + num(i % 3), 0, false};
  }
  return m;
}

CombMap path2_to_cyc3() {
  CombMap m;
  m.source = path2();
  m.target = cyc(3);
  m.vmap = {{"p0", "v0"}, {"p1", "v1"}, {"p2", "v2"}};
  m.dmap = {{"a", "e0"}, {"b", "e1"}};
  return m;
}

EqMap path2_to_cyc3_eq() {
  EqMap m;
  m.f = path2_to_cyc3();
  m.source_action = trivial_action(m.f.source);
  m.target_action = trivial_action(m.f.target);
  m.fsharp["e"] = "e";
  return m;
}

EqMap wheel6_to_wheel3_eq() {
  EqMap m;
  m.f = wheel6_to_wheel3();
  m.source_action = wheel_rot_sub(6, 3);  // <r*r> acting on wheel6
  m.target_action = wheel_rot(3);
  // rotation by k upstairs pushes forward to rotation by k mod 3 downstairs
  m.fsharp["e"] = "e";
  m.fsharp[cyc_pow("r", 2)] = cyc_pow("r", 2);
  m.fsharp[cyc_pow("r", 4)] = "r";
  return m;
}

Fixture fixture(const std::string& name) {
  if (name == "disk3") return disk3();
  if (name == "sphere2") return sphere2();
  if (name == "torus1") return torus1();
  if (name == "z3pres") return z3pres();
  if (name == "s3pres") return s3pres();
  if (name == "path2") return path2();
  if (name == "theta") return theta();
  if (name == "oct") return oct();
  if (name == "fivecycle") return cycle_simp(5);
  if (name == "sixcycle") return cycle_simp(6);
  if (name == "wheel6s") return wheel_simp(6);
  if (name == "sphere2-z2") return sphere2_swap();
  if (name == "cyc2-flip") return cyc2_flip();

  auto tail_num = [&](const std::string& prefix) -> std::size_t {
    std::string t = name.substr(prefix.size());
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("unknown fixture: " + name);
    return std::stoul(t);
  };
  if (name.rfind("cyc", 0) == 0) return cyc(tail_num("cyc"));
  if (name.rfind("wheel", 0) == 0) {
    auto dash = name.find("-z");
    if (dash == std::string::npos) return wheel(tail_num("wheel"));
    std::size_t n = std::stoul(name.substr(5, dash - 5));
    std::size_t k = std::stoul(name.substr(dash + 2));
    return wheel_rot_sub(n, k);
  }
  if (name.rfind("trivial:", 0) == 0) {
    Fixture inner = fixture(name.substr(8));
    if (auto* c = std::get_if<ComplexPtr>(&inner)) return trivial_action(*c);
    throw std::invalid_argument("trivial: needs a complex fixture");
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
  return {"disk3",      "sphere2",  "torus1",     "z3pres",  "s3pres",    "path2",
          "theta",      "cyc<n>",   "wheel<n>",   "oct",     "fivecycle", "sixcycle",
          "wheel6s",    "wheel<n>-z<k>", "sphere2-z2", "cyc2-flip", "trivial:<name>"};
}

}  // namespace fixtures
}  // namespace towerkit
