#include <limits>
#include <sstream>

#include "doctest.h"
#include "vnom/graph.hpp"

using namespace vnom;

namespace {

Graph path3(double w12 = 1.0, double w23 = 1.0) {
  GraphBuilder b(3);
  b.set_edge(0, 1, w12).set_edge(1, 2, w23);
  return std::move(b).build();
}

Graph complete(std::size_t n) {
  GraphBuilder b(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) b.set_edge(static_cast<int>(u), static_cast<int>(v));
  return std::move(b).build();
}

}  // namespace

TEST_CASE("degree") {
  Graph empty(4);
  for (int v = 0; v < 4; ++v) CHECK(empty.degree(v) == 0.0);
  const Graph k3 = complete(3);
  for (int v = 0; v < 3; ++v) CHECK(k3.degree(v) == 2.0);
  const Graph p = path3(0.5, 2.0);
  CHECK(p.degree(1) == doctest::Approx(2.5));
  CHECK(p.degree("2") == doctest::Approx(2.5));
  CHECK_THROWS_AS(p.degree("nope"), std::out_of_range);
  CHECK(p.is_weighted());
  CHECK_FALSE(k3.is_weighted());
}

TEST_CASE("builder rejects loops and bad weights") {
  GraphBuilder b(3);
  CHECK_THROWS(b.set_edge(1, 1));
  CHECK_THROWS(b.set_edge(0, 1, -1.0));
  CHECK_THROWS(b.set_edge(0, 1, std::numeric_limits<double>::infinity()));
  CHECK_THROWS(b.set_edge(0, 5));
}

TEST_CASE("induced subgraph") {
  const Graph k4 = complete(4);
  std::vector<int> all{0, 1, 2, 3};
  CHECK(induced_subgraph(k4, all) == k4);
  std::vector<int> two{0, 1};
  const Graph e = induced_subgraph(k4, two);
  CHECK(e.size() == 2);
  CHECK(e.edge_count() == 1);
  std::vector<int> ends{0, 2};
  const Graph iso = induced_subgraph(path3(), ends);
  CHECK(iso.edge_count() == 0);
  CHECK(iso.name(1) == "3");
  std::vector<int> bad{0, 7};
  CHECK_THROWS(induced_subgraph(k4, bad));
  std::vector<int> dup{1, 1};
  CHECK_THROWS(induced_subgraph(k4, dup));
}

TEST_CASE("induced subgraph composes") {
  GraphBuilder b(6);
  b.set_edge(0, 1).set_edge(1, 2).set_edge(2, 3).set_edge(3, 4).set_edge(0, 5).set_edge(2, 5);
  const Graph g = std::move(b).build();
  std::vector<int> u1{0, 1, 2, 5}, inner{0, 2, 5};
  const Graph once = induced_subgraph(g, inner);
  const Graph outer = induced_subgraph(g, u1);
  std::vector<int> inner_local{0, 2, 3};  // positions of 0, 2, 5 inside u1
  CHECK(induced_subgraph(outer, inner_local) == once);
}

TEST_CASE("relabel") {
  const Graph p = path3();
  Obfuscation o{{0, 1, 2}, {"a", "b", "c"}};
  const Graph r = relabel(p, o);
  CHECK(r.adjacent(r.at("a"), r.at("b")));
  CHECK(r.adjacent(r.at("b"), r.at("c")));
  CHECK_FALSE(r.adjacent(r.at("a"), r.at("c")));
  CHECK(relabel(r, o.inverse(p)) == p);

  const Obfuscation ro = Obfuscation::random(3, 42);
  const Graph k3 = relabel(complete(3), ro);
  CHECK(k3.edge_count() == 3);
  CHECK(labels_disjoint(ro, p, p));

  Obfuscation partial{{0, 1}, {"a", "b"}};
  CHECK_THROWS(relabel(p, partial));
}

TEST_CASE("relabel preserves the degree sequence") {
  GraphBuilder b(7);
  b.set_edge(0, 1).set_edge(0, 2).set_edge(0, 3).set_edge(4, 5).set_edge(5, 6).set_edge(1, 6);
  const Graph g = std::move(b).build();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Obfuscation o = Obfuscation::random(g.size(), s);
    const Graph r = relabel(g, o);
    auto a = g.degrees(), c = r.degrees();
    std::sort(a.begin(), a.end());
    std::sort(c.begin(), c.end());
    CHECK(a == c);
    for (int v = 0; v < 7; ++v) CHECK(r.degree(o.position[static_cast<std::size_t>(v)]) == g.degree(v));
  }
}

TEST_CASE("obfuscation validation") {
  Obfuscation dup{{0, 1}, {"a", "a"}};
  CHECK_THROWS(dup.validate());
  Obfuscation notperm{{0, 0}, {"a", "b"}};
  CHECK_THROWS(notperm.validate());
}

TEST_CASE("edge list round trip") {
  std::istringstream in("# comment\na b\nb c 2.5\nd\n");
  const Graph g = read_edge_list(in, "t");
  CHECK(g.size() == 4);
  CHECK(g.weight(g.at("b"), g.at("c")) == 2.5);
  CHECK(g.degree("d") == 0.0);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream back(out.str());
  CHECK(read_edge_list(back) == g);
}

TEST_CASE("edge list errors carry line numbers") {
  std::istringstream loop("a b\nc c\n");
  CHECK_THROWS_WITH(read_edge_list(loop, "f"), doctest::Contains("f:2"));
  std::istringstream conflict("a b 1\nb a 2\n");
  CHECK_THROWS_WITH(read_edge_list(conflict, "f"), doctest::Contains("f:2"));
  std::istringstream same("a b 1\nb a 1\n");
  CHECK(read_edge_list(same).edge_count() == 1);
  std::istringstream junk("a b x\n");
  CHECK_THROWS_WITH(read_edge_list(junk, "f"), doctest::Contains("f:1"));
}
