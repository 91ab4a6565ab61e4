#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "vnom/automorphism.hpp"
#include "vnom/rng.hpp"

using namespace vnom;

namespace {

Graph from_edges(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  GraphBuilder b(n);
  for (auto [u, v] : edges) b.set_edge(u, v);
  return std::move(b).build();
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  GraphBuilder b(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) b.set_edge(static_cast<int>(u), static_cast<int>(v));
  return std::move(b).build();
}

// Orbits by trying every permutation.
std::vector<int> brute_orbit_ids(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool aut = true;
    for (std::size_t u = 0; u < n && aut; ++u)
      for (std::size_t v = u + 1; v < n && aut; ++v)
        aut = g.adjacent(static_cast<int>(u), static_cast<int>(v)) == g.adjacent(perm[u], perm[v]);
    if (!aut) continue;
    for (std::size_t u = 0; u < n; ++u) {
      const int a = id[u], b = id[static_cast<std::size_t>(perm[u])];
      const int lo = std::min(a, b), hi = std::max(a, b);
      for (auto& x : id)
        if (x == hi) x = lo;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return id;
}

bool brute_isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t u = 0; u < a.size() && ok; ++u)
      for (std::size_t v = u + 1; v < a.size() && ok; ++v)
        ok = a.adjacent(static_cast<int>(u), static_cast<int>(v)) == b.adjacent(perm[u], perm[v]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST_CASE("orbits of small graphs") {
  const auto e4 = automorphism_orbits(Graph(4));
  CHECK(e4.orbits.size() == 1);
  CHECK(e4.orbits[0] == std::vector<int>{0, 1, 2, 3});

  const auto p3 = automorphism_orbits(from_edges(3, {{0, 1}, {1, 2}}));
  REQUIRE(p3.orbits.size() == 2);
  CHECK(p3.orbits[0] == std::vector<int>{0, 2});
  CHECK(p3.orbits[1] == std::vector<int>{1});

  const auto star = automorphism_orbits(from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  REQUIRE(star.orbits.size() == 2);
  CHECK(star.orbits[0] == std::vector<int>{0});
  CHECK(star.orbits[1] == std::vector<int>{1, 2, 3});
}

TEST_CASE("orbits agree with brute force up to n = 6") {
  for (std::uint64_t s = 0; s < 150; ++s) {
    const std::size_t n = 2 + s % 5;
    const Graph g = random_graph(n, 0.2 + 0.1 * static_cast<double>(s % 6), s);
    const auto brute = brute_orbit_ids(g);
    const auto orb = automorphism_orbits(g);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        CHECK(orb.same_orbit(static_cast<int>(u), static_cast<int>(v)) == (brute[u] == brute[v]));
    // Orbits refine the degree partition.
    for (const auto& o : orb.orbits)
      for (int v : o) CHECK(g.degree(v) == g.degree(o.front()));
  }
}

TEST_CASE("orbit enumeration refuses large or weighted graphs") {
  CHECK_THROWS_AS(automorphism_orbits(Graph(11)), std::length_error);
  GraphBuilder b(3);
  b.set_edge(0, 1, 2.0);
  CHECK_THROWS_AS(automorphism_orbits(std::move(b).build()), std::invalid_argument);
}

TEST_CASE("canonical form decides isomorphism") {
  for (std::uint64_t s = 0; s < 120; ++s) {
    const std::size_t n = 3 + s % 4;
    const Graph a = random_graph(n, 0.5, 1000 + s);
    const Graph b = random_graph(n, 0.5, 2000 + s);
    CHECK(isomorphic(a, b) == brute_isomorphic(a, b));
    const Obfuscation o = Obfuscation::random(n, s);
    const Graph shuffled = permute(a, o.position);
    const auto ca = canonical_form(a), cs = canonical_form(shuffled);
    CHECK(ca.code == cs.code);
    CHECK(permute(a, ca.position) == permute(shuffled, cs.position));
  }
}

TEST_CASE("scheme consistency") {
  const Graph g1(3);
  const auto lexicographic = [](const Graph&, const Graph& g2, std::span<const int>) {
    auto names = g2.names();
    std::sort(names.begin(), names.end());
    return names;
  };
  std::vector<int> voi{0};

  // Asymmetric g2: the check reduces to equal ranks per vertex.
  const Graph asym = from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {3, 5}});
  REQUIRE(automorphism_orbits(asym).orbits.size() == 6);
  const Obfuscation id = Obfuscation::identity(6);
  Obfuscation swapped = id;
  std::swap(swapped.position[0], swapped.position[3]);
  CHECK(check_scheme_consistency(lexicographic, g1, asym, voi, id, id));
  CHECK_FALSE(check_scheme_consistency(lexicographic, g1, asym, voi, id, swapped));

  // On the empty graph every orbit is the whole vertex set, so any scheme passes.
  const Graph empty(3);
  CHECK(check_scheme_consistency(lexicographic, g1, empty, voi, Obfuscation::identity(3),
                                 Obfuscation::random(3, 5)));

  // Path 1-2-3: moving the centre to the first label changes the centre's rank.
  const Graph path = from_edges(3, {{0, 1}, {1, 2}});
  const Obfuscation a = Obfuscation::identity(3);
  Obfuscation b = a;
  std::swap(b.position[0], b.position[1]);
  CHECK_FALSE(check_scheme_consistency(lexicographic, g1, path, voi, a, b));
  // Swapping the two ends only permutes one orbit.
  Obfuscation c = a;
  std::swap(c.position[0], c.position[2]);
  CHECK(check_scheme_consistency(lexicographic, g1, path, voi, a, c));
}
