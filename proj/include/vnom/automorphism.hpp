#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vnom/graph.hpp"

namespace vnom {

inline constexpr std::size_t kDefaultEnumerationBound = 10;

// Automorphism-equivalence classes I(u; g). Orbits are sorted internally and
// ordered by their smallest vertex.
struct OrbitPartition {
  std::vector<std::vector<int>> orbits;
  std::vector<int> orbit_of;

  bool same_orbit(int u, int v) const {
    return orbit_of[static_cast<std::size_t>(u)] == orbit_of[static_cast<std::size_t>(v)];
  }
  bool singleton(int v) const {
    return orbits[static_cast<std::size_t>(orbit_of[static_cast<std::size_t>(v)])].size() == 1;
  }
};

// Exact orbits by backtracking over degree-preserving partial maps.
// Requires an unweighted graph with at most `bound` vertices; throws
// std::length_error when the graph is too large.
OrbitPartition automorphism_orbits(const Graph& g, std::size_t bound = kDefaultEnumerationBound);

// Tries to extend {from -> to} to a full automorphism; empty if none exists.
std::vector<int> find_automorphism(const Graph& g, int from, int to);

// Canonical labeling: `code` is the adjacency bit string of the graph
// relabeled by `position` (vertex v -> position[v]), maximized over all
// relabelings that sort vertices by non-increasing degree. Isomorphic graphs
// share a code; `position` realizes it.
struct CanonicalForm {
  std::uint64_t code = 0;
  std::vector<int> position;
};

CanonicalForm canonical_form(const Graph& g, std::size_t bound = kDefaultEnumerationBound);
bool isomorphic(const Graph& a, const Graph& b, std::size_t bound = kDefaultEnumerationBound);

// Graph with vertex v placed at position[v] (names dropped).
Graph permute(const Graph& g, std::span<const int> position);

// A deterministic nomination scheme: given g1, an obfuscated g2 and V* (g1
// indices), returns an ordering of g2's labels.
using NominationScheme =
    std::function<std::vector<std::string>(const Graph& g1, const Graph& g2_obfuscated,
                                           std::span<const int> voi)>;

// Checks the obfuscation-invariance property: for every orbit I(u; g2) the
// set of ranks it receives is the same under o1 and o2.
bool check_scheme_consistency(const NominationScheme& scheme, const Graph& g1, const Graph& g2,
                              std::span<const int> voi, const Obfuscation& o1,
                              const Obfuscation& o2);

}  // namespace vnom
