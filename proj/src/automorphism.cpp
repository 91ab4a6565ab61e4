#include "vnom/automorphism.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace vnom {

namespace {

void require_enumerable(const Graph& g, std::size_t bound, const char* what) {
  if (g.size() > bound)
    throw std::length_error(std::string(what) + ": " + std::to_string(g.size()) +
                            " vertices exceeds the exact-enumeration bound of " + std::to_string(bound));
  if (g.is_weighted()) throw std::invalid_argument(std::string(what) + ": graph must be unweighted");
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const Graph& g) : g_(g), n_(static_cast<int>(g.size())) {}

  std::vector<int> run(int from, int to) {
    if (g_.degrees()[static_cast<std::size_t>(from)] != g_.degrees()[static_cast<std::size_t>(to)]) return {};
    order_.clear();
    order_.push_back(from);
    for (int v = 0; v < n_; ++v)
      if (v != from) order_.push_back(v);
    map_.assign(static_cast<std::size_t>(n_), -1);
    used_.assign(static_cast<std::size_t>(n_), 0);
    map_[static_cast<std::size_t>(from)] = to;
    used_[static_cast<std::size_t>(to)] = 1;
    if (extend(1)) return map_;
    return {};
  }

 private:
  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int v = order_[depth];
    for (int w = 0; w < n_; ++w) {
      if (used_[static_cast<std::size_t>(w)]) continue;
      if (g_.degrees()[static_cast<std::size_t>(w)] != g_.degrees()[static_cast<std::size_t>(v)]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) {
        const int x = order_[i];
        ok = g_.adjacent(v, x) == g_.adjacent(w, map_[static_cast<std::size_t>(x)]);
      }
      if (!ok) continue;
      map_[static_cast<std::size_t>(v)] = w;
      used_[static_cast<std::size_t>(w)] = 1;
      if (extend(depth + 1)) return true;
      used_[static_cast<std::size_t>(w)] = 0;
      map_[static_cast<std::size_t>(v)] = -1;
    }
    return false;
  }

  const Graph& g_;
  int n_;
  std::vector<int> order_;
  std::vector<int> map_;
  std::vector<char> used_;
};

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Graph& g) : g_(g), n_(g.size()) {
    sorted_degree_ = g.degrees();
    std::sort(sorted_degree_.begin(), sorted_degree_.end(), std::greater<>());
    total_bits_ = n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2;
  }

  CanonicalForm run() {
    at_.assign(n_, -1);
    used_.assign(n_, 0);
    have_best_ = false;
    best_ = {};
    if (n_ == 0) return best_;
    place(0, 0, 0);
    return best_;
  }

 private:
  void place(std::size_t j, std::uint64_t prefix, std::size_t bits) {
    if (j == n_) {
      if (!have_best_ || prefix > best_.code) {
        have_best_ = true;
        best_.code = prefix;
        best_.position.assign(n_, 0);
        for (std::size_t p = 0; p < n_; ++p) best_.position[static_cast<std::size_t>(at_[p])] = static_cast<int>(p);
      }
      return;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (used_[v] || g_.degrees()[v] != sorted_degree_[j]) continue;
      std::uint64_t code = prefix;
      for (std::size_t i = 0; i < j; ++i) code = (code << 1) | (g_.adjacent(at_[i], static_cast<int>(v)) ? 1u : 0u);
      const std::size_t nbits = bits + j;
      if (have_best_) {
        const std::uint64_t best_prefix = nbits == 0 ? 0 : best_.code >> (total_bits_ - nbits);
        if (code < best_prefix) continue;
      }
      at_[j] = static_cast<int>(v);
      used_[v] = 1;
      place(j + 1, code, nbits);
      used_[v] = 0;
    }
  }

  const Graph& g_;
  std::size_t n_;
  std::size_t total_bits_;
  std::vector<double> sorted_degree_;
  std::vector<int> at_;
  std::vector<char> used_;
  bool have_best_ = false;
  CanonicalForm best_;
};

}  // namespace

std::vector<int> find_automorphism(const Graph& g, int from, int to) {
  if (!g.contains(from) || !g.contains(to)) throw std::out_of_range("find_automorphism: unknown vertex");
  return AutomorphismSearch(g).run(from, to);
}

OrbitPartition automorphism_orbits(const Graph& g, std::size_t bound) {
  require_enumerable(g, bound, "automorphism_orbits");
  const int n = static_cast<int>(g.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  AutomorphismSearch search(g);
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      if (find_root(parent, u) == find_root(parent, w)) continue;
      auto sigma = search.run(u, w);
      if (sigma.empty()) continue;
      for (int x = 0; x < n; ++x) {
        int a = find_root(parent, x), b = find_root(parent, sigma[static_cast<std::size_t>(x)]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  OrbitPartition out;
  out.orbit_of.assign(static_cast<std::size_t>(n), -1);
  std::unordered_map<int, int> root_to_orbit;
  for (int v = 0; v < n; ++v) {
    const int r = find_root(parent, v);
    auto [it, fresh] = root_to_orbit.emplace(r, static_cast<int>(out.orbits.size()));
    if (fresh) out.orbits.emplace_back();
    out.orbits[static_cast<std::size_t>(it->second)].push_back(v);
    out.orbit_of[static_cast<std::size_t>(v)] = it->second;
  }
  return out;
}

CanonicalForm canonical_form(const Graph& g, std::size_t bound) {
  require_enumerable(g, bound, "canonical_form");
  return CanonicalSearch(g).run();
}

bool isomorphic(const Graph& a, const Graph& b, std::size_t bound) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a, bound).code == canonical_form(b, bound).code;
}

Graph permute(const Graph& g, std::span<const int> position) {
  if (position.size() != g.size()) throw std::invalid_argument("permute: size mismatch");
  GraphBuilder b(g.size());
  for (const Edge& e : g.edges())
    b.set_edge(position[static_cast<std::size_t>(e.u)], position[static_cast<std::size_t>(e.v)], e.weight);
  return std::move(b).build();
}

namespace {

std::vector<std::size_t> orbit_ranks(const NominationScheme& scheme, const Graph& g1, const Graph& g2,
                                     std::span<const int> voi, const Obfuscation& o) {
  const Graph obf = relabel(g2, o);
  const auto order = scheme(g1, obf, voi);
  if (order.size() != obf.size()) throw std::runtime_error("scheme output is not a total order on W");
  std::unordered_map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (!obf.find(order[i]) || !rank.emplace(order[i], i + 1).second)
      throw std::runtime_error("scheme output is not a total order on W");
  std::vector<std::size_t> by_vertex(g2.size());
  for (std::size_t v = 0; v < g2.size(); ++v)
    by_vertex[v] = rank.at(o.labels[static_cast<std::size_t>(o.position[v])]);
  return by_vertex;
}

}  // namespace

bool check_scheme_consistency(const NominationScheme& scheme, const Graph& g1, const Graph& g2,
                              std::span<const int> voi, const Obfuscation& o1, const Obfuscation& o2) {
  const OrbitPartition orbits = automorphism_orbits(g2);
  const auto r1 = orbit_ranks(scheme, g1, g2, voi, o1);
  const auto r2 = orbit_ranks(scheme, g1, g2, voi, o2);
  for (const auto& orbit : orbits.orbits) {
    std::vector<std::size_t> a, b;
    for (int u : orbit) {
      a.push_back(r1[static_cast<std::size_t>(u)]);
      b.push_back(r2[static_cast<std::size_t>(u)]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
  }
  return true;
}

}  // namespace vnom
