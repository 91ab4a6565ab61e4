#include "vnom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "vnom/rng.hpp"

namespace vnom {

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i + 1);
  return names;
}

Graph::Graph(std::size_t n) : n_(n), adj_(n * n, 0.0), names_(default_names(n)) { finalize(); }

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges,
                        std::vector<std::string> names) {
  GraphBuilder b = names.empty() ? GraphBuilder(n) : GraphBuilder(n, std::move(names));
  for (const Edge& e : edges) b.set_edge(e.u, e.v, e.weight);
  return std::move(b).build();
}

void Graph::finalize() {
  if (names_.size() != n_) throw std::invalid_argument("graph: name count does not match vertex count");
  by_name_.clear();
  by_name_.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!by_name_.emplace(names_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("graph: duplicate vertex name '" + names_[i] + "'");
  }
  degrees_.assign(n_, 0.0);
  edge_count_ = 0;
  total_weight_ = 0.0;
  weighted_ = false;
  for (std::size_t u = 0; u < n_; ++u) {
    const double* r = adj_.data() + u * n_;
    double d = 0.0;
    for (std::size_t v = 0; v < n_; ++v) {
      const double w = r[v];
      if (w == 0.0) continue;
      d += w;
      if (v > u) {
        ++edge_count_;
        total_weight_ += w;
        if (w != 1.0) weighted_ = true;
      }
    }
    degrees_[u] = d;
  }
}

double Graph::degree(int v) const {
  if (!contains(v)) throw std::out_of_range("degree: unknown vertex " + std::to_string(v));
  return degrees_[static_cast<std::size_t>(v)];
}

double Graph::degree(std::string_view name) const { return degree(at(name)); }

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = u + 1; v < n_; ++v)
      if (const double w = adj_[u * n_ + v]; w != 0.0)
        out.push_back({static_cast<int>(u), static_cast<int>(v), w});
  return out;
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  const auto r = row(v);
  for (std::size_t u = 0; u < n_; ++u)
    if (r[u] != 0.0) out.push_back(static_cast<int>(u));
  return out;
}

std::optional<int> Graph::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

int Graph::at(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw std::out_of_range("unknown vertex '" + std::string(name) + "'");
}

GraphBuilder::GraphBuilder(std::size_t n) : GraphBuilder(n, default_names(n)) {}

GraphBuilder::GraphBuilder(std::size_t n, std::vector<std::string> names)
    : n_(n), adj_(n * n, 0.0), names_(std::move(names)) {
  if (names_.size() != n_) throw std::invalid_argument("graph: name count does not match vertex count");
}

GraphBuilder::GraphBuilder(const Graph& g) : n_(g.size()), adj_(g.adjacency()), names_(g.names()) {}

GraphBuilder& GraphBuilder::set_edge(int u, int v, double w) {
  if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_ || static_cast<std::size_t>(v) >= n_)
    throw std::out_of_range("set_edge: vertex out of range");
  if (u == v) throw std::invalid_argument("set_edge: self-loops are not allowed");
  if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("set_edge: weight must be finite and >= 0");
  adj_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)] = w;
  adj_[static_cast<std::size_t>(v) * n_ + static_cast<std::size_t>(u)] = w;
  return *this;
}

Graph GraphBuilder::build() && {
  Graph g;
  g.n_ = n_;
  g.adj_ = std::move(adj_);
  g.names_ = std::move(names_);
  g.finalize();
  return g;
}

Graph induced_subgraph(const Graph& g, std::span<const int> keep) {
  std::vector<std::string> names;
  names.reserve(keep.size());
  std::vector<char> seen(g.size(), 0);
  for (int v : keep) {
    if (!g.contains(v)) throw std::out_of_range("induced_subgraph: vertex not in graph");
    if (seen[static_cast<std::size_t>(v)]++) throw std::invalid_argument("induced_subgraph: repeated vertex");
    names.push_back(g.name(v));
  }
  GraphBuilder b(keep.size(), std::move(names));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto r = g.row(keep[i]);
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (const double w = r[static_cast<std::size_t>(keep[j])]; w != 0.0)
        b.set_edge(static_cast<int>(i), static_cast<int>(j), w);
  }
  return std::move(b).build();
}

void Obfuscation::validate() const {
  const std::size_t n = position.size();
  if (labels.size() != n) throw std::invalid_argument("obfuscation: label count does not match domain size");
  std::vector<char> hit(n, 0);
  for (int p : position) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || hit[static_cast<std::size_t>(p)]++)
      throw std::invalid_argument("obfuscation: not a bijection");
  }
  std::unordered_set<std::string> uniq(labels.begin(), labels.end());
  if (uniq.size() != n) throw std::invalid_argument("obfuscation: labels are not distinct");
}

Obfuscation Obfuscation::inverse(const Graph& original) const {
  validate();
  if (original.size() != size()) throw std::invalid_argument("obfuscation: size mismatch");
  Obfuscation inv;
  inv.position.assign(size(), 0);
  inv.labels = original.names();
  for (std::size_t v = 0; v < size(); ++v) inv.position[static_cast<std::size_t>(position[v])] = static_cast<int>(v);
  return inv;
}

namespace {

std::vector<std::string> padded_labels(std::size_t n, std::string_view prefix) {
  const std::size_t width = std::to_string(n).size();
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string num = std::to_string(i + 1);
    out[i] = std::string(prefix) + std::string(width - num.size(), '0') + num;
  }
  return out;
}

}  // namespace

Obfuscation Obfuscation::identity(std::size_t n, std::string_view prefix) {
  Obfuscation o;
  o.position.resize(n);
  std::iota(o.position.begin(), o.position.end(), 0);
  o.labels = padded_labels(n, prefix);
  return o;
}

Obfuscation Obfuscation::random(std::size_t n, std::uint64_t seed, std::string_view prefix) {
  Obfuscation o = identity(n, prefix);
  Rng rng(seed);
  rng.shuffle(o.position.begin(), o.position.end());
  return o;
}

bool labels_disjoint(const Obfuscation& o, const Graph& g1, const Graph& g2) {
  return std::none_of(o.labels.begin(), o.labels.end(), [&](const std::string& w) {
    return g1.find(w).has_value() || g2.find(w).has_value();
  });
}

Graph relabel(const Graph& g, const Obfuscation& o) {
  o.validate();
  if (o.size() != g.size()) throw std::invalid_argument("relabel: obfuscation is not defined on every vertex");
  GraphBuilder b(g.size(), o.labels);
  for (const Edge& e : g.edges()) b.set_edge(o.position[static_cast<std::size_t>(e.u)],
                                             o.position[static_cast<std::size_t>(e.v)], e.weight);
  return std::move(b).build();
}

}  // namespace vnom
