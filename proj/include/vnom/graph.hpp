#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vnom {

struct Edge {
  int u;
  int v;
  double weight = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphBuilder;

// Undirected, loop-free graph on dense vertex indices 0..n-1. Every vertex
// carries an external name; names default to "1".."n". Immutable once
// built; use GraphBuilder or the free functions below to derive new graphs.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::string> names = {});

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double weight(int u, int v) const { return adj_[index(u, v)]; }
  bool adjacent(int u, int v) const { return adj_[index(u, v)] != 0.0; }
  std::span<const double> row(int v) const {
    return {adj_.data() + static_cast<std::size_t>(v) * n_, n_};
  }
  // Row-major n*n adjacency, exactly symmetric with a zero diagonal.
  const std::vector<double>& adjacency() const { return adj_; }

  double degree(int v) const;
  double degree(std::string_view name) const;
  const std::vector<double>& degrees() const { return degrees_; }

  std::size_t edge_count() const { return edge_count_; }
  double total_weight() const { return total_weight_; }
  bool is_weighted() const { return weighted_; }
  std::vector<Edge> edges() const;
  std::vector<int> neighbors(int v) const;

  const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> find(std::string_view name) const;
  // Throws std::out_of_range for unknown names.
  int at(std::string_view name) const;

  bool contains(int v) const { return v >= 0 && static_cast<std::size_t>(v) < n_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_ && a.names_ == b.names_;
  }

 private:
  friend class GraphBuilder;
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }
  void finalize();

  std::size_t n_ = 0;
  std::vector<double> adj_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<double> degrees_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0.0;
  bool weighted_ = false;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);
  GraphBuilder(std::size_t n, std::vector<std::string> names);
  explicit GraphBuilder(const Graph& g);

  std::size_t size() const { return n_; }
  // Sets the symmetric weight; weight 0 removes the edge. Rejects loops,
  // negative and non-finite weights.
  GraphBuilder& set_edge(int u, int v, double w = 1.0);
  GraphBuilder& remove_edge(int u, int v) { return set_edge(u, v, 0.0); }
  double weight(int u, int v) const {
    return adj_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }
  Graph build() &&;

 private:
  std::size_t n_;
  std::vector<double> adj_;
  std::vector<std::string> names_;
};

std::vector<std::string> default_names(std::size_t n);

// Vertex set of the result is `keep` in the given order; names preserved.
Graph induced_subgraph(const Graph& g, std::span<const int> keep);

// Bijection from V(g) onto a fresh label set W. Vertex v of g becomes vertex
// position[v] of the relabeled graph and carries label labels[position[v]].
struct Obfuscation {
  std::vector<int> position;
  std::vector<std::string> labels;

  std::size_t size() const { return position.size(); }
  // Throws std::invalid_argument unless `position` is a permutation and
  // labels are distinct.
  void validate() const;
  // The inverse map back onto g's labels, for use on relabel(g, *this).
  Obfuscation inverse(const Graph& original) const;

  static Obfuscation identity(std::size_t n, std::string_view prefix = "w");
  static Obfuscation random(std::size_t n, std::uint64_t seed, std::string_view prefix = "w");
};

// True iff W shares no label with either vertex set.
bool labels_disjoint(const Obfuscation& o, const Graph& g1, const Graph& g2);

Graph relabel(const Graph& g, const Obfuscation& o);

// Edge-list text: one `u v [w]` per line, '#' comments, absent weight = 1.
// A line with a single token declares an isolated vertex. Self-loops and
// duplicate edges with conflicting weights are rejected with the line number.
Graph read_edge_list(std::istream& in, std::string_view source = "<stream>");
Graph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace vnom
