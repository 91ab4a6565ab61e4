#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnom/graph.hpp"

namespace vnom {

struct SbmParams {
  std::size_t n = 0;
  Eigen::MatrixXd block_probs;  // K x K, symmetric, entries in [0, 1]
  std::vector<double> prior;    // length K, on the simplex

  std::size_t blocks() const { return prior.size(); }
  // Throws std::invalid_argument on any violated invariant.
  void validate() const;

  static SbmParams two_block(std::size_t n, double p, double q, double r);
};

struct SbmSample {
  Graph graph;
  std::vector<int> blocks;
};

SbmSample sample_sbm(const SbmParams& params, std::uint64_t seed);

// Edges drawn independently given blocks; `blocks` is used as-is.
Graph sample_sbm_given_blocks(const Eigen::MatrixXd& block_probs, const std::vector<int>& blocks,
                              std::uint64_t seed);

struct CorrelatedSbmSample {
  Graph g1;
  Graph g2;
  std::vector<int> blocks;
};

// Shared block assignment; for each pair the second graph's indicator is
// drawn conditionally on the first so that both marginals are Bernoulli(B_ij)
// and the indicators have correlation rho. `second_first` swaps which graph
// is drawn first (the joint law is unchanged).
CorrelatedSbmSample sample_corr_sbm(double rho, const SbmParams& params, std::uint64_t seed,
                                    bool second_first = false);

struct CorePair {
  int v1;
  int v2;
  friend bool operator==(const CorePair&, const CorePair&) = default;
};

struct NominatablePair {
  Graph g1;
  Graph g2;
  std::vector<CorePair> core;  // ordered as in g1
  std::vector<int> junk1;
  std::vector<int> junk2;
  std::vector<int> voi;        // g1 indices, subset of the core
  std::vector<int> blocks1;    // optional ground-truth labels of g1 vertices

  std::optional<int> counterpart(int v1) const;
  bool is_core(int v1) const { return counterpart(v1).has_value(); }
  std::vector<int> core_g1() const;
  void validate() const;
};

struct VoiSpec {
  enum class Kind { AllCore, Explicit, Sample };
  Kind kind = Kind::AllCore;
  std::vector<std::string> names;  // Explicit: g1 labels
  std::size_t count = 0;           // Sample: |V*|
  std::uint64_t seed = 0;

  static VoiSpec all_core() { return {}; }
  static VoiSpec none() { return {Kind::Explicit, {}, 0, 0}; }
  static VoiSpec explicit_list(std::vector<std::string> names) {
    return {Kind::Explicit, std::move(names), 0, 0};
  }
  static VoiSpec sample(std::size_t count, std::uint64_t seed) { return {Kind::Sample, {}, count, seed}; }
};

// Core = vertices whose label appears in both graphs; everything else is junk.
NominatablePair make_nominatable_pair(Graph g1, Graph g2, std::vector<int> blocks1, const VoiSpec& voi);

// Core defined by an explicit label correspondence (g1 label, g2 label).
NominatablePair make_nominatable_pair(Graph g1, Graph g2,
                                      const std::vector<std::pair<std::string, std::string>>& correspondence,
                                      const VoiSpec& voi);

// Writes <prefix>g1.edgelist, <prefix>g2.edgelist and <prefix>core.tsv.
void export_pair(const NominatablePair& pair, const std::string& prefix);

// Graphs used to exhibit infinitely many maximal consistency classes: a
// complete graph H on the tail of the vertex set plus floor((n/3)/xi)
// ER(xi, p) blocks, where every vertex of block l has exactly l random
// neighbours in H.
struct ConsistencyClassSpec {
  std::size_t n = 0;
  std::size_t index = 1;  // i: the block holding the vertices of interest
  double p = 0.5;
  std::size_t xi = 0;
  std::size_t k = 0;
  std::size_t nu = 0;

  static ConsistencyClassSpec make(std::size_t n, std::size_t index, double p, std::size_t k, std::size_t nu);
  std::size_t block_count() const { return xi == 0 ? 0 : (n / 3) / xi; }
  std::size_t hub_size() const { return n - xi * block_count(); }
  void validate() const;
};

struct ConsistencyClassInstance {
  Graph graph;
  // 0 for hub (H) vertices, l >= 1 for vertices of block B_l.
  std::vector<int> block_of;
  std::vector<int> voi;  // vertices 0..nu-1, which sit in block B_index
};

ConsistencyClassInstance sample_consistency_class_instance(const ConsistencyClassSpec& spec, std::uint64_t seed);

}  // namespace vnom
