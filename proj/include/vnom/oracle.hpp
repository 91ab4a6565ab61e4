#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vnom/automorphism.hpp"
#include "vnom/graph.hpp"
#include "vnom/models.hpp"
#include "vnom/nomination.hpp"

namespace vnom {

inline constexpr std::size_t kOracleMaxVertices = 5;

// Nominatable distribution on tiny vertex sets. Vertex i < core of g1 corresponds to
// vertex i of g2; the rest are junk. Core-core pairs are rho-correlated,
// every other pair is independent.
struct EnumerationSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t core = 0;
  std::vector<int> voi;           // g1 indices inside the core
  Eigen::MatrixXd block_probs;    // K x K
  std::vector<int> blocks1;       // length n
  std::vector<int> blocks2;       // length m; core entries must match blocks1
  double rho = 0.0;

  void validate() const;
  static EnumerationSpec erdos_renyi(std::size_t n, std::size_t m, std::size_t core, double p, double rho,
                                     std::vector<int> voi);
};

struct SupportPoint {
  std::uint32_t mask1 = 0;  // bit i set iff pair i of g1 (lexicographic u < v) is an edge
  std::uint32_t mask2 = 0;
  double prob = 0.0;
};

struct EnumeratedDistribution {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<int> voi;
  std::vector<SupportPoint> support;  // renormalized, vertices of interest have singleton orbits
  double removed_mass = 0.0;          // mass dropped before renormalizing
  std::size_t raw_support = 0;        // positive-mass pairs before filtering

  Graph g1(const SupportPoint& p) const;
  Graph g2(const SupportPoint& p) const;
};

Graph graph_from_mask(std::size_t n, std::uint32_t mask);
std::uint32_t mask_of(const Graph& g);

// Throws std::length_error beyond kOracleMaxVertices, std::domain_error if
// every positive-mass pair is removed by the orbit filter.
EnumeratedDistribution enumerate_support(const EnumerationSpec& spec);

struct IsoClass {
  std::uint32_t mask1 = 0;
  std::uint64_t code2 = 0;        // canonical code of g2
  Graph representative;           // canonical relabeling of g2
  std::vector<std::size_t> members;  // indices into the support
  double prob = 0.0;
};

struct IsoClassPartition {
  std::vector<IsoClass> classes;
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::size_t> index;
  // Canonical position of each support point's g2 vertices.
  std::vector<std::vector<int>> positions;
};

IsoClassPartition partition_by_isomorphism(const EnumeratedDistribution& dist);

// A scheme defined by one rank table per class: table[r] is the canonical
// position ranked r+1. Observed graphs are mapped to canonical positions,
// so every such scheme satisfies the consistency property.
class ExactScheme {
 public:
  ExactScheme() = default;
  ExactScheme(std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>> tables)
      : tables_(std::move(tables)) {}

  // Labels of g2_obfuscated, best first. Throws std::out_of_range for a
  // class the scheme does not cover.
  std::vector<std::string> operator()(const Graph& g1, const Graph& g2_obfuscated, std::span<const int> voi) const;
  // 1-based rank of every g2 vertex.
  std::vector<std::size_t> ranks(std::uint32_t mask1, const Graph& g2) const;

  const std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>>& tables() const { return tables_; }
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>>& tables() { return tables_; }
  NominationScheme as_scheme() const;

 private:
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>> tables_;
};

struct BayesOracle {
  ExactScheme scheme;
  // P_u per class, indexed by canonical position.
  std::vector<std::vector<double>> p_u;
};

BayesOracle bayes_optimal_scheme(const EnumeratedDistribution& dist, const IsoClassPartition& part);

enum class LossKind { Recall, Precision };

// Expected number of v.o.i. counterparts in the top k, for k = 1..m.
std::vector<double> expected_verification(const EnumeratedDistribution& dist, const IsoClassPartition& part,
                                          const ExactScheme& scheme);
double exact_loss(const EnumeratedDistribution& dist, const IsoClassPartition& part, const ExactScheme& scheme,
                  std::size_t k, LossKind kind);

// Random class-wise schemes for comparison: uniformly random tables when
// `perturb_from` is null, otherwise its tables with `swaps` random
// transpositions each.
ExactScheme random_scheme(const IsoClassPartition& part, std::uint64_t seed, const ExactScheme* perturb_from = nullptr,
                          std::size_t swaps = 1);

// True iff every prefix sum of `a` is >= that of `b` (up to tol).
bool prefix_majorizes(std::span<const double> a, std::span<const double> b, double tol = 1e-12);

nlohmann::json oracle_to_json(const EnumeratedDistribution& dist, const IsoClassPartition& part, const BayesOracle& oracle);

// The block-identifying scheme: hub = vertices of degree >= |H| - 1, block
// l = non-hub vertices with l hub neighbours. Block `spec.index` is ranked
// first, everything else after, each in input order.
struct PsiResult {
  std::vector<int> hub;
  std::vector<int> block;       // recovered B_index
  NominationList list;          // score 0 inside the block, 1 outside
};

PsiResult psi_block_identifier(const Graph& g, const ConsistencyClassSpec& spec);

}  // namespace vnom
